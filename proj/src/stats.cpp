#include <popcent/stats.hpp>

#include <popcent/error.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>

namespace popcent {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ArgumentError("pearson: sample sizes differ");
    const auto n = static_cast<double>(x.size());
    if (x.empty())
        throw UndefinedStatistic("pearson: no samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    // Centered sums below this scale are rounding noise of a constant sample.
    const double eps = 1e-12;
    if (sxx <= eps * (1.0 + mx * mx) * n || syy <= eps * (1.0 + my * my) * n)
        throw UndefinedStatistic("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double attribute_assortativity(const Graph &g, std::span<const double> values) {
    if (values.size() != g.node_count())
        throw ArgumentError("attribute vector does not cover every node");
    if (g.edge_count() == 0)
        throw UndefinedStatistic("assortativity: graph has no edges");
    std::vector<double> a, b;
    a.reserve(2 * g.edge_count());
    b.reserve(2 * g.edge_count());
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.neighbors(u)) {
            a.push_back(values[u]);
            b.push_back(values[v]);
        }
    try {
        return pearson(a, b);
    } catch (const UndefinedStatistic &) {
        throw UndefinedStatistic("assortativity undefined: endpoint values have zero variance");
    }
}

double degree_assortativity(const Graph &g) {
    std::vector<double> deg(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        deg[v] = static_cast<double>(g.degree(v));
    return attribute_assortativity(g, deg);
}

double degree_popularity_correlation(const Graph &g, const NodeMetaTable &meta) {
    if (meta.size() != g.node_count())
        throw ArgumentError("metadata does not cover every node");
    std::vector<double> deg(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        deg[v] = static_cast<double>(g.degree(v));
    auto pop = meta.popularity();
    return pearson(deg, pop);
}

GenreOverlap genre_edge_overlap(const Graph &g, const NodeMetaTable &meta) {
    if (meta.size() != g.node_count())
        throw ArgumentError("metadata does not cover every node");
    GenreOverlap out;
    for (const auto &[u, v] : g.edges()) {
        const auto &gu = meta[u].genres;
        const auto &gv = meta[v].genres;
        if (gu.empty() || gv.empty())
            continue;
        ++out.eligible_edges;
        // Genre lists are kept sorted, so a linear merge finds any common element.
        auto i = gu.begin();
        auto j = gv.begin();
        while (i != gu.end() && j != gv.end()) {
            if (*i == *j) {
                ++out.overlapping_edges;
                break;
            }
            if (*i < *j)
                ++i;
            else
                ++j;
        }
    }
    if (out.eligible_edges == 0)
        throw UndefinedStatistic("genre overlap undefined: no edge joins two genre-tagged nodes");
    out.fraction = static_cast<double>(out.overlapping_edges) /
                   static_cast<double>(out.eligible_edges);
    return out;
}

double group_mean_degree(const Graph &g, const NodeMetaTable &meta, const std::string &group) {
    if (meta.size() != g.node_count())
        throw ArgumentError("metadata does not cover every node");
    double sum = 0.0;
    std::size_t members = 0;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (meta[v].group == group) {
            sum += static_cast<double>(g.degree(v));
            ++members;
        }
    if (members == 0)
        throw ArgumentError("group '" + group + "' has no members");
    return sum / static_cast<double>(members);
}

DegreeSummary degree_summary(const Graph &g) {
    DegreeSummary s;
    const std::size_t n = g.node_count();
    if (n == 0)
        return s;
    std::vector<std::size_t> deg(n);
    for (NodeId v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        s.isolated += deg[v] == 0;
    }
    std::sort(deg.begin(), deg.end());
    s.min = deg.front();
    s.max = deg.back();
    s.mean = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n);
    s.median = n % 2 ? static_cast<double>(deg[n / 2])
                     : 0.5 * static_cast<double>(deg[n / 2 - 1] + deg[n / 2]);
    return s;
}

} // namespace popcent
