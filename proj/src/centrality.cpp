#include <popcent/centrality.hpp>

#include <popcent/error.hpp>
#include <popcent/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <queue>

namespace popcent {

std::string_view to_string(Measure m) {
    switch (m) {
    case Measure::degree:
        return "degree";
    case Measure::closeness:
        return "closeness";
    case Measure::betweenness:
        return "betweenness";
    case Measure::eigenvector:
        return "eigenvector";
    case Measure::pagerank:
        return "pagerank";
    }
    return "unknown";
}

std::optional<Measure> parse_measure(std::string_view name) {
    for (auto m : {Measure::degree, Measure::closeness, Measure::betweenness,
                   Measure::eigenvector, Measure::pagerank})
        if (to_string(m) == name)
            return m;
    return std::nullopt;
}

void normalize(CentralityScores &c, Normalization to) {
    double s = 0.0;
    if (to == Normalization::l2) {
        for (double x : c.scores)
            s += x * x;
        s = std::sqrt(s);
    } else if (to == Normalization::max1) {
        for (double x : c.scores)
            s = std::max(s, std::abs(x));
    }
    if (to != Normalization::raw && s > 0.0)
        for (double &x : c.scores)
            x /= s;
    c.normalization = to;
}

CentralityScores degree_centrality(const Graph &g) {
    CentralityScores c{Measure::degree, std::vector<double>(g.node_count())};
    for (NodeId v = 0; v < g.node_count(); ++v)
        c.scores[v] = static_cast<double>(g.degree(v));
    return c;
}

namespace {

void check_path_measure_size(const Graph &g, std::size_t limit, std::string_view what) {
    if (g.node_count() > limit)
        throw SizeLimitError(std::string(what) + " needs all-pairs shortest paths; " +
                             std::to_string(g.node_count()) + " nodes exceeds the limit of " +
                             std::to_string(limit) +
                             " (raise the limit explicitly if the cost is acceptable)");
}

} // namespace

CentralityScores closeness_centrality(const Graph &g, std::size_t node_limit) {
    check_path_measure_size(g, node_limit, "closeness centrality");
    if (!is_connected(g))
        throw ArgumentError("closeness centrality requires a connected graph; "
                            "extract the largest connected component first");
    const std::size_t n = g.node_count();
    CentralityScores c{Measure::closeness, std::vector<double>(n, 0.0)};
    std::vector<std::size_t> dist(n);
    std::vector<NodeId> queue(n);
    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), SIZE_MAX);
        dist[s] = 0;
        std::size_t head = 0, tail = 0;
        queue[tail++] = s;
        std::size_t total = 0;
        while (head < tail) {
            NodeId u = queue[head++];
            total += dist[u];
            for (NodeId w : g.neighbors(u))
                if (dist[w] == SIZE_MAX) {
                    dist[w] = dist[u] + 1;
                    queue[tail++] = w;
                }
        }
        c.scores[s] = total ? static_cast<double>(n) / static_cast<double>(total) : 0.0;
    }
    return c;
}

CentralityScores betweenness_centrality(const Graph &g, std::size_t node_limit) {
    check_path_measure_size(g, node_limit, "betweenness centrality");
    const std::size_t n = g.node_count();
    CentralityScores c{Measure::betweenness, std::vector<double>(n, 0.0)};
    std::vector<double> sigma(n), delta(n);
    std::vector<std::int64_t> dist(n);
    std::vector<NodeId> order;
    order.reserve(n);
    for (NodeId s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        order.push_back(s);
        for (std::size_t head = 0; head < order.size(); ++head) {
            NodeId u = order[head];
            for (NodeId w : g.neighbors(u)) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    order.push_back(w);
                }
                if (dist[w] == dist[u] + 1)
                    sigma[w] += sigma[u];
            }
        }
        // Predecessors of w are exactly its neighbors one level closer to s.
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            NodeId w = *it;
            for (NodeId u : g.neighbors(w))
                if (dist[u] == dist[w] - 1)
                    delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
            if (w != s)
                c.scores[w] += delta[w];
        }
    }
    // Each unordered pair was accumulated from both endpoints.
    for (double &x : c.scores)
        x *= 0.5;
    return c;
}

CentralityScores eigenvector_centrality(const Graph &g, double tol, std::size_t max_iter,
                                        Normalization norm) {
    auto pair = power_iteration(g, tol, max_iter);
    CentralityScores c{Measure::eigenvector, std::move(pair.vector), Normalization::l2};
    c.converged = pair.converged;
    c.iterations = pair.iterations;
    c.diagnostic = std::move(pair.diagnostic);
    // Iterates of a nonnegative operator from a positive start stay nonnegative;
    // clear rounding-level negatives left by the sign flip on degenerate input.
    for (double &x : c.scores)
        x = std::max(x, 0.0);
    normalize(c, norm);
    return c;
}

CentralityScores pagerank(const Graph &g, double damping, double tol, std::size_t max_iter) {
    if (!(damping > 0.0 && damping < 1.0))
        throw ArgumentError("damping must lie in (0, 1)");
    const std::size_t n = g.node_count();
    CentralityScores c{Measure::pagerank, {}};
    if (n == 0)
        return c;
    const double nn = static_cast<double>(n);
    std::vector<double> x(n, 1.0 / nn), next(n), share(n);
    c.converged = false;
    for (c.iterations = 1; c.iterations <= max_iter; ++c.iterations) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            auto d = g.degree(v);
            if (d == 0) {
                dangling += x[v];
                share[v] = 0.0;
            } else {
                share[v] = x[v] / static_cast<double>(d);
            }
        }
        const double base = (1.0 - damping) / nn + damping * dangling / nn;
        double total = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            double s = 0.0;
            for (NodeId u : g.neighbors(v))
                s += share[u];
            next[v] = base + damping * s;
            total += next[v];
        }
        // Renormalize away accumulated rounding so the invariant holds at every step.
        double change = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            next[v] /= total;
            change += std::abs(next[v] - x[v]);
        }
        x.swap(next);
        if (change < tol) {
            c.converged = true;
            break;
        }
    }
    c.iterations = std::min(c.iterations, max_iter);
    if (!c.converged)
        c.diagnostic = "iteration budget exhausted";
    c.scores = std::move(x);
    return c;
}

} // namespace popcent
