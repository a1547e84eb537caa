#include <popcent/sweep.hpp>

#include <popcent/error.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace popcent {

std::vector<int> SweepOptions::default_grid() {
    std::vector<int> grid(101);
    for (int t = 0; t <= 100; ++t)
        grid[t] = t;
    return grid;
}

const GroupRecord *ThresholdRecord::find_group(const std::string &name) const {
    for (const auto &g : groups)
        if (g.group == name)
            return &g;
    return nullptr;
}

std::vector<int> SweepResult::thresholds() const {
    std::vector<int> out;
    out.reserve(records.size());
    for (const auto &r : records)
        out.push_back(r.threshold);
    return out;
}

std::string field_name(Measure m, bool max) {
    std::string prefix = max ? "max_" : "mean_";
    switch (m) {
    case Measure::eigenvector:
        return prefix + "eigencentrality";
    case Measure::degree:
        return prefix + "degree_centrality";
    default:
        return prefix + std::string(to_string(m));
    }
}

namespace {

void validate_options(const SweepOptions &o) {
    if (o.grid.empty())
        throw ArgumentError("sweep grid is empty");
    for (std::size_t i = 0; i < o.grid.size(); ++i) {
        if (o.grid[i] < 0 || o.grid[i] > 100)
            throw ArgumentError("sweep thresholds must lie in [0, 100]");
        if (i && o.grid[i] <= o.grid[i - 1])
            throw ArgumentError("sweep grid must be strictly ascending");
    }
    if (o.k_eigs < 1)
        throw ArgumentError("k_eigs must be at least 1");
}

CentralityScores score(const Graph &g, Measure m, const Spectrum &spec, const SweepOptions &o) {
    switch (m) {
    case Measure::eigenvector:
        // the spectrum already holds the Perron vector of the (connected) LCC
        if (!spec.pairs.empty() && spec.pairs[0].converged) {
            CentralityScores c{Measure::eigenvector, spec.pairs[0].vector, Normalization::l2};
            c.iterations = spec.pairs[0].iterations;
            for (double &x : c.scores)
                x = std::abs(x);
            return c;
        }
        return eigenvector_centrality(g, o.spectral.tol, o.spectral.max_iter);
    case Measure::pagerank:
        return pagerank(g, o.damping);
    case Measure::degree:
        return degree_centrality(g);
    case Measure::closeness:
        return closeness_centrality(g);
    case Measure::betweenness:
        return betweenness_centrality(g);
    }
    throw ArgumentError("unknown measure");
}

ThresholdRecord empty_record(int t, const std::vector<std::string> &groups,
                             const SweepOptions &o) {
    ThresholdRecord rec;
    rec.threshold = t;
    rec.empty = true;
    for (const auto &name : groups) {
        GroupRecord gr{name, {{"members", 0.0}, {"mean_degree", 0.0}}};
        for (Measure m : o.measures) {
            gr.fields[field_name(m, false)] = 0.0;
            gr.fields[field_name(m, true)] = 0.0;
        }
        rec.groups.push_back(std::move(gr));
    }
    rec.eigenvalues.assign(o.k_eigs, 0.0);
    rec.diagnostics.push_back("no node survives threshold " + std::to_string(t));
    return rec;
}

ThresholdRecord analyze_threshold(const Graph &g, std::span<const double> pop,
                                  const std::vector<int> &group_of,
                                  const std::vector<std::string> &groups, int t,
                                  const SweepOptions &o) {
    auto sub = induce_by_popularity(g, pop, static_cast<double>(t));
    if (sub.graph.empty())
        return empty_record(t, groups, o);

    ThresholdRecord rec;
    rec.threshold = t;
    rec.node_count = sub.graph.node_count();
    rec.edge_count = sub.graph.edge_count();

    const std::size_t ng = groups.size();
    std::vector<double> members(ng, 0.0), degree_sum(ng, 0.0);
    std::vector<int> sub_group(sub.graph.node_count());
    for (NodeId v = 0; v < sub.graph.node_count(); ++v) {
        int gi = group_of[sub.map.new_to_old[v]];
        sub_group[v] = gi;
        if (gi >= 0) {
            members[gi] += 1.0;
            degree_sum[gi] += static_cast<double>(sub.graph.degree(v));
        }
    }
    for (std::size_t i = 0; i < ng; ++i) {
        GroupRecord gr{groups[i], {{"members", members[i]},
                                   {"mean_degree", members[i] > 0 ? degree_sum[i] / members[i]
                                                                  : 0.0}}};
        rec.groups.push_back(std::move(gr));
    }

    auto lcc = largest_connected_component(sub.graph);
    rec.lcc_nodes = lcc.graph.node_count();
    rec.lcc_edges = lcc.graph.edge_count();
    std::vector<int> lcc_group(rec.lcc_nodes);
    for (NodeId v = 0; v < rec.lcc_nodes; ++v)
        lcc_group[v] = sub_group[lcc.map.new_to_old[v]];

    const std::size_t k = std::min(o.k_eigs, rec.lcc_nodes);
    auto spec = top_k_spectrum(lcc.graph, k, o.spectral);
    rec.eigenvalues = spec.values();
    rec.spectrum_converged = spec.converged();
    for (const auto &p : spec.pairs)
        if (!p.diagnostic.empty()) {
            rec.diagnostics.push_back("spectrum: " + p.diagnostic);
            break;
        }
    if (!rec.eigenvalues.empty() && rec.eigenvalues[0] > 0.0)
        for (double lam : rec.eigenvalues)
            rec.normalized_eigenvalues.push_back(lam / rec.eigenvalues[0]);

    for (Measure m : o.measures) {
        auto c = score(lcc.graph, m, spec, o);
        normalize(c, Normalization::l2);
        rec.measure_converged[std::string(to_string(m))] = c.converged;
        if (!c.diagnostic.empty())
            rec.diagnostics.push_back(std::string(to_string(m)) + ": " + c.diagnostic);
        std::vector<double> sum(ng, 0.0), peak(ng, 0.0);
        for (NodeId v = 0; v < rec.lcc_nodes; ++v) {
            int gi = lcc_group[v];
            if (gi < 0)
                continue;
            sum[gi] += c.scores[v];
            peak[gi] = std::max(peak[gi], c.scores[v]);
        }
        for (std::size_t i = 0; i < ng; ++i) {
            rec.groups[i].fields[field_name(m, false)] = members[i] > 0 ? sum[i] / members[i] : 0.0;
            rec.groups[i].fields[field_name(m, true)] = peak[i];
        }
    }

    return rec;
}

} // namespace

SweepResult threshold_sweep(const Graph &g, const NodeMetaTable &meta,
                            const std::vector<std::string> &groups, const SweepOptions &o) {
    validate_options(o);
    if (meta.size() != g.node_count())
        throw ArgumentError("metadata does not cover every node");

    SweepResult result;
    result.groups = groups.empty() ? meta.group_labels() : groups;
    result.measures = o.measures;
    result.k_eigs = o.k_eigs;
    result.records.resize(o.grid.size());

    std::vector<int> group_of(g.node_count(), -1);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto it = std::find(result.groups.begin(), result.groups.end(), meta[v].group);
        if (it != result.groups.end())
            group_of[v] = static_cast<int>(it - result.groups.begin());
    }
    const auto pop = meta.popularity();

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < o.grid.size();) {
            try {
                result.records[i] = analyze_threshold(g, pop, group_of, result.groups,
                                                      o.grid[i], o);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const unsigned workers =
        std::max(1u, std::min<unsigned>(o.threads, static_cast<unsigned>(o.grid.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    return result;
}

SweepResult removal_band_sweep(const Graph &g, const NodeMetaTable &meta,
                               const std::vector<std::string> &groups, double lo, double hi,
                               const SweepOptions &o) {
    auto kept = remove_popularity_band(g, meta, lo, hi);
    auto kept_meta = meta.subset(kept.map);
    auto labels = groups.empty() ? meta.group_labels() : groups;
    auto result = threshold_sweep(kept.graph, kept_meta, labels, o);
    result.removed_band = std::make_pair(lo, hi);
    return result;
}

std::pair<std::vector<int>, std::vector<double>>
group_series(const SweepResult &result, const std::string &group, const std::string &field) {
    if (std::find(result.groups.begin(), result.groups.end(), group) == result.groups.end())
        throw ArgumentError("unknown group '" + group + "'");
    std::pair<std::vector<int>, std::vector<double>> out;
    for (const auto &rec : result.records) {
        const auto *gr = rec.find_group(group);
        auto it = gr->fields.find(field);
        if (it == gr->fields.end())
            throw ArgumentError("unknown field '" + field + "'");
        out.first.push_back(rec.threshold);
        out.second.push_back(it->second);
    }
    return out;
}

std::vector<bool> nonempty_mask(const SweepResult &result) {
    std::vector<bool> mask;
    mask.reserve(result.records.size());
    for (const auto &r : result.records)
        mask.push_back(!r.empty);
    return mask;
}

} // namespace popcent
