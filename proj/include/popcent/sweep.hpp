#pragma once

#include <popcent/centrality.hpp>
#include <popcent/graph.hpp>
#include <popcent/spectral.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace popcent {

struct SweepOptions {
    std::vector<int> grid;                           ///< ascending thresholds in [0, 100]
    std::vector<Measure> measures{Measure::eigenvector};
    std::size_t k_eigs = 3;
    SpectralOptions spectral{};
    double damping = kDefaultDamping;
    unsigned threads = 1;

    /// 0..100 step 1.
    static std::vector<int> default_grid();
};

/// Per-group aggregates at one threshold. Keys: "members", "mean_degree", and
/// "mean_<m>" / "max_<m>" for each requested measure (see field_name).
struct GroupRecord {
    std::string group;
    std::map<std::string, double> fields;
};

struct ThresholdRecord {
    int threshold = 0;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::size_t lcc_nodes = 0;
    std::size_t lcc_edges = 0;
    bool empty = false; ///< no node survived the threshold
    std::vector<GroupRecord> groups;
    std::vector<double> eigenvalues;            ///< top-k of the LCC, descending
    std::vector<double> normalized_eigenvalues; ///< eigenvalues / lambda_1 (empty when lambda_1 <= 0)
    bool spectrum_converged = true;
    std::map<std::string, bool> measure_converged;
    std::vector<std::string> diagnostics;

    const GroupRecord *find_group(const std::string &name) const;
};

struct SweepResult {
    std::vector<std::string> groups;
    std::vector<Measure> measures;
    std::size_t k_eigs = 0;
    std::optional<std::pair<double, double>> removed_band;
    std::vector<ThresholdRecord> records;

    std::vector<int> thresholds() const;
};

/// "mean_eigencentrality", "max_pagerank", ... for a measure aggregate.
std::string field_name(Measure m, bool max);

/**
 * For each threshold t: induce {pop >= t}, restrict to the largest connected
 * component, score each requested measure on it (L2-normalized; survivors
 * outside the component score 0) and take per-group means over surviving
 * members, and extract the top-k adjacency spectrum. Thresholds are
 * independent and may run on `threads` workers; output order follows the grid.
 */
SweepResult threshold_sweep(const Graph &g, const NodeMetaTable &meta,
                            const std::vector<std::string> &groups, const SweepOptions &options);

/// Drops every node with popularity in [lo, hi] and sweeps the remainder.
SweepResult removal_band_sweep(const Graph &g, const NodeMetaTable &meta,
                               const std::vector<std::string> &groups, double lo, double hi,
                               const SweepOptions &options);

/// One plottable series: thresholds and the value of `field` for `group`.
std::pair<std::vector<int>, std::vector<double>>
group_series(const SweepResult &result, const std::string &group, const std::string &field);

/// Threshold-wise "graph nonempty" mask.
std::vector<bool> nonempty_mask(const SweepResult &result);

} // namespace popcent
