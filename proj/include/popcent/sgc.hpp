#pragma once

#include <popcent/graph.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace popcent {

/// Group labels written into SGC metadata.
inline constexpr const char *kMassesGroup = "masses";
inline constexpr const char *kLeaderGroup = "leader";
inline constexpr const char *kCelebrityGroup = "celebrity";

enum class LeaderTarget { uniform_below_k, beta };

/**
 * Parameters of the Social Group Centrality generator: a preferential-attachment
 * "masses" graph with exponential popularity marks, plus a community-leader
 * clique attached to low-popularity masses and a celebrity clique attached to
 * high-popularity masses.
 */
struct SGCConfig {
    std::size_t masses_count = 10'000;
    std::size_t ba_m = 2;
    double popularity_mean = 20.0; ///< mean (scale) of the exponential popularity marks
    double popularity_cap = 100.0;
    double k = 50.0; ///< popularity split between leader and celebrity targets
    std::size_t n_leaders = 10;
    std::size_t n_celebrities = 10;
    double p_leader = 0.1;
    double p_celeb = 0.01;
    LeaderTarget leader_target = LeaderTarget::uniform_below_k;
    double beta_alpha = 1.0;
    double beta_beta = 1.0;
    /// Targets drawn per leader in beta mode; unset = round(p_leader * |{pop < k}|).
    std::optional<std::size_t> beta_expected_degree;
    std::uint64_t seed = 0;

    /// Throws ArgumentError on an invalid combination. `require_rate_order`
    /// enforces p_celeb <= p_leader.
    void validate(bool require_rate_order = true) const;

    friend bool operator==(const SGCConfig &, const SGCConfig &) = default;
};

using Rng = std::mt19937_64;

/// Mutable generator state before freezing into a Graph.
struct SGCFragment {
    std::vector<Edge> edges;
    std::vector<double> popularity;
    std::vector<std::string> group;
    std::size_t masses_count = 0;
    std::vector<std::string> warnings;

    std::size_t node_count() const noexcept { return popularity.size(); }
};

struct SGCGraph {
    Graph graph;
    NodeMetaTable meta;
    SGCConfig config;
    std::vector<std::string> warnings;
};

/// Masses: preferential attachment grown from a complete core on ba_m + 1 nodes,
/// each node marked with min(Exp(mean), cap) popularity.
SGCFragment generate_masses(const SGCConfig &cfg, Rng &rng);

/// Adds a popularity-100 clique of `size` nodes; each (group node, eligible mass)
/// pair is joined independently with probability p.
void attach_group(SGCFragment &fragment, const std::string &group, std::size_t size,
                  const std::function<bool(double)> &eligible, double p, Rng &rng);

/// Adds a popularity-100 clique whose members each draw `expected_degree`
/// target popularities 100 * Beta(alpha, beta) and link to a random mass in
/// the nearest non-empty unit-width popularity bucket (duplicates collapse).
void beta_target_attachment(SGCFragment &fragment, const std::string &group, std::size_t size,
                            double alpha, double beta, std::size_t expected_degree, Rng &rng);

struct GenerateOptions {
    bool require_rate_order = true;
};

SGCGraph generate_sgc(const SGCConfig &cfg, const GenerateOptions &options = {});

/// Freezes a fragment into a graph with ids m<i>, L<i>, C<i> for masses, leaders, celebrities.
SGCGraph finalize(SGCFragment fragment, const SGCConfig &cfg);

} // namespace popcent
