#pragma once

#include <popcent/graph.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace popcent {

enum class Measure { degree, closeness, betweenness, eigenvector, pagerank };
enum class Normalization { raw, l2, max1 };

std::string_view to_string(Measure m);
std::optional<Measure> parse_measure(std::string_view name);

struct CentralityScores {
    Measure measure = Measure::degree;
    std::vector<double> scores;
    Normalization normalization = Normalization::raw;
    bool converged = true;
    std::size_t iterations = 0;
    std::string diagnostic;
};

/// Rescales in place; zero vectors are left unchanged.
void normalize(CentralityScores &c, Normalization to);

/// Node-count ceiling for the all-pairs shortest-path measures.
inline constexpr std::size_t kDefaultPathMeasureLimit = 10'000;

CentralityScores degree_centrality(const Graph &g);

/// N / sum_{j != i} d(i, j), with N (not N - 1) in the numerator.
CentralityScores closeness_centrality(const Graph &g,
                                      std::size_t node_limit = kDefaultPathMeasureLimit);

/// Sum over unordered pairs {a, b} not containing i of sigma_ab(i) / sigma_ab (Brandes).
CentralityScores betweenness_centrality(const Graph &g,
                                        std::size_t node_limit = kDefaultPathMeasureLimit);

/// Dominant adjacency eigenvector; the graph should be connected.
CentralityScores eigenvector_centrality(const Graph &g, double tol = 1e-10,
                                        std::size_t max_iter = 100'000,
                                        Normalization norm = Normalization::l2);

inline constexpr double kDefaultDamping = 0.85;

/**
 * PageRank with each undirected edge acting as two directed links. Degree-0
 * nodes spread their mass uniformly. Iterates until the L1 change drops
 * below tol; scores sum to one.
 */
CentralityScores pagerank(const Graph &g, double damping = kDefaultDamping, double tol = 1e-12,
                          std::size_t max_iter = 10'000);

} // namespace popcent
