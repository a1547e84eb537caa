#pragma once

#include <popcent/graph.hpp>

#include <span>
#include <string>

namespace popcent {

/// Pearson correlation of paired samples; UndefinedStatistic on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Newman degree assortativity over ordered edge-endpoint pairs (each edge counted both ways).
double degree_assortativity(const Graph &g);

/// Attribute homophily: Pearson correlation of values[u], values[v] over ordered edge endpoints.
double attribute_assortativity(const Graph &g, std::span<const double> values);

/// Pearson correlation of (degree(v), pop(v)) over nodes.
double degree_popularity_correlation(const Graph &g, const NodeMetaTable &meta);

struct GenreOverlap {
    double fraction = 0.0;
    std::size_t eligible_edges = 0; ///< edges whose endpoints both carry genres
    std::size_t overlapping_edges = 0;
};

/// Fraction of genre-annotated edges whose endpoints share at least one genre.
GenreOverlap genre_edge_overlap(const Graph &g, const NodeMetaTable &meta);

double group_mean_degree(const Graph &g, const NodeMetaTable &meta, const std::string &group);

struct DegreeSummary {
    std::size_t min = 0;
    std::size_t max = 0;
    double mean = 0.0;
    double median = 0.0;
    std::size_t isolated = 0;
};

DegreeSummary degree_summary(const Graph &g);

} // namespace popcent
