#pragma once

#include <popcent/sgc.hpp>
#include <popcent/sweep.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace popcent {

/// y(t) = L / (1 + exp(-g (t - t0))).
struct LogisticFit {
    double L = 0.0;
    double g = 0.0;
    double t0 = 0.0;
    double residual = 0.0; ///< root-mean-square error
    bool converged = false;
    std::size_t evaluations = 0;

    double operator()(double t) const;
};

struct FitOptions {
    std::size_t max_evaluations = 10'000;
    double simplex_tol = 1e-8;
    /// |g| is capped at this many e-folds per grid step; t0 is kept inside the grid.
    double max_step_rate = 50.0;
};

/// Least-squares logistic fit by Nelder-Mead simplex search.
LogisticFit fit_logistic(std::span<const double> t, std::span<const double> y,
                         const FitOptions &options = {});

/**
 * Index of the first point where b overtakes a and stays above it at every
 * later point whose graph is nonempty. An empty `nonempty` mask means all
 * points count.
 */
std::optional<std::size_t> detect_transition_index(std::span<const double> a,
                                                   std::span<const double> b,
                                                   const std::vector<bool> &nonempty = {});

std::optional<int> detect_transition(std::span<const int> grid, std::span<const double> a,
                                     std::span<const double> b,
                                     const std::vector<bool> &nonempty = {});

/// Mean |growth rate| of two fits; 0 when no transition occurred.
double curvature(const LogisticFit &a, const LogisticFit &b, bool transition_present);

/// First threshold where group_b's mean degree exceeds group_a's.
std::optional<int> degree_changeover(const SweepResult &result, const std::string &group_a,
                                     const std::string &group_b);

struct TransitionReport {
    std::string group_a;
    std::string group_b;
    std::string field;
    std::optional<int> transition_threshold;
    std::optional<int> first_crossing;
    bool persistent = false;
    std::optional<double> gap_at_start;      ///< lambda2/lambda1 at the first grid point
    std::optional<double> gap_at_transition; ///< lambda2/lambda1 at the grid point before t*
    std::optional<int> degree_changeover_threshold;
    LogisticFit fit_a;
    LogisticFit fit_b;
    std::optional<double> curvature;
    std::vector<std::string> diagnostics;
};

/// Fits restrict to thresholds whose graph is nonempty.
TransitionReport transition_report(const SweepResult &result, const std::string &group_a,
                                   const std::string &group_b,
                                   const std::string &field = "mean_eigencentrality");

/// Spearman rank correlation (average ranks for ties).
double rank_correlation(std::span<const double> x, std::span<const double> y);

/// Independent per-job seed from a master seed and up to three indices.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i, std::uint64_t j = 0,
                          std::uint64_t rep = 0);

struct ExperimentOptions {
    SweepOptions sweep{SweepOptions::default_grid(), {Measure::eigenvector}, 1};
    std::string group_a = kLeaderGroup;
    std::string group_b = kCelebrityGroup;
    unsigned threads = 1; ///< jobs run concurrently; each sweep is single-threaded
};

struct BetaGridRep {
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    std::optional<int> transition;
    double curvature = 0.0;
    double g_a = 0.0;
    double g_b = 0.0;
    std::vector<std::string> warnings;
};

struct BetaGridCell {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<BetaGridRep> reps;
    double mean_curvature = 0.0;
};

/// Curvature surface over (alpha, beta) for Beta-targeted leader attachment.
std::vector<BetaGridCell> beta_grid_experiment(const SGCConfig &base,
                                               std::span<const double> alphas,
                                               std::span<const double> betas, std::size_t reps,
                                               const ExperimentOptions &options = {});

struct DegreeRatioRow {
    double ratio = 0.0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    double p_leader = 0.0;
    std::optional<int> changeover;
    std::optional<int> transition;
    bool skipped = false;
    std::string diagnostic;
};

/// p_leader giving expected initial mean leader degree / mean celebrity degree = ratio.
double p_leader_for_ratio(const SGCConfig &cfg, double ratio);

/// Degree changeover vs centrality transition across target initial degree ratios.
std::vector<DegreeRatioRow> degree_ratio_experiment(const SGCConfig &base,
                                                    std::span<const double> ratios,
                                                    std::size_t reps,
                                                    const ExperimentOptions &options = {});

} // namespace popcent
