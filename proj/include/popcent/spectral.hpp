#pragma once

#include <popcent/graph.hpp>

#include <span>
#include <string>
#include <vector>

namespace popcent {

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector; ///< unit L2 norm, canonical sign
    bool converged = false;
    std::size_t iterations = 0;
    double residual = 0.0;  ///< ||A v - value v||_2
    std::string diagnostic; ///< set when convergence failed for an identifiable reason
};

/// Eigenpairs ordered by descending algebraic eigenvalue.
struct Spectrum {
    std::vector<EigenPair> pairs;
    std::size_t k = 0;

    bool converged() const noexcept;
    std::vector<double> values() const;
};

struct SpectralOptions {
    double tol = 1e-10;
    std::size_t max_iter = 100'000;
    /// Chebyshev filter degree applied per subspace step; 1 reduces to plain
    /// subspace iteration on a linearly shifted operator.
    std::size_t filter_degree = 12;
    /// Extra block vectors beyond k carried to speed separation of the k-th pair.
    std::size_t guard_vectors = 8;
};

/// y = A x for the adjacency operator.
void adjacency_multiply(const Graph &g, std::span<const double> x, std::span<double> y);

/// Flips v so its largest-magnitude entry is positive (ties: smallest index).
void canonicalize_sign(std::span<double> v);

/**
 * Dominant adjacency eigenpair by power iteration from the uniform vector
 * 1/sqrt(N). Each step applies A + I (the unit shift keeps bipartite
 * components from oscillating without moving any eigenvector) and
 * renormalizes; iteration stops when successive vectors differ by less than
 * tol in max-norm. The eigenvalue is the Rayleigh quotient of A.
 */
EigenPair power_iteration(const Graph &g, double tol = 1e-10, std::size_t max_iter = 100'000);

/**
 * The k algebraically largest adjacency eigenpairs by block subspace
 * iteration with Rayleigh-Ritz extraction. The spectrum lies in [-u, u]
 * where u bounds lambda_1 (a short Lanczos estimate, capped at d_max); each
 * step applies a Chebyshev polynomial that damps [-u, cut] (cut = smallest
 * Ritz value in the block), which orders the amplification by algebraic
 * value. A pair is converged when
 * ||A v - lambda v|| <= tol * max(|lambda|, 1).
 */
Spectrum top_k_spectrum(const Graph &g, std::size_t k, const SpectralOptions &options = {});

/// lambda_2 / lambda_1.
double eigen_gap(const Spectrum &s);

/// Symmetric eigendecomposition of a small dense row-major matrix by cyclic
/// Jacobi rotations. Eigenvalues are returned descending; column j of
/// `vectors` (row-major n x n) belongs to values[j].
void jacobi_eigen(std::vector<double> matrix, std::size_t n, std::vector<double> &values,
                  std::vector<double> &vectors);

} // namespace popcent
