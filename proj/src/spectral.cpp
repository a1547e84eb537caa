#include <popcent/spectral.hpp>

#include <popcent/error.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace popcent {

bool Spectrum::converged() const noexcept {
    return std::all_of(pairs.begin(), pairs.end(), [](const EigenPair &p) { return p.converged; });
}

std::vector<double> Spectrum::values() const {
    std::vector<double> v;
    v.reserve(pairs.size());
    for (const auto &p : pairs)
        v.push_back(p.value);
    return v;
}

void adjacency_multiply(const Graph &g, std::span<const double> x, std::span<double> y) {
    const auto off = g.offsets();
    const auto adj = g.adjacency();
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        double s = 0.0;
        for (auto e = off[i]; e < off[i + 1]; ++e)
            s += x[adj[e]];
        y[i] = s;
    }
}

void canonicalize_sign(std::span<double> v) {
    double peak = 0.0;
    for (double x : v)
        peak = std::max(peak, std::abs(x));
    if (peak == 0.0)
        return;
    for (double &x : v) {
        if (std::abs(x) >= peak * (1.0 - 1e-9)) {
            if (x < 0.0)
                for (double &y : v)
                    y = -y;
            return;
        }
    }
}

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

std::string gap_diagnostic(double ratio) {
    std::ostringstream os;
    os.precision(6);
    os << "near-degenerate spectral gap: lambda2/lambda1 ~ " << ratio
       << " slows convergence";
    return os.str();
}

// Row-major N x b block.
struct Block {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Block() = default;
    Block(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double &at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

void block_multiply(const Graph &g, const Block &x, Block &y) {
    const auto off = g.offsets();
    const auto adj = g.adjacency();
    const std::size_t b = x.cols;
    for (std::size_t i = 0; i < x.rows; ++i) {
        double *yi = &y.data[i * b];
        std::fill(yi, yi + b, 0.0);
        for (auto e = off[i]; e < off[i + 1]; ++e) {
            const double *xj = &x.data[static_cast<std::size_t>(adj[e]) * b];
            for (std::size_t c = 0; c < b; ++c)
                yi[c] += xj[c];
        }
    }
}

// Modified Gram-Schmidt, applied twice. Columns that collapse numerically are
// replaced from `rng` and re-orthogonalized.
void orthonormalize_mgs(Block &x, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto dot = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i)
            s += x.at(i, a) * x.at(i, b);
        return s;
    };
    for (std::size_t j = 0; j < x.cols; ++j) {
        for (int attempt = 0;; ++attempt) {
            double before = std::sqrt(dot(j, j));
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t i = 0; i < j; ++i) {
                    double d = dot(i, j);
                    for (std::size_t r = 0; r < x.rows; ++r)
                        x.at(r, j) -= d * x.at(r, i);
                }
            double after = std::sqrt(dot(j, j));
            if (after > 1e-10 * before && after > 0.0) {
                for (std::size_t r = 0; r < x.rows; ++r)
                    x.at(r, j) /= after;
                break;
            }
            if (attempt > 8)
                throw std::runtime_error("subspace basis could not be completed");
            for (std::size_t r = 0; r < x.rows; ++r)
                x.at(r, j) = unif(rng);
        }
    }
}

// h = x^T y, one pass over the rows.
void gram(const Block &x, const Block &y, std::vector<double> &h) {
    const std::size_t b = x.cols;
    h.assign(b * b, 0.0);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double *xi = &x.data[i * b];
        const double *yi = &y.data[i * b];
        for (std::size_t p = 0; p < b; ++p)
            for (std::size_t q = 0; q < b; ++q)
                h[p * b + q] += xi[p] * yi[q];
    }
}

// In-place Cholesky of an SPD b x b matrix; false when a pivot is not safely positive.
bool cholesky(std::vector<double> &a, std::size_t b) {
    double scale = 0.0;
    for (std::size_t i = 0; i < b; ++i)
        scale = std::max(scale, a[i * b + i]);
    for (std::size_t j = 0; j < b; ++j) {
        double d = a[j * b + j];
        for (std::size_t k = 0; k < j; ++k)
            d -= a[j * b + k] * a[j * b + k];
        if (!(d > 1e-12 * scale))
            return false;
        d = std::sqrt(d);
        a[j * b + j] = d;
        for (std::size_t i = j + 1; i < b; ++i) {
            double v = a[i * b + j];
            for (std::size_t k = 0; k < j; ++k)
                v -= a[i * b + k] * a[j * b + k];
            a[i * b + j] = v / d;
        }
    }
    return true;
}

// Cholesky QR twice; falls back to Gram-Schmidt when the block is nearly rank deficient.
void orthonormalize(Block &x, std::mt19937_64 &rng) {
    const std::size_t b = x.cols;
    std::vector<double> h, row(b);
    for (int pass = 0; pass < 2; ++pass) {
        gram(x, x, h);
        if (!cholesky(h, b)) {
            orthonormalize_mgs(x, rng);
            return;
        }
        // Row-wise solve of r^T l = x_i^T, i.e. x_i <- x_i L^{-T}.
        for (std::size_t i = 0; i < x.rows; ++i) {
            double *xi = &x.data[i * b];
            for (std::size_t c = 0; c < b; ++c) {
                double v = xi[c];
                for (std::size_t k = 0; k < c; ++k)
                    v -= row[k] * h[c * b + k];
                row[c] = v / h[c * b + c];
            }
            std::copy(row.begin(), row.end(), xi);
        }
    }
}

// Upper estimate of the largest eigenvalue from a short Lanczos run.
double lanczos_upper_bound(const Graph &g, std::size_t steps, std::mt19937_64 &rng) {
    const std::size_t n = g.node_count();
    steps = std::min(steps, n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> v(n), prev(n, 0.0), w(n), alpha, beta;
    for (auto &x : v)
        x = unif(rng);
    double nv = norm2(v);
    for (auto &x : v)
        x /= nv;
    double b_prev = 0.0, tail = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
        adjacency_multiply(g, v, w);
        double a = std::inner_product(w.begin(), w.end(), v.begin(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            w[i] -= a * v[i] + b_prev * prev[i];
        alpha.push_back(a);
        tail = norm2(w);
        if (tail < 1e-12 || j + 1 == steps)
            break;
        beta.push_back(tail);
        prev.swap(v);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = w[i] / tail;
        b_prev = tail;
    }
    const std::size_t m = alpha.size();
    std::vector<double> t(m * m, 0.0), vals, vecs;
    for (std::size_t i = 0; i < m; ++i) {
        t[i * m + i] = alpha[i];
        if (i + 1 < m)
            t[i * m + i + 1] = t[(i + 1) * m + i] = beta[i];
    }
    jacobi_eigen(t, m, vals, vecs);
    return vals.front() + tail;
}

// x <- x q for a b x b row-major q.
void rotate(Block &x, const std::vector<double> &q) {
    const std::size_t b = x.cols;
    std::vector<double> row(b);
    for (std::size_t i = 0; i < x.rows; ++i) {
        double *xi = &x.data[i * b];
        for (std::size_t c = 0; c < b; ++c) {
            double s = 0.0;
            for (std::size_t l = 0; l < b; ++l)
                s += xi[l] * q[l * b + c];
            row[c] = s;
        }
        std::copy(row.begin(), row.end(), xi);
    }
}

} // namespace

void jacobi_eigen(std::vector<double> a, std::size_t n, std::vector<double> &values,
                  std::vector<double> &vectors) {
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        v[i * n + i] = 1.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                s += a[i * n + j] * a[i * n + j];
        return std::sqrt(s);
    };
    double scale = 0.0;
    for (double x : a)
        scale = std::max(scale, std::abs(x));

    for (int sweep = 0; sweep < 100 && off_norm() > 1e-15 * scale; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::abs(apq) <= 1e-300)
                    continue;
                double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t r = 0; r < n; ++r) {
                    double arp = a[r * n + p], arq = a[r * n + q];
                    a[r * n + p] = c * arp - s * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    double apr = a[p * n + r], aqr = a[q * n + r];
                    a[p * n + r] = c * apr - s * aqr;
                    a[q * n + r] = s * apr + c * aqr;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    double vrp = v[r * n + p], vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });
    values.resize(n);
    vectors.assign(n * n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        values[c] = a[order[c] * n + order[c]];
        for (std::size_t r = 0; r < n; ++r)
            vectors[r * n + c] = v[r * n + order[c]];
    }
}

EigenPair power_iteration(const Graph &g, double tol, std::size_t max_iter) {
    const std::size_t n = g.node_count();
    if (n == 0)
        throw ArgumentError("power iteration on an empty graph");
    if (!(tol > 0.0))
        throw ArgumentError("tolerance must be positive");

    EigenPair out;
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n);
    double last_diff = 0.0;
    double rate = 0.0;
    for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
        adjacency_multiply(g, v, w);
        for (std::size_t i = 0; i < n; ++i)
            w[i] += v[i];
        double nrm = norm2(w);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] /= nrm;
            diff = std::max(diff, std::abs(w[i] - v[i]));
        }
        v.swap(w);
        if (last_diff > 0.0)
            rate = diff / last_diff;
        last_diff = diff;
        if (diff < tol) {
            out.converged = true;
            break;
        }
    }
    out.iterations = std::min(out.iterations, max_iter);

    adjacency_multiply(g, v, w);
    double lambda = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        res += (w[i] - lambda * v[i]) * (w[i] - lambda * v[i]);
    out.value = lambda;
    out.residual = std::sqrt(res);
    if (!out.converged && lambda > 0.0) {
        // Successive differences shrink by (lambda2 + 1) / (lambda1 + 1).
        double ratio = (rate * (lambda + 1.0) - 1.0) / lambda;
        if (ratio > 0.999)
            out.diagnostic = gap_diagnostic(ratio);
        else
            out.diagnostic = "iteration budget exhausted";
    }
    canonicalize_sign(v);
    out.vector = std::move(v);
    return out;
}

Spectrum top_k_spectrum(const Graph &g, std::size_t k, const SpectralOptions &opt) {
    const std::size_t n = g.node_count();
    if (k < 1 || k > n)
        throw ArgumentError("top_k_spectrum: k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(n) + "]");
    if (!(opt.tol > 0.0))
        throw ArgumentError("tolerance must be positive");

    Spectrum out;
    out.k = k;
    const double dmax = static_cast<double>(g.max_degree());
    if (dmax == 0.0) {
        // A = 0: every vector is an eigenvector of 0; report the unit basis.
        for (std::size_t i = 0; i < k; ++i) {
            EigenPair p;
            p.vector.assign(n, 0.0);
            p.vector[i] = 1.0;
            p.converged = true;
            out.pairs.push_back(std::move(p));
        }
        return out;
    }

    const std::size_t b = std::min(n, k + std::max(k, opt.guard_vectors));
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    Block x(n, b), ax(n, b);
    for (std::size_t i = 0; i < n; ++i) {
        x.at(i, 0) = 1.0;
        for (std::size_t c = 1; c < b; ++c)
            x.at(i, c) = unif(rng);
    }
    orthonormalize(x, rng);

    std::vector<double> theta, q, h;
    std::vector<double> residual(b, 0.0);
    auto rayleigh_ritz = [&] {
        block_multiply(g, x, ax);
        gram(x, ax, h);
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = i + 1; j < b; ++j)
                h[i * b + j] = h[j * b + i] = 0.5 * (h[i * b + j] + h[j * b + i]);
        jacobi_eigen(h, b, theta, q);
        rotate(x, q);
        rotate(ax, q);
        std::fill(residual.begin(), residual.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < b; ++c) {
                double r = ax.at(i, c) - theta[c] * x.at(i, c);
                residual[c] += r * r;
            }
        for (auto &r : residual)
            r = std::sqrt(r);
    };
    auto done = [&](std::size_t c) {
        return residual[c] <= opt.tol * std::max(std::abs(theta[c]), 1.0);
    };
    auto all_done = [&] {
        for (std::size_t c = 0; c < k; ++c)
            if (!done(c))
                return false;
        return true;
    };

    rayleigh_ritz();
    std::size_t iter = 0;
    // Every eigenvalue of a nonnegative matrix satisfies |lambda| <= lambda_1.
    const double upper =
        std::min(dmax, std::max(1.01 * lanczos_upper_bound(g, 20, rng), theta[0]));
    const double lower = -upper;
    Block y0(n, b), y1(n, b), y2(n, b);
    while (!all_done() && iter < opt.max_iter && b < n) {
        ++iter;
        // Damp [-upper, cut]; everything above cut is amplified monotonically.
        double cut = theta[b - 1];
        double half = 0.5 * (cut - lower);
        if (half < 1e-8 * dmax)
            half = 1e-8 * dmax;
        double center = lower + half;

        y0.data = x.data;
        block_multiply(g, y0, y1);
        for (std::size_t i = 0; i < y1.data.size(); ++i)
            y1.data[i] = (y1.data[i] - center * y0.data[i]) / half;
        for (std::size_t d = 1; d < opt.filter_degree; ++d) {
            block_multiply(g, y1, y2);
            double peak = 0.0;
            for (std::size_t i = 0; i < y2.data.size(); ++i) {
                y2.data[i] = 2.0 * (y2.data[i] - center * y1.data[i]) / half - y0.data[i];
                peak = std::max(peak, std::abs(y2.data[i]));
            }
            std::swap(y0.data, y1.data);
            std::swap(y1.data, y2.data);
            // The recurrence is homogeneous, so rescaling both carried terms is exact.
            if (peak > 1e100) {
                for (auto &v : y0.data)
                    v /= peak;
                for (auto &v : y1.data)
                    v /= peak;
            }
        }
        x.data = y1.data;
        orthonormalize(x, rng);
        rayleigh_ritz();
    }

    for (std::size_t c = 0; c < k; ++c) {
        EigenPair p;
        p.value = theta[c];
        p.vector.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            p.vector[i] = x.at(i, c);
        canonicalize_sign(p.vector);
        p.residual = residual[c];
        p.converged = done(c) || b == n;
        p.iterations = iter;
        if (!p.converged) {
            if (theta[0] > 0.0 && theta[1] / theta[0] > 0.999)
                p.diagnostic = gap_diagnostic(theta[1] / theta[0]);
            else
                p.diagnostic = "iteration budget exhausted";
        }
        out.pairs.push_back(std::move(p));
    }
    return out;
}

double eigen_gap(const Spectrum &s) {
    if (s.pairs.size() < 2)
        throw ArgumentError("eigen_gap needs at least two eigenpairs");
    if (!(s.pairs[0].value > 0.0))
        throw ArgumentError("eigen_gap: lambda_1 <= 0 cannot normalize");
    return s.pairs[1].value / s.pairs[0].value;
}

} // namespace popcent
