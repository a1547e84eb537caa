#include <popcent/analysis.hpp>

#include <popcent/error.hpp>
#include <popcent/stats.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace popcent {

double LogisticFit::operator()(double t) const { return L / (1.0 + std::exp(-g * (t - t0))); }

namespace {

using Point = std::array<double, 3>;

struct Bounds {
    double g_max;
    double t_lo;
    double t_hi;
};

// Past these limits the curve is a step on the grid or its midpoint leaves the
// data; the objective is flat there, so the simplex collapses instead of drifting.
LogisticFit effective(const Point &p, const Bounds &b) {
    return {std::abs(p[0]), std::clamp(p[1], -b.g_max, b.g_max), std::clamp(p[2], b.t_lo, b.t_hi)};
}

double sse(const Point &p, const Bounds &b, std::span<const double> t, std::span<const double> y) {
    const LogisticFit f = effective(p, b);
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double r = f(t[i]) - y[i];
        s += r * r;
    }
    return s;
}

} // namespace

LogisticFit fit_logistic(std::span<const double> t, std::span<const double> y,
                         const FitOptions &opt) {
    if (t.size() != y.size())
        throw ArgumentError("fit_logistic: thresholds and values differ in length");
    if (t.size() < 4)
        throw ArgumentError("fit_logistic: need at least 4 points");
    for (double v : y)
        if (v < 0.0)
            throw ArgumentError("fit_logistic: values must be nonnegative");

    const auto n = y.size();
    const double ymax = *std::max_element(y.begin(), y.end());
    const double ymin = *std::min_element(y.begin(), y.end());
    LogisticFit fit;

    if (ymax - ymin <= 1e-12 * std::max(1.0, ymax)) {
        double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
        fit.L = 2.0 * mean;
        fit.g = 0.0;
        fit.t0 = 0.5 * (t.front() + t.back());
        double s = 0.0;
        for (double v : y)
            s += (v - mean) * (v - mean);
        fit.residual = std::sqrt(s / static_cast<double>(n));
        fit.converged = true;
        return fit;
    }

    // Start: amplitude at the peak, midpoint where the series crosses half of it.
    const double half = 0.5 * ymax;
    const double direction = y.back() >= y.front() ? 1.0 : -1.0;
    double t0 = 0.5 * (t.front() + t.back());
    for (std::size_t i = 1; i < n; ++i) {
        if ((y[i - 1] - half) * (y[i] - half) <= 0.0 && y[i - 1] != y[i]) {
            double w = (half - y[i - 1]) / (y[i] - y[i - 1]);
            t0 = t[i - 1] + w * (t[i] - t[i - 1]);
            break;
        }
    }

    std::vector<double> sorted(t.begin(), t.end());
    std::sort(sorted.begin(), sorted.end());
    double spacing = sorted.back() - sorted.front();
    for (std::size_t i = 1; i < n; ++i)
        if (sorted[i] > sorted[i - 1])
            spacing = std::min(spacing, sorted[i] - sorted[i - 1]);
    const Bounds bounds{opt.max_step_rate / std::max(spacing, 1e-12), sorted.front(), sorted.back()};

    std::array<Point, 4> simplex;
    simplex[0] = {ymax, direction, t0};
    const double span = std::max(t.back() - t.front(), 1.0);
    const Point step{0.1 * ymax, 0.5, 0.05 * span};
    for (std::size_t i = 0; i < 3; ++i) {
        simplex[i + 1] = simplex[0];
        simplex[i + 1][i] += step[i];
    }
    std::array<double, 4> value;
    std::size_t evals = 0;
    auto f = [&](const Point &p) {
        ++evals;
        return sse(p, bounds, t, y);
    };
    for (std::size_t i = 0; i < 4; ++i)
        value[i] = f(simplex[i]);

    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i < 4; ++i)
            for (std::size_t c = 0; c < 3; ++c)
                d = std::max(d, std::abs(simplex[i][c] - simplex[0][c]));
        return d;
    };

    std::array<std::size_t, 4> idx;
    for (;;) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return value[a] < value[b]; });
        std::array<Point, 4> s2;
        std::array<double, 4> v2;
        for (std::size_t i = 0; i < 4; ++i) {
            s2[i] = simplex[idx[i]];
            v2[i] = value[idx[i]];
        }
        simplex = s2;
        value = v2;

        if (diameter() < opt.simplex_tol) {
            fit.converged = true;
            break;
        }
        if (evals >= opt.max_evaluations)
            break;

        Point centroid{0, 0, 0};
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t c = 0; c < 3; ++c)
                centroid[c] += simplex[i][c] / 3.0;
        auto along = [&](double coef) {
            Point p;
            for (std::size_t c = 0; c < 3; ++c)
                p[c] = centroid[c] + coef * (simplex[3][c] - centroid[c]);
            return p;
        };

        Point xr = along(-1.0);
        double fr = f(xr);
        if (fr < value[0]) {
            Point xe = along(-2.0);
            double fe = f(xe);
            if (fe < fr) {
                simplex[3] = xe;
                value[3] = fe;
            } else {
                simplex[3] = xr;
                value[3] = fr;
            }
        } else if (fr < value[2]) {
            simplex[3] = xr;
            value[3] = fr;
        } else {
            bool outside = fr < value[3];
            Point xc = along(outside ? -0.5 : 0.5);
            double fc = f(xc);
            if (fc < (outside ? fr : value[3])) {
                simplex[3] = xc;
                value[3] = fc;
            } else {
                for (std::size_t i = 1; i < 4; ++i) {
                    for (std::size_t c = 0; c < 3; ++c)
                        simplex[i][c] = simplex[0][c] + 0.5 * (simplex[i][c] - simplex[0][c]);
                    value[i] = f(simplex[i]);
                }
            }
        }
    }

    const auto best = effective(simplex[0], bounds);
    fit.L = best.L;
    fit.g = best.g;
    fit.t0 = best.t0;
    fit.residual = std::sqrt(value[0] / static_cast<double>(n));
    fit.evaluations = evals;
    return fit;
}

std::optional<std::size_t> detect_transition_index(std::span<const double> a,
                                                   std::span<const double> b,
                                                   const std::vector<bool> &nonempty) {
    if (a.size() != b.size())
        throw ArgumentError("detect_transition: series lengths differ");
    if (!nonempty.empty() && nonempty.size() != a.size())
        throw ArgumentError("detect_transition: mask length differs from series");
    auto counts = [&](std::size_t i) { return nonempty.empty() || nonempty[i]; };

    // Walk backwards: the answer is the start of the trailing run where b > a.
    std::optional<std::size_t> start;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (!counts(i))
            continue;
        if (b[i] > a[i])
            start = i;
        else
            break;
    }
    return start;
}

std::optional<int> detect_transition(std::span<const int> grid, std::span<const double> a,
                                     std::span<const double> b,
                                     const std::vector<bool> &nonempty) {
    if (grid.size() != a.size())
        throw ArgumentError("detect_transition: grid length differs from series");
    auto i = detect_transition_index(a, b, nonempty);
    if (!i)
        return std::nullopt;
    return grid[*i];
}

double curvature(const LogisticFit &a, const LogisticFit &b, bool transition_present) {
    if (!transition_present)
        return 0.0;
    if (!a.converged || !b.converged)
        throw ArgumentError("curvature: logistic fit did not converge");
    return 0.5 * (std::abs(a.g) + std::abs(b.g));
}

std::optional<int> degree_changeover(const SweepResult &result, const std::string &group_a,
                                     const std::string &group_b) {
    auto [grid, da] = group_series(result, group_a, "mean_degree");
    auto db = group_series(result, group_b, "mean_degree").second;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!result.records[i].empty && db[i] > da[i])
            return grid[i];
    return std::nullopt;
}

TransitionReport transition_report(const SweepResult &result, const std::string &group_a,
                                   const std::string &group_b, const std::string &field) {
    TransitionReport rep;
    rep.group_a = group_a;
    rep.group_b = group_b;
    rep.field = field;

    auto [grid, a] = group_series(result, group_a, field);
    auto b = group_series(result, group_b, field).second;
    auto mask = nonempty_mask(result);

    auto ti = detect_transition_index(a, b, mask);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (mask[i] && b[i] > a[i]) {
            rep.first_crossing = grid[i];
            break;
        }
    if (ti) {
        rep.transition_threshold = grid[*ti];
        rep.persistent = rep.first_crossing == rep.transition_threshold;
    }

    auto gap = [&](std::size_t i) -> std::optional<double> {
        const auto &norm = result.records[i].normalized_eigenvalues;
        if (norm.size() < 2)
            return std::nullopt;
        return norm[1];
    };
    if (!result.records.empty())
        rep.gap_at_start = gap(0);
    if (ti && *ti > 0)
        rep.gap_at_transition = gap(*ti - 1);
    rep.degree_changeover_threshold = degree_changeover(result, group_a, group_b);

    std::vector<double> ft, fa, fb;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (mask[i]) {
            ft.push_back(grid[i]);
            fa.push_back(a[i]);
            fb.push_back(b[i]);
        }
    if (ft.size() >= 4) {
        rep.fit_a = fit_logistic(ft, fa);
        rep.fit_b = fit_logistic(ft, fb);
        try {
            rep.curvature = curvature(rep.fit_a, rep.fit_b, ti.has_value());
        } catch (const ArgumentError &e) {
            rep.diagnostics.emplace_back(e.what());
        }
    } else {
        rep.diagnostics.emplace_back("fewer than 4 nonempty thresholds; no logistic fit");
        if (!ti)
            rep.curvature = 0.0;
    }
    return rep;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return x[i] < x[j]; });
    std::vector<double> rank(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]])
            ++j;
        double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            rank[order[k]] = r;
        i = j + 1;
    }
    return rank;
}

} // namespace

double rank_correlation(std::span<const double> x, std::span<const double> y) {
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    return pearson(rx, ry);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i, std::uint64_t j,
                          std::uint64_t rep) {
    // splitmix64 finalizer folded over the indices.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(master);
    h = mix(h ^ i);
    h = mix(h ^ (j + 0x632be59bd9b4e019ULL));
    h = mix(h ^ (rep + 0x8cb92ba72f3d8dd7ULL));
    return h;
}

namespace {

template <class Job>
void run_jobs(std::size_t count, unsigned threads, Job job) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(m);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n; ++w)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
}

SweepOptions single_threaded(SweepOptions o) {
    o.threads = 1;
    return o;
}

} // namespace

std::vector<BetaGridCell> beta_grid_experiment(const SGCConfig &base,
                                               std::span<const double> alphas,
                                               std::span<const double> betas, std::size_t reps,
                                               const ExperimentOptions &opt) {
    if (reps < 1)
        throw ArgumentError("beta grid: reps must be at least 1");
    std::vector<BetaGridCell> cells(alphas.size() * betas.size());
    for (std::size_t ai = 0; ai < alphas.size(); ++ai)
        for (std::size_t bi = 0; bi < betas.size(); ++bi) {
            auto &c = cells[ai * betas.size() + bi];
            c.alpha = alphas[ai];
            c.beta = betas[bi];
            c.reps.resize(reps);
        }
    const auto sweep_opt = single_threaded(opt.sweep);

    run_jobs(cells.size() * reps, opt.threads, [&](std::size_t job) {
        const std::size_t cell = job / reps, r = job % reps;
        const std::size_t ai = cell / betas.size(), bi = cell % betas.size();
        SGCConfig cfg = base;
        cfg.leader_target = LeaderTarget::beta;
        cfg.beta_alpha = alphas[ai];
        cfg.beta_beta = betas[bi];
        cfg.seed = derive_seed(base.seed, ai, bi, r);
        auto sgc = generate_sgc(cfg);
        auto sweep = threshold_sweep(sgc.graph, sgc.meta, {opt.group_a, opt.group_b}, sweep_opt);
        auto report = transition_report(sweep, opt.group_a, opt.group_b);

        auto &out = cells[cell].reps[r];
        out.rep = r;
        out.seed = cfg.seed;
        out.transition = report.transition_threshold;
        out.g_a = report.fit_a.g;
        out.g_b = report.fit_b.g;
        out.warnings = sgc.warnings;
        for (auto &d : report.diagnostics)
            out.warnings.push_back(d);
        if (!report.curvature)
            throw std::runtime_error("beta grid cell (" + std::to_string(cfg.beta_alpha) + ", " +
                                     std::to_string(cfg.beta_beta) +
                                     "): " + report.diagnostics.front());
        out.curvature = *report.curvature;
    });

    for (auto &c : cells) {
        double s = 0.0;
        for (const auto &r : c.reps)
            s += r.curvature;
        c.mean_curvature = s / static_cast<double>(c.reps.size());
    }
    return cells;
}

double p_leader_for_ratio(const SGCConfig &cfg, double ratio) {
    // Popularity ~ min(Exp(mean), cap) with k < cap: P(pop < k) = 1 - exp(-k / mean).
    const double below = 1.0 - std::exp(-cfg.k / cfg.popularity_mean);
    const double above = std::exp(-cfg.k / cfg.popularity_mean);
    const double m = static_cast<double>(cfg.masses_count);
    const double celeb = static_cast<double>(cfg.n_celebrities - 1) + cfg.p_celeb * m * above;
    return (ratio * celeb - static_cast<double>(cfg.n_leaders - 1)) / (m * below);
}

std::vector<DegreeRatioRow> degree_ratio_experiment(const SGCConfig &base,
                                                    std::span<const double> ratios,
                                                    std::size_t reps,
                                                    const ExperimentOptions &opt) {
    if (reps < 1)
        throw ArgumentError("degree ratio: reps must be at least 1");
    for (double r : ratios)
        if (!(r > 1.0))
            throw ArgumentError("degree ratio: ratios must exceed 1");

    std::vector<DegreeRatioRow> rows(ratios.size() * reps);
    const auto sweep_opt = single_threaded(opt.sweep);
    run_jobs(rows.size(), opt.threads, [&](std::size_t job) {
        const std::size_t ri = job / reps, r = job % reps;
        auto &row = rows[job];
        row.ratio = ratios[ri];
        row.rep = r;
        SGCConfig cfg = base;
        cfg.leader_target = LeaderTarget::uniform_below_k;
        cfg.seed = derive_seed(base.seed, ri, 0, r);
        row.seed = cfg.seed;
        row.p_leader = p_leader_for_ratio(cfg, ratios[ri]);
        if (!(row.p_leader > 0.0 && row.p_leader < 1.0)) {
            row.skipped = true;
            row.diagnostic = "ratio " + std::to_string(ratios[ri]) +
                             " needs p_leader=" + std::to_string(row.p_leader) +
                             " outside (0, 1)";
            return;
        }
        cfg.p_leader = row.p_leader;
        // Low ratios push p_leader below p_celeb by construction.
        auto sgc = generate_sgc(cfg, GenerateOptions{.require_rate_order = false});
        auto sweep = threshold_sweep(sgc.graph, sgc.meta, {opt.group_a, opt.group_b}, sweep_opt);
        auto [grid, a] = group_series(sweep, opt.group_a, "mean_eigencentrality");
        auto b = group_series(sweep, opt.group_b, "mean_eigencentrality").second;
        row.transition = detect_transition(grid, a, b, nonempty_mask(sweep));
        row.changeover = degree_changeover(sweep, opt.group_a, opt.group_b);
    });
    return rows;
}

} // namespace popcent
