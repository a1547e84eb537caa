// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any selected criterion fails.
//
//   popcent_acceptance            criteria 1-10
//   popcent_acceptance 4 5 6 9    a subset
//   popcent_acceptance 11         large-graph timing (slow)

#include "../oracles.hpp"

#include <cli.hpp>

#include <popcent/analysis.hpp>
#include <popcent/centrality.hpp>
#include <popcent/io.hpp>
#include <popcent/sgc.hpp>
#include <popcent/spectral.hpp>
#include <popcent/sweep.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

using namespace popcent;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string &name, const Outcome &o) {
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "C" << id << " " << name << ": " << o.detail
              << std::endl;
    if (!o.pass)
        ++failures;
}

std::string fmt(double x, int prec = 3) {
    std::ostringstream s;
    s << std::setprecision(prec) << x;
    return s.str();
}

// ------------------------------------------------------------------ C1

Outcome spectral_oracle() {
    const auto t0 = Clock::now();
    double worst_value = 0, worst_cos = 0;
    int bad = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 12 + 2 * seed;
        auto g = oracle::gnp(n, 0.25, seed);
        auto ref = oracle::eigen_decomposition(g);
        auto check = [&](const EigenPair &p, std::size_t i) {
            const double rel = std::abs(p.value - ref.values[i]) / std::abs(ref.values[i]);
            const double gap = 1 - oracle::cosine(p.vector, ref.vectors[i]);
            worst_value = std::max(worst_value, rel);
            worst_cos = std::max(worst_cos, gap);
            if (!p.converged || !(rel < 1e-6) || !(gap < 1e-8))
                ++bad;
        };
        check(power_iteration(g), 0);
        auto s = top_k_spectrum(g, 3);
        for (std::size_t i = 0; i < 3; ++i)
            check(s.pairs[i], i);
    }
    const double secs = seconds_since(t0);
    return {bad == 0 && secs < 10.0,
            "80 pairs, " + std::to_string(bad) + " outside tolerance, max rel eigenvalue error " +
                fmt(worst_value) + ", max 1-cosine " + fmt(worst_cos) + ", " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ C2

Outcome path_centrality_oracle() {
    const auto t0 = Clock::now();
    double worst = 0;
    int graphs = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t n = 3 + seed % 6;
        auto g = oracle::gnp(n, 0.5, seed);
        if (!oracle::connected(g))
            continue;
        ++graphs;
        auto c = closeness_centrality(g).scores;
        auto b = betweenness_centrality(g).scores;
        auto rc = oracle::closeness(g);
        auto rb = oracle::betweenness(g);
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max({worst, std::abs(c[i] - rc[i]), std::abs(b[i] - rb[i])});
    }
    const double secs = seconds_since(t0);
    return {graphs > 0 && worst <= 1e-12 && secs < 30.0,
            std::to_string(graphs) + " connected graphs of 50, max abs error " + fmt(worst) + ", " +
                fmt(secs) + " s"};
}

// ------------------------------------------------------------------ C3

Outcome pagerank_contract() {
    double worst_sum = 0, worst_uniform = 0, worst_solve = 0;
    int fixtures = 0;
    auto sum_of = [](const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0); };
    for (std::size_t n = 3; n <= 20; ++n)
        for (const auto &g : {oracle::cycle(n), oracle::complete(n)}) {
            auto pr = pagerank(g).scores;
            ++fixtures;
            worst_sum = std::max(worst_sum, std::abs(sum_of(pr) - 1));
            for (double x : pr)
                worst_uniform = std::max(worst_uniform, std::abs(x - 1.0 / static_cast<double>(n)));
        }
    std::vector<Graph> solve_fixtures;
    for (std::uint64_t seed = 0; seed < 16; ++seed)
        solve_fixtures.push_back(oracle::gnp(5 + seed, 0.2, seed));
    solve_fixtures.push_back(oracle::star(4));
    solve_fixtures.push_back(oracle::star(19));
    solve_fixtures.push_back(oracle::path(20));
    for (const auto &g : solve_fixtures)
        for (double d : {0.5, 0.85}) {
            auto pr = pagerank(g, d).scores;
            auto ref = oracle::pagerank(g, d);
            ++fixtures;
            worst_sum = std::max(worst_sum, std::abs(sum_of(pr) - 1));
            for (std::size_t i = 0; i < pr.size(); ++i)
                worst_solve = std::max(worst_solve, std::abs(pr[i] - ref[i]));
        }
    return {worst_sum <= 1e-9 && worst_uniform <= 1e-9 && worst_solve <= 1e-8,
            std::to_string(fixtures) + " fixtures, |sum-1| " + fmt(worst_sum) + ", uniform error " +
                fmt(worst_uniform) + ", dense-solve error " + fmt(worst_solve)};
}

// ------------------------------------------------------------------ C4 C5 C6 C9

struct SGCRun {
    std::uint64_t seed = 0;
    double seconds = 0;
    bool leaders_top_at_0 = false;
    bool celebs_top_at_90 = false;
    TransitionReport ev;
    std::optional<int> band_transition;
    double g_ev_a = 0, g_ev_b = 0, g_pr_a = 0, g_pr_b = 0;
};

std::string top_group(const ThresholdRecord &rec) {
    std::string best;
    double value = -1;
    for (const auto &gr : rec.groups) {
        double v = gr.fields.at("mean_eigencentrality");
        if (v > value) {
            value = v;
            best = gr.group;
        }
    }
    return best;
}

const std::vector<SGCRun> &sgc_runs() {
    static std::vector<SGCRun> runs = [] {
        std::vector<SGCRun> out;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto t0 = Clock::now();
            SGCRun run;
            run.seed = seed;
            SGCConfig cfg;
            cfg.seed = seed;
            auto sgc = generate_sgc(cfg);
            SweepOptions o;
            o.grid = SweepOptions::default_grid();
            o.measures = {Measure::eigenvector, Measure::pagerank};
            auto sweep = threshold_sweep(sgc.graph, sgc.meta, {}, o);
            run.leaders_top_at_0 = top_group(sweep.records[0]) == kLeaderGroup;
            run.celebs_top_at_90 = top_group(sweep.records[90]) == kCelebrityGroup;
            run.ev = transition_report(sweep, kLeaderGroup, kCelebrityGroup);
            auto pr = transition_report(sweep, kLeaderGroup, kCelebrityGroup, "mean_pagerank");
            run.g_ev_a = run.ev.fit_a.g;
            run.g_ev_b = run.ev.fit_b.g;
            run.g_pr_a = pr.fit_a.g;
            run.g_pr_b = pr.fit_b.g;
            if (auto t = run.ev.transition_threshold) {
                SweepOptions band = o;
                band.measures = {Measure::eigenvector};
                auto removed = removal_band_sweep(sgc.graph, sgc.meta, {}, *t - 5, *t + 5, band);
                run.band_transition =
                    transition_report(removed, kLeaderGroup, kCelebrityGroup).transition_threshold;
            }
            run.seconds = seconds_since(t0);
            std::cout << "  seed " << seed << ": t*="
                      << (run.ev.transition_threshold ? std::to_string(*run.ev.transition_threshold) : "none")
                      << " gap(0)=" << fmt(run.ev.gap_at_start.value_or(NAN))
                      << " gap(t*-1)=" << fmt(run.ev.gap_at_transition.value_or(NAN)) << " band t*="
                      << (run.band_transition ? std::to_string(*run.band_transition) : "none")
                      << " |g| ev=" << fmt(std::abs(run.g_ev_a)) << "/" << fmt(std::abs(run.g_ev_b))
                      << " pr=" << fmt(std::abs(run.g_pr_a)) << "/" << fmt(std::abs(run.g_pr_b)) << " ("
                      << fmt(run.seconds) << " s)" << std::endl;
            out.push_back(run);
        }
        return out;
    }();
    return runs;
}

Outcome sgc_transition() {
    int ok = 0;
    double slowest = 0;
    for (const auto &r : sgc_runs()) {
        const auto &t = r.ev.transition_threshold;
        if (r.leaders_top_at_0 && r.celebs_top_at_90 && t && r.ev.persistent && *t > 0 && *t < 100)
            ++ok;
        slowest = std::max(slowest, r.seconds);
    }
    return {ok >= 9 && slowest < 120.0, std::to_string(ok) + "/10 seeds with leaders on top at 0, "
                                            "celebrities at 90 and a persistent t* in (0,100); "
                                            "slowest seed " + fmt(slowest) + " s"};
}

Outcome eigen_gap_closing() {
    int ok = 0;
    for (const auto &r : sgc_runs())
        if (r.ev.gap_at_start && r.ev.gap_at_transition && *r.ev.gap_at_transition > *r.ev.gap_at_start)
            ++ok;
    return {ok >= 9, std::to_string(ok) + "/10 seeds with lambda2/lambda1 at t*-1 above its value at 0"};
}

Outcome removal_band_shift() {
    int ok = 0;
    for (const auto &r : sgc_runs())
        if (r.band_transition && *r.band_transition < *r.ev.transition_threshold)
            ++ok;
    return {ok >= 8, std::to_string(ok) + "/10 seeds whose transition moves left after removing [t*-5, t*+5]"};
}

Outcome pagerank_smoothing() {
    int ok = 0;
    for (const auto &r : sgc_runs())
        if (std::abs(r.g_pr_a) < std::abs(r.g_ev_a) && std::abs(r.g_pr_b) < std::abs(r.g_ev_b))
            ++ok;
    return {ok == 10, std::to_string(ok) + "/10 seeds where both PageRank fits are flatter than the "
                                           "eigencentrality fits"};
}

// ------------------------------------------------------------------ C7

Outcome beta_grid_phases() {
    const auto t0 = Clock::now();
    SGCConfig base;
    base.masses_count = 2000;
    base.leader_target = LeaderTarget::beta;
    base.seed = 0;
    const std::vector<double> values{0.5, 1, 2, 4};
    ExperimentOptions opt;
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    auto cells = beta_grid_experiment(base, values, values, 3, opt);
    bool flat_ok = true, steep_ok = false;
    std::ostringstream detail;
    for (const auto &c : cells) {
        int transitions = 0;
        for (const auto &r : c.reps)
            transitions += r.transition.has_value();
        std::cout << "  alpha=" << c.alpha << " beta=" << c.beta << " curvature=" << fmt(c.mean_curvature)
                  << " transitions=" << transitions << "/3";
        for (const auto &r : c.reps)
            if (r.transition)
                std::cout << " t*=" << *r.transition;
        std::cout << std::endl;
        if (c.alpha >= 1.5 * c.beta && c.mean_curvature != 0.0) {
            flat_ok = false;
            detail << " (" << c.alpha << "," << c.beta << ")=" << fmt(c.mean_curvature);
        }
        if (c.alpha == 0.5 && c.beta == 4)
            steep_ok = c.mean_curvature > 0;
    }
    const double secs = seconds_since(t0);
    std::string d = flat_ok ? "curvature 0 on every alpha >= 1.5 beta cell"
                            : "nonzero curvature on alpha >= 1.5 beta cells:" + detail.str();
    d += steep_ok ? "; (0.5,4) curvature > 0" : "; (0.5,4) curvature is 0";
    return {flat_ok && steep_ok && secs < 600.0, d + ", " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ C8

Outcome degree_changeover_association() {
    SGCConfig base;
    base.seed = 0;
    const std::vector<double> ratios{2, 5, 10, 20};
    ExperimentOptions opt;
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    auto rows = degree_ratio_experiment(base, ratios, 5, opt);
    std::vector<double> change, trans;
    int near = 0;
    for (const auto &r : rows) {
        std::cout << "  ratio=" << r.ratio << " rep=" << r.rep << " changeover="
                  << (r.changeover ? std::to_string(*r.changeover) : "none") << " t*="
                  << (r.transition ? std::to_string(*r.transition) : "none")
                  << (r.skipped ? " skipped" : "") << std::endl;
        if (r.changeover && r.transition) {
            change.push_back(*r.changeover);
            trans.push_back(*r.transition);
            if (r.ratio == 20 && std::abs(*r.changeover - *r.transition) <= 5)
                ++near;
        }
    }
    double rho = NAN;
    try {
        rho = rank_correlation(change, trans);
    } catch (const std::exception &) {
    }
    return {rho > 0 && near >= 4, "rank correlation " + fmt(rho) + " over " +
                                      std::to_string(change.size()) + " runs; ratio 20 within 5 steps in " +
                                      std::to_string(near) + "/5"};
}

// ------------------------------------------------------------------ C10

std::map<std::string, std::string> read_tree(const fs::path &dir) {
    std::map<std::string, std::string> files;
    for (const auto &e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) {
            std::ifstream in(e.path(), std::ios::binary);
            std::ostringstream s;
            s << in.rdbuf();
            files[fs::relative(e.path(), dir).string()] = s.str();
        }
    return files;
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("popcent_acceptance_" + std::to_string(std::random_device{}()));
    const fs::path home = fs::current_path();
    // Each tree runs from its own directory with the same relative paths, since
    // manifests echo input paths.
    auto run_tree = [&](const std::string &tag, const std::string &threads) {
        const fs::path dir = root / tag;
        fs::create_directories(dir);
        std::ofstream(dir / "gen.toml") << "seed = 11\n[sgc]\nmasses_count = 1500\n";
        std::ofstream(dir / "bg.toml") << "grid = \"0..100:5\"\n[sgc]\nmasses_count = 300\n";
        fs::current_path(dir);
        std::vector<std::vector<std::string>> cmds{
            {"generate", "--config", "gen.toml", "--out", "gen"},
            {"stats", "--edges", "gen/edges.tsv", "--meta", "gen/nodes.csv", "--out", "stats"},
            {"sweep", "--edges", "gen/edges.tsv", "--meta", "gen/nodes.csv", "--measures",
             "eigenvector,pagerank,degree", "--out", "sweep"},
            {"sweep", "--edges", "gen/edges.tsv", "--meta", "gen/nodes.csv", "--remove-band", "40,50",
             "--grid", "0..100:2", "--out", "band"},
            {"analyze", "--mode", "transition", "--sweep", "sweep/sweep.csv", "--out", "transition"},
            {"analyze", "--mode", "beta-grid", "--config", "bg.toml", "--alphas", "0.5,4", "--betas",
             "1,4", "--reps", "2", "--out", "beta"},
            {"analyze", "--mode", "degree-ratio", "--config", "bg.toml", "--ratios", "2,5", "--reps",
             "2", "--out", "ratio"},
        };
        std::ostringstream sink;
        int bad = 0;
        for (auto cmd : cmds) {
            cmd.push_back("--threads");
            cmd.push_back(threads);
            bad += cli::run(cmd, sink, sink) != 0;
        }
        fs::current_path(home);
        return bad;
    };
    const int bad = run_tree("a", "1") + run_tree("b", "1") + run_tree("c", "4");
    auto a = read_tree(root / "a"), b = read_tree(root / "b"), c = read_tree(root / "c");
    std::vector<std::string> differing;
    for (const auto &[name, bytes] : a)
        if (b[name] != bytes || c[name] != bytes)
            differing.push_back(name);
    const bool same = a.size() > 2 && differing.empty() && a.size() == b.size() && a.size() == c.size();
    std::error_code ec;
    fs::remove_all(root, ec);
    std::string detail = std::to_string(a.size()) + " files from 7 commands, ";
    if (same)
        detail += "byte-identical across two runs at --threads 1 and one at --threads 4";
    else {
        detail += "differing:";
        for (const auto &d : differing)
            detail += " " + d;
    }
    if (bad)
        detail += ", " + std::to_string(bad) + " commands failed";
    return {bad == 0 && same, detail};
}

// ------------------------------------------------------------------ C11

Outcome large_graph_timing() {
    const auto t0 = Clock::now();
    SGCConfig cfg;
    cfg.masses_count = 1'000'000;
    cfg.ba_m = 4;
    cfg.p_leader = 0.001;
    cfg.p_celeb = 0.0001;
    cfg.seed = 0;
    auto sgc = generate_sgc(cfg);
    const double gen_secs = seconds_since(t0);
    SweepOptions o;
    o.grid = SweepOptions::default_grid();
    o.measures = {Measure::eigenvector};
    o.k_eigs = 3;
    o.threads = std::max(1u, std::thread::hardware_concurrency());
    const auto t1 = Clock::now();
    auto r = threshold_sweep(sgc.graph, sgc.meta, {}, o);
    const double sweep_secs = seconds_since(t1);
    bool converged = true;
    for (const auto &rec : r.records)
        converged = converged && rec.spectrum_converged &&
                    std::all_of(rec.measure_converged.begin(), rec.measure_converged.end(),
                                [](const auto &kv) { return kv.second; });
    return {sweep_secs < 1800.0 && converged,
            std::to_string(sgc.graph.node_count()) + " nodes, " + std::to_string(sgc.graph.edge_count()) +
                " edges, 101 thresholds on " + std::to_string(o.threads) + " thread(s): sweep " +
                fmt(sweep_secs, 4) + " s (generation " + fmt(gen_secs) + " s)" +
                (converged ? "" : ", some thresholds did not converge")};
}

} // namespace

int main(int argc, char **argv) {
    const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
        {1, {"spectral oracle equivalence", spectral_oracle}},
        {2, {"path-centrality oracles", path_centrality_oracle}},
        {3, {"PageRank contract", pagerank_contract}},
        {4, {"SGC transition existence", sgc_transition}},
        {5, {"eigen-gap closing", eigen_gap_closing}},
        {6, {"removal-band shift", removal_band_shift}},
        {7, {"beta-grid phase structure", beta_grid_phases}},
        {8, {"degree-changeover association", degree_changeover_association}},
        {9, {"PageRank smoothing", pagerank_smoothing}},
        {10, {"determinism", determinism}},
        {11, {"performance sanity", large_graph_timing}},
    };
    std::set<int> chosen;
    for (int i = 1; i < argc; ++i) {
        int id = std::atoi(argv[i]);
        if (!criteria.count(id)) {
            std::cerr << "unknown criterion " << argv[i] << "\n";
            return 2;
        }
        chosen.insert(id);
    }
    if (chosen.empty())
        for (int id = 1; id <= 10; ++id)
            chosen.insert(id);

    for (int id : chosen) {
        const auto &[name, fn] = criteria.at(id);
        try {
            report(id, name, fn());
        } catch (const std::exception &e) {
            report(id, name, {false, std::string("threw: ") + e.what()});
        }
    }
    return failures ? 1 : 0;
}
