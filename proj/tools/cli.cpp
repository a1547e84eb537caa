#include "cli.hpp"
#include "config.hpp"

#include <popcent/analysis.hpp>
#include <popcent/error.hpp>
#include <popcent/io.hpp>
#include <popcent/stats.hpp>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace popcent::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- helpers

std::string read_file(const std::string &path, const char *role) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError(std::string("cannot open ") + role + " file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string sha256_hex(const std::string &bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("SHA-256 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

std::vector<double> parse_numbers(const std::string &s, const char *what) {
    std::vector<double> out;
    for (const auto &tok : split_list(s)) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size())
            throw UsageError(std::string("--") + what + ": not a number: '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw UsageError(std::string("--") + what + " needs at least one value");
    return out;
}

std::vector<Measure> parse_measure_list(const std::vector<std::string> &names) {
    std::vector<Measure> out;
    for (const auto &n : names) {
        auto m = parse_measure(n);
        if (!m)
            throw UsageError("unknown measure '" + n +
                             "' (expected degree, closeness, betweenness, eigenvector, pagerank)");
        if (std::find(out.begin(), out.end(), *m) == out.end())
            out.push_back(*m);
    }
    if (out.empty())
        throw UsageError("no measures requested");
    return out;
}

struct Output {
    std::string name;
    std::string bytes;
};

void write_outputs(const fs::path &dir, const std::vector<Output> &files) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw ValidationError("cannot create output directory " + dir.string() + ": " +
                              ec.message());
    for (const auto &f : files) {
        auto target = dir / f.name;
        auto tmp = dir / (f.name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(f.bytes.data(), static_cast<std::streamsize>(f.bytes.size()));
            if (!out)
                throw ValidationError("cannot write " + tmp.string());
        }
        fs::rename(tmp, target, ec);
        if (ec)
            throw ValidationError("cannot write " + target.string() + ": " + ec.message());
    }
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

// Typed reads from the merged config with a usable error.
template <class T> T get(const json &cfg, const char *key) {
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception &) {
        throw ValidationError(std::string("config key '") + key + "' is missing or has the wrong type");
    }
}

void reject_unknown(const json &cfg, std::initializer_list<const char *> allowed) {
    for (const auto &[k, v] : cfg.items()) {
        bool ok = false;
        for (const char *a : allowed)
            ok = ok || k == a;
        if (!ok)
            throw ValidationError("unknown config key '" + k + "'");
    }
}

// ---------------------------------------------------------------- flags

struct Flags {
    std::string edges, meta, config, out, grid, measures, groups, remove_band;
    std::string mode, sweep, group_a, group_b, field, alphas, betas, ratios;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t k_eigs = 0, reps = 0;
    // Each subcommand registers its own copy of a flag; only one subcommand parses.
    std::multimap<std::string, CLI::Option *> opt;

    void add(const std::string &name, CLI::Option *o) { opt.emplace(name, o); }
    bool has(const std::string &name) const {
        auto [lo, hi] = opt.equal_range(name);
        for (auto it = lo; it != hi; ++it)
            if (it->second->count() > 0)
                return true;
        return false;
    }
};

void add_common(CLI::App *cmd, Flags &f) {
    f.add("config", cmd->add_option("--config", f.config, "TOML or JSON run config"));
    f.add("out", cmd->add_option("--out", f.out, "output directory")->required());
    f.add("threads", cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)"));
}

void add_inputs(CLI::App *cmd, Flags &f) {
    f.add("edges", cmd->add_option("--edges", f.edges, "tab-separated edge list"));
    f.add("meta", cmd->add_option("--meta", f.meta, "node metadata CSV"));
}

void add_sweep_flags(CLI::App *cmd, Flags &f) {
    f.add("grid", cmd->add_option("--grid", f.grid, "thresholds as lo..hi:step"));
    f.add("measures", cmd->add_option("--measures", f.measures, "comma-separated measures"));
    f.add("k_eigs", cmd->add_option("--k-eigs", f.k_eigs, "leading eigenvalues per threshold"));
}

unsigned resolve_threads(unsigned t) {
    if (t == 0)
        t = std::max(1u, std::thread::hardware_concurrency());
    return t;
}

json load_base_config(const Flags &f) {
    if (!f.has("config"))
        return json::object();
    json cfg = load_config(f.config);
    // A manifest from an earlier run doubles as a config.
    if (cfg.contains("tool") && cfg.contains("config") && cfg["config"].is_object())
        cfg = cfg["config"];
    return cfg;
}

// ---------------------------------------------------------------- inputs

struct Input {
    std::string path;
    std::string digest;
};

struct GraphInputs {
    Graph graph;
    NodeMetaTable meta;
    bool has_meta = false;
    LoadSummary summary;
    std::map<std::string, Input> files;
};

GraphInputs load_graph_inputs(const json &cfg, bool need_meta) {
    GraphInputs in;
    if (!cfg.contains("edges"))
        throw UsageError("--edges is required");
    auto edges_path = get<std::string>(cfg, "edges");
    auto edges_text = read_file(edges_path, "edge list");
    in.files["edges"] = {edges_path, sha256_hex(edges_text)};
    std::istringstream es(edges_text);
    auto loaded = load_edge_list(es);
    in.summary = loaded.summary;

    if (cfg.contains("meta") && !cfg["meta"].is_null()) {
        auto meta_path = get<std::string>(cfg, "meta");
        auto meta_text = read_file(meta_path, "metadata");
        in.files["meta"] = {meta_path, sha256_hex(meta_text)};
        std::istringstream ms(meta_text);
        auto rows = load_node_meta(ms);
        auto annotated = attach_meta(loaded, rows);
        in.graph = std::move(annotated.graph);
        in.meta = std::move(annotated.meta);
        in.has_meta = true;
    } else if (need_meta) {
        throw UsageError("--meta is required");
    } else {
        in.graph = std::move(loaded.graph);
    }
    return in;
}

json manifest(const std::string &command, const json &config,
              const std::map<std::string, Input> &inputs, const std::vector<Output> &outputs,
              const std::vector<std::string> &warnings) {
    json j;
    j["tool"] = "popcent";
    j["version"] = POPCENT_VERSION;
    j["command"] = command;
    j["config"] = config;
    json in = json::object();
    for (const auto &[role, f] : inputs)
        in[role] = {{"path", f.path}, {"sha256", f.digest}};
    j["inputs"] = in;
    json outs = json::object();
    for (const auto &o : outputs)
        outs[o.name] = sha256_hex(o.bytes);
    j["outputs"] = outs;
    j["warnings"] = warnings;
    return j;
}

void finish(const Flags &f, const std::string &command, const json &config,
            std::map<std::string, Input> inputs, std::vector<Output> outputs,
            const std::vector<std::string> &warnings) {
    if (f.has("config"))
        inputs["config"] = {f.config, sha256_hex(read_file(f.config, "config"))};
    auto m = manifest(command, config, inputs, outputs, warnings);
    outputs.push_back({"manifest.json", dump(m)});
    write_outputs(f.out, outputs);
}

// ---------------------------------------------------------------- stats

json statistic(const std::function<double()> &compute) {
    try {
        return {{"value", compute()}, {"reason", nullptr}};
    } catch (const UndefinedStatistic &e) {
        return {{"value", nullptr}, {"reason", e.what()}};
    }
}

int cmd_stats(const Flags &f, std::ostream &out) {
    json cfg = load_base_config(f);
    reject_unknown(cfg, {"edges", "meta"});
    if (f.has("edges"))
        cfg["edges"] = f.edges;
    if (f.has("meta"))
        cfg["meta"] = f.meta;
    auto in = load_graph_inputs(cfg, false);
    const Graph &g = in.graph;

    json report;
    report["node_count"] = g.node_count();
    report["edge_count"] = g.edge_count();
    auto ds = degree_summary(g);
    report["degree"] = {{"min", ds.min},
                        {"max", ds.max},
                        {"mean", ds.mean},
                        {"median", ds.median},
                        {"isolated", ds.isolated}};
    report["load"] = {{"lines", in.summary.lines},
                      {"self_loops_dropped", in.summary.self_loops},
                      {"duplicates_dropped", in.summary.duplicates}};
    report["degree_assortativity"] = statistic([&] { return degree_assortativity(g); });
    json no_meta = {{"value", nullptr}, {"reason", "no metadata supplied"}};
    if (in.has_meta) {
        auto pop = in.meta.popularity();
        report["popularity_homophily"] = statistic([&] { return attribute_assortativity(g, pop); });
        report["degree_popularity_correlation"] =
            statistic([&] { return degree_popularity_correlation(g, in.meta); });
        json overlap;
        try {
            auto o = genre_edge_overlap(g, in.meta);
            overlap = {{"value", o.fraction},
                       {"reason", nullptr},
                       {"eligible_edges", o.eligible_edges},
                       {"overlapping_edges", o.overlapping_edges}};
        } catch (const UndefinedStatistic &e) {
            overlap = {{"value", nullptr}, {"reason", e.what()}};
        }
        report["genre_edge_overlap"] = overlap;
        json groups = json::object();
        for (const auto &label : in.meta.group_labels())
            if (!label.empty())
                groups[label] = group_mean_degree(g, in.meta, label);
        report["group_mean_degree"] = groups;
    } else {
        report["popularity_homophily"] = no_meta;
        report["degree_popularity_correlation"] = no_meta;
        report["genre_edge_overlap"] = no_meta;
        report["group_mean_degree"] = json::object();
    }

    std::ostringstream txt;
    auto show = [&](const char *label, const json &s) {
        txt << std::left << std::setw(32) << label;
        if (s["value"].is_null())
            txt << "undefined (" << s["reason"].get<std::string>() << ")\n";
        else
            txt << format_double(s["value"].get<double>()) << "\n";
    };
    txt << std::left << std::setw(32) << "nodes" << g.node_count() << "\n";
    txt << std::left << std::setw(32) << "edges" << g.edge_count() << "\n";
    txt << std::left << std::setw(32) << "degree min/median/mean/max" << ds.min << " / "
        << format_double(ds.median) << " / " << format_double(ds.mean) << " / " << ds.max << "\n";
    txt << std::left << std::setw(32) << "isolated nodes" << ds.isolated << "\n";
    show("degree assortativity", report["degree_assortativity"]);
    show("popularity homophily", report["popularity_homophily"]);
    show("degree-popularity correlation", report["degree_popularity_correlation"]);
    show("genre edge overlap", report["genre_edge_overlap"]);
    for (const auto &[label, v] : report["group_mean_degree"].items())
        txt << std::left << std::setw(32) << ("mean degree [" + label + "]")
            << format_double(v.get<double>()) << "\n";

    out << txt.str();
    finish(f, "stats", cfg, in.files, {{"stats.json", dump(report)}, {"stats.txt", txt.str()}}, {});
    return kOk;
}

// ---------------------------------------------------------------- generate

SGCConfig resolve_sgc(json &cfg, const Flags &f) {
    json sgc = cfg.contains("sgc") ? cfg["sgc"] : json::object();
    if (f.has("seed"))
        sgc["seed"] = f.seed;
    else if (cfg.contains("seed") && !sgc.contains("seed"))
        sgc["seed"] = cfg["seed"];
    SGCConfig c = sgc_config_from_json(sgc);
    cfg.erase("seed");
    cfg["sgc"] = to_json(c);
    return c;
}

int cmd_generate(const Flags &f, std::ostream &out) {
    json cfg = load_base_config(f);
    reject_unknown(cfg, {"sgc", "seed"});
    SGCConfig c = resolve_sgc(cfg, f);
    auto sg = generate_sgc(c);
    std::ostringstream edges, nodes;
    write_edge_list(edges, sg.graph, sg.meta);
    write_node_meta(nodes, sg.meta);
    out << "generated " << sg.graph.node_count() << " nodes, " << sg.graph.edge_count()
        << " edges\n";
    for (const auto &w : sg.warnings)
        out << "warning: " << w << "\n";
    finish(f, "generate", cfg, {},
           {{"edges.tsv", edges.str()}, {"nodes.csv", nodes.str()}}, sg.warnings);
    return kOk;
}

// ---------------------------------------------------------------- sweep

SweepOptions resolve_sweep_options(json &cfg, const Flags &f, std::size_t default_k) {
    if (f.has("grid"))
        cfg["grid"] = f.grid;
    if (!cfg.contains("grid"))
        cfg["grid"] = "0..100:1";
    if (f.has("measures"))
        cfg["measures"] = split_list(f.measures);
    if (!cfg.contains("measures"))
        cfg["measures"] = {"eigenvector"};
    if (f.has("k_eigs"))
        cfg["k_eigs"] = f.k_eigs;
    if (!cfg.contains("k_eigs"))
        cfg["k_eigs"] = default_k;
    if (!cfg.contains("damping"))
        cfg["damping"] = kDefaultDamping;

    SweepOptions o;
    o.grid = parse_grid(get<std::string>(cfg, "grid"));
    o.measures = parse_measure_list(get<std::vector<std::string>>(cfg, "measures"));
    std::vector<std::string> canonical;
    for (Measure m : o.measures)
        canonical.emplace_back(to_string(m));
    cfg["measures"] = canonical;
    o.k_eigs = get<std::size_t>(cfg, "k_eigs");
    if (o.k_eigs < 1)
        throw UsageError("--k-eigs must be at least 1");
    o.damping = get<double>(cfg, "damping");
    o.threads = resolve_threads(f.threads);
    return o;
}

int cmd_sweep(const Flags &f, std::ostream &out) {
    json cfg = load_base_config(f);
    reject_unknown(cfg, {"edges", "meta", "grid", "measures", "k_eigs", "damping", "groups",
                         "remove_band"});
    if (f.has("edges"))
        cfg["edges"] = f.edges;
    if (f.has("meta"))
        cfg["meta"] = f.meta;
    if (f.has("groups"))
        cfg["groups"] = split_list(f.groups);
    if (f.has("remove_band")) {
        auto b = parse_numbers(f.remove_band, "remove-band");
        if (b.size() != 2)
            throw UsageError("--remove-band takes lo,hi");
        cfg["remove_band"] = b;
    }
    SweepOptions o = resolve_sweep_options(cfg, f, 3);
    auto in = load_graph_inputs(cfg, true);

    std::vector<std::string> groups;
    if (cfg.contains("groups")) {
        groups = get<std::vector<std::string>>(cfg, "groups");
    } else {
        for (const auto &label : in.meta.group_labels())
            if (!label.empty())
                groups.push_back(label);
        cfg["groups"] = groups;
    }
    if (groups.empty())
        throw ValidationError("metadata carries no group labels; pass --groups");
    auto known = in.meta.group_labels();
    for (const auto &gname : groups)
        if (std::find(known.begin(), known.end(), gname) == known.end())
            throw ValidationError("group '" + gname + "' does not occur in the metadata");

    SweepResult r;
    if (cfg.contains("remove_band") && !cfg["remove_band"].is_null()) {
        auto band = get<std::vector<double>>(cfg, "remove_band");
        if (band.size() != 2)
            throw ValidationError("remove_band must be [lo, hi]");
        r = removal_band_sweep(in.graph, in.meta, groups, band[0], band[1], o);
    } else {
        cfg["remove_band"] = nullptr;
        r = threshold_sweep(in.graph, in.meta, groups, o);
    }

    std::ostringstream csv;
    write_sweep_csv(csv, r);
    std::vector<std::string> warnings;
    std::size_t empty = 0;
    for (const auto &rec : r.records) {
        empty += rec.empty;
        for (const auto &d : rec.diagnostics)
            warnings.push_back("t=" + std::to_string(rec.threshold) + ": " + d);
    }
    out << "swept " << r.records.size() << " thresholds (" << empty << " empty) over "
        << groups.size() << " groups\n";
    finish(f, "sweep", cfg, in.files, {{"sweep.csv", csv.str()}, {"sweep.json", dump(to_json(r))}},
           warnings);
    return kOk;
}

// ---------------------------------------------------------------- analyze

SweepResult load_sweep_file(const std::string &path, std::string &digest) {
    auto text = read_file(path, "sweep");
    digest = sha256_hex(text);
    if (fs::path(path).extension() == ".json") {
        try {
            return sweep_from_json(json::parse(text));
        } catch (const json::parse_error &e) {
            throw ParseError(std::string("sweep JSON: ") + e.what());
        }
    }
    std::istringstream is(text);
    return read_sweep_csv(is);
}

ExperimentOptions experiment_options(json &cfg, const Flags &f) {
    ExperimentOptions eo;
    eo.sweep = resolve_sweep_options(cfg, f, 1);
    eo.sweep.threads = 1;
    eo.threads = resolve_threads(f.threads);
    if (f.has("group_a") || f.has("group_b"))
        throw UsageError("batch modes compare the SGC leader and celebrity groups; "
                         "--group-a/--group-b do not apply");
    return eo;
}

std::size_t resolve_reps(json &cfg, const Flags &f, std::size_t fallback) {
    if (f.has("reps"))
        cfg["reps"] = f.reps;
    if (!cfg.contains("reps"))
        cfg["reps"] = fallback;
    auto reps = get<std::size_t>(cfg, "reps");
    if (reps < 1)
        throw UsageError("--reps must be at least 1");
    return reps;
}

std::vector<double> resolve_list(json &cfg, const Flags &f, const char *key,
                                 const std::string &flag_value, std::vector<double> fallback) {
    if (f.has(key))
        cfg[key] = parse_numbers(flag_value, key);
    if (!cfg.contains(key))
        cfg[key] = fallback;
    return get<std::vector<double>>(cfg, key);
}

int cmd_analyze(const Flags &f, std::ostream &out) {
    json cfg = load_base_config(f);
    if (f.has("mode"))
        cfg["mode"] = f.mode;
    if (!cfg.contains("mode"))
        throw UsageError("--mode is required (transition, beta-grid, degree-ratio)");
    const auto mode = get<std::string>(cfg, "mode");

    if (mode == "transition") {
        reject_unknown(cfg, {"mode", "sweep", "group_a", "group_b", "field"});
        if (f.has("sweep"))
            cfg["sweep"] = f.sweep;
        if (!cfg.contains("sweep"))
            throw UsageError("--sweep is required in transition mode");
        if (f.has("group_a"))
            cfg["group_a"] = f.group_a;
        if (f.has("group_b"))
            cfg["group_b"] = f.group_b;
        if (f.has("field"))
            cfg["field"] = f.field;
        if (!cfg.contains("field"))
            cfg["field"] = "mean_eigencentrality";
        const auto path = get<std::string>(cfg, "sweep");
        std::string digest;
        auto sweep = load_sweep_file(path, digest);
        if (!cfg.contains("group_a"))
            cfg["group_a"] = kLeaderGroup;
        if (!cfg.contains("group_b"))
            cfg["group_b"] = kCelebrityGroup;
        const auto ga = get<std::string>(cfg, "group_a"), gb = get<std::string>(cfg, "group_b");
        for (const auto &name : {ga, gb})
            if (std::find(sweep.groups.begin(), sweep.groups.end(), name) == sweep.groups.end())
                throw ValidationError("group '" + name + "' is not in the sweep");
        auto report = transition_report(sweep, ga, gb, get<std::string>(cfg, "field"));
        if (report.transition_threshold)
            out << "transition at t* = " << *report.transition_threshold << "\n";
        else
            out << "no persistent transition\n";
        finish(f, "analyze", cfg, {{"sweep", {path, digest}}},
               {{"transition.json", dump(to_json(report))}}, report.diagnostics);
        return kOk;
    }

    if (mode == "beta-grid" || mode == "degree-ratio") {
        const bool beta = mode == "beta-grid";
        reject_unknown(cfg, {"mode", "sgc", "seed", "grid", "measures", "k_eigs", "damping", "reps",
                             beta ? "alphas" : "ratios", beta ? "betas" : "ratios"});
        auto eo = experiment_options(cfg, f);
        SGCConfig base = resolve_sgc(cfg, f);
        std::vector<Output> outputs;
        std::vector<std::string> warnings;
        if (beta) {
            auto alphas = resolve_list(cfg, f, "alphas", f.alphas, {0.5, 1, 2, 4});
            auto betas = resolve_list(cfg, f, "betas", f.betas, {0.5, 1, 2, 4});
            auto reps = resolve_reps(cfg, f, 10);
            base.leader_target = LeaderTarget::beta;
            cfg["sgc"] = to_json(base);
            base.validate();
            auto cells = beta_grid_experiment(base, alphas, betas, reps, eo);
            std::ostringstream csv;
            write_beta_grid_csv(csv, cells);
            outputs = {{"beta_grid.csv", csv.str()}, {"beta_grid.json", dump(beta_grid_summary(cells))}};
            for (const auto &c : cells)
                for (const auto &r : c.reps)
                    for (const auto &w : r.warnings)
                        warnings.push_back(w);
            out << "beta grid: " << cells.size() << " cells x " << reps << " reps\n";
        } else {
            auto ratios = resolve_list(cfg, f, "ratios", f.ratios, {2, 5, 10, 20});
            auto reps = resolve_reps(cfg, f, 5);
            base.validate(false);
            auto rows = degree_ratio_experiment(base, ratios, reps, eo);
            std::ostringstream csv;
            write_degree_ratio_csv(csv, rows);
            auto summary = degree_ratio_summary(rows);
            outputs = {{"degree_ratio.csv", csv.str()}, {"degree_ratio.json", dump(summary)}};
            for (const auto &r : rows)
                if (!r.diagnostic.empty())
                    warnings.push_back(r.diagnostic);
            out << "degree ratio: " << rows.size() << " rows, rank correlation "
                << summary["rank_correlation"].dump() << "\n";
        }
        finish(f, "analyze", cfg, {}, std::move(outputs), warnings);
        return kOk;
    }
    throw UsageError("unknown mode '" + mode + "' (expected transition, beta-grid, degree-ratio)");
}

} // namespace

std::vector<int> parse_grid(const std::string &spec) {
    auto dots = spec.find("..");
    if (dots == std::string::npos)
        throw UsageError("grid '" + spec + "' is not of the form lo..hi:step");
    auto colon = spec.find(':', dots);
    auto num = [&](std::string_view s) {
        int v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
            throw UsageError("grid '" + spec + "': '" + std::string(s) + "' is not an integer");
        return v;
    };
    std::string_view sv(spec);
    int lo = num(sv.substr(0, dots));
    int hi = num(colon == std::string::npos ? sv.substr(dots + 2)
                                            : sv.substr(dots + 2, colon - dots - 2));
    int step = colon == std::string::npos ? 1 : num(sv.substr(colon + 1));
    if (lo < 0 || hi > 100 || lo > hi || step < 1)
        throw UsageError("grid '" + spec + "' needs 0 <= lo <= hi <= 100 and step >= 1");
    std::vector<int> grid;
    for (int t = lo; t <= hi; t += step)
        grid.push_back(t);
    return grid;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Popularity-thresholded centrality analysis", "popcent"};
    app.set_version_flag("--version", std::string(POPCENT_VERSION));
    app.require_subcommand(1);
    Flags f;

    auto *stats = app.add_subcommand("stats", "network statistics for an edge list");
    add_common(stats, f);
    add_inputs(stats, f);

    auto *generate = app.add_subcommand("generate", "sample a social group centrality graph");
    add_common(generate, f);
    f.add("seed", generate->add_option("--seed", f.seed, "random seed"));

    auto *sweep = app.add_subcommand("sweep", "centrality and spectrum across thresholds");
    add_common(sweep, f);
    add_inputs(sweep, f);
    add_sweep_flags(sweep, f);
    f.add("groups", sweep->add_option("--groups", f.groups, "comma-separated group labels"));
    f.add("remove_band", sweep->add_option("--remove-band", f.remove_band, "drop popularity band lo,hi first"));

    auto *analyze = app.add_subcommand("analyze", "transition report or batch experiment");
    add_common(analyze, f);
    add_sweep_flags(analyze, f);
    f.add("mode", analyze->add_option("--mode", f.mode, "transition | beta-grid | degree-ratio"));
    f.add("sweep", analyze->add_option("--sweep", f.sweep, "sweep.csv or sweep.json"));
    f.add("group_a", analyze->add_option("--group-a", f.group_a, "incumbent group"));
    f.add("group_b", analyze->add_option("--group-b", f.group_b, "challenger group"));
    f.add("field", analyze->add_option("--field", f.field, "group field to compare"));
    f.add("seed", analyze->add_option("--seed", f.seed, "master seed for batch modes"));
    f.add("reps", analyze->add_option("--reps", f.reps, "replicates per cell"));
    f.add("alphas", analyze->add_option("--alphas", f.alphas, "beta-grid alpha values"));
    f.add("betas", analyze->add_option("--betas", f.betas, "beta-grid beta values"));
    f.add("ratios", analyze->add_option("--ratios", f.ratios, "degree-ratio targets"));

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError &e) {
        std::ostringstream o, e2;
        int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (stats->parsed())
            return cmd_stats(f, out);
        if (generate->parsed())
            return cmd_generate(f, out);
        if (sweep->parsed())
            return cmd_sweep(f, out);
        return cmd_analyze(f, out);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kData;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << "\n";
        return kData;
    } catch (const SchemaError &e) {
        err << "error: " << e.what() << "\n";
        return kData;
    } catch (const ArgumentError &e) {
        err << "error: " << e.what() << "\n";
        return kData;
    } catch (const SizeLimitError &e) {
        err << "error: " << e.what() << "\n";
        return kData;
    } catch (const UndefinedStatistic &e) {
        err << "error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

} // namespace popcent::cli
