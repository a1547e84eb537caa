#include <popcent/io.hpp>

#include <popcent/error.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace popcent {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

namespace {

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

double parse_double(std::string_view s, std::size_t line) {
    if (s == "nan")
        return std::nan("");
    if (s == "inf")
        return INFINITY;
    if (s == "-inf")
        return -INFINITY;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("not a number: '" + std::string(s) + "'", line);
    return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    if (s.empty())
        return out;
    for (;;) {
        auto p = s.find(sep);
        out.emplace_back(s.substr(0, p));
        if (p == std::string_view::npos)
            break;
        s.remove_prefix(p + 1);
    }
    return out;
}

} // namespace

void write_edge_list(std::ostream &out, const Graph &g, const NodeMetaTable &meta) {
    if (meta.size() != g.node_count())
        throw ArgumentError("metadata does not cover every node");
    for (const auto &[u, v] : g.edges())
        out << meta[u].external_id << '\t' << meta[v].external_id << '\n';
}

void write_node_meta(std::ostream &out, const NodeMetaTable &meta) {
    out << "id,name,popularity,genres,group\n";
    char pop[32];
    for (const auto &r : meta.rows()) {
        std::snprintf(pop, sizeof pop, "%.6f", r.popularity);
        std::string genres;
        for (std::size_t i = 0; i < r.genres.size(); ++i)
            genres += (i ? "|" : "") + r.genres[i];
        out << csv_field(r.external_id) << ',' << csv_field(r.name) << ',' << pop << ','
            << csv_field(genres) << ',' << csv_field(r.group) << '\n';
    }
}

json to_json(const SGCConfig &c) {
    json j{{"masses_count", c.masses_count},
           {"ba_m", c.ba_m},
           {"popularity_mean", c.popularity_mean},
           {"popularity_cap", c.popularity_cap},
           {"k", c.k},
           {"n_leaders", c.n_leaders},
           {"n_celebrities", c.n_celebrities},
           {"p_leader", c.p_leader},
           {"p_celeb", c.p_celeb},
           {"leader_target",
            c.leader_target == LeaderTarget::beta ? "beta" : "uniform_below_k"},
           {"beta_alpha", c.beta_alpha},
           {"beta_beta", c.beta_beta},
           {"seed", c.seed}};
    j["beta_expected_degree"] =
        c.beta_expected_degree ? json(*c.beta_expected_degree) : json(nullptr);
    return j;
}

SGCConfig sgc_config_from_json(const json &j, SGCConfig c) {
    if (!j.is_object())
        throw ParseError("SGC config must be an object");
    try {
        for (const auto &[key, v] : j.items()) {
            if (key == "masses_count")
                c.masses_count = v.get<std::size_t>();
            else if (key == "ba_m")
                c.ba_m = v.get<std::size_t>();
            else if (key == "popularity_mean")
                c.popularity_mean = v.get<double>();
            else if (key == "popularity_cap")
                c.popularity_cap = v.get<double>();
            else if (key == "k")
                c.k = v.get<double>();
            else if (key == "n_leaders")
                c.n_leaders = v.get<std::size_t>();
            else if (key == "n_celebrities")
                c.n_celebrities = v.get<std::size_t>();
            else if (key == "p_leader")
                c.p_leader = v.get<double>();
            else if (key == "p_celeb")
                c.p_celeb = v.get<double>();
            else if (key == "leader_target") {
                auto s = v.get<std::string>();
                if (s == "beta")
                    c.leader_target = LeaderTarget::beta;
                else if (s == "uniform_below_k" || s == "uniform")
                    c.leader_target = LeaderTarget::uniform_below_k;
                else
                    throw ParseError("unknown leader_target '" + s + "'");
            } else if (key == "beta_alpha")
                c.beta_alpha = v.get<double>();
            else if (key == "beta_beta")
                c.beta_beta = v.get<double>();
            else if (key == "beta_expected_degree")
                c.beta_expected_degree =
                    v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
            else if (key == "seed")
                c.seed = v.get<std::uint64_t>();
            else
                throw ParseError("unknown SGC config key '" + key + "'");
        }
    } catch (const json::exception &e) {
        throw ParseError(std::string("SGC config: ") + e.what());
    }
    return c;
}

void check_schema_version(const std::string &schema, const std::string &version) {
    if (schema != kSweepSchema)
        throw SchemaError("expected schema '" + std::string(kSweepSchema) + "', found '" +
                          schema + "'");
    auto major = version.substr(0, version.find('.'));
    std::string supported(kSweepSchemaVersion);
    if (major != supported.substr(0, supported.find('.')))
        throw SchemaError("sweep schema version " + version +
                          " is not readable by this build (supports " + supported + ")");
}

namespace {

std::vector<std::string> measure_names(const std::vector<Measure> &ms) {
    std::vector<std::string> out;
    for (Measure m : ms)
        out.emplace_back(to_string(m));
    return out;
}

std::vector<Measure> parse_measures(const std::vector<std::string> &names) {
    std::vector<Measure> out;
    for (const auto &n : names) {
        auto m = parse_measure(n);
        if (!m)
            throw ParseError("unknown measure '" + n + "'");
        out.push_back(*m);
    }
    return out;
}

} // namespace

json to_json(const SweepResult &r) {
    json j;
    j["schema"] = kSweepSchema;
    j["version"] = kSweepSchemaVersion;
    j["groups"] = r.groups;
    j["measures"] = measure_names(r.measures);
    j["k_eigs"] = r.k_eigs;
    j["removed_band"] = r.removed_band
                            ? json::array({r.removed_band->first, r.removed_band->second})
                            : json(nullptr);
    json recs = json::array();
    for (const auto &rec : r.records) {
        json jr{{"threshold", rec.threshold},
                {"node_count", rec.node_count},
                {"edge_count", rec.edge_count},
                {"lcc_nodes", rec.lcc_nodes},
                {"lcc_edges", rec.lcc_edges},
                {"empty", rec.empty},
                {"eigenvalues", rec.eigenvalues},
                {"normalized_eigenvalues", rec.normalized_eigenvalues},
                {"spectrum_converged", rec.spectrum_converged},
                {"measure_converged", rec.measure_converged},
                {"diagnostics", rec.diagnostics}};
        json groups = json::object();
        for (const auto &g : rec.groups)
            groups[g.group] = g.fields;
        jr["groups"] = std::move(groups);
        recs.push_back(std::move(jr));
    }
    j["records"] = std::move(recs);
    return j;
}

SweepResult sweep_from_json(const json &j) {
    try {
        check_schema_version(j.at("schema").get<std::string>(), j.at("version").get<std::string>());
        SweepResult r;
        r.groups = j.at("groups").get<std::vector<std::string>>();
        r.measures = parse_measures(j.at("measures").get<std::vector<std::string>>());
        r.k_eigs = j.at("k_eigs").get<std::size_t>();
        if (!j.at("removed_band").is_null())
            r.removed_band = std::make_pair(j["removed_band"][0].get<double>(),
                                            j["removed_band"][1].get<double>());
        for (const auto &jr : j.at("records")) {
            ThresholdRecord rec;
            rec.threshold = jr.at("threshold").get<int>();
            rec.node_count = jr.at("node_count").get<std::size_t>();
            rec.edge_count = jr.at("edge_count").get<std::size_t>();
            rec.lcc_nodes = jr.at("lcc_nodes").get<std::size_t>();
            rec.lcc_edges = jr.at("lcc_edges").get<std::size_t>();
            rec.empty = jr.at("empty").get<bool>();
            rec.eigenvalues = jr.at("eigenvalues").get<std::vector<double>>();
            rec.normalized_eigenvalues = jr.at("normalized_eigenvalues").get<std::vector<double>>();
            rec.spectrum_converged = jr.at("spectrum_converged").get<bool>();
            rec.measure_converged = jr.at("measure_converged").get<std::map<std::string, bool>>();
            rec.diagnostics = jr.at("diagnostics").get<std::vector<std::string>>();
            for (const auto &name : r.groups)
                rec.groups.push_back(
                    {name, jr.at("groups").at(name).get<std::map<std::string, double>>()});
            r.records.push_back(std::move(rec));
        }
        return r;
    } catch (const json::exception &e) {
        throw ParseError(std::string("sweep JSON: ") + e.what());
    }
}

void write_sweep_csv(std::ostream &out, const SweepResult &r) {
    out << "# schema=" << kSweepSchema << " version=" << kSweepSchemaVersion << '\n';
    auto join = [](const std::vector<std::string> &v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "|" : "") + v[i];
        return s;
    };
    out << "# groups=" << join(r.groups) << '\n';
    out << "# measures=" << join(measure_names(r.measures)) << '\n';
    out << "# k_eigs=" << r.k_eigs << '\n';
    if (r.removed_band)
        out << "# removed_band=" << format_double(r.removed_band->first) << '|'
            << format_double(r.removed_band->second) << '\n';
    out << "threshold,group,field,value\n";
    for (const auto &rec : r.records) {
        auto row = [&](const std::string &group, const std::string &field, double v) {
            out << rec.threshold << ',' << csv_field(group) << ',' << field << ','
                << format_double(v) << '\n';
        };
        row("_graph", "node_count", static_cast<double>(rec.node_count));
        row("_graph", "edge_count", static_cast<double>(rec.edge_count));
        row("_graph", "lcc_nodes", static_cast<double>(rec.lcc_nodes));
        row("_graph", "lcc_edges", static_cast<double>(rec.lcc_edges));
        row("_graph", "empty", rec.empty ? 1.0 : 0.0);
        row("_graph", "spectrum_converged", rec.spectrum_converged ? 1.0 : 0.0);
        for (const auto &[m, ok] : rec.measure_converged)
            row("_graph", "converged_" + m, ok ? 1.0 : 0.0);
        for (std::size_t i = 0; i < rec.eigenvalues.size(); ++i)
            row("_graph", "lambda_" + std::to_string(i + 1), rec.eigenvalues[i]);
        for (std::size_t i = 0; i < rec.normalized_eigenvalues.size(); ++i)
            row("_graph", "lambda_norm_" + std::to_string(i + 1), rec.normalized_eigenvalues[i]);
        for (const auto &g : rec.groups)
            for (const auto &[field, v] : g.fields)
                row(g.group, field, v);
    }
}

SweepResult read_sweep_csv(std::istream &in) {
    SweepResult r;
    std::string line;
    std::size_t lineno = 0;
    bool have_schema = false;
    std::map<int, std::size_t> slot;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::istringstream is(line.substr(1));
            std::string kv;
            std::string schema, version;
            while (is >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    continue;
                auto key = kv.substr(0, eq), val = kv.substr(eq + 1);
                if (key == "schema")
                    schema = val;
                else if (key == "version")
                    version = val;
                else if (key == "groups")
                    r.groups = split(val, '|');
                else if (key == "measures")
                    r.measures = parse_measures(split(val, '|'));
                else if (key == "k_eigs")
                    r.k_eigs = static_cast<std::size_t>(parse_double(val, lineno));
                else if (key == "removed_band") {
                    auto b = split(val, '|');
                    if (b.size() != 2)
                        throw ParseError("malformed removed_band", lineno);
                    r.removed_band = std::make_pair(parse_double(b[0], lineno),
                                                    parse_double(b[1], lineno));
                }
            }
            if (!schema.empty()) {
                check_schema_version(schema, version);
                have_schema = true;
            }
            continue;
        }
        if (line == "threshold,group,field,value")
            continue;
        if (!have_schema)
            throw SchemaError("sweep CSV lacks a '# schema=... version=...' header");
        auto f = split(line, ',');
        if (f.size() != 4)
            throw ParseError("expected threshold,group,field,value", lineno);
        int t = static_cast<int>(parse_double(f[0], lineno));
        double v = parse_double(f[3], lineno);
        auto [it, fresh] = slot.emplace(t, r.records.size());
        if (fresh) {
            ThresholdRecord rec;
            rec.threshold = t;
            for (const auto &g : r.groups)
                rec.groups.push_back({g, {}});
            r.records.push_back(std::move(rec));
        }
        auto &rec = r.records[it->second];
        const auto &field = f[2];
        if (f[1] == "_graph") {
            auto as_size = [&] { return static_cast<std::size_t>(v); };
            if (field == "node_count")
                rec.node_count = as_size();
            else if (field == "edge_count")
                rec.edge_count = as_size();
            else if (field == "lcc_nodes")
                rec.lcc_nodes = as_size();
            else if (field == "lcc_edges")
                rec.lcc_edges = as_size();
            else if (field == "empty")
                rec.empty = v != 0.0;
            else if (field == "spectrum_converged")
                rec.spectrum_converged = v != 0.0;
            else if (field.rfind("converged_", 0) == 0)
                rec.measure_converged[field.substr(10)] = v != 0.0;
            else if (field.rfind("lambda_norm_", 0) == 0)
                rec.normalized_eigenvalues.push_back(v);
            else if (field.rfind("lambda_", 0) == 0)
                rec.eigenvalues.push_back(v);
            else
                throw ParseError("unknown graph field '" + field + "'", lineno);
        } else {
            bool found = false;
            for (auto &g : rec.groups)
                if (g.group == f[1]) {
                    g.fields[field] = v;
                    found = true;
                }
            if (!found)
                throw ParseError("group '" + f[1] + "' not declared in header", lineno);
        }
    }
    if (!have_schema)
        throw SchemaError("sweep CSV lacks a '# schema=... version=...' header");
    return r;
}

json to_json(const LogisticFit &f) {
    return {{"L", f.L},
            {"g", f.g},
            {"t0", f.t0},
            {"residual", f.residual},
            {"converged", f.converged},
            {"evaluations", f.evaluations}};
}

namespace {

template <class T> json opt(const std::optional<T> &v) { return v ? json(*v) : json(nullptr); }

} // namespace

json to_json(const TransitionReport &r) {
    return {{"group_a", r.group_a},
            {"group_b", r.group_b},
            {"field", r.field},
            {"transition_threshold", opt(r.transition_threshold)},
            {"first_crossing", opt(r.first_crossing)},
            {"persistent", r.persistent},
            {"gap_at_start", opt(r.gap_at_start)},
            {"gap_at_transition", opt(r.gap_at_transition)},
            {"degree_changeover_threshold", opt(r.degree_changeover_threshold)},
            {"fit_a", to_json(r.fit_a)},
            {"fit_b", to_json(r.fit_b)},
            {"curvature", opt(r.curvature)},
            {"diagnostics", r.diagnostics}};
}

void write_beta_grid_csv(std::ostream &out, const std::vector<BetaGridCell> &cells) {
    out << "alpha,beta,rep,seed,transition,curvature,g_a,g_b\n";
    for (const auto &c : cells)
        for (const auto &r : c.reps)
            out << format_double(c.alpha) << ',' << format_double(c.beta) << ',' << r.rep << ','
                << r.seed << ',' << (r.transition ? std::to_string(*r.transition) : "") << ','
                << format_double(r.curvature) << ',' << format_double(r.g_a) << ','
                << format_double(r.g_b) << '\n';
}

json beta_grid_summary(const std::vector<BetaGridCell> &cells) {
    json arr = json::array();
    for (const auto &c : cells) {
        std::size_t with_transition = 0;
        std::vector<std::string> warnings;
        for (const auto &r : c.reps) {
            with_transition += r.transition.has_value();
            warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
        }
        arr.push_back({{"alpha", c.alpha},
                       {"beta", c.beta},
                       {"reps", c.reps.size()},
                       {"reps_with_transition", with_transition},
                       {"mean_curvature", c.mean_curvature},
                       {"warnings", warnings}});
    }
    return {{"experiment", "beta-grid"}, {"cells", arr}};
}

void write_degree_ratio_csv(std::ostream &out, const std::vector<DegreeRatioRow> &rows) {
    out << "ratio,rep,seed,p_leader,changeover,transition,skipped\n";
    for (const auto &r : rows)
        out << format_double(r.ratio) << ',' << r.rep << ',' << r.seed << ','
            << format_double(r.p_leader) << ','
            << (r.changeover ? std::to_string(*r.changeover) : "") << ','
            << (r.transition ? std::to_string(*r.transition) : "") << ',' << (r.skipped ? 1 : 0)
            << '\n';
}

json degree_ratio_summary(const std::vector<DegreeRatioRow> &rows) {
    std::vector<double> x, y;
    json diag = json::array();
    for (const auto &r : rows) {
        if (r.changeover && r.transition) {
            x.push_back(*r.changeover);
            y.push_back(*r.transition);
        }
        if (!r.diagnostic.empty())
            diag.push_back(r.diagnostic);
    }
    json j{{"experiment", "degree-ratio"}, {"paired_rows", x.size()}, {"diagnostics", diag}};
    try {
        j["rank_correlation"] = rank_correlation(x, y);
    } catch (const std::exception &) {
        j["rank_correlation"] = nullptr;
    }
    return j;
}

} // namespace popcent
