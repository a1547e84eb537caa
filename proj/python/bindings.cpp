#include <popcent/analysis.hpp>
#include <popcent/centrality.hpp>
#include <popcent/error.hpp>
#include <popcent/graph.hpp>
#include <popcent/io.hpp>
#include <popcent/sgc.hpp>
#include <popcent/spectral.hpp>
#include <popcent/stats.hpp>
#include <popcent/sweep.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

namespace py = pybind11;
using namespace popcent;

namespace {

std::ifstream open(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open " + path);
    return in;
}

AnnotatedGraph load(const std::string &edges, const std::optional<std::string> &meta) {
    auto in = open(edges);
    auto loaded = load_edge_list(in);
    if (!meta) {
        std::vector<NodeMeta> rows(loaded.ids.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            rows[i].external_id = rows[i].name = loaded.ids[i];
        return attach_meta(loaded, rows);
    }
    auto min = open(*meta);
    return attach_meta(loaded, load_node_meta(min));
}

Measure measure(const std::string &name) {
    auto m = parse_measure(name);
    if (!m)
        throw ArgumentError("unknown measure '" + name + "'");
    return *m;
}

py::tuple pair(const EigenPair &p) {
    return py::make_tuple(p.value, p.vector, p.converged);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Centrality under popularity thresholding";
    m.attr("__version__") = POPCENT_VERSION;

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<UndefinedStatistic>(m, "UndefinedStatistic", PyExc_ArithmeticError);
    py::register_exception<SizeLimitError>(m, "SizeLimitError", PyExc_ValueError);
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

    py::class_<Graph>(m, "Graph")
        .def(py::init<>())
        .def_static("from_edges",
                    [](std::size_t n, const std::vector<Edge> &e) { return Graph::from_edges(n, e); },
                    py::arg("node_count"), py::arg("edges"))
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("degree", &Graph::degree)
        .def("neighbors", [](const Graph &g, NodeId v) {
            if (v >= g.node_count())
                throw py::index_error("node out of range");
            auto nb = g.neighbors(v);
            return std::vector<NodeId>(nb.begin(), nb.end());
        })
        .def("edges", &Graph::edges)
        .def("__eq__", [](const Graph &a, const Graph &b) { return a == b; })
        .def("__repr__", [](const Graph &g) {
            return "<Graph nodes=" + std::to_string(g.node_count()) +
                   " edges=" + std::to_string(g.edge_count()) + ">";
        });

    py::class_<NodeMetaTable>(m, "NodeMeta")
        .def("__len__", &NodeMetaTable::size)
        .def_property_readonly("ids", [](const NodeMetaTable &t) {
            std::vector<std::string> out;
            for (const auto &r : t.rows())
                out.push_back(r.external_id);
            return out;
        })
        .def_property_readonly("groups", [](const NodeMetaTable &t) {
            std::vector<std::string> out;
            for (const auto &r : t.rows())
                out.push_back(r.group);
            return out;
        })
        .def_property_readonly("popularity", &NodeMetaTable::popularity)
        .def("group_labels", &NodeMetaTable::group_labels);

    m.def("load", [](const std::string &edges, const std::optional<std::string> &meta) {
            auto ag = load(edges, meta);
            return py::make_tuple(ag.graph, ag.meta);
        },
        py::arg("edges"), py::arg("meta") = py::none(),
        "Edge list (and optional metadata CSV) -> (Graph, NodeMeta).");

    // ---- SGC
    py::class_<SGCConfig>(m, "SGCConfig")
        .def(py::init<>())
        .def_readwrite("masses_count", &SGCConfig::masses_count)
        .def_readwrite("ba_m", &SGCConfig::ba_m)
        .def_readwrite("popularity_mean", &SGCConfig::popularity_mean)
        .def_readwrite("popularity_cap", &SGCConfig::popularity_cap)
        .def_readwrite("k", &SGCConfig::k)
        .def_readwrite("n_leaders", &SGCConfig::n_leaders)
        .def_readwrite("n_celebrities", &SGCConfig::n_celebrities)
        .def_readwrite("p_leader", &SGCConfig::p_leader)
        .def_readwrite("p_celeb", &SGCConfig::p_celeb)
        .def_property("leader_target",
            [](const SGCConfig &c) { return c.leader_target == LeaderTarget::beta ? "beta" : "uniform_below_k"; },
            [](SGCConfig &c, const std::string &s) {
                if (s == "beta")
                    c.leader_target = LeaderTarget::beta;
                else if (s == "uniform_below_k")
                    c.leader_target = LeaderTarget::uniform_below_k;
                else
                    throw ArgumentError("leader_target must be 'beta' or 'uniform_below_k'");
            })
        .def_readwrite("beta_alpha", &SGCConfig::beta_alpha)
        .def_readwrite("beta_beta", &SGCConfig::beta_beta)
        .def_readwrite("beta_expected_degree", &SGCConfig::beta_expected_degree)
        .def_readwrite("seed", &SGCConfig::seed)
        .def("to_json", [](const SGCConfig &c) { return to_json(c).dump(); });

    m.def("generate_sgc", [](const SGCConfig &cfg) {
            auto s = generate_sgc(cfg);
            return py::make_tuple(s.graph, s.meta, s.warnings);
        },
        py::arg("config") = SGCConfig{}, "-> (Graph, NodeMeta, warnings)");

    // ---- statistics
    m.def("degree_assortativity", &degree_assortativity);
    m.def("attribute_assortativity",
          [](const Graph &g, const std::vector<double> &v) { return attribute_assortativity(g, v); });
    m.def("degree_popularity_correlation", &degree_popularity_correlation);
    m.def("genre_edge_overlap", [](const Graph &g, const NodeMetaTable &t) { return genre_edge_overlap(g, t).fraction; });
    m.def("group_mean_degree", &group_mean_degree);

    // ---- spectra and centrality
    m.def("power_iteration", [](const Graph &g, double tol, std::size_t max_iter) {
            return pair(power_iteration(g, tol, max_iter));
        },
        py::arg("graph"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100'000,
        "-> (value, vector, converged)");
    m.def("top_k_spectrum", [](const Graph &g, std::size_t k, double tol) {
            SpectralOptions o;
            o.tol = tol;
            py::list out;
            for (const auto &p : top_k_spectrum(g, k, o).pairs)
                out.append(pair(p));
            return out;
        },
        py::arg("graph"), py::arg("k"), py::arg("tol") = 1e-10,
        "-> [(value, vector, converged)] by descending value");

    m.def("centrality", [](const Graph &g, const std::string &name, double damping) {
            switch (measure(name)) {
            case Measure::degree: return degree_centrality(g).scores;
            case Measure::closeness: return closeness_centrality(g).scores;
            case Measure::betweenness: return betweenness_centrality(g).scores;
            case Measure::eigenvector: return eigenvector_centrality(g).scores;
            case Measure::pagerank: return pagerank(g, damping).scores;
            }
            return std::vector<double>{};
        },
        py::arg("graph"), py::arg("measure"), py::arg("damping") = kDefaultDamping);

    // ---- sweeps and analysis
    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("groups", &SweepResult::groups)
        .def("thresholds", &SweepResult::thresholds)
        .def("series", [](const SweepResult &r, const std::string &group, const std::string &field) {
            return group_series(r, group, field).second;
        })
        .def("eigenvalues", [](const SweepResult &r) {
            std::vector<std::vector<double>> out;
            for (const auto &rec : r.records)
                out.push_back(rec.eigenvalues);
            return out;
        })
        .def("to_json", [](const SweepResult &r) { return to_json(r).dump(); })
        .def("to_csv", [](const SweepResult &r) {
            std::ostringstream out;
            write_sweep_csv(out, r);
            return out.str();
        });

    m.def("threshold_sweep",
          [](const Graph &g, const NodeMetaTable &meta, const std::vector<std::string> &groups,
             const std::vector<int> &grid, const std::vector<std::string> &measures,
             std::size_t k_eigs, unsigned threads, std::optional<std::pair<double, double>> band) {
              SweepOptions o;
              o.grid = grid.empty() ? SweepOptions::default_grid() : grid;
              o.measures.clear();
              for (const auto &s : measures)
                  o.measures.push_back(measure(s));
              o.k_eigs = k_eigs;
              o.threads = threads;
              py::gil_scoped_release release;
              if (band)
                  return removal_band_sweep(g, meta, groups, band->first, band->second, o);
              return threshold_sweep(g, meta, groups, o);
          },
          py::arg("graph"), py::arg("meta"), py::arg("groups") = std::vector<std::string>{},
          py::arg("grid") = std::vector<int>{},
          py::arg("measures") = std::vector<std::string>{"eigenvector"}, py::arg("k_eigs") = 3,
          py::arg("threads") = 1, py::arg("remove_band") = py::none());

    m.def("transition_report",
          [](const SweepResult &r, const std::string &a, const std::string &b, const std::string &field) {
              return to_json(transition_report(r, a, b, field)).dump();
          },
          py::arg("sweep"), py::arg("group_a") = kLeaderGroup, py::arg("group_b") = kCelebrityGroup,
          py::arg("field") = "mean_eigencentrality", "-> JSON text");

    m.def("fit_logistic", [](const std::vector<double> &t, const std::vector<double> &y) {
            auto f = fit_logistic(t, y);
            return py::make_tuple(f.L, f.g, f.t0, f.converged);
        },
        "-> (L, g, t0, converged)");
    m.def("detect_transition",
          [](const std::vector<int> &grid, const std::vector<double> &a, const std::vector<double> &b) {
              return detect_transition(grid, a, b);
          });
}
