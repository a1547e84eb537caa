#include "fixtures.hpp"
#include "oracles.hpp"

#include <popcent/error.hpp>
#include <popcent/graph.hpp>

#include <doctest.h>

#include <sstream>

using namespace popcent;

namespace {

void check_invariants(const Graph &g) {
    std::size_t entries = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto nb = g.neighbors(v);
        entries += nb.size();
        for (std::size_t i = 0; i < nb.size(); ++i) {
            CHECK(nb[i] != v);
            if (i > 0)
                CHECK(nb[i - 1] < nb[i]);
            CHECK(g.has_edge(nb[i], v));
        }
    }
    CHECK(entries == 2 * g.edge_count());
}

LoadedGraph load(const std::string &text) {
    std::istringstream in(text);
    return load_edge_list(in);
}

} // namespace

TEST_SUITE("graph") {

TEST_CASE("from_edges drops loops and duplicates") {
    auto g = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 0}, {2, 2}, {1, 2}, {1, 2}});
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    check_invariants(g);
    CHECK_THROWS_AS(Graph::from_edges(2, std::vector<Edge>{{0, 5}}), ArgumentError);
}

TEST_CASE("load_edge_list") {
    SUBCASE("dedup and self-loop") {
        auto l = load("a\tb\nb\ta\na\ta\n");
        CHECK(l.graph.node_count() == 2);
        CHECK(l.graph.edge_count() == 1);
        CHECK(l.summary.self_loops == 1);
        CHECK(l.summary.duplicates == 1);
        CHECK(l.ids == std::vector<std::string>{"a", "b"});
    }
    SUBCASE("triangle") {
        auto l = load("# comment\nx\ty\n\ny\tz\nz\tx\n");
        for (NodeId v = 0; v < 3; ++v)
            CHECK(l.graph.degree(v) == 2);
    }
    SUBCASE("errors") {
        try {
            load("a\tb\nbroken\n");
            FAIL("expected a parse error");
        } catch (const ParseError &e) {
            CHECK(e.line() == 2);
        }
        CHECK_THROWS_AS(load(""), ParseError);
        CHECK_THROWS_AS(load("# only comments\n"), ParseError);
    }
}

TEST_CASE("load_node_meta") {
    const std::string header = "id,name,popularity,genres,group\n";
    SUBCASE("row") {
        std::istringstream in(header + "x,Mozart,92,classical,\n");
        auto rows = load_node_meta(in);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].popularity == 92.0);
        CHECK(rows[0].genres == std::vector<std::string>{"classical"});
        CHECK(rows[0].group.empty());
    }
    SUBCASE("genres split, sorted and unique") {
        std::istringstream in(header + "x,\"Doe, J\",5,rock|jazz|rock,g\ny,Y,0,,\n");
        auto rows = load_node_meta(in);
        CHECK(rows[0].name == "Doe, J");
        CHECK(rows[0].genres == std::vector<std::string>{"jazz", "rock"});
        CHECK(rows[1].genres.empty());
    }
    SUBCASE("validation") {
        std::istringstream hi(header + "x,X,101,,\n");
        CHECK_THROWS_AS(load_node_meta(hi), ValidationError);
        std::istringstream neg(header + "x,X,-1,,\n");
        CHECK_THROWS_AS(load_node_meta(neg), ValidationError);
        std::istringstream dup(header + "x,X,1,,\nx,Y,2,,\n");
        CHECK_THROWS_AS(load_node_meta(dup), ValidationError);
        std::istringstream bad(header + "x,X,abc,,\n");
        CHECK_THROWS_AS(load_node_meta(bad), ParseError);
        std::istringstream noheader("x,X,1,,\n");
        CHECK_THROWS_AS(load_node_meta(noheader), ParseError);
    }
}

TEST_CASE("attach_meta orders nodes by metadata row") {
    auto l = load("b\ta\n");
    std::istringstream in("id,name,popularity,genres,group\na,A,10,,\nb,B,20,,\nc,C,30,,\n");
    auto rows = load_node_meta(in);
    auto ag = attach_meta(l, rows);
    CHECK(ag.graph.node_count() == 3);
    CHECK(ag.graph.has_edge(0, 1));
    CHECK(ag.graph.degree(2) == 0);
    CHECK(ag.meta[2].external_id == "c");

    std::istringstream partial("id,name,popularity,genres,group\na,A,10,,\n");
    auto few = load_node_meta(partial);
    CHECK_THROWS_AS(attach_meta(l, few), ValidationError);
}

TEST_CASE("induce_by_popularity") {
    auto p3 = oracle::path(3);
    auto m = fixture::meta({10, 80, 90});
    SUBCASE("t = 0 is the identity") {
        auto s = induce_by_popularity(p3, m, 0);
        CHECK(s.graph == p3);
        CHECK(s.map.new_to_old == std::vector<NodeId>{0, 1, 2});
    }
    SUBCASE("above every popularity") {
        auto s = induce_by_popularity(p3, m, 101);
        CHECK(s.graph.empty());
    }
    SUBCASE("inclusive threshold") {
        auto s = induce_by_popularity(p3, m, 50);
        CHECK(s.graph.node_count() == 2);
        CHECK(s.graph.edge_count() == 1);
        CHECK(induce_by_popularity(p3, m, 80).graph.node_count() == 2);
        CHECK(s.map.old_to_new[0] == kNoNode);
    }
    SUBCASE("composition") {
        auto g = oracle::gnp(40, 0.15, 5);
        std::vector<double> pops;
        for (int i = 0; i < 40; ++i)
            pops.push_back((i * 37) % 101);
        for (double t1 : {0.0, 20.0, 50.0}) {
            auto first = induce_by_popularity(g, pops, t1);
            std::vector<double> sub;
            for (NodeId v : first.map.new_to_old)
                sub.push_back(pops[v]);
            for (double t2 : {t1, t1 + 10, 75.0}) {
                auto nested = induce_by_popularity(first.graph, sub, t2);
                auto direct = induce_by_popularity(g, pops, t2);
                CHECK(nested.graph == direct.graph);
                CHECK(first.map.then(nested.map).new_to_old == direct.map.new_to_old);
            }
        }
    }
}

TEST_CASE("remove_popularity_band") {
    auto g = oracle::cycle(4);
    auto m = fixture::meta({39, 40, 50, 51});
    auto s = remove_popularity_band(g, m, 40, 50);
    CHECK(s.map.new_to_old == std::vector<NodeId>{0, 3});
    CHECK(s.graph.edge_count() == 1);
    CHECK(remove_popularity_band(g, m, 0, 100).graph.empty());
    CHECK(remove_popularity_band(g, m, 200, 300).graph == g);
    CHECK_THROWS_AS(remove_popularity_band(g, m, 60, 50), ArgumentError);
}

TEST_CASE("largest_connected_component") {
    SUBCASE("tie goes to the smallest index") {
        // K2 on {0,1}, triangles on {2,3,4} and {5,6,7}
        auto g = fixture::graph(8, {{0, 1}, {5, 6}, {6, 7}, {5, 7}, {2, 3}, {3, 4}, {2, 4}});
        auto s = largest_connected_component(g);
        CHECK(s.map.new_to_old == std::vector<NodeId>{2, 3, 4});
        CHECK(s.graph.edge_count() == 3);
    }
    SUBCASE("connected graph is itself") {
        auto g = oracle::cycle(6);
        CHECK(largest_connected_component(g).graph == g);
    }
    SUBCASE("edgeless") {
        auto s = largest_connected_component(Graph::from_edges(5, std::vector<Edge>{}));
        CHECK(s.map.new_to_old == std::vector<NodeId>{0});
    }
    SUBCASE("empty") {
        CHECK(largest_connected_component(Graph{}).graph.empty());
    }
}

TEST_CASE("snowball_sample") {
    auto g = oracle::path(5);
    CHECK(snowball_sample(g, 2, std::nullopt).graph == g);
    CHECK(snowball_sample(g, 2, 0).graph.node_count() == 1);
    auto s = snowball_sample(oracle::star(4), 3, 1);
    CHECK(s.graph.node_count() == 2);
    CHECK(s.graph.edge_count() == 1);
    CHECK_THROWS_AS(snowball_sample(g, 9, 1), ArgumentError);

    SUBCASE("unlimited rounds give the seed's component") {
        auto h = oracle::gnp(60, 0.03, 2);
        auto labels = connected_components(h);
        for (NodeId seed : {0u, 17u, 42u}) {
            auto part = snowball_sample(h, seed, std::nullopt);
            std::vector<NodeId> expect;
            for (NodeId v = 0; v < h.node_count(); ++v)
                if (labels[v] == labels[seed])
                    expect.push_back(v);
            CHECK(part.map.new_to_old == expect);
        }
    }
}

TEST_CASE("structural invariants on random graphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto g = oracle::gnp(50, 0.1, seed);
        check_invariants(g);
        CHECK(is_connected(g) == oracle::connected(g));
    }
}

} // TEST_SUITE
