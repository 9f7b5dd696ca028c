#include <doctest.h>

#include <algorithm>
#include <json.hpp>
#include <map>
#include <set>
#include <vector>

#include "invmis/graph.hpp"
#include "test_util.hpp"

using namespace invmis;

namespace {

std::vector<nt::u64> odd_primes_upto(nt::u64 limit) {
    std::vector<nt::u64> ps;
    for (nt::u64 v = 3; v <= limit; v += 2)
        if (nt::is_prime(v)) ps.push_back(v);
    return ps;
}

} // namespace

TEST_CASE("Graph keeps adjacency sorted, deduplicated and symmetric") {
    Graph g(4);
    g.add_edge(2, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 3);
    g.add_edge(3, 3);
    CHECK(g.adj[1] == std::vector<int>{2});
    CHECK(g.adj[2] == std::vector<int>{1});
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(3, 3));
    CHECK(g.has_self_loop(3));
    CHECK_FALSE(g.has_self_loop(0));
    CHECK(g.degree(3) == 1);
    CHECK(g.edge_count() == 2);
    g.check_consistent();

    Graph broken(2);
    broken.adj[0].push_back(1);  // no mirror entry
    CHECK_THROWS_AS(broken.check_consistent(), std::logic_error);
}

TEST_CASE("inverse graph structural invariants across small primes") {
    for (nt::u64 pv : odd_primes_upto(313)) {
        nt::Prime p(pv);
        InverseGraph ig = build_inverse_graph(p);
        const Graph& g = ig.graph;
        REQUIRE(g.n == static_cast<int>(pv));
        g.check_consistent();

        CHECK(g.self_loops == std::vector<int>{0});
        // vertex 0 keeps only its chain neighbours
        if (pv > 3) CHECK(g.adj[0] == std::vector<int>({1, static_cast<int>(pv) - 1}));
        // the forced triangle around 0
        CHECK(g.has_edge(0, 1));
        CHECK(g.has_edge(0, static_cast<int>(pv) - 1));
        CHECK(g.has_edge(1, static_cast<int>(pv) - 1));

        int deg2 = 0;
        for (int x = 0; x < g.n; ++x) {
            int d = g.degree(x);
            CHECK(d >= 2);
            CHECK(d <= 3);
            if (d == 2) ++deg2;
            CHECK(g.has_edge(x, (x + 1) % g.n));
            if (x != 0) {
                nt::u64 y = (pv - nt::mod_inverse(static_cast<nt::u64>(x), p)) % pv;
                if (y != static_cast<nt::u64>(x)) {
                    CHECK(g.has_edge(x, static_cast<int>(y)));
                } else {
                    // R-fixed points get no third edge and no loop
                    CHECK(d == 2);
                    CHECK_FALSE(g.has_self_loop(x));
                }
            }
        }
        if (pv > 3) {
            // degree-2 vertices: R-fixed points, coincidence roots, and vertex 0
            int rfixed = pv % 4 == 1 ? 2 : 0;
            int coincide = pv % 3 == 1 ? 4 : 0;
            CHECK(deg2 == rfixed + coincide + 1);
        }
    }
}

TEST_CASE("inverse graph at p=3 degenerates to the triangle") {
    InverseGraph ig = build_inverse_graph(nt::Prime(3));
    CHECK(ig.graph.n == 3);
    CHECK(ig.graph.edge_count() == 3);
    CHECK(ig.graph.self_loops == std::vector<int>{0});
    for (int v = 0; v < 3; ++v) CHECK(ig.graph.degree(v) == 2);
}

TEST_CASE("DIMACS round trip preserves the graph") {
    auto same = [](const Graph& a, const Graph& b) {
        CHECK(a.n == b.n);
        CHECK(a.adj == b.adj);
        CHECK(a.self_loops == b.self_loops);
    };
    for (nt::u64 pv : {3ull, 11ull, 13ull, 61ull}) {
        Graph g = build_inverse_graph(nt::Prime(pv)).graph;
        same(g, from_dimacs(to_dimacs(g)));
    }
    for (int i = 0; i < 25; ++i) {
        Graph g = testutil::random_graph(1 + i, 30, 900 + i);
        if (i % 3 == 0 && g.n > 2) g.add_edge(2, 2);
        same(g, from_dimacs(to_dimacs(g)));
    }
}

TEST_CASE("from_dimacs reports malformed input with line numbers") {
    CHECK_THROWS_AS(from_dimacs("p edge 3\ne 1 2\n"), ParseError);
    CHECK_THROWS_AS(from_dimacs("e 1 2\n"), ParseError);
    CHECK_THROWS_AS(from_dimacs("p edge 3 1\ne 0 2\n"), ParseError);
    CHECK_THROWS_AS(from_dimacs("p edge 3 1\ne 1 4\n"), ParseError);
    try {
        from_dimacs("p edge 2 1\ne 1 3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    // duplicate edge lines merge instead of erroring
    Graph g = from_dimacs("p edge 2 2\ne 1 2\ne 2 1\n");
    CHECK(g.edge_count() == 1);
}

TEST_CASE("JSON adjacency serialization matches the graph") {
    Graph g = build_inverse_graph(nt::Prime(13)).graph;
    auto j = nlohmann::json::parse(to_json_adjacency(g));
    CHECK(j["n"].get<int>() == 13);
    CHECK(j["self_loops"].get<std::vector<int>>() == g.self_loops);
    auto adj = j["adjacency"].get<std::vector<std::vector<int>>>();
    REQUIRE(static_cast<int>(adj.size()) == g.n);
    for (int v = 0; v < g.n; ++v) CHECK(adj[v] == g.adj[v]);
}

TEST_CASE("cycle enumeration finds the textbook counts") {
    auto count_len = [](const std::vector<std::vector<int>>& cs, int len) {
        return std::count_if(cs.begin(), cs.end(),
                             [len](const auto& c) { return static_cast<int>(c.size()) == len; });
    };

    auto c5 = enumerate_simple_cycles(testutil::cycle_graph(5), 9);
    REQUIRE(c5.size() == 1);
    CHECK(c5[0].size() == 5);

    auto c6 = enumerate_simple_cycles(testutil::cycle_graph(6), 9, true);
    CHECK(c6.empty());

    auto k4 = enumerate_simple_cycles(testutil::complete_graph(4), 4);
    CHECK(count_len(k4, 3) == 4);
    CHECK(count_len(k4, 4) == 3);
    CHECK(enumerate_simple_cycles(testutil::complete_graph(4), 9, true).size() == 4);
    CHECK(count_len(enumerate_simple_cycles(testutil::complete_graph(5), 3), 3) == 10);

    // Petersen: girth 5, exactly twelve 5-cycles
    auto pet = enumerate_simple_cycles(testutil::petersen_graph(), 5, true);
    CHECK(pet.size() == 12);
    CHECK(enumerate_simple_cycles(testutil::petersen_graph(), 4).empty());
}

TEST_CASE("enumerated cycles are canonical and real") {
    Graph g = build_inverse_graph(nt::Prime(31)).graph;
    auto cycles = enumerate_simple_cycles(g, 9, true);
    std::set<std::vector<int>> seen;
    for (const auto& c : cycles) {
        REQUIRE(c.size() >= 3);
        CHECK(c.size() % 2 == 1);
        CHECK(seen.insert(c).second);
        CHECK(*std::min_element(c.begin(), c.end()) == c[0]);
        CHECK(c[1] < c.back());  // orientation is fixed, so each cycle appears once
        std::set<int> verts(c.begin(), c.end());
        CHECK(verts.size() == c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            CHECK(g.has_edge(c[i], c[(i + 1) % c.size()]));
    }
}
