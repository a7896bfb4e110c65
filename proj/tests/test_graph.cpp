#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "netrates/errors.hpp"
#include "netrates/graph.hpp"
#include "netrates/rng.hpp"

using namespace netrates;

namespace {

void check_invariants(const Graph& g) {
    const int n = g.num_nodes();
    std::size_t degree_sum = 0;
    int dmax = 0;
    for (int v = 0; v < n; ++v) {
        const auto& nbrs = g.neighbors(v);
        degree_sum += nbrs.size();
        dmax = std::max(dmax, g.degree(v));
        CHECK(!std::binary_search(nbrs.begin(), nbrs.end(), v)); // no self-loop
        for (int u : nbrs) {
            const auto& back = g.neighbors(u);
            CHECK(std::binary_search(back.begin(), back.end(), v)); // symmetry
        }
    }
    CHECK(degree_sum == 2 * g.num_edges());
    CHECK(dmax == g.max_degree());
    CHECK(dmax <= n - 1);
}

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

} // namespace

TEST_CASE("er generator") {
    SUBCASE("p = 1 forces all edges") {
        const Graph g = generate_er(2, 1.0, 123, false);
        CHECK(g.num_edges() == 1);
        CHECK(g.has_edge(0, 1));
    }
    SUBCASE("p = 0 gives the empty graph") {
        const Graph g = generate_er(5, 0.0, 9, false);
        CHECK(g.num_edges() == 0);
        CHECK(g.max_degree() == 0);
    }
    SUBCASE("edge count matches an independent replay of the seeded stream") {
        const Graph g = generate_er(16, 0.4, 7, false);
        // independent oracle: raw mt19937_64 words mapped to [0,1) the
        // same way, scanned over pairs in lexicographic order
        std::mt19937_64 eng(7);
        std::size_t expected = 0;
        for (int i = 0; i < 16; ++i)
            for (int j = i + 1; j < 16; ++j)
                if (static_cast<double>(eng() >> 11) * 0x1.0p-53 < 0.4) ++expected;
        CHECK(g.num_edges() == expected);
        check_invariants(g);
    }
    SUBCASE("bit-reproducible for a fixed seed") {
        const Graph a = generate_er(30, 0.2, 42, true);
        const Graph b = generate_er(30, 0.2, 42, true);
        CHECK(a.edges() == b.edges());
        CHECK(a.hash() == b.hash());
    }
    SUBCASE("connectivity requirement") {
        const Graph g = generate_er(40, 0.12, 5, true);
        CHECK(is_connected(g));
        CHECK_THROWS_AS(generate_er(5, 0.0, 1, true, 10), NumericalError);
    }
    SUBCASE("bad arguments") {
        CHECK_THROWS_AS(generate_er(0, 0.5, 1, false), DataError);
        CHECK_THROWS_AS(generate_er(5, 1.5, 1, false), DataError);
    }
}

TEST_CASE("ws generator") {
    SUBCASE("no rewiring gives the ring lattice") {
        const Graph cycle = generate_ws(6, 1, 0.0, 11);
        CHECK(cycle.num_edges() == 6);
        for (int v = 0; v < 6; ++v) CHECK(cycle.degree(v) == 2);
        CHECK(cycle.has_edge(0, 1));
        CHECK(cycle.has_edge(5, 0));

        const Graph lattice = generate_ws(8, 2, 0.0, 11);
        CHECK(lattice.num_edges() == 16);
        for (int v = 0; v < 8; ++v) CHECK(lattice.degree(v) == 4);
    }
    SUBCASE("rewiring preserves the edge count") {
        const Graph g = generate_ws(10, 2, 0.5, 3);
        CHECK(g.num_edges() == 20);
        check_invariants(g);
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const Graph h = generate_ws(17, 3, 0.7, seed);
            CHECK(h.num_edges() == 17 * 3);
            check_invariants(h);
        }
    }
    SUBCASE("deterministic given seed") {
        CHECK(generate_ws(20, 4, 0.4, 77).edges() == generate_ws(20, 4, 0.4, 77).edges());
    }
    SUBCASE("invalid nei") {
        CHECK_THROWS_AS(generate_ws(6, 3, 0.1, 1), DataError); // nei > (n-1)/2
        CHECK_THROWS_AS(generate_ws(6, 0, 0.1, 1), DataError);
        CHECK_THROWS_AS(generate_ws(2, 1, 0.1, 1), DataError);
    }
}

TEST_CASE("complete generator") {
    CHECK(generate_complete(1).num_edges() == 0);
    CHECK(generate_complete(3).num_edges() == 3);
    const Graph g = generate_complete(10);
    CHECK(g.num_edges() == 45);
    CHECK(g.max_degree() == 9);
    check_invariants(g);
}

TEST_CASE("edge list files") {
    SUBCASE("path graph parses") {
        const Graph g = load_edgelist(write_temp("nr_path.edges", "3\n0 1\n1 2\n"));
        CHECK(g.num_nodes() == 3);
        CHECK(g.num_edges() == 2);
        CHECK(g.degree(1) == 2);
    }
    SUBCASE("comments and blank lines are ignored") {
        const Graph g = load_edgelist(
            write_temp("nr_comment.edges", "# header\n4 # nodes\n\n0 1\n2 3 # tail\n"));
        CHECK(g.num_nodes() == 4);
        CHECK(g.num_edges() == 2);
    }
    SUBCASE("self-loop is rejected with a line number") {
        const std::string path = write_temp("nr_loop.edges", "2\n0 0\n");
        CHECK_THROWS_WITH_AS(load_edgelist(path), doctest::Contains(":2:"), DataError);
    }
    SUBCASE("duplicate edge is rejected") {
        CHECK_THROWS_AS(load_edgelist(write_temp("nr_dup.edges", "3\n0 1\n1 0\n")), DataError);
    }
    SUBCASE("out-of-range index is rejected") {
        CHECK_THROWS_AS(load_edgelist(write_temp("nr_range.edges", "3\n0 3\n")), DataError);
    }
    SUBCASE("garbage is rejected") {
        CHECK_THROWS_AS(load_edgelist(write_temp("nr_bad.edges", "3\n0 x\n")), DataError);
        CHECK_THROWS_AS(load_edgelist(write_temp("nr_empty.edges", "# nothing\n")), DataError);
    }
    SUBCASE("save/load round trip") {
        const Graph g = generate_ws(12, 2, 0.3, 5);
        const auto path = (std::filesystem::temp_directory_path() / "nr_rt.edges").string();
        save_edgelist(g, path);
        const Graph h = load_edgelist(path);
        CHECK(g.edges() == h.edges());
        CHECK(g.hash() == h.hash());
    }
    SUBCASE("118-bus topology") {
        const Graph g = load_edgelist(std::string(NETRATES_DATA_DIR) + "/ieee118.edges");
        CHECK(g.num_nodes() == 118);
        CHECK(g.num_edges() == 179);
        CHECK(g.max_degree() == 9);
        CHECK(is_connected(g));
        check_invariants(g);
    }
}

TEST_CASE("graph construction rejects bad edges") {
    CHECK_THROWS_AS(Graph(3, {{0, 0}}), DataError);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), DataError);
    CHECK_THROWS_AS(Graph(3, {{0, 5}}), DataError);
}

TEST_CASE("random graphs satisfy structural invariants") {
    Rng seeds(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(seeds.uniform_int(30));
        const Graph g = generate_er(n, seeds.uniform01(), seeds.next_word(), false);
        check_invariants(g);
    }
}
