#include <doctest.h>

#include "critwalk/cuts.hpp"
#include "critwalk/graph.hpp"
#include "critwalk/hitting.hpp"
#include "critwalk/models.hpp"
#include "critwalk/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace critwalk;

namespace {

RootedGraph path_graph(std::size_t n, Vertex root = 0) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return RootedGraph(n, std::move(e), root);
}

RootedGraph cycle_graph(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    e.emplace_back(Vertex(n - 1), 0);
    return RootedGraph(n, std::move(e), 0);
}

// Brute-force bridges: remove each edge, test connectivity.
std::set<std::uint32_t> brute_bridges(const RootedGraph& g) {
    std::set<std::uint32_t> out;
    const std::size_t n = g.num_vertices();
    for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
        std::vector<std::vector<Vertex>> adj(n);
        for (std::uint32_t f = 0; f < g.num_edges(); ++f) {
            if (f == e) continue;
            auto [u, v] = g.edges()[f];
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        std::vector<std::uint8_t> seen(n, 0);
        std::vector<Vertex> q = {0};
        seen[0] = 1;
        std::size_t cnt = 1;
        while (!q.empty()) {
            Vertex u = q.back();
            q.pop_back();
            for (Vertex w : adj[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++cnt;
                    q.push_back(w);
                }
        }
        if (cnt < n) out.insert(e);
    }
    return out;
}

} // namespace

TEST_CASE("cut decomposition on a path") {
    auto g = path_graph(3);
    auto cuts = find_cut_decomposition(g);
    CHECK(cuts.bridge_edges.size() == 2);
    CHECK(cuts.cut_points == std::vector<Vertex>{0, 1});
    // Cut-point of each bridge is the root-side endpoint.
    for (std::size_t i = 0; i < cuts.bridge_edges.size(); ++i) {
        auto [u, v] = g.edges()[cuts.bridge_edges[i]];
        CHECK(cuts.bridge_cut_point[i] == std::min(u, v));
    }
}

TEST_CASE("cut decomposition on a triangle") {
    auto g = cycle_graph(3);
    auto cuts = find_cut_decomposition(g);
    CHECK(cuts.bridge_edges.empty());
    CHECK(cuts.num_bubbles == 1);
    CHECK(cuts.cut_points.empty());
}

TEST_CASE("bridges match the edge-removal oracle on random graphs") {
    Rng rng = make_rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 5 + uniform_below(rng, 26);  // up to 30 vertices
        auto g = random_connected_graph(n, uniform_below(rng, 8), rng);
        auto cuts = find_cut_decomposition(g);
        auto oracle = brute_bridges(g);
        std::set<std::uint32_t> found(cuts.bridge_edges.begin(), cuts.bridge_edges.end());
        CHECK(found == oracle);
    }
}

TEST_CASE("separator chains agree with vertex-removal separation") {
    // Brute oracle: c separates y from the root iff removing vertex c
    // disconnects them. Includes within-bubble articulation cut-points.
    Rng rng = make_rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 6 + uniform_below(rng, 20);
        auto g = random_connected_graph(n, uniform_below(rng, 6), rng);
        auto cuts = find_cut_decomposition(g);
        auto separates = [&](Vertex c, Vertex y) {
            if (c == y || c == g.root()) return c == g.root() && y != g.root();
            std::vector<std::uint8_t> seen(g.num_vertices(), 0);
            seen[c] = 1;
            std::vector<Vertex> q = {g.root()};
            seen[g.root()] = 1;
            while (!q.empty()) {
                Vertex u = q.back();
                q.pop_back();
                for (Vertex w : g.neighbors(u))
                    if (!seen[w]) {
                        seen[w] = 1;
                        q.push_back(w);
                    }
            }
            return !seen[y];
        };
        for (Vertex y = 0; y < g.num_vertices(); ++y) {
            auto chain = separating_cut_points(g, cuts, y);
            std::set<Vertex> got(chain.begin(), chain.end());
            std::set<Vertex> want;
            for (Vertex c : cuts.cut_points)
                if (c == y || separates(c, y) || (c == g.root() && y != g.root()))
                    want.insert(c);
            // The chain keeps y itself only when y is a cut-point, and always
            // includes the root when the root is a cut-point.
            if (!cuts.is_cut_point[y]) want.erase(y);
            CHECK(got == want);
        }
    }
}

TEST_CASE("effective resistance closed forms") {
    CHECK(effective_resistance(path_graph(6), 0, 5) == doctest::Approx(5.0));
    CHECK(effective_resistance(cycle_graph(4), 0, 2) == doctest::Approx(1.0));
    CHECK(effective_resistance(cycle_graph(3), 0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(effective_resistance(path_graph(4), 2, 2) == 0.0);
}

TEST_CASE("effective resistance is a metric and Rayleigh-monotone") {
    Rng rng = make_rng(5150);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 6 + uniform_below(rng, 25);
        auto g = random_connected_graph(n, 2 + uniform_below(rng, 6), rng);
        ResistanceSolver solver(g);
        auto dist0 = g.bfs_distances(0);
        for (int probe = 0; probe < 10; ++probe) {
            Vertex x = Vertex(uniform_below(rng, n));
            Vertex y = Vertex(uniform_below(rng, n));
            Vertex z = Vertex(uniform_below(rng, n));
            if (x == y || y == z || x == z) continue;
            double rxy = solver.resistance(x, y);
            double ryx = solver.resistance(y, x);
            CHECK(rxy == doctest::Approx(ryx).epsilon(1e-9));
            CHECK(rxy <= solver.resistance(x, z) + solver.resistance(z, y) + 1e-9);
            // R <= graph distance.
            auto dx = g.bfs_distances(x);
            CHECK(rxy <= double(dx[y]) + 1e-9);
        }
        (void)dist0;

        // Adding an edge never increases two-point resistance.
        Vertex a = Vertex(uniform_below(rng, n)), b = a;
        while (b == a) b = Vertex(uniform_below(rng, n));
        bool exists = false;
        for (auto [u, v] : g.edges())
            if ((u == std::min(a, b)) && (v == std::max(a, b))) exists = true;
        if (!exists) {
            auto edges = g.edges();
            edges.emplace_back(a, b);
            RootedGraph g2(n, std::move(edges), g.root());
            ResistanceSolver solver2(g2);
            for (int probe = 0; probe < 6; ++probe) {
                Vertex x = Vertex(uniform_below(rng, n));
                Vertex y = Vertex(uniform_below(rng, n));
                if (x == y) continue;
                CHECK(solver2.resistance(x, y) <= solver.resistance(x, y) + 1e-9);
            }
        }
    }
}

TEST_CASE("resistance equals distance on trees") {
    Rng rng = make_rng(99);
    auto g = gen_gw_tree(200, OffspringLaw::geometric_half, rng);
    auto d = g.bfs_distances(g.root());
    for (Vertex v = 1; v < 30; ++v)
        CHECK(effective_resistance(g, g.root(), v) == doctest::Approx(double(d[v])));
}

TEST_CASE("triangle conductances on three disjoint joining paths") {
    // x=0, y=1, z=2; x-y edge, y-a-z, z-b-c-x.
    std::vector<std::pair<Vertex, Vertex>> e = {{0, 1}, {1, 3}, {3, 2}, {2, 4}, {4, 5}, {5, 0}};
    RootedGraph g(6, std::move(e), 0);
    auto c = triangle_arm_conductances(g, 0, 1, 2);
    CHECK(c.c_xy == doctest::Approx(1.0));
    CHECK(c.c_yz == doctest::Approx(0.5));
    CHECK(c.c_zx == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("triangle conductances: symmetric star") {
    // Hub 3 with unit arms to 0,1,2.
    std::vector<std::pair<Vertex, Vertex>> e = {{0, 3}, {1, 3}, {2, 3}};
    RootedGraph g(4, std::move(e), 0);
    auto c = triangle_arm_conductances(g, 0, 1, 2);
    CHECK(c.c_xy == doctest::Approx(c.c_yz));
    CHECK(c.c_yz == doctest::Approx(c.c_zx));
}

TEST_CASE("triangle conductances are time-reversal symmetric") {
    Rng rng = make_rng(31337);
    auto g = random_connected_graph(24, 8, rng);
    Vertex x = 1, y = 5, z = 9;
    auto c1 = triangle_arm_conductances(g, x, y, z);
    auto c2 = triangle_arm_conductances(g, y, x, z);  // roles swapped
    CHECK(c1.c_xy == doctest::Approx(c2.c_xy).epsilon(1e-9));
}

TEST_CASE("triangle conductances match a Monte Carlo escape oracle") {
    Rng rng = make_rng(4242);
    auto g = random_bubbly_graph(14, 0.5, rng);
    const std::size_t n = g.num_vertices();
    Vertex x = 0, y = Vertex(n / 2), z = Vertex(n - 1);
    REQUIRE(x != y);
    REQUIRE(y != z);
    auto c = triangle_arm_conductances(g, x, y, z);

    const std::uint64_t trials = 1'000'000;
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Vertex w = x;
        while (true) {
            auto nb = g.neighbors(w);
            w = nb[uniform_below(rng, nb.size())];
            if (w == y) {
                ++hits;
                break;
            }
            if (w == z || w == x) break;
        }
    }
    double p_hat = double(hits) / double(trials);
    double p = c.c_xy / double(g.degree(x));
    double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / double(trials));
    CHECK(std::abs(p_hat - p) <= 3.5 * sigma + 1e-9);
}

TEST_CASE("hitting time moments on small graphs") {
    auto g = path_graph(3);
    auto m = hitting_time_moments(g, 0, 2);
    CHECK(m.moments[0] == doctest::Approx(4.0));
    CHECK(m.moments[1] == doctest::Approx(24.0));
    CHECK(m.moments[0] * m.moments[0] <= m.moments[1] + 1e-9);

    RootedGraph edge(2, {{0, 1}}, 0);
    auto me = hitting_time_moments(edge, 0, 1);
    CHECK(me.moments[0] == doctest::Approx(1.0));
    CHECK(me.moments[1] == doctest::Approx(1.0));
    CHECK(me.moments[3] == doctest::Approx(1.0));
}

TEST_CASE("commute time identity on random graphs") {
    Rng rng = make_rng(8686);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 5 + uniform_below(rng, 96);
        auto g = random_connected_graph(n, uniform_below(rng, 12), rng);
        Vertex x = Vertex(uniform_below(rng, n)), y = x;
        while (y == x) y = Vertex(uniform_below(rng, n));
        auto mxy = hitting_time_moments(g, x, y, 1);
        auto myx = hitting_time_moments(g, y, x, 1);
        double lhs = mxy.moments[0] + myx.moments[0];
        double rhs = 2.0 * double(g.num_edges()) * effective_resistance(g, x, y);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("variance bound spot values and sweep") {
    auto g = path_graph(3);
    auto chk = verify_variance_bound(g, 0, 2);
    CHECK(chk.lhs == doctest::Approx(48.0));
    CHECK(chk.rhs == doctest::Approx(256.0));
    CHECK(chk.holds);

    RootedGraph edge(2, {{0, 1}}, 0);
    auto chk2 = verify_variance_bound(edge, 0, 1);
    CHECK(chk2.lhs == doctest::Approx(2.0));
    CHECK(chk2.rhs == doctest::Approx(16.0));
    CHECK(chk2.holds);

    Rng rng = make_rng(1212);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 4 + uniform_below(rng, 57);
        auto gr = random_connected_graph(n, uniform_below(rng, 8), rng);
        Vertex x = Vertex(uniform_below(rng, n)), y = x;
        while (y == x) y = Vertex(uniform_below(rng, n));
        CHECK(verify_variance_bound(gr, x, y).holds);
    }
}

TEST_CASE("fourth moment bound") {
    Rng rng = make_rng(515);

    IncrementLaw zero{IncrementLaw::Kind::zero, 0};
    StoppingRule fixed{StoppingRule::Kind::fixed, 50, 0, 0};
    auto z = verify_fourth_moment_bound(zero, fixed, 1000, rng);
    CHECK(z.lhs_estimate == 0.0);
    CHECK(z.holds);

    // Rademacher, fixed n: exact fourth moment is 3n^2 - 2n.
    IncrementLaw rad{IncrementLaw::Kind::rademacher, 1};
    auto f = verify_fourth_moment_bound(rad, fixed, 200000, rng);
    double exact = 3.0 * 50 * 50 - 2.0 * 50;
    CHECK(std::abs(f.lhs_estimate - exact) <= 4 * f.lhs_stderr + 1.0);
    CHECK(f.rhs == doctest::Approx(148.0 * (2500.0 + 50.0)));
    CHECK(f.holds);

    StoppingRule geom{StoppingRule::Kind::geometric_capped, 0, 0.5, 100};
    auto gchk = verify_fourth_moment_bound(rad, geom, 200000, rng);
    CHECK(gchk.holds);

    IncrementLaw heavy{IncrementLaw::Kind::pareto_sym, 3.0};
    CHECK_THROWS_AS(verify_fourth_moment_bound(heavy, fixed, 10, rng),
                    std::invalid_argument);
}

TEST_CASE("edge list round trip") {
    Rng rng = make_rng(808);
    auto g = gen_gw_tree(40, OffspringLaw::geometric_half, rng, 3);
    std::ostringstream os;
    write_edge_list(os, g);
    std::istringstream is(os.str());
    auto g2 = read_edge_list(is);
    CHECK(g2.num_vertices() == g.num_vertices());
    CHECK(g2.edges() == g.edges());
    CHECK(g2.root() == g.root());
    CHECK(g2.dim() == g.dim());
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        for (int i = 0; i < g.dim(); ++i)
            CHECK(g2.location(v)[i] == g.location(v)[i]);
}

TEST_CASE("graph construction rejects invalid input") {
    CHECK_THROWS_AS(RootedGraph(2, {}, 0), GraphError);                 // disconnected
    CHECK_THROWS_AS(RootedGraph(2, {{0, 0}}, 0), GraphError);           // self loop
    CHECK_THROWS_AS(RootedGraph(2, {{0, 1}, {1, 0}}, 0), GraphError);   // parallel
    CHECK_THROWS_AS(RootedGraph(2, {{0, 1}}, 5), GraphError);           // bad root
    CHECK_THROWS_AS(hitting_time_moments(path_graph(3), 1, 1), GraphError);
    CHECK_THROWS_AS(triangle_arm_conductances(path_graph(3), 0, 0, 2), GraphError);
}
