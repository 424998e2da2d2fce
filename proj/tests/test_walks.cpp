#include <doctest.h>

#include "critwalk/models.hpp"
#include "critwalk/walks.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>

using namespace critwalk;

namespace {

RootedGraph path_graph(std::size_t n, Vertex root = 0) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return RootedGraph(n, std::move(e), root);
}

RootedGraph line_with_locations(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    std::vector<std::int64_t> loc(n);
    for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    for (std::size_t v = 0; v < n; ++v) loc[v] = std::int64_t(v);
    return RootedGraph(n, std::move(e), Vertex(n / 2), 1, std::move(loc));
}

// Exact next-vertex distribution of the diffusion's V*-trace: jump chain of
// the weighted tree network (conductance 1/res per edge), absorbed at the
// other V* vertices.
std::map<std::pair<Vertex, Vertex>, double> exact_trace_matrix(const SkeletonTree& t) {
    const std::size_t m = t.num_vertices();
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(m);
    for (std::size_t v = 0; v < m; ++v) {
        if (t.parent[v] < 0) continue;
        double c = 1.0 / t.res_to_parent[v];
        adj[v].push_back({std::size_t(t.parent[v]), c});
        adj[std::size_t(t.parent[v])].push_back({v, c});
    }
    std::map<std::pair<Vertex, Vertex>, double> out;
    for (std::size_t src = 0; src < t.n_vstar; ++src) {
        // Harmonic u_target with all V* vertices absorbing; the returns to
        // src resample by the strong Markov property, so the row is
        // normalized at the end.
        double row_sum = 0;
        for (std::size_t target = 0; target < t.n_vstar; ++target) {
            if (target == src) continue;
            // interior = star centers only
            std::vector<std::int32_t> idx(m, -1);
            int k = 0;
            for (std::size_t v = t.n_vstar; v < m; ++v) idx[v] = k++;
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
            Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
            for (std::size_t v = t.n_vstar; v < m; ++v) {
                double csum = 0;
                for (auto [w, c] : adj[v]) {
                    csum += c;
                    if (idx[w] >= 0)
                        A(idx[v], idx[w]) -= c;
                    else if (w == target)
                        b(idx[v]) += c;
                }
                A(idx[v], idx[v]) += csum;
            }
            Eigen::VectorXd u = k ? Eigen::VectorXd(A.fullPivLu().solve(b))
                                  : Eigen::VectorXd();
            // First-jump decomposition from src.
            double csum = 0, p = 0;
            for (auto [w, c] : adj[src]) csum += c;
            for (auto [w, c] : adj[src]) {
                double uw;
                if (w == target)
                    uw = 1.0;
                else if (w < t.n_vstar)
                    uw = 0.0;
                else
                    uw = u(idx[w]);
                p += (c / csum) * uw;
            }
            if (p > 1e-12) {
                out[{Vertex(src), Vertex(target)}] = p;
                row_sum += p;
            }
        }
        for (std::size_t target = 0; target < t.n_vstar; ++target)
            if (out.count({Vertex(src), Vertex(target)}))
                out[{Vertex(src), Vertex(target)}] /= row_sum;
    }
    return out;
}

} // namespace

TEST_CASE("srw basics") {
    Rng rng = make_rng(1);
    auto g = path_graph(5);
    auto t0 = srw(g, 0, rng);
    CHECK(t0.steps.size() == 1);
    CHECK(t0.steps[0] == g.root());

    RootedGraph edge(2, {{0, 1}}, 0);
    auto t1 = srw(edge, 9, rng);
    for (std::size_t i = 0; i < t1.steps.size(); ++i)
        CHECK(t1.steps[i] == Vertex(i % 2));

    // Uniform thirds at a degree-3 vertex.
    RootedGraph star(4, {{0, 1}, {0, 2}, {0, 3}}, 0);
    std::map<Vertex, int> counts;
    const int reps = 90000;
    for (int i = 0; i < reps; ++i) {
        auto t = srw(star, 1, rng);
        counts[t.steps[1]]++;
    }
    for (Vertex v : {1u, 2u, 3u}) {
        double p = double(counts[v]) / reps;
        CHECK(std::abs(p - 1.0 / 3.0) <= 3.5 * std::sqrt((1.0 / 3) * (2.0 / 3) / reps));
    }
}

TEST_CASE("trace on skeleton reads off hits") {
    WalkTrace t;
    t.steps = {0, 1, 0, 1, 2};
    std::vector<std::uint8_t> vstar = {1, 0, 1};
    auto rec = trace_on_skeleton(t, vstar);
    CHECK(rec.J == std::vector<Vertex>{0, 2});
    CHECK(rec.A == std::vector<std::uint64_t>{0, 4});

    std::vector<std::uint8_t> all = {1, 1, 1};
    auto rec2 = trace_on_skeleton(t, all);
    CHECK(rec2.J == std::vector<Vertex>{0, 1, 0, 1, 2});
    CHECK(rec2.A == std::vector<std::uint64_t>{0, 1, 2, 3, 4});

    // The walk reads back the trace at the recorded clocks.
    for (std::size_t k = 0; k < rec.J.size(); ++k)
        CHECK(t.steps[std::size_t(rec.A[k])] == rec.J[k]);

    // Generalized inverse sandwich: A(S(t)) >= t and A(S(t)-1) <= t.
    for (double x : {0.5, 1.0, 2.5, 3.9}) {
        double s = rec2.S(x);
        std::size_t k = std::size_t(std::ceil(s));
        CHECK(double(rec2.A[k]) >= x - 1e-9);
        if (k > 0) CHECK(double(rec2.A[k - 1]) <= x + 1e-9);
    }
}

TEST_CASE("empty record when the walk misses the set") {
    WalkTrace t;
    t.steps = {0, 1, 0};
    std::vector<std::uint8_t> vstar = {0, 0, 1};
    auto rec = trace_on_skeleton(t, vstar);
    CHECK(rec.J.empty());
}

TEST_CASE("skeleton trace transitions match the diffusion chain") {
    Rng rng = make_rng(717);
    RootedGraph g(0u + 10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 1}, {2, 5},
                            {3, 6}, {5, 7}, {6, 8}, {0, 9}},
                  0);
    auto cuts = find_cut_decomposition(g);
    auto marks = std::vector<Vertex>{5, 6};
    auto sk = build_selected_skeleton(g, cuts, marks);
    REQUIRE(is_asymptotically_tree_like(sk));
    auto tree = expand_star_triangle(g, cuts, sk);

    auto exact = exact_trace_matrix(tree);

    // Empirical transition counts of the walk's V* trace.
    std::vector<std::uint8_t> vstar(g.num_vertices(), 0);
    for (std::uint32_t v = 0; v < tree.n_vstar; ++v) vstar[tree.graph_vertex[v]] = 1;
    std::map<std::pair<Vertex, Vertex>, double> counts;
    std::map<Vertex, double> visits;
    Vertex x = g.root();
    Vertex cur = UINT32_MAX;
    std::size_t transitions = 0;
    while (transitions < 100000) {
        auto nb = g.neighbors(x);
        x = nb[uniform_below(rng, nb.size())];
        if (vstar[x] && x != cur) {
            if (cur != UINT32_MAX) {
                Vertex a = tree.tree_index_of[cur], b = tree.tree_index_of[x];
                counts[{a, b}] += 1;
                visits[a] += 1;
                ++transitions;
            }
            cur = x;
        }
    }

    double tv_max = 0;
    for (std::uint32_t src = 0; src < tree.n_vstar; ++src) {
        if (!visits.count(src)) continue;
        double tv = 0;
        for (std::uint32_t dst = 0; dst < tree.n_vstar; ++dst) {
            double emp = counts.count({src, dst}) ? counts[{src, dst}] / visits[src] : 0.0;
            double ex = exact.count({src, dst}) ? exact[{src, dst}] : 0.0;
            tv += std::abs(emp - ex);
        }
        tv_max = std::max(tv_max, tv / 2.0);
    }
    CHECK(tv_max < 0.02);
}

TEST_CASE("sausage traverse times satisfy the commute identity") {
    Rng rng = make_rng(818);
    int done = 0;
    while (done < 8) {
        auto g = random_bubbly_graph(18 + uniform_below(rng, 18), 0.3, rng);
        auto cuts = find_cut_decomposition(g);
        if (cuts.cut_points.empty()) continue;
        auto marks = sample_marks(g, cuts, 3, MarkLaw::uniform_cut_points, rng);
        auto sk = build_selected_skeleton(g, cuts, marks);
        if (!is_asymptotically_tree_like(sk)) continue;
        auto tree = expand_star_triangle(g, cuts, sk);
        bool any = false;
        for (std::uint32_t v = 0; v < tree.num_vertices(); ++v) {
            if (tree.parent[v] < 0 || !tree.estar[v]) continue;
            auto st = sausage_traverse_times(g, tree, v);
            CHECK(st.up + st.down ==
                  doctest::Approx(2.0 * double(st.edge_count) * st.resistance)
                      .epsilon(1e-9));
            any = true;
        }
        if (any) ++done;
    }
}

TEST_CASE("averaged profile is an unbiased predictor on trees") {
    Rng rng = make_rng(919);
    const int reps = 30;
    std::vector<double> rel;
    for (int r = 0; r < reps; ++r) {
        auto g = gen_gw_tree(2000, OffspringLaw::geometric_half, rng);
        auto cuts = find_cut_decomposition(g);
        auto marks = sample_marks(g, cuts, 4, MarkLaw::uniform_cut_points, rng);
        auto tree = build_skeleton_tree(g, cuts, marks);
        auto tau = expected_sojourns(g, tree);
        std::vector<double> grid = {0.05, 0.1, 0.15, 0.2};
        auto prof = time_change_profiles(g, tree, tau, grid, rng, 40'000'000ULL);
        if (prof.raw.size() == grid.size() && prof.raw.back() > 0)
            rel.push_back((prof.raw.back() - prof.a_hat.back()) / prof.raw.back());
    }
    REQUIRE(rel.size() >= 20);
    double m = 0, s = 0;
    for (double x : rel) m += x;
    m /= double(rel.size());
    for (double x : rel) s += (x - m) * (x - m);
    s = std::sqrt(s / double(rel.size() - 1) / double(rel.size()));
    CHECK(std::abs(m) <= 3.5 * s + 0.02);
}

TEST_CASE("commute-time profile approaches the raw profile with size") {
    Rng rng = make_rng(920);
    std::vector<double> gaps;
    for (std::size_t n : {500u, 2000u, 8000u}) {
        std::vector<double> g_n;
        for (int r = 0; r < 6; ++r) {
            auto g = gen_gw_tree(n, OffspringLaw::geometric_half, rng);
            auto cuts = find_cut_decomposition(g);
            auto marks = sample_marks(g, cuts, 4, MarkLaw::uniform_cut_points, rng);
            auto tree = build_skeleton_tree(g, cuts, marks);
            auto tau = expected_sojourns(g, tree);
            std::vector<double> grid = {0.1, 0.2};
            auto prof = time_change_profiles(g, tree, tau, grid, rng, 60'000'000ULL);
            if (prof.raw.size() == grid.size() && prof.raw.back() > 0)
                g_n.push_back(std::abs(prof.a_tilde.back() / prof.raw.back() - 1.0));
        }
        REQUIRE(!g_n.empty());
        double m = 0;
        for (double x : g_n) m += x;
        gaps.push_back(m / double(g_n.size()));
    }
    CHECK(gaps.back() < gaps.front());
}

TEST_CASE("euclidean displacement exponent on the line is one half") {
    Rng rng = make_rng(262);
    auto g = line_with_locations(100001);
    std::vector<std::uint64_t> grid;
    for (std::uint64_t m = 64; m <= 16384; m *= 2) grid.push_back(m);
    const int reps = 60;
    std::vector<DisplacementProfile> disp(reps);
    for (int r = 0; r < reps; ++r) disp[r] = displacement_profile(g, grid, rng);
    std::vector<std::vector<double>> rets;
    auto stats = exponent_summary(disp, rets, grid, 64, 16384, 0, 0, 0, rng);
    CHECK(std::abs(stats.euclidean_slope - 0.5) < 0.03);
}

TEST_CASE("loglog fit recovers exact power laws") {
    std::vector<double> x, y;
    for (int i = 1; i <= 20; ++i) {
        x.push_back(double(i) * 7);
        y.push_back(3.0 * std::pow(double(i) * 7, 1.75));
    }
    auto f = loglog_fit(x, y);
    CHECK(f.slope == doctest::Approx(1.75).epsilon(1e-9));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-9));
}
