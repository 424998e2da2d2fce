#include "critwalk/walks.hpp"
#include "critwalk/linsolve.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace critwalk {

WalkTrace srw(const RootedGraph& g, std::size_t steps, Rng& rng) {
    WalkTrace t;
    t.steps.reserve(steps + 1);
    Vertex x = g.root();
    t.steps.push_back(x);
    for (std::size_t i = 0; i < steps; ++i) {
        auto nb = g.neighbors(x);
        x = nb[uniform_below(rng, nb.size())];
        t.steps.push_back(x);
    }
    return t;
}

TraceRecord trace_on_skeleton(const WalkTrace& trace, const std::vector<std::uint8_t>& vstar) {
    TraceRecord r;
    Vertex cur = UINT32_MAX;
    for (std::size_t m = 0; m < trace.steps.size(); ++m) {
        Vertex x = trace.steps[m];
        if (vstar[x] && x != cur) {
            r.J.push_back(x);
            r.A.push_back(m);
            cur = x;
        }
    }
    return r;
}

double TraceRecord::S(double t) const {
    if (A.empty()) return 0;
    if (t <= double(A.front())) return 0;
    if (t >= double(A.back())) return double(A.size() - 1);
    std::size_t k = 1;
    while (k < A.size() && double(A[k]) < t) ++k;
    double a0 = double(A[k - 1]), a1 = double(A[k]);
    return double(k - 1) + (t - a0) / (a1 - a0);
}

namespace {

// Expected time to reach `boundary` from `start`, walking on g restricted to
// the region reachable through non-boundary vertices. Local sparse solve.
double expected_exit_time(const RootedGraph& g, Vertex start,
                          const std::vector<std::uint8_t>& is_boundary) {
    std::vector<Vertex> region = {start};
    std::vector<std::int32_t> local(g.num_vertices(), -1);
    local[start] = 0;
    for (std::size_t h = 0; h < region.size(); ++h) {
        for (Vertex w : g.neighbors(region[h])) {
            if (local[w] >= 0 || is_boundary[w]) continue;
            local[w] = std::int32_t(region.size());
            region.push_back(w);
        }
    }
    const int k = int(region.size());
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs(k);
    for (int i = 0; i < k; ++i) {
        Vertex v = region[std::size_t(i)];
        trip.emplace_back(i, i, double(g.degree(v)));
        for (Vertex w : g.neighbors(v))
            if (local[w] >= 0) trip.emplace_back(i, local[w], -1.0);
        rhs[i] = double(g.degree(v));
    }
    Eigen::SparseMatrix<double> L(k, k);
    L.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L);
    if (ldlt.info() != Eigen::Success)
        throw SolveError("sojourn solve failed");
    Eigen::VectorXd m = ldlt.solve(rhs);
    return m[0];
}

} // namespace

std::vector<double> expected_sojourns(const RootedGraph& g, const SkeletonTree& tree) {
    std::vector<std::uint8_t> vstar(g.num_vertices(), 0);
    for (std::uint32_t t = 0; t < tree.n_vstar; ++t) vstar[tree.graph_vertex[t]] = 1;

    std::vector<double> tau(tree.num_vertices(), 0.0);
    for (std::uint32_t t = 0; t < tree.n_vstar; ++t) {
        Vertex x = tree.graph_vertex[t];
        vstar[x] = 0;  // the start vertex is interior
        tau[t] = expected_exit_time(g, x, vstar);
        vstar[x] = 1;
    }
    return tau;
}

SausageTraverse sausage_traverse_times(const RootedGraph& g, const SkeletonTree& tree,
                                       std::uint32_t child_tv) {
    if (tree.parent[child_tv] < 0 || !tree.estar[child_tv])
        throw SkeletonError("not an E* edge");
    std::uint32_t parent_tv = std::uint32_t(tree.parent[child_tv]);
    Vertex gx = tree.graph_vertex[parent_tv], gy = tree.graph_vertex[child_tv];

    std::vector<std::uint8_t> flag(g.num_vertices(), 0);
    for (Vertex u = 0; u < g.num_vertices(); ++u)
        if (tree.pi_tree[u] == parent_tv && u != gx) flag[u] = 1;

    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<std::int32_t> local(g.num_vertices(), -1);
    std::vector<Vertex> verts;
    auto touch = [&](Vertex v) {
        if (local[v] < 0) {
            local[v] = std::int32_t(verts.size());
            verts.push_back(v);
        }
        return Vertex(local[v]);
    };
    for (const auto& [u, v] : g.edges())
        if (flag[u] || flag[v]) edges.emplace_back(touch(u), touch(v));

    SausageTraverse out;
    out.edge_count = std::int64_t(edges.size());
    out.resistance = tree.res_to_parent[child_tv];

    RootedGraph H(verts.size(), std::move(edges), Vertex(local[gx]));
    Vertex hx = Vertex(local[gx]), hy = Vertex(local[gy]);

    std::vector<std::uint8_t> bd(H.num_vertices(), 0);
    bd[hy] = 1;
    out.up = expected_exit_time(H, hx, bd);
    bd[hy] = 0;
    bd[hx] = 1;
    out.down = expected_exit_time(H, hy, bd);
    return out;
}

TimeChangeProfile time_change_profiles(const RootedGraph& g, const SkeletonTree& tree,
                                       const std::vector<double>& tau_means,
                                       const std::vector<double>& t_grid, Rng& rng,
                                       std::uint64_t max_steps) {
    if (t_grid.empty()) throw std::invalid_argument("empty t grid");
    const double n_scale = std::pow(double(g.num_vertices()), 1.5);
    const double sqrt_n = std::sqrt(double(g.num_vertices()));
    const double total_res = tree.total_res_length();

    // Per E*-edge data, indexed by the child tree vertex.
    const std::size_t nt = tree.num_vertices();
    std::vector<double> clock_inc(nt, 0.0), tilde_inc(nt, 0.0);
    std::vector<std::uint8_t> parity(nt, 0);
    for (std::uint32_t v = 0; v < nt; ++v) {
        if (tree.parent[v] < 0 || !tree.estar[v]) continue;
        double r = tree.res_to_parent[v];
        clock_inc[v] = (r / total_res) * (r / sqrt_n);
        tilde_inc[v] = 2.0 * r * double(tree.sausage_edges[std::uint32_t(tree.parent[v])]);
    }

    TimeChangeProfile out;
    std::uint64_t step = 0, a0 = 0;
    double t_hat = 0, acc_hat = 0, acc_tilde = 0;
    std::uint32_t cur = UINT32_MAX;  // tree index of the last V* vertex hit
    std::size_t gi = 0;
    Vertex x = g.root();

    auto record_until = [&](double t_now, std::uint64_t a_now) {
        while (gi < t_grid.size() && t_now >= t_grid[gi]) {
            out.t_grid.push_back(t_grid[gi]);
            out.raw.push_back(double(a_now - a0) / n_scale);
            out.a_hat.push_back(acc_hat / n_scale);
            out.a_tilde.push_back(acc_tilde / n_scale);
            ++gi;
        }
    };

    while (gi < t_grid.size() && step < max_steps) {
        std::uint32_t tv = tree.tree_index_of[x];
        if (tv != UINT32_MAX && tv != cur) {
            if (cur == UINT32_MAX) {
                a0 = step;  // clock starts at the first skeleton hit
            } else {
                acc_hat += tau_means[cur];
                std::uint32_t child = UINT32_MAX;
                if (tree.parent[tv] == std::int32_t(cur))
                    child = tv;
                else if (tree.parent[cur] == std::int32_t(tv))
                    child = cur;
                if (child != UINT32_MAX && tree.estar[child]) {
                    t_hat += clock_inc[child];
                    parity[child] ^= 1;
                    if (parity[child]) acc_tilde += tilde_inc[child];
                    record_until(t_hat, step);
                }
            }
            cur = tv;
        }
        auto nb = g.neighbors(x);
        x = nb[uniform_below(rng, nb.size())];
        ++step;
    }
    out.walk_steps = step;

    // Slope and stability over the grid, first tenth discarded as transient.
    std::size_t lo = out.t_grid.size() / 10;
    double sxx = 0, sxy = 0, mean_ratio = 0, m2 = 0;
    std::size_t k = 0;
    for (std::size_t i = lo; i < out.t_grid.size(); ++i) {
        double tx = out.t_grid[i], y = out.raw[i];
        sxx += tx * tx;
        sxy += tx * y;
        double ratio = y / tx;
        ++k;
        double d = ratio - mean_ratio;
        mean_ratio += d / double(k);
        m2 += d * (ratio - mean_ratio);
    }
    out.nu_hat = sxx > 0 ? sxy / sxx : 0;
    out.nu_cv = (k > 1 && mean_ratio != 0)
                    ? std::sqrt(m2 / double(k - 1)) / std::abs(mean_ratio)
                    : 0;
    return out;
}

DisplacementProfile displacement_profile(const RootedGraph& g,
                                         const std::vector<std::uint64_t>& m_grid, Rng& rng) {
    DisplacementProfile out;
    out.intrinsic.resize(m_grid.size(), 0.0);
    out.euclidean.resize(m_grid.size(), 0.0);
    auto dist = g.bfs_distances(g.root());

    Vertex x = g.root();
    std::uint64_t step = 0;
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        while (step < m_grid[i]) {
            auto nb = g.neighbors(x);
            x = nb[uniform_below(rng, nb.size())];
            ++step;
        }
        out.intrinsic[i] = double(dist[x]);
        out.euclidean[i] = g.has_locations() ? double(g.lattice_distance(g.root(), x)) : 0.0;
    }
    return out;
}

std::vector<double> return_probability_profile(const RootedGraph& g,
                                               const std::vector<std::uint64_t>& m_grid,
                                               Rng& rng) {
    std::vector<double> out(m_grid.size(), 0.0);
    std::vector<std::uint64_t> hits(m_grid.size(), 0), evens(m_grid.size(), 0);
    Vertex x = g.root();
    const Vertex origin = g.root();
    std::uint64_t step = 0;
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        std::uint64_t lo = (i == 0) ? 0 : m_grid[i - 1];
        while (step < m_grid[i]) {
            auto nb = g.neighbors(x);
            x = nb[uniform_below(rng, nb.size())];
            ++step;
            if (step > lo && (step & 1ULL) == 0) {
                ++evens[i];
                if (x == origin) ++hits[i];
            }
        }
        out[i] = evens[i] ? double(hits[i]) / double(evens[i]) : 0.0;
    }
    return out;
}

ExponentStats exponent_summary(const std::vector<DisplacementProfile>& displacement,
                               const std::vector<std::vector<double>>& returns,
                               const std::vector<std::uint64_t>& m_grid,
                               double fit_lo, double fit_hi, double ret_lo, double ret_hi,
                               std::size_t bootstrap_reps, Rng& rng) {
    ExponentStats out;
    const std::size_t G = m_grid.size();
    const std::size_t R = displacement.size();

    auto mean_profile = [&](auto&& value_of, const std::vector<std::size_t>& idx) {
        std::vector<double> mean(G, 0.0);
        for (std::size_t r : idx)
            for (std::size_t i = 0; i < G; ++i) mean[i] += value_of(r, i);
        for (auto& v : mean) v /= double(idx.size());
        return mean;
    };

    std::vector<std::size_t> all(R);
    for (std::size_t r = 0; r < R; ++r) all[r] = r;

    auto fit_window = [&](const std::vector<double>& xs, const std::vector<double>& ys,
                          double lo, double hi) {
        std::vector<double> fx, fy;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (xs[i] >= lo && xs[i] <= hi) {
                fx.push_back(xs[i]);
                fy.push_back(ys[i]);
            }
        return loglog_fit(fx, fy).slope;
    };

    std::vector<double> mx(G);
    for (std::size_t i = 0; i < G; ++i) mx[i] = double(m_grid[i]);
    std::vector<double> ret_x(G, 0.0);
    for (std::size_t i = 1; i < G; ++i)
        ret_x[i] = std::sqrt(double(m_grid[i - 1]) * double(m_grid[i]));

    auto intr_of = [&](std::size_t r, std::size_t i) { return displacement[r].intrinsic[i]; };
    auto eucl_of = [&](std::size_t r, std::size_t i) { return displacement[r].euclidean[i]; };
    auto ret_of = [&](std::size_t r, std::size_t i) { return returns[r][i]; };

    out.m_values = mx;
    out.mean_intrinsic = mean_profile(intr_of, all);
    out.mean_euclidean = mean_profile(eucl_of, all);
    out.intrinsic_slope = fit_window(mx, out.mean_intrinsic, fit_lo, fit_hi);
    out.euclidean_slope = fit_window(mx, out.mean_euclidean, fit_lo, fit_hi);
    if (!returns.empty()) {
        out.ret_m_values = ret_x;
        out.mean_return = mean_profile(ret_of, all);
        out.return_slope = fit_window(ret_x, out.mean_return, ret_lo, ret_hi);
    }

    if (bootstrap_reps >= 2 && R >= 2) {
        std::vector<double> si, se, sr;
        std::vector<std::size_t> idx(R);
        for (std::size_t b = 0; b < bootstrap_reps; ++b) {
            for (auto& k : idx) k = std::size_t(uniform_below(rng, R));
            si.push_back(fit_window(mx, mean_profile(intr_of, idx), fit_lo, fit_hi));
            se.push_back(fit_window(mx, mean_profile(eucl_of, idx), fit_lo, fit_hi));
            if (!returns.empty())
                sr.push_back(fit_window(ret_x, mean_profile(ret_of, idx), ret_lo, ret_hi));
        }
        auto sd = [](const std::vector<double>& v) {
            if (v.size() < 2) return 0.0;
            double m = 0;
            for (double x : v) m += x;
            m /= double(v.size());
            double s = 0;
            for (double x : v) s += (x - m) * (x - m);
            return std::sqrt(s / double(v.size() - 1));
        };
        out.intrinsic_se = sd(si);
        out.euclidean_se = sd(se);
        out.return_se = sd(sr);
    }
    return out;
}

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    LogLogFit f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] <= 0 || y[i] <= 0) continue;
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++k;
    }
    f.points_used = k;
    if (k >= 2) {
        double denom = double(k) * sxx - sx * sx;
        if (denom != 0) {
            f.slope = (double(k) * sxy - sx * sy) / denom;
            f.intercept = (sy - f.slope * sx) / double(k);
        }
    }
    return f;
}

} // namespace critwalk
