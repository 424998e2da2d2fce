#include "critwalk/hitting.hpp"
#include "critwalk/linsolve.hpp"
#include "critwalk/resistance.hpp"

#include <cmath>
#include <stdexcept>

namespace critwalk {

HittingMoments hitting_time_moments(const RootedGraph& g, Vertex x, Vertex y,
                                    int max_order) {
    if (x == y) throw GraphError("hitting_time_moments: x == y");
    if (max_order < 1 || max_order > 4) throw GraphError("max_order in 1..4");

    std::vector<std::uint8_t> interior(g.num_vertices(), 1);
    interior[y] = 0;
    AbsorbedSolver solver(g, interior);

    const std::size_t n = g.num_vertices();
    std::vector<double> zero_bd(n, 0.0);

    // m[0] == E[T^0] == 1 everywhere (including the absorbing target).
    std::vector<std::vector<double>> m(std::size_t(max_order) + 1);
    m[0].assign(n, 1.0);

    static const double binom[5][5] = {
        {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0},
        {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};

    for (int k = 1; k <= max_order; ++k) {
        std::vector<double> rhs(n, 0.0);
        for (Vertex v = 0; v < n; ++v) {
            if (v == y) continue;
            double acc = 0.0;
            for (Vertex w : g.neighbors(v)) {
                double inner = 0.0;
                for (int j = 0; j < k; ++j) inner += binom[k][j] * m[j][w];
                acc += inner;
            }
            rhs[v] = acc;
        }
        m[k] = solver.solve(zero_bd, rhs);
        m[k][y] = 0.0;
    }

    HittingMoments out;
    out.source = x;
    out.target = y;
    out.max_order = max_order;
    for (int k = 1; k <= max_order; ++k) out.moments[k - 1] = m[k][x];
    return out;
}

std::int32_t graph_diameter(const RootedGraph& g) {
    std::int32_t diam = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        auto d = g.bfs_distances(v);
        for (auto x : d) diam = std::max(diam, x);
    }
    return diam;
}

VarianceBoundCheck verify_variance_bound(const RootedGraph& g, Vertex x, Vertex y) {
    auto mxy = hitting_time_moments(g, x, y, 2);
    auto myx = hitting_time_moments(g, y, x, 2);
    VarianceBoundCheck out;
    out.lhs = mxy.moments[1] + myx.moments[1];
    double e = double(g.num_edges());
    out.rhs = 16.0 * e * e * double(graph_diameter(g)) * effective_resistance(g, x, y);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
    return out;
}

double IncrementLaw::m2() const {
    switch (kind) {
        case Kind::rademacher: return 1.0;
        case Kind::zero: return 0.0;
        case Kind::uniform_sym: return param * param / 3.0;
        case Kind::pareto_sym:
            if (param <= 2.0) throw std::invalid_argument("infinite second moment");
            return param / (param - 2.0);
    }
    return 0.0;
}

double IncrementLaw::m4() const {
    switch (kind) {
        case Kind::rademacher: return 1.0;
        case Kind::zero: return 0.0;
        case Kind::uniform_sym: return param * param * param * param / 5.0;
        case Kind::pareto_sym:
            if (param <= 4.0)
                throw std::invalid_argument("heavy-tailed increment law rejected: "
                                            "fourth moment is infinite");
            return param / (param - 4.0);
    }
    return 0.0;
}

double IncrementLaw::sample(Rng& rng) const {
    switch (kind) {
        case Kind::rademacher: return (rng() & 1ULL) ? 1.0 : -1.0;
        case Kind::zero: return 0.0;
        case Kind::uniform_sym:
            return std::uniform_real_distribution<double>(-param, param)(rng);
        case Kind::pareto_sym: {
            double u = uniform01(rng);
            double mag = std::pow(1.0 - u, -1.0 / param);
            return (rng() & 1ULL) ? mag : -mag;
        }
    }
    return 0.0;
}

double StoppingRule::mean() const {
    if (kind == Kind::fixed) return double(n);
    double m = 0.0, q = 1.0;
    for (std::uint64_t k = 1; k < cap; ++k) {
        m += double(k) * q * p;
        q *= (1.0 - p);
    }
    m += double(cap) * q;  // tail mass collapses onto the cap
    return m;
}

double StoppingRule::second_moment() const {
    if (kind == Kind::fixed) return double(n) * double(n);
    double m = 0.0, q = 1.0;
    for (std::uint64_t k = 1; k < cap; ++k) {
        m += double(k) * double(k) * q * p;
        q *= (1.0 - p);
    }
    m += double(cap) * double(cap) * q;
    return m;
}

std::uint64_t StoppingRule::sample(Rng& rng) const {
    if (kind == Kind::fixed) return n;
    std::uint64_t k = 1;
    while (k < cap && uniform01(rng) >= p) ++k;
    return k;
}

FourthMomentCheck verify_fourth_moment_bound(const IncrementLaw& law,
                                             const StoppingRule& rule,
                                             std::uint64_t trials, Rng& rng) {
    FourthMomentCheck out;
    out.m2 = law.m2();
    out.m4 = law.m4();  // throws for heavy tails
    out.e_tau = rule.mean();
    out.e_tau2 = rule.second_moment();
    out.c_used = kFourthMomentConstant;
    out.rhs = out.c_used * (out.m2 * out.m2 * out.e_tau2 + out.m4 * out.e_tau);

    double acc = 0.0, acc2 = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::uint64_t tau = rule.sample(rng);
        double s = 0.0;
        for (std::uint64_t i = 0; i < tau; ++i) s += law.sample(rng);
        double s4 = s * s * s * s;
        acc += s4;
        acc2 += s4 * s4;
    }
    out.lhs_estimate = acc / double(trials);
    double var = acc2 / double(trials) - out.lhs_estimate * out.lhs_estimate;
    out.lhs_stderr = std::sqrt(std::max(var, 0.0) / double(trials));
    out.holds = out.lhs_estimate <= out.rhs + 3.0 * out.lhs_stderr;
    return out;
}

} // namespace critwalk
