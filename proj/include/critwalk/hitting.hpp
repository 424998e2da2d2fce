#pragma once

#include "critwalk/graph.hpp"
#include "critwalk/rng.hpp"

#include <array>

namespace critwalk {

// Exact hitting-time moments E_x[T_y^k] for the simple random walk, from the
// recursive absorbed-chain systems (order k uses the lower orders).
struct HittingMoments {
    Vertex source = 0, target = 0;
    // moments[k-1] = E_x[T_y^k], k = 1..max_order
    std::array<double, 4> moments{};
    int max_order = 4;
};

HittingMoments hitting_time_moments(const RootedGraph& g, Vertex x, Vertex y,
                                    int max_order = 4);

// Graph diameter in the intrinsic metric (exact, BFS from every vertex).
std::int32_t graph_diameter(const RootedGraph& g);

// Second-moment bound for the commute time:
//   E_x[T_y^2] + E_y[T_x^2] <= 16 |E|^2 diam(G) R_eff(x,y).
struct VarianceBoundCheck {
    double lhs = 0, rhs = 0;
    bool holds = false;
};
VarianceBoundCheck verify_variance_bound(const RootedGraph& g, Vertex x, Vertex y);

// Mean-zero increment laws with finite fourth moment.
struct IncrementLaw {
    enum class Kind { rademacher, zero, uniform_sym, pareto_sym } kind = Kind::rademacher;
    double param = 1.0;  // half-width for uniform_sym, tail index for pareto_sym

    double m2() const;
    double m4() const;  // throws on infinite fourth moment
    double sample(Rng& rng) const;
};

// Stopping rules measurable w.r.t. the partial-sum filtration (these two do
// not look at the increments at all, which is the easy sufficient case).
struct StoppingRule {
    enum class Kind { fixed, geometric_capped } kind = Kind::fixed;
    std::uint64_t n = 1;    // fixed value
    double p = 0.5;         // geometric success probability
    std::uint64_t cap = 100;

    double mean() const;
    double second_moment() const;
    std::uint64_t sample(Rng& rng) const;
};

// Monte Carlo check of E[(sum_{i<=tau} X_i)^4] <= C (m2^2 E[tau^2] + m4 E[tau])
// with C = 148 (constant extracted from the optional-stopping proof chain;
// reported, not ground truth).
struct FourthMomentCheck {
    double lhs_estimate = 0;
    double lhs_stderr = 0;
    double rhs = 0;
    double c_used = 148.0;
    bool holds = false;
    double e_tau = 0, e_tau2 = 0, m2 = 0, m4 = 0;
};
FourthMomentCheck verify_fourth_moment_bound(const IncrementLaw& law,
                                             const StoppingRule& rule,
                                             std::uint64_t trials, Rng& rng);

inline constexpr double kFourthMomentConstant = 148.0;

} // namespace critwalk
