#pragma once

#include "critwalk/graph.hpp"
#include "critwalk/rng.hpp"
#include "critwalk/skeleton.hpp"

#include <vector>

namespace critwalk {

// Uniform nearest-neighbor walk from the root.
struct WalkTrace {
    std::vector<Vertex> steps;  // X_0 .. X_m
};
WalkTrace srw(const RootedGraph& g, std::size_t steps, Rng& rng);

// Trace of a walk on a vertex set: successive distinct set vertices hit and
// the walk clock at those hits.
struct TraceRecord {
    std::vector<Vertex> J;
    std::vector<std::uint64_t> A;

    // Generalized inverse S(t) = min{ k : A(k) >= t }, linearly interpolated.
    double S(double t) const;
};
TraceRecord trace_on_skeleton(const WalkTrace& trace, const std::vector<std::uint8_t>& vstar);

// Expected time for the walk on g started at a V* vertex to reach another V*
// vertex; exact absorbed-chain solve on the adjacent sausages.
std::vector<double> expected_sojourns(const RootedGraph& g, const SkeletonTree& tree);

// Expected one-way traverse times across the sausage of an E* edge (walk
// restricted to the sausage subgraph), plus its data; the pair satisfies
// E[up] + E[down] = 2 |E(sausage)| R_eff(e).
struct SausageTraverse {
    double up = 0;      // parent -> child
    double down = 0;    // child -> parent
    std::int64_t edge_count = 0;
    double resistance = 0;
};
SausageTraverse sausage_traverse_times(const RootedGraph& g, const SkeletonTree& tree,
                                       std::uint32_t child_tv);

// Raw, averaged and commute-time profiles of the walk clock against the
// intrinsic diffusion clock reconstructed from edge local times.
struct TimeChangeProfile {
    std::vector<double> t_grid;
    std::vector<double> raw;      // n^{-3/2} A(m(t))
    std::vector<double> a_hat;    // averaged profile, same scaling
    std::vector<double> a_tilde;  // commute-time profile, same scaling
    double nu_hat = 0;            // least-squares slope of raw over the fit window
    double nu_cv = 0;             // coefficient of variation of raw(t)/t on the window
    std::uint64_t walk_steps = 0;
};

TimeChangeProfile time_change_profiles(const RootedGraph& g, const SkeletonTree& tree,
                                       const std::vector<double>& tau_means,
                                       const std::vector<double>& t_grid, Rng& rng,
                                       std::uint64_t max_steps);

// One-walk displacement profiles at checkpoint times.
struct DisplacementProfile {
    std::vector<double> intrinsic;  // d_G(root, X_m)
    std::vector<double> euclidean;  // |X_m - X_0|_1, 0 when no locations
};
DisplacementProfile displacement_profile(const RootedGraph& g,
                                         const std::vector<std::uint64_t>& m_grid, Rng& rng);

// Window estimates of the return probability P[X_{2k} = X_0]: for each grid
// point, the fraction of even times in (m_grid[i-1], m_grid[i]] spent at the
// root.
std::vector<double> return_probability_profile(const RootedGraph& g,
                                               const std::vector<std::uint64_t>& m_grid,
                                               Rng& rng);

// Least-squares slope of log(y) against log(x), ignoring non-positive values.
struct LogLogFit {
    double slope = 0, intercept = 0;
    std::size_t points_used = 0;
};
LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// Ensemble summary: log-log slopes of the mean displacement and
// return-probability profiles with bootstrap standard errors.
struct ExponentStats {
    double intrinsic_slope = 0, intrinsic_se = 0;
    double euclidean_slope = 0, euclidean_se = 0;
    double return_slope = 0, return_se = 0;
    std::vector<double> m_values;       // displacement checkpoints used
    std::vector<double> mean_intrinsic;
    std::vector<double> mean_euclidean;
    std::vector<double> ret_m_values;   // window midpoints used
    std::vector<double> mean_return;
};

ExponentStats exponent_summary(const std::vector<DisplacementProfile>& displacement,
                               const std::vector<std::vector<double>>& returns,
                               const std::vector<std::uint64_t>& m_grid,
                               double fit_lo, double fit_hi, double ret_lo, double ret_hi,
                               std::size_t bootstrap_reps, Rng& rng);

} // namespace critwalk
