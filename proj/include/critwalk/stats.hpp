#pragma once

#include "critwalk/rng.hpp"

#include <cstddef>
#include <vector>

namespace critwalk {

// Two-sample Kolmogorov-Smirnov test (asymptotic p-value).
struct KsResult {
    double statistic = 0;
    double p_value = 1;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Chi-square homogeneity test for two count vectors over the same categories.
struct Chi2Result {
    double statistic = 0;
    double p_value = 1;
    std::size_t dof = 0;
};
Chi2Result chi2_two_sample(const std::vector<std::uint64_t>& a,
                           const std::vector<std::uint64_t>& b);

// Kendall rank correlation with normal-approximation p-value (two-sided).
struct KendallResult {
    double tau = 0;
    double p_value = 1;
};
KendallResult kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

double quantile(std::vector<double> xs, double q);
double mean_of(const std::vector<double>& xs);
double stddev_of(const std::vector<double>& xs);

// Regularized upper incomplete gamma Q(a, x); chi-square tail probability is
// Q(dof/2, x/2).
double gamma_q(double a, double x);

// Bootstrap standard error of a statistic over replica rows.
double bootstrap_stderr(const std::vector<double>& per_replica,
                        std::size_t resamples, Rng& rng);

} // namespace critwalk
