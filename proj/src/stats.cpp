#include "critwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace critwalk {

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    KsResult r;
    if (a.empty() || b.empty()) return r;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0;
    std::size_t i = 0, j = 0;
    const double na = double(a.size()), nb = double(b.size());
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    }
    r.statistic = d;
    double ne = std::sqrt(na * nb / (na + nb));
    double lambda = (ne + 0.12 + 0.11 / ne) * d;
    if (lambda < 0.3) {  // the alternating series is useless here; Q ~ 1
        r.p_value = 1.0;
        return r;
    }
    double p = 0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::abs(term) < 1e-12) break;
    }
    r.p_value = std::clamp(p, 0.0, 1.0);
    return r;
}

Chi2Result chi2_two_sample(const std::vector<std::uint64_t>& a,
                           const std::vector<std::uint64_t>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("category count mismatch");
    Chi2Result r;
    double ta = 0, tb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ta += double(a[i]);
        tb += double(b[i]);
    }
    if (ta == 0 || tb == 0) return r;
    const double total = ta + tb;
    double chi2 = 0;
    std::size_t dof = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = double(a[i]) + double(b[i]);
        if (row == 0) continue;
        double ea = row * ta / total, eb = row * tb / total;
        chi2 += (double(a[i]) - ea) * (double(a[i]) - ea) / ea;
        chi2 += (double(b[i]) - eb) * (double(b[i]) - eb) / eb;
        ++dof;
    }
    if (dof <= 1) return r;
    r.statistic = chi2;
    r.dof = dof - 1;
    r.p_value = gamma_q(double(r.dof) / 2.0, chi2 / 2.0);
    return r;
}

KendallResult kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
    KendallResult r;
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return r;
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = (x[j] - x[i]) * (y[j] - y[i]);
            if (s > 0)
                ++concordant;
            else if (s < 0)
                ++discordant;
        }
    double denom = 0.5 * double(n) * double(n - 1);
    r.tau = double(concordant - discordant) / denom;
    double var = double(2 * (2 * n + 5)) / double(9 * n * (n - 1));
    double z = r.tau / std::sqrt(var);
    r.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
    return r;
}

double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("quantile of empty sample");
    std::sort(xs.begin(), xs.end());
    double pos = q * double(xs.size() - 1);
    std::size_t lo = std::size_t(pos);
    std::size_t hi = std::min(lo + 1, xs.size() - 1);
    double frac = pos - double(lo);
    return (1 - frac) * xs[lo] + frac * xs[hi];
}

double mean_of(const std::vector<double>& xs) {
    double s = 0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / double(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0;
    double m = mean_of(xs), s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / double(xs.size() - 1));
}

namespace {

// Lanczos-free continued fraction / series for the regularized gamma.
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a, term = sum;
    for (int k = 1; k < 500; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int k = 1; k < 500; ++k) {
        double an = -double(k) * (double(k) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q domain");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
    return std::clamp(gamma_q_cf(a, x), 0.0, 1.0);
}

double bootstrap_stderr(const std::vector<double>& per_replica,
                        std::size_t resamples, Rng& rng) {
    if (per_replica.size() < 2 || resamples < 2) return 0;
    std::vector<double> means(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        double s = 0;
        for (std::size_t i = 0; i < per_replica.size(); ++i)
            s += per_replica[uniform_below(rng, per_replica.size())];
        means[b] = s / double(per_replica.size());
    }
    return stddev_of(means);
}

} // namespace critwalk
