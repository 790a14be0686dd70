#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "glp/errors.hpp"

namespace glp {

namespace detail {

// Lower regularized incomplete gamma P(a, x) by power series; converges
// fast for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, x) by modified Lentz continued
// fraction; converges fast for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double gamma_q(double a, double x) {
    if (a <= 0.0) throw NumericError("gamma_q: shape must be positive");
    if (x < 0.0) throw NumericError("gamma_q: argument must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

inline double gamma_p(double a, double x) { return 1.0 - gamma_q(a, x); }

// Upper-tail probability of a chi-squared variable with df degrees of freedom.
inline double chi_squared_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

inline double chi_squared_cdf(double x, double df) {
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * df, 0.5 * x);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / 1.4142135623730950488016887242097);
}

// Kolmogorov distribution tail Q(t) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 t^2),
// the asymptotic law of sqrt(N) * D_N.
inline double kolmogorov_sf(double t) {
    if (t <= 0.05) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * t * t);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

// One-sample KS test of `sample` against the continuous CDF `cdf`; returns
// the asymptotic p-value of sup-norm distance. Fine at the n ~ 2000 scale
// used by the null-calibration checks.
template <typename Cdf>
double ks_test_pvalue(std::vector<double> sample, Cdf cdf) {
    const std::size_t n = sample.size();
    if (n == 0) throw NumericError("ks_test_pvalue: empty sample");
    std::sort(sample.begin(), sample.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d);
}

// Holm step-down: flags[i] is true when p[i] is rejected at family level
// alpha. Rejects in ascending p order while p_(r) <= alpha / (m - r).
inline std::vector<bool> holm_rejections(const std::vector<double>& p, double alpha) {
    const std::size_t m = p.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    std::vector<bool> flags(m, false);
    for (std::size_t r = 0; r < m; ++r) {
        if (p[order[r]] <= alpha / static_cast<double>(m - r)) {
            flags[order[r]] = true;
        } else {
            break;
        }
    }
    return flags;
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw NumericError("median: empty input");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw NumericError("quantile: empty input");
    std::sort(v.begin(), v.end());
    // linear interpolation between order statistics, the common type-7 rule
    const double h = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace glp
