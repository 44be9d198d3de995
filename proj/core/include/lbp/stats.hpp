#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

namespace lbp::stats {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Unbiased sample variance.
inline double variance(std::span<const double> xs) {
    const size_t n = xs.size();
    if (n < 2) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(n - 1);
}

inline double std_dev(std::span<const double> xs) { return std::sqrt(variance(xs)); }

inline double standard_error(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

// z-score of the sample mean against a hypothesised value.
inline double z_score(std::span<const double> xs, double hypothesis) {
    const double se = standard_error(xs);
    if (se == 0.0) return mean(xs) == hypothesis ? 0.0 : INFINITY;
    return (mean(xs) - hypothesis) / se;
}

// Two-sample z statistic for a difference of means.
inline double two_sample_z(std::span<const double> a, std::span<const double> b) {
    const double se = std::sqrt(variance(a) / static_cast<double>(a.size()) +
                                variance(b) / static_cast<double>(b.size()));
    if (se == 0.0) return 0.0;
    return (mean(a) - mean(b)) / se;
}

// Least-squares slope and intercept of y against x.
inline std::pair<double, double> linear_fit(std::span<const double> x,
                                            std::span<const double> y) {
    const size_t n = x.size() < y.size() ? x.size() : y.size();
    if (n < 2) return {0.0, n == 1 ? y[0] : 0.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double d = static_cast<double>(n) * sxx - sx * sx;
    if (d == 0.0) return {0.0, sy / static_cast<double>(n)};
    const double slope = (static_cast<double>(n) * sxy - sx * sy) / d;
    return {slope, (sy - slope * sx) / static_cast<double>(n)};
}

// Pearson chi-square statistic against expected counts.
inline double chi_square(std::span<const double> observed,
                         std::span<const double> expected) {
    double s = 0.0;
    const size_t n = observed.size() < expected.size() ? observed.size() : expected.size();
    for (size_t i = 0; i < n; ++i) {
        if (expected[i] <= 0.0) continue;
        const double d = observed[i] - expected[i];
        s += d * d / expected[i];
    }
    return s;
}

}  // namespace lbp::stats
