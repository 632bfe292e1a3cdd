#ifndef PKTSEG_METRICS_STATS_HPP
#define PKTSEG_METRICS_STATS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pktseg/errors.hpp"

namespace pktseg::metrics {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw Error("mean of empty sample");
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Population standard deviation (divisor N).
inline double stddev_population(std::span<const double> xs) {
    const double m = mean(xs);
    double s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

inline double median(std::span<const double> xs) {
    if (xs.empty()) throw Error("median of empty sample");
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Percentile by linear interpolation between order statistics:
/// rank h = q/100*(n-1), value = v[floor(h)] + frac(h)*(v[floor(h)+1] - v[floor(h)]).
inline double percentile_linear(std::vector<double> v, double q) {
    if (v.empty()) throw Error("percentile of empty sample");
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    const double h = q / 100.0 * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = h - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

}  // namespace pktseg::metrics

#endif  // PKTSEG_METRICS_STATS_HPP
