#ifndef PKTSEG_METRICS_WILCOXON_HPP
#define PKTSEG_METRICS_WILCOXON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "pktseg/errors.hpp"

// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences are
// discarded; tied |differences| receive average ranks. The reported statistic
// is W = min(W+, W-). For n <= 12 the p-value is exact (full sign-pattern
// distribution); above that a normal approximation with tie and continuity
// corrections is used.

namespace pktseg::metrics {

struct WilcoxonResult {
    double statistic = 0.0;  // min(W+, W-)
    double p_value = 1.0;
    int n_used = 0;          // pairs after dropping zero differences
    bool exact = false;
};

namespace detail {

/// Average ranks of |d| values, scaled by 2 so they are exact integers
/// (a run of ties at integer ranks r..r+t-1 has doubled average rank
/// (first+last)). Input must be sorted ascending.
inline std::vector<std::int64_t> doubled_ranks_sorted(const std::vector<double>& sorted_abs) {
    const std::size_t n = sorted_abs.size();
    std::vector<std::int64_t> dr(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && sorted_abs[j + 1] == sorted_abs[i]) ++j;
        const std::int64_t doubled = static_cast<std::int64_t>(i + 1) +
                                     static_cast<std::int64_t>(j + 1);  // first + last rank
        for (std::size_t k = i; k <= j; ++k) dr[k] = doubled;
        i = j + 1;
    }
    return dr;
}

/// Counts of sign patterns by doubled W+ value (subset-sum distribution).
inline std::vector<double> wplus_distribution(const std::vector<std::int64_t>& doubled_ranks) {
    std::int64_t total = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(),
                                         std::int64_t{0});
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    std::int64_t reach = 0;
    for (std::int64_t r : doubled_ranks) {
        for (std::int64_t s = reach; s >= 0; --s)
            if (count[static_cast<std::size_t>(s)] > 0)
                count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
        reach += r;
    }
    return count;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace detail

inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                           std::span<const double> b) {
    if (a.size() != b.size())
        throw ShapeMismatch("wilcoxon requires equally long paired samples");

    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    const int n = static_cast<int>(diffs.size());
    if (n < 5)
        throw TooFewPairs("wilcoxon needs >= 5 nonzero differences, got " + std::to_string(n));

    std::vector<std::size_t> order(diffs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(diffs[i]) < std::abs(diffs[j]);
    });
    std::vector<double> sorted_abs(diffs.size());
    for (std::size_t k = 0; k < order.size(); ++k) sorted_abs[k] = std::abs(diffs[order[k]]);
    const auto dr = detail::doubled_ranks_sorted(sorted_abs);

    std::int64_t w_plus2 = 0, total2 = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        total2 += dr[k];
        if (diffs[order[k]] > 0) w_plus2 += dr[k];
    }
    const std::int64_t w_minus2 = total2 - w_plus2;
    const std::int64_t w_min2 = std::min(w_plus2, w_minus2);

    WilcoxonResult res;
    res.statistic = static_cast<double>(w_min2) / 2.0;
    res.n_used = n;

    if (n <= 12) {
        // exact two-sided: mass at W+ <= w_min plus mass at W+ >= total - w_min
        const auto count = detail::wplus_distribution(dr);
        double lo = 0, hi = 0;
        for (std::int64_t s = 0; s <= total2; ++s) {
            const double c = count[static_cast<std::size_t>(s)];
            if (s <= w_min2) lo += c;
            if (s >= total2 - w_min2) hi += c;
        }
        res.p_value = std::min(1.0, (lo + hi) / std::pow(2.0, n));
        res.exact = true;
    } else {
        // tie-corrected normal approximation with continuity correction
        const double nn = n;
        const double mn = nn * (nn + 1.0) / 4.0;
        double tie_term = 0;
        for (std::size_t i = 0; i < dr.size();) {
            std::size_t j = i;
            while (j + 1 < dr.size() && dr[j + 1] == dr[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
        if (var <= 0) throw DegenerateBatch("wilcoxon variance is zero (all ranks tied out)");
        double d = res.statistic - mn;  // <= 0 by construction
        d = std::min(d + 0.5, 0.0);     // continuity correction toward zero
        const double z = d / std::sqrt(var);
        res.p_value = std::min(1.0, 2.0 * detail::normal_cdf(z));
        res.exact = false;
    }
    return res;
}

}  // namespace pktseg::metrics

#endif  // PKTSEG_METRICS_WILCOXON_HPP
