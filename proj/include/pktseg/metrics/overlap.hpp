#ifndef PKTSEG_METRICS_OVERLAP_HPP
#define PKTSEG_METRICS_OVERLAP_HPP

#include <cstdint>

#include "pktseg/errors.hpp"
#include "pktseg/volume.hpp"

// Voxel-set overlap metrics between a predicted mask S and a ground-truth
// mask T on the same grid:
//   dice = 2|S∩T| / (|S|+|T|)       (1.0 when both masks are empty)
//   fpe  = |S\T| / |S|              (over-segmentation rate)
//   fne  = |T\S| / |T|              (under-segmentation rate)

namespace pktseg::metrics {

struct OverlapCounts {
    std::int64_t s = 0;          // |S|
    std::int64_t t = 0;          // |T|
    std::int64_t both = 0;       // |S∩T|
};

inline OverlapCounts overlap_counts(const LabelMask& s, const LabelMask& t) {
    if (!s.same_grid(t))
        throw GridMismatch("mask grids differ: " + s.dims.str() + " vs " + t.dims.str());
    OverlapCounts c;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const bool in_s = s.values[i] != 0;
        const bool in_t = t.values[i] != 0;
        c.s += in_s;
        c.t += in_t;
        c.both += (in_s && in_t);
    }
    return c;
}

inline double dice(const LabelMask& s, const LabelMask& t) {
    const OverlapCounts c = overlap_counts(s, t);
    if (c.s == 0 && c.t == 0) return 1.0;
    return 2.0 * static_cast<double>(c.both) / static_cast<double>(c.s + c.t);
}

inline double fpe(const LabelMask& s, const LabelMask& t) {
    const OverlapCounts c = overlap_counts(s, t);
    if (c.s == 0) throw EmptyDenominator("FPE undefined: predicted mask is empty");
    return static_cast<double>(c.s - c.both) / static_cast<double>(c.s);
}

inline double fne(const LabelMask& s, const LabelMask& t) {
    const OverlapCounts c = overlap_counts(s, t);
    if (c.t == 0) throw EmptyDenominator("FNE undefined: ground-truth mask is empty");
    return static_cast<double>(c.t - c.both) / static_cast<double>(c.t);
}

}  // namespace pktseg::metrics

#endif  // PKTSEG_METRICS_OVERLAP_HPP
