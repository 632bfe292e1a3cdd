#ifndef PKTSEG_VOLUME_HPP
#define PKTSEG_VOLUME_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pktseg/errors.hpp"

namespace pktseg {

struct Dims {
    int nx = 0, ny = 0, nz = 0;

    std::int64_t total() const {
        return static_cast<std::int64_t>(nx) * ny * nz;
    }
    bool operator==(const Dims&) const = default;
    std::string str() const {
        return std::to_string(nx) + "x" + std::to_string(ny) + "x" + std::to_string(nz);
    }
};

struct Spacing {
    double sx = 1.0, sy = 1.0, sz = 1.0;

    bool positive() const { return sx > 0.0 && sy > 0.0 && sz > 0.0; }
    bool operator==(const Spacing&) const = default;
};

/// Scalar 3D grid. Values are stored x-fastest: index = x + nx*(y + ny*z).
class Volume3D {
public:
    Dims dims;
    Spacing spacing_mm;
    std::vector<float> values;

    Volume3D() = default;
    Volume3D(Dims d, Spacing s, float fill = 0.0f)
        : dims(d), spacing_mm(s), values(static_cast<std::size_t>(d.total()), fill) {}

    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims.nx) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.ny) * z);
    }
    float at(int x, int y, int z) const { return values[index(x, y, z)]; }
    float& at(int x, int y, int z) { return values[index(x, y, z)]; }

    bool same_grid(const Volume3D& o) const {
        return dims == o.dims && spacing_mm == o.spacing_mm;
    }
    bool all_finite() const {
        for (float v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Binary mask on the same kind of grid as Volume3D; 1 marks GTV voxels.
class LabelMask {
public:
    Dims dims;
    Spacing spacing_mm;
    std::vector<std::uint8_t> values;

    LabelMask() = default;
    LabelMask(Dims d, Spacing s, std::uint8_t fill = 0)
        : dims(d), spacing_mm(s), values(static_cast<std::size_t>(d.total()), fill) {}

    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims.nx) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.ny) * z);
    }
    std::uint8_t at(int x, int y, int z) const { return values[index(x, y, z)]; }
    std::uint8_t& at(int x, int y, int z) { return values[index(x, y, z)]; }

    bool same_grid(const LabelMask& o) const {
        return dims == o.dims && spacing_mm == o.spacing_mm;
    }
    std::int64_t foreground_count() const {
        std::int64_t n = 0;
        for (auto v : values) n += (v != 0);
        return n;
    }
};

/// The four MRI sequences a study may carry. T1C is mandatory everywhere:
/// ground truth is defined on it.
enum class Sequence { T1, T2, T1C, FL };

inline const std::array<Sequence, 4>& all_sequences() {
    static const std::array<Sequence, 4> seqs{Sequence::T1, Sequence::T2, Sequence::T1C,
                                              Sequence::FL};
    return seqs;
}

inline std::string to_string(Sequence s) {
    switch (s) {
        case Sequence::T1: return "T1";
        case Sequence::T2: return "T2";
        case Sequence::T1C: return "T1C";
        case Sequence::FL: return "FL";
    }
    return "?";
}

inline Sequence sequence_from_string(const std::string& name) {
    if (name == "T1") return Sequence::T1;
    if (name == "T2") return Sequence::T2;
    if (name == "T1C") return Sequence::T1C;
    if (name == "FL") return Sequence::FL;
    throw ParseError("unknown sequence name: '" + name + "'");
}

/// One imaging timepoint: named sequence volumes on a shared grid plus an
/// optional ground-truth GTV mask.
struct Study {
    std::string study_id;
    std::string patient_id;
    std::map<Sequence, Volume3D> sequences;
    std::optional<LabelMask> gtv;

    bool has(Sequence s) const { return sequences.count(s) != 0; }

    const Volume3D& sequence(Sequence s) const {
        auto it = sequences.find(s);
        if (it == sequences.end())
            throw MissingSequence("study '" + study_id + "' has no " + to_string(s));
        return it->second;
    }

    /// Grid every sequence must share; anchored on T1C.
    const Volume3D& reference() const { return sequence(Sequence::T1C); }
};

struct Violation {
    std::string invariant;  // short machine-checkable tag
    std::string detail;
};

/// Empty result iff all Study invariants hold. Violations are data, not errors.
inline std::vector<Violation> validate_study(const Study& study) {
    std::vector<Violation> out;
    if (!study.has(Sequence::T1C)) {
        out.push_back({"t1c-present", "study '" + study.study_id + "' lacks T1C"});
        return out;  // no reference grid to compare against
    }
    const Volume3D& ref = study.reference();
    for (const auto& [seq, vol] : study.sequences) {
        if (!(vol.dims == ref.dims) || !(vol.spacing_mm == ref.spacing_mm))
            out.push_back({"grid-mismatch",
                           to_string(seq) + " grid " + vol.dims.str() + " differs from T1C " +
                               ref.dims.str()});
        if (!vol.spacing_mm.positive())
            out.push_back({"spacing-positive", to_string(seq) + " has non-positive spacing"});
        if (static_cast<std::int64_t>(vol.values.size()) != vol.dims.total())
            out.push_back({"value-count", to_string(seq) + " value count differs from dims"});
        if (!vol.all_finite())
            out.push_back({"finite-values", to_string(seq) + " contains non-finite voxels"});
    }
    if (study.gtv) {
        const LabelMask& m = *study.gtv;
        if (!(m.dims == ref.dims) || !(m.spacing_mm == ref.spacing_mm))
            out.push_back({"grid-mismatch", "gtv grid " + m.dims.str() +
                                                " differs from T1C " + ref.dims.str()});
        for (auto v : m.values) {
            if (v > 1) {
                out.push_back({"label-range", "gtv contains voxel value " + std::to_string(v)});
                break;
            }
        }
    }
    return out;
}

}  // namespace pktseg

#endif  // PKTSEG_VOLUME_HPP
