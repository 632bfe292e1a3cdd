#ifndef PKTSEG_METRICS_SURFACE_HPP
#define PKTSEG_METRICS_SURFACE_HPP

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "pktseg/errors.hpp"
#include "pktseg/metrics/stats.hpp"
#include "pktseg/volume.hpp"

// Surface-distance machinery for HD95. Surfaces use 6-connectivity: a
// foreground voxel is on the surface when at least one face neighbor is
// background or outside the grid. Distances are Euclidean between voxel
// centers in physical millimetres (index * spacing per axis).

namespace pktseg::metrics {

inline std::vector<std::array<int, 3>> surface_voxels(const LabelMask& mask) {
    std::vector<std::array<int, 3>> out;
    const auto& d = mask.dims;
    auto fg = [&](int x, int y, int z) {
        if (x < 0 || y < 0 || z < 0 || x >= d.nx || y >= d.ny || z >= d.nz) return false;
        return mask.at(x, y, z) != 0;
    };
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x) {
                if (!fg(x, y, z)) continue;
                if (!fg(x - 1, y, z) || !fg(x + 1, y, z) || !fg(x, y - 1, z) ||
                    !fg(x, y + 1, z) || !fg(x, y, z - 1) || !fg(x, y, z + 1))
                    out.push_back({x, y, z});
            }
    return out;
}

namespace detail {

constexpr double kEdtInf = 1e30;

/// Felzenszwalb-Huttenlocher 1D squared distance transform over samples at
/// physical coordinates x_i = i*step. d[q] = min_p ((x_q-x_p)^2 + f[p]).
/// Entries with f >= kEdtInf contribute no parabola; a row with no finite
/// entry stays at kEdtInf. v needs n ints, z needs n+1 doubles.
inline void edt_1d(const double* f, double* d, int n, double step, int* v, double* z) {
    auto x = [step](int i) { return step * i; };
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] >= kEdtInf) continue;
        double s = 0;
        while (k >= 0) {
            const int p = v[k];
            s = ((f[q] + x(q) * x(q)) - (f[p] + x(p) * x(p))) / (2 * x(q) - 2 * x(p));
            if (s <= z[k])
                --k;
            else
                break;
        }
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kEdtInf;
        } else {
            ++k;
            v[k] = q;
            z[k] = s;
        }
        z[k + 1] = kEdtInf;
    }
    if (k < 0) {
        for (int q = 0; q < n; ++q) d[q] = kEdtInf;
        return;
    }
    for (int q = 0, j = 0; q < n; ++q) {
        while (z[j + 1] < x(q)) ++j;
        const int p = v[j];
        d[q] = (x(q) - x(p)) * (x(q) - x(p)) + f[p];
    }
}

/// Exact squared Euclidean distance (mm^2) from every voxel center to the
/// nearest seed voxel center, anisotropic spacing included.
inline std::vector<double> edt_squared(const Dims& dims, const Spacing& sp,
                                       const std::vector<std::array<int, 3>>& seeds) {
    const std::size_t total = static_cast<std::size_t>(dims.total());
    std::vector<double> dist(total, kEdtInf);
    auto idx = [&](int x, int y, int z) {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims.nx) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.ny) * z);
    };
    for (const auto& s : seeds) dist[idx(s[0], s[1], s[2])] = 0.0;

    const int nmax = std::max({dims.nx, dims.ny, dims.nz});
    std::vector<double> f(nmax), dline(nmax), z(nmax + 1);
    std::vector<int> v(nmax);

    // pass 1: along x
    for (int zz = 0; zz < dims.nz; ++zz)
        for (int yy = 0; yy < dims.ny; ++yy) {
            for (int xx = 0; xx < dims.nx; ++xx) f[xx] = dist[idx(xx, yy, zz)];
            edt_1d(f.data(), dline.data(), dims.nx, sp.sx, v.data(), z.data());
            for (int xx = 0; xx < dims.nx; ++xx) dist[idx(xx, yy, zz)] = dline[xx];
        }
    // pass 2: along y
    for (int zz = 0; zz < dims.nz; ++zz)
        for (int xx = 0; xx < dims.nx; ++xx) {
            for (int yy = 0; yy < dims.ny; ++yy) f[yy] = dist[idx(xx, yy, zz)];
            edt_1d(f.data(), dline.data(), dims.ny, sp.sy, v.data(), z.data());
            for (int yy = 0; yy < dims.ny; ++yy) dist[idx(xx, yy, zz)] = dline[yy];
        }
    // pass 3: along z
    for (int yy = 0; yy < dims.ny; ++yy)
        for (int xx = 0; xx < dims.nx; ++xx) {
            for (int zz = 0; zz < dims.nz; ++zz) f[zz] = dist[idx(xx, yy, zz)];
            edt_1d(f.data(), dline.data(), dims.nz, sp.sz, v.data(), z.data());
            for (int zz = 0; zz < dims.nz; ++zz) dist[idx(xx, yy, zz)] = dline[zz];
        }
    return dist;
}

}  // namespace detail

/// Distances (mm) from each surface voxel of `from` to the nearest surface
/// voxel of `to`.
inline std::vector<double> directed_surface_distances(const LabelMask& from,
                                                      const LabelMask& to) {
    if (!from.same_grid(to))
        throw GridMismatch("mask grids differ: " + from.dims.str() + " vs " + to.dims.str());
    const auto src = surface_voxels(from);
    const auto dst = surface_voxels(to);
    if (src.empty() || dst.empty())
        throw EmptyMask("surface distance requires two nonempty masks");
    const auto sq = detail::edt_squared(from.dims, from.spacing_mm, dst);
    std::vector<double> out;
    out.reserve(src.size());
    for (const auto& p : src)
        out.push_back(std::sqrt(
            sq[from.index(p[0], p[1], p[2])]));
    return out;
}

/// 95th-percentile symmetric surface distance:
/// max(P95(d(S->T)), P95(d(T->S))), P95 by linear interpolation.
inline double hd95(const LabelMask& s, const LabelMask& t) {
    const double p_st = percentile_linear(directed_surface_distances(s, t), 95.0);
    const double p_ts = percentile_linear(directed_surface_distances(t, s), 95.0);
    return std::max(p_st, p_ts);
}

}  // namespace pktseg::metrics

#endif  // PKTSEG_METRICS_SURFACE_HPP
