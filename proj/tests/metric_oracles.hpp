#pragma once

#include "freqdec/volume.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace testutil {

// Window-by-window SSIM with explicit loops and two-pass moments.
inline double ssim_oracle(const freqdec::Plane& a, const freqdec::Plane& b) {
    auto range = [](const freqdec::Plane& p) {
        double lo = p.data[0], hi = p.data[0];
        for (double v : p.data) lo = std::min(lo, v), hi = std::max(hi, v);
        return hi - lo;
    };
    double L = std::max(range(a), range(b));
    if (L == 0) L = 1;
    const double C1 = 1e-4 * L * L, C2 = 9e-4 * L * L;
    double total = 0;
    int count = 0;
    for (std::size_t r = 0; r + 8 <= a.rows; ++r)
        for (std::size_t c = 0; c + 8 <= a.cols; ++c) {
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < 8; ++i)
                for (std::size_t j = 0; j < 8; ++j) {
                    mx += a.data[(r + i) * a.cols + c + j];
                    my += b.data[(r + i) * a.cols + c + j];
                }
            mx /= 64, my /= 64;
            double vx = 0, vy = 0, cv = 0;
            for (std::size_t i = 0; i < 8; ++i)
                for (std::size_t j = 0; j < 8; ++j) {
                    const double dx = a.data[(r + i) * a.cols + c + j] - mx;
                    const double dy = b.data[(r + i) * a.cols + c + j] - my;
                    vx += dx * dx, vy += dy * dy, cv += dx * dy;
                }
            vx /= 64, vy /= 64, cv /= 64;
            total += (2 * mx * my + C1) * (2 * cv + C2) / ((mx * mx + my * my + C1) * (vx + vy + C2));
            ++count;
        }
    return total / count;
}

inline double entropy_oracle(const std::vector<double>& v, const std::vector<std::size_t>& shape) {
    const auto Z = slow_dft_real(v, shape);
    double s = 0;
    for (const auto& z : Z) s += std::abs(z);
    double e = 0;
    for (const auto& z : Z) {
        const double p = std::abs(z) / s;
        if (p > 0) e -= p * std::log(p);
    }
    return e;
}

inline double dice_oracle(const freqdec::LabelVolume& a, const freqdec::LabelVolume& b, int cls) {
    double inter = 0, sa = 0, sb = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        sa += a.data[i] == cls;
        sb += b.data[i] == cls;
        inter += a.data[i] == cls && b.data[i] == cls;
    }
    return sa + sb == 0 ? 100.0 : 200.0 * inter / (sa + sb);
}

// Boundary by erosion of a zero-padded copy; distances from a full matrix.
inline double hd95_oracle(const freqdec::LabelVolume& a, const freqdec::LabelVolume& b, int cls, const freqdec::Spacing& sp) {
    auto surface = [&](const freqdec::LabelVolume& v) {
        const auto [D, H, W] = std::tuple{v.dims.d, v.dims.h, v.dims.w};
        std::vector<char> pad((D + 2) * (H + 2) * (W + 2), 0);
        auto idx = [&](std::size_t z, std::size_t y, std::size_t x) { return (z * (H + 2) + y) * (W + 2) + x; };
        for (std::size_t z = 0; z < D; ++z)
            for (std::size_t y = 0; y < H; ++y)
                for (std::size_t x = 0; x < W; ++x) pad[idx(z + 1, y + 1, x + 1)] = v.data[(z * H + y) * W + x] == cls;
        std::vector<std::array<double, 3>> pts;
        for (std::size_t z = 1; z <= D; ++z)
            for (std::size_t y = 1; y <= H; ++y)
                for (std::size_t x = 1; x <= W; ++x) {
                    if (!pad[idx(z, y, x)]) continue;
                    const int inner = pad[idx(z - 1, y, x)] + pad[idx(z + 1, y, x)] + pad[idx(z, y - 1, x)] + pad[idx(z, y + 1, x)] +
                                      pad[idx(z, y, x - 1)] + pad[idx(z, y, x + 1)];
                    if (inner < 6) pts.push_back({(z - 1.0) * sp[0], (y - 1.0) * sp[1], (x - 1.0) * sp[2]});
                }
        return pts;
    };
    const auto pa = surface(a), pb = surface(b);
    std::vector<std::vector<double>> m(pa.size(), std::vector<double>(pb.size()));
    for (std::size_t i = 0; i < pa.size(); ++i)
        for (std::size_t j = 0; j < pb.size(); ++j)
            m[i][j] = std::hypot(pa[i][0] - pb[j][0], pa[i][1] - pb[j][1], pa[i][2] - pb[j][2]);
    std::vector<double> d;
    for (std::size_t i = 0; i < pa.size(); ++i) d.push_back(*std::min_element(m[i].begin(), m[i].end()));
    for (std::size_t j = 0; j < pb.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pa.size(); ++i) best = std::min(best, m[i][j]);
        d.push_back(best);
    }
    std::sort(d.begin(), d.end());
    const double h = 0.95 * (d.size() - 1);
    const std::size_t f = static_cast<std::size_t>(h);
    return f + 1 < d.size() ? d[f] + (h - f) * (d[f + 1] - d[f]) : d[f];
}

// Random blob mask: union of a few axis-aligned boxes.
inline freqdec::LabelVolume random_mask(freqdec::Dims d, Gen& g) {
    freqdec::LabelVolume l(d, 2);
    const std::size_t boxes = g.index(1, 3);
    for (std::size_t k = 0; k < boxes; ++k) {
        const std::size_t z0 = g.index(0, d.d - 1), y0 = g.index(0, d.h - 1), x0 = g.index(0, d.w - 1);
        const std::size_t z1 = std::min(d.d, z0 + g.index(1, 4)), y1 = std::min(d.h, y0 + g.index(1, 4)), x1 = std::min(d.w, x0 + g.index(1, 4));
        for (std::size_t z = z0; z < z1; ++z)
            for (std::size_t y = y0; y < y1; ++y)
                for (std::size_t x = x0; x < x1; ++x) l.data[(z * d.h + y) * d.w + x] = 1;
    }
    return l;
}

}  // namespace testutil
