#include "freqdec/metrics.hpp"

#include "freqdec/error.hpp"
#include "freqdec/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace freqdec {

namespace {

constexpr std::size_t kWin = 8;

double range_of(const Plane& p) {
    const auto [lo, hi] = std::minmax_element(p.data.begin(), p.data.end());
    return *hi - *lo;
}

// Integral image with a zero first row and column.
std::vector<double> integral(const Plane& p, const std::function<double(std::size_t)>& f) {
    const std::size_t W = p.cols + 1;
    std::vector<double> s((p.rows + 1) * W, 0.0);
    for (std::size_t r = 0; r < p.rows; ++r)
        for (std::size_t c = 0; c < p.cols; ++c)
            s[(r + 1) * W + c + 1] = f(r * p.cols + c) + s[r * W + c + 1] + s[(r + 1) * W + c] - s[r * W + c];
    return s;
}

}  // namespace

double ssim(const Plane& a, const Plane& b) {
    if (!a.same_shape(b)) throw ShapeError("ssim operands differ in shape");
    if (a.rows < kWin || a.cols < kWin) throw SizeError("ssim needs planes of at least 8x8");
    double L = std::max(range_of(a), range_of(b));
    if (L == 0.0) L = 1.0;
    const double C1 = (0.01 * L) * (0.01 * L), C2 = (0.03 * L) * (0.03 * L);
    const auto sa = integral(a, [&](std::size_t i) { return a.data[i]; });
    const auto sb = integral(a, [&](std::size_t i) { return b.data[i]; });
    const auto saa = integral(a, [&](std::size_t i) { return a.data[i] * a.data[i]; });
    const auto sbb = integral(a, [&](std::size_t i) { return b.data[i] * b.data[i]; });
    const auto sab = integral(a, [&](std::size_t i) { return a.data[i] * b.data[i]; });
    const std::size_t W = a.cols + 1;
    auto box = [&](const std::vector<double>& s, std::size_t r, std::size_t c) {
        return s[(r + kWin) * W + c + kWin] - s[r * W + c + kWin] - s[(r + kWin) * W + c] + s[r * W + c];
    };
    const double n = static_cast<double>(kWin * kWin);
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r + kWin <= a.rows; ++r)
        for (std::size_t c = 0; c + kWin <= a.cols; ++c) {
            const double mx = box(sa, r, c) / n, my = box(sb, r, c) / n;
            const double vx = std::max(0.0, box(saa, r, c) / n - mx * mx);
            const double vy = std::max(0.0, box(sbb, r, c) / n - my * my);
            const double cxy = box(sab, r, c) / n - mx * my;
            total += ((2 * mx * my + C1) * (2 * cxy + C2)) / ((mx * mx + my * my + C1) * (vx + vy + C2));
            ++count;
        }
    return total / static_cast<double>(count);
}

double freq_entropy(const std::vector<double>& values, const std::vector<std::size_t>& shape) {
    const auto spec = dft_real(values, shape);
    std::vector<double> amp(spec.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) sum += amp[i] = std::abs(spec[i]);
    if (sum == 0.0) throw NumericError("frequency entropy of an all-zero volume");
    double e = 0.0;
    for (double a : amp)
        if (a > 0.0) {
            const double p = a / sum;
            e -= p * std::log(p);
        }
    return e;
}

double freq_entropy(const Volume3D& vol) {
    const Dims& d = vol.dims();
    return freq_entropy(vol.to_double(), {d.d, d.h, d.w});
}

Plane log_amplitude(const Plane& p) {
    const auto G = fft2(p);
    Plane out(p.rows, p.cols);
    for (std::size_t i = 0; i < G.size(); ++i) out.data[i] = std::log1p(std::abs(G[i]));
    return out;
}

double shift_invariance_score(const Plane& img, int K, const PlaneMap& map) {
    if (K < 1) throw ConfigError("shift range K must be >= 1");
    if (img.cols <= static_cast<std::size_t>(2 * K)) throw SizeError("image width must exceed 2K");
    const Plane ref = log_amplitude(map(img));
    double total = 0.0;
    for (int k = -K; k <= K; ++k) {
        if (k == 0) continue;
        total += ssim(ref, log_amplitude(map(circshift(img, 0, k))));
    }
    return total / (2.0 * K);
}

double shift_invariance_score(const Plane& img, int K) {
    return shift_invariance_score(img, K, [](const Plane& p) { return p; });
}

namespace {

void check_pair(const LabelVolume& a, const LabelVolume& b, int cls) {
    if (!(a.dims == b.dims)) throw ShapeError("label volumes differ in dims");
    if (a.data.size() != a.dims.count() || b.data.size() != b.dims.count()) throw LengthError("label data length does not match dims");
    if (cls < 0 || cls > 255) throw ConfigError("class id out of range");
}

struct Voxel {
    double z, y, x;
};

std::vector<Voxel> boundary(const LabelVolume& v, int cls, const Spacing& sp) {
    const Dims& d = v.dims;
    auto in = [&](long z, long y, long x) {
        if (z < 0 || y < 0 || x < 0 || z >= static_cast<long>(d.d) || y >= static_cast<long>(d.h) || x >= static_cast<long>(d.w)) return false;
        return v.at(static_cast<std::size_t>(z), static_cast<std::size_t>(y), static_cast<std::size_t>(x)) == cls;
    };
    std::vector<Voxel> out;
    for (long z = 0; z < static_cast<long>(d.d); ++z)
        for (long y = 0; y < static_cast<long>(d.h); ++y)
            for (long x = 0; x < static_cast<long>(d.w); ++x) {
                if (!in(z, y, x)) continue;
                if (in(z - 1, y, x) && in(z + 1, y, x) && in(z, y - 1, x) && in(z, y + 1, x) && in(z, y, x - 1) && in(z, y, x + 1)) continue;
                out.push_back({static_cast<double>(z) * sp[0], static_cast<double>(y) * sp[1], static_cast<double>(x) * sp[2]});
            }
    return out;
}

void nearest(const std::vector<Voxel>& from, const std::vector<Voxel>& to, std::vector<double>& out) {
    for (const auto& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : to) {
            const double dz = p.z - q.z, dy = p.y - q.y, dx = p.x - q.x;
            best = std::min(best, dz * dz + dy * dy + dx * dx);
        }
        out.push_back(std::sqrt(best));
    }
}

}  // namespace

double dice_score(const LabelVolume& a, const LabelVolume& b, int cls) {
    check_pair(a, b, cls);
    std::size_t na = 0, nb = 0, both = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const bool ia = a.data[i] == cls, ib = b.data[i] == cls;
        na += ia;
        nb += ib;
        both += ia && ib;
    }
    if (na + nb == 0) return 100.0;
    return 100.0 * 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

double hd95(const LabelVolume& a, const LabelVolume& b, int cls, const Spacing& spacing) {
    check_pair(a, b, cls);
    const auto ba = boundary(a, cls, spacing);
    const auto bb = boundary(b, cls, spacing);
    if (ba.empty() || bb.empty()) throw NumericError("hd95 is undefined for an empty mask");
    std::vector<double> d;
    d.reserve(ba.size() + bb.size());
    nearest(ba, bb, d);
    nearest(bb, ba, d);
    std::sort(d.begin(), d.end());
    const double pos = 0.95 * static_cast<double>(d.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, d.size() - 1);
    return d[lo] + (pos - static_cast<double>(lo)) * (d[hi] - d[lo]);
}

}  // namespace freqdec
