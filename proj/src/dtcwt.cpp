#include "freqdec/dtcwt.hpp"

#include "freqdec/error.hpp"
#include "freqdec/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <tuple>

namespace freqdec {
namespace {

struct Taps {
    Filter1D h0, h1, g0, g1;
};

// Undecimated use of the level-1 bank: analysis taps carry sqrt(2),
// synthesis taps 1/sqrt(2), so h0 g0 + h1 g1 = 1.
const Taps& taps() {
    static const Taps t = [] {
        const auto& b = FilterBank1D::near_sym_b();
        auto half = [](Filter1D f) {
            for (double& v : f.taps) v *= 0.5;
            return f;
        };
        return Taps{b.analysis_lo, b.analysis_hi, half(b.synthesis_lo), half(b.synthesis_hi)};
    }();
    return t;
}

constexpr ExtensionMode kExt = ExtensionMode::symmetric;

struct Quads {
    Plane a, b, c, d;
};

Quads split_quads(const Plane& y) {
    const std::size_t R = y.rows / 2, C = y.cols / 2;
    Quads q{Plane(R, C), Plane(R, C), Plane(R, C), Plane(R, C)};
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            q.a(r, c) = y(2 * r, 2 * c);
            q.b(r, c) = y(2 * r, 2 * c + 1);
            q.c(r, c) = y(2 * r + 1, 2 * c);
            q.d(r, c) = y(2 * r + 1, 2 * c + 1);
        }
    return q;
}

Plane join_quads(const Quads& q) {
    Plane y(2 * q.a.rows, 2 * q.a.cols);
    for (std::size_t r = 0; r < q.a.rows; ++r)
        for (std::size_t c = 0; c < q.a.cols; ++c) {
            y(2 * r, 2 * c) = q.a(r, c);
            y(2 * r, 2 * c + 1) = q.b(r, c);
            y(2 * r + 1, 2 * c) = q.c(r, c);
            y(2 * r + 1, 2 * c + 1) = q.d(r, c);
        }
    return y;
}

// p = (a + ib)/sqrt2, q = (d - ic)/sqrt2; returns (p - q, p + q).
std::pair<ComplexPlane, ComplexPlane> q2c(const Plane& y) {
    const Quads q = split_quads(y);
    const double s = std::numbers::sqrt2 / 2;
    const std::size_t R = q.a.rows, C = q.a.cols;
    ComplexPlane lo(R, C), hi(R, C);
    for (std::size_t i = 0; i < R * C; ++i) {
        const double pr = q.a.data[i] * s, pi = q.b.data[i] * s;
        const double qr = q.d.data[i] * s, qi = -q.c.data[i] * s;
        lo.re.data[i] = pr - qr;
        lo.im.data[i] = pi - qi;
        hi.re.data[i] = pr + qr;
        hi.im.data[i] = pi + qi;
    }
    return {lo, hi};
}

Plane c2q(const ComplexPlane& w1, const ComplexPlane& w2) {
    const double s = std::numbers::sqrt2 / 2;
    const std::size_t R = w1.rows(), C = w1.cols();
    Quads q{Plane(R, C), Plane(R, C), Plane(R, C), Plane(R, C)};
    for (std::size_t i = 0; i < R * C; ++i) {
        const double Pr = (w1.re.data[i] + w2.re.data[i]) * s, Pi = (w1.im.data[i] + w2.im.data[i]) * s;
        const double Qr = (w1.re.data[i] - w2.re.data[i]) * s, Qi = (w1.im.data[i] - w2.im.data[i]) * s;
        q.a.data[i] = Pr;
        q.b.data[i] = Pi;
        q.c.data[i] = Qi;
        q.d.data[i] = -Qr;
    }
    return join_quads(q);
}

void check_coeff_shapes(const DtcwtLevel1& c) {
    auto same = [&](const ComplexPlane& z) {
        return z.re.same_shape(c.lf.re) && z.im.same_shape(c.lf.re);
    };
    if (!same(c.lf) || !same(c.lf_cross)) throw ShapeError("dtcwt lowpass parts differ in size");
    for (const auto& z : c.hf)
        if (!same(z)) throw ShapeError("dtcwt highpass subbands differ in size");
    if (c.lf.re.empty()) throw SizeError("empty dtcwt coefficients");
}

}  // namespace

DtcwtLevel1 dtcwt_level1(const Plane& x) {
    if (x.rows < 8 || x.cols < 8 || x.rows % 2 != 0 || x.cols % 2 != 0)
        throw SizeError("dtcwt needs even dims >= 8, got " + std::to_string(x.rows) + "x" + std::to_string(x.cols));
    const auto& t = taps();
    const Plane lo = filter_axis(x, t.h0, Axis::rows, kExt);
    const Plane hi = filter_axis(x, t.h1, Axis::rows, kExt);
    const Plane lolo = filter_axis(lo, t.h0, Axis::cols, kExt);
    const Plane lohi = filter_axis(lo, t.h1, Axis::cols, kExt);
    const Plane hilo = filter_axis(hi, t.h0, Axis::cols, kExt);
    const Plane hihi = filter_axis(hi, t.h1, Axis::cols, kExt);

    DtcwtLevel1 out;
    const Quads q = split_quads(lolo);
    out.lf = ComplexPlane(q.a, q.d);
    out.lf_cross = ComplexPlane(q.b, q.c);
    std::tie(out.hf[0], out.hf[5]) = q2c(hilo);
    std::tie(out.hf[2], out.hf[3]) = q2c(lohi);
    std::tie(out.hf[1], out.hf[4]) = q2c(hihi);
    return out;
}

Plane idtcwt_level1(const DtcwtLevel1& c) {
    check_coeff_shapes(c);
    const auto& t = taps();
    const Plane lolo = join_quads({c.lf.re, c.lf_cross.re, c.lf_cross.im, c.lf.im});
    const Plane hilo = c2q(c.hf[0], c.hf[5]);
    const Plane lohi = c2q(c.hf[2], c.hf[3]);
    const Plane hihi = c2q(c.hf[1], c.hf[4]);
    const Plane lo = filter_axis(lolo, t.g0, Axis::cols, kExt) + filter_axis(lohi, t.g1, Axis::cols, kExt);
    const Plane hi = filter_axis(hilo, t.g0, Axis::cols, kExt) + filter_axis(hihi, t.g1, Axis::cols, kExt);
    return filter_axis(lo, t.g0, Axis::rows, kExt) + filter_axis(hi, t.g1, Axis::rows, kExt);
}

ChannelVolume dtcwt_lowpass_volume(const MultiModalVolume& mm, std::size_t threads) {
    mm.validate();
    const Dims dims = mm.dims();
    std::vector<Volume3D> out(mm.count(), Volume3D(dims, mm.volume(0).spacing()));
    parallel_for(mm.count() * dims.d, threads, [&](std::size_t job) {
        const std::size_t m = job / dims.d, z = job % dims.d;
        const auto coeffs = dtcwt_level1(mm.volume(m).slice(z));
        out[m].set_slice(z, resize_bilinear(coeffs.lf.magnitude(), dims.h, dims.w));
    });
    return ChannelVolume(std::move(out));
}

double energy_flatness(const std::vector<double>& p, const std::vector<double>& q, std::size_t n) {
    if (p.empty() || q.empty() || n == 0) throw SizeError("energy_flatness needs non-empty filters");
    auto dtft = [](const std::vector<double>& h, double w) {
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) acc += h[k] * std::polar(1.0, -w * static_cast<double>(k));
        return acc;
    };
    std::vector<double> e(n);
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = -std::numbers::pi + 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        e[k] = std::norm(dtft(p, w)) + std::norm(dtft(q, w));
        mean += e[k];
    }
    mean /= static_cast<double>(n);
    if (mean <= 0.0) throw NumericError("energy_flatness of an all-zero pair");
    double dev = 0.0;
    for (double v : e) dev = std::max(dev, std::abs(v - mean));
    return dev / mean;
}

double energy_flatness(const FilterBank1D& bank) {
    return energy_flatness(bank.analysis_lo.taps, bank.analysis_hi.taps);
}

}  // namespace freqdec
