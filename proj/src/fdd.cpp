#include "freqdec/fdd.hpp"

#include "freqdec/dtcwt.hpp"
#include "freqdec/dwt.hpp"
#include "freqdec/error.hpp"
#include "freqdec/parallel.hpp"

#include <cmath>

namespace freqdec {

Strategy parse_strategy(std::string_view text) {
    if (text == "dwt") return Strategy::dwt;
    if (text == "dtcwt") return Strategy::dtcwt;
    if (text == "nsct") return Strategy::nsct;
    throw ConfigError("unknown strategy '" + std::string(text) + "' (dwt, dtcwt, nsct)");
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::dwt: return "dwt";
        case Strategy::dtcwt: return "dtcwt";
        case Strategy::nsct: return "nsct";
    }
    return "?";
}

void FddConfig::validate() const {
    if (lf == Strategy::nsct || hf == Strategy::nsct) nsct.validate();
}

std::size_t FddConfig::hf_directions() const {
    switch (hf) {
        case Strategy::dwt: return 3;
        case Strategy::dtcwt: return 6;
        case Strategy::nsct: return nsct.band_count();
    }
    return 0;
}

namespace {

void check_even(const Dims& d) {
    if (d.h % 2 != 0 || d.w % 2 != 0) throw SizeError("frequency decomposition needs even H and W, got " + to_string(d));
}

Plane lf_plane(const Plane& x, const FddConfig& cfg) {
    switch (cfg.lf) {
        case Strategy::dwt: return resize_bilinear(dwt2_level1(x).ll, x.rows, x.cols);
        case Strategy::dtcwt: return resize_bilinear(dtcwt_level1(x).lf.magnitude(), x.rows, x.cols);
        case Strategy::nsct: return nsp_decompose(x, cfg.nsct.levels).lowpass;
    }
    throw ConfigError("bad lf strategy");
}

std::vector<Plane> hf_planes(const Plane& x, const FddConfig& cfg) {
    std::vector<Plane> out;
    switch (cfg.hf) {
        case Strategy::dwt: {
            const auto d = dwt2_level1(x);
            for (const Plane* p : {&d.lh, &d.hl, &d.hh}) out.push_back(resize_bilinear(*p, x.rows, x.cols));
            break;
        }
        case Strategy::dtcwt: {
            const auto d = dtcwt_level1(x);
            for (const auto& z : d.hf) out.push_back(resize_bilinear(z.magnitude(), x.rows, x.cols));
            break;
        }
        case Strategy::nsct: {
            auto d = nsct_decompose(x, cfg.nsct);
            for (auto& level : d.bands)
                for (auto& b : level) out.push_back(std::move(b));
            break;
        }
    }
    return out;
}

}  // namespace

FddOutput fdd_decompose(const MultiModalVolume& mm, const FddConfig& cfg, std::size_t threads) {
    mm.validate();
    cfg.validate();
    const Dims dims = mm.dims();
    check_even(dims);
    const std::size_t M = mm.count(), K = cfg.hf_directions();
    const Spacing sp = mm.volume(0).spacing();
    std::vector<Volume3D> xl(M, Volume3D(dims, sp));
    std::vector<Volume3D> xh(M * K, Volume3D(dims, sp));
    parallel_for(M * dims.d, threads, [&](std::size_t job) {
        const std::size_t m = job / dims.d, z = job % dims.d;
        const Plane x = mm.volume(m).slice(z);
        xl[m].set_slice(z, lf_plane(x, cfg));
        const auto hf = hf_planes(x, cfg);
        for (std::size_t k = 0; k < K; ++k) xh[m * K + k].set_slice(z, hf[k]);
    });
    return {ChannelVolume(std::move(xl)), ChannelVolume(std::move(xh))};
}

ChannelVolume fdd_fuse(const FddOutput& out) {
    const std::size_t M = out.x_l.channels();
    if (out.x_h.channels() % M != 0) throw ShapeError("x_h channel count is not a multiple of x_l's");
    if (!(out.x_h.dims() == out.x_l.dims())) throw ShapeError("x_l and x_h dims differ");
    const std::size_t K = out.x_h.channels() / M;
    const std::size_t n = out.x_l.dims().count();
    std::vector<Volume3D> fused;
    for (std::size_t m = 0; m < M; ++m) {
        std::vector<double> acc(n, 0.0);
        auto add_unit = [&](const Volume3D& v) {
            double e = 0.0;
            for (float f : v.data()) e += static_cast<double>(f) * f;
            if (e == 0.0) return;
            const double s = 1.0 / std::sqrt(e);
            for (std::size_t i = 0; i < n; ++i) acc[i] += v.data()[i] * s;
        };
        add_unit(out.x_l.channel(m));
        for (std::size_t k = 0; k < K; ++k) add_unit(out.x_h.channel(m * K + k));
        fused.emplace_back(out.x_l.dims(), std::vector<float>(acc.begin(), acc.end()), out.x_l.spacing());
    }
    return ChannelVolume(std::move(fused));
}

std::size_t coefficient_channels(Strategy s, const NsctConfig& cfg) {
    switch (s) {
        case Strategy::dwt: return 4;
        case Strategy::dtcwt: return 16;
        case Strategy::nsct: cfg.validate(); return 1 + cfg.band_count();
    }
    return 0;
}

ChannelVolume transform_coefficients(const MultiModalVolume& mm, Strategy s, const NsctConfig& cfg, std::size_t threads) {
    mm.validate();
    const Dims dims = mm.dims();
    check_even(dims);
    const std::size_t M = mm.count(), K = coefficient_channels(s, cfg);
    Dims cd = dims;
    Spacing sp = mm.volume(0).spacing();
    if (s != Strategy::nsct) {
        cd.h /= 2;
        cd.w /= 2;
        sp[1] *= 2;
        sp[2] *= 2;
    }
    std::vector<Volume3D> out(M * K, Volume3D(cd, sp));
    parallel_for(M * dims.d, threads, [&](std::size_t job) {
        const std::size_t m = job / dims.d, z = job % dims.d;
        const Plane x = mm.volume(m).slice(z);
        std::vector<Plane> planes;
        switch (s) {
            case Strategy::dwt: {
                auto d = dwt2_level1(x);
                planes = {std::move(d.ll), std::move(d.lh), std::move(d.hl), std::move(d.hh)};
                break;
            }
            case Strategy::dtcwt: {
                auto d = dtcwt_level1(x);
                planes = {d.lf.re, d.lf.im, d.lf_cross.re, d.lf_cross.im};
                for (auto& h : d.hf) {
                    planes.push_back(std::move(h.re));
                    planes.push_back(std::move(h.im));
                }
                break;
            }
            case Strategy::nsct: {
                auto d = nsct_decompose(x, cfg);
                planes.push_back(std::move(d.lowpass));
                for (auto& level : d.bands)
                    for (auto& b : level) planes.push_back(std::move(b));
                break;
            }
        }
        for (std::size_t k = 0; k < K; ++k) out[m * K + k].set_slice(z, planes[k]);
    });
    return ChannelVolume(std::move(out));
}

ChannelVolume inverse_coefficients(const ChannelVolume& coeffs, Strategy s, const NsctConfig& cfg, std::size_t threads) {
    const std::size_t K = coefficient_channels(s, cfg);
    if (coeffs.channels() % K != 0)
        throw ShapeError("coefficient file has " + std::to_string(coeffs.channels()) + " channels, not a multiple of " + std::to_string(K));
    const std::size_t M = coeffs.channels() / K;
    const Dims cd = coeffs.dims();
    Dims dims = cd;
    Spacing sp = coeffs.spacing();
    if (s != Strategy::nsct) {
        dims.h *= 2;
        dims.w *= 2;
        sp[1] /= 2;
        sp[2] /= 2;
    }
    std::vector<Volume3D> out(M, Volume3D(dims, sp));
    parallel_for(M * dims.d, threads, [&](std::size_t job) {
        const std::size_t m = job / dims.d, z = job % dims.d;
        auto ch = [&](std::size_t k) { return coeffs.channel(m * K + k).slice(z); };
        Plane x;
        switch (s) {
            case Strategy::dwt: {
                DwtLevel1 d{ch(0), ch(1), ch(2), ch(3), dims.h, dims.w};
                x = idwt2_level1(d);
                break;
            }
            case Strategy::dtcwt: {
                DtcwtLevel1 d;
                d.lf = ComplexPlane(ch(0), ch(1));
                d.lf_cross = ComplexPlane(ch(2), ch(3));
                for (std::size_t k = 0; k < 6; ++k) d.hf[k] = ComplexPlane(ch(4 + 2 * k), ch(5 + 2 * k));
                x = idtcwt_level1(d);
                break;
            }
            case Strategy::nsct: {
                NsctDecomposition d;
                d.lowpass = ch(0);
                std::size_t k = 1;
                for (std::size_t l = 0; l < cfg.levels; ++l) {
                    d.bands.emplace_back();
                    for (std::size_t j = 0; j < cfg.directions; ++j) d.bands.back().push_back(ch(k++));
                }
                x = nsct_reconstruct(d, cfg);
                break;
            }
        }
        out[m].set_slice(z, x);
    });
    return ChannelVolume(std::move(out));
}

}  // namespace freqdec
