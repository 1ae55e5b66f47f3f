#include "freqdec/nsct.hpp"

#include "freqdec/error.hpp"
#include "freqdec/fft.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace freqdec {

void NsctConfig::validate() const {
    if (levels < 1) throw ConfigError("nsct needs at least one pyramid level");
    if (directions != 2 && directions != 4 && directions != 8)
        throw ConfigError("nsct directions must be 2, 4 or 8, got " + std::to_string(directions));
}

const Kernel2D& nsp_lowpass_kernel() {
    static const Kernel2D k = [] {
        const std::array<double, 7> h{-1.0 / 32, 0.0, 9.0 / 32, 16.0 / 32, 9.0 / 32, 0.0, -1.0 / 32};
        std::vector<double> taps(49);
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t j = 0; j < 7; ++j) taps[i * 7 + j] = h[i] * h[j];
        return Kernel2D::centered(7, 7, std::move(taps));
    }();
    return k;
}

NspDecomposition nsp_decompose(const Plane& slice, std::size_t levels, ExtensionMode ext) {
    if (levels < 1) throw ConfigError("nsp needs at least one level");
    if (slice.empty()) throw SizeError("nsp on empty slice");
    NspDecomposition dec;
    Plane current = slice;
    std::size_t dilation = 1;
    for (std::size_t j = 0; j < levels; ++j) {
        Plane low = atrous_conv2d(current, nsp_lowpass_kernel(), dilation, ext);
        dec.bandpass.push_back(current - low);
        current = std::move(low);
        dilation *= 2;
    }
    dec.lowpass = std::move(current);
    return dec;
}

Plane nsp_reconstruct(const NspDecomposition& dec) {
    Plane out = dec.lowpass;
    for (auto it = dec.bandpass.rbegin(); it != dec.bandpass.rend(); ++it) out += *it;
    return out;
}

namespace {

using Vec = std::pair<long, long>;

// One two-channel fan split, resampled so its response is the fan's at
// (r1 . w, r2 . w). Child 0 is the side where the fan variable is positive.
struct Node {
    Kernel2D analysis[2];
    Kernel2D synthesis[2];
};

Node make_node(Vec r1, Vec r2) {
    const auto& fb = fan_bank();
    Node n;
    for (int k = 0; k < 2; ++k) {
        n.analysis[k] = resample(fb.analysis[k], r1, r2);
        n.synthesis[k] = resample(fb.synthesis[k], r1, r2);
    }
    return n;
}

struct Tree {
    Node fan;
    Node quincunx;
    std::array<Node, 4> shear;
};

const Tree& tree() {
    static const Tree t{
        make_node({1, 0}, {0, 1}),
        make_node({1, 1}, {1, -1}),
        {make_node({0, 1}, {1, -1}), make_node({-1, 1}, {1, 0}), make_node({-1, 0}, {1, 1}), make_node({0, -1}, {1, 1})},
    };
    return t;
}

constexpr ExtensionMode kExt = ExtensionMode::periodic;

std::pair<Plane, Plane> split(const Plane& x, const Node& n) {
    return {conv2d(conv2d(x, n.analysis[0], kExt), n.synthesis[0], kExt),
            conv2d(conv2d(x, n.analysis[1], kExt), n.synthesis[1], kExt)};
}

// Eight wedges in angular order starting at 0 degrees.
std::array<Plane, 8> eight_wedges(const Plane& band) {
    const Tree& t = tree();
    const auto [horiz, vert] = split(band, t.fan);
    // Positive quincunx side holds angles in (0, 90).
    const auto [h_q1, h_q2] = split(horiz, t.quincunx);
    const auto [v_q1, v_q2] = split(vert, t.quincunx);
    const auto [w0p, w0m] = split(h_q1, t.shear[0]);
    const auto [w1p, w1m] = split(v_q1, t.shear[1]);
    const auto [w2p, w2m] = split(v_q2, t.shear[2]);
    const auto [w3p, w3m] = split(h_q2, t.shear[3]);
    return {w0m, w0p, w1m, w1p, w2m, w2p, w3p, w3m};
}

}  // namespace

std::vector<double> nsdfb_wedge_centers(std::size_t n_dir) {
    const double a = std::atan(0.5) * 180.0 / std::numbers::pi;
    switch (n_dir) {
        case 2: return {0.0, 90.0};
        case 4: return {0.0, 45.0, 90.0, 135.0};
        case 8: {
            const std::array<double, 9> edges{0, a, 45, 90 - a, 90, 90 + a, 135, 180 - a, 180};
            std::vector<double> c;
            for (std::size_t i = 0; i < 8; ++i) c.push_back(0.5 * (edges[i] + edges[i + 1]));
            return c;
        }
        default: throw ConfigError("nsdfb supports 2, 4 or 8 directions");
    }
}

std::vector<Plane> nsdfb_decompose(const Plane& band, std::size_t n_dir) {
    if (band.empty()) throw SizeError("nsdfb on empty band");
    switch (n_dir) {
        case 2: {
            auto [h, v] = split(band, tree().fan);
            return {std::move(h), std::move(v)};
        }
        case 4: {
            // Pairs of adjacent eighth-wedges recentered on the axes and diagonals.
            const auto w = eight_wedges(band);
            return {w[7] + w[0], w[1] + w[2], w[3] + w[4], w[5] + w[6]};
        }
        case 8: {
            auto w = eight_wedges(band);
            return {w.begin(), w.end()};
        }
        default: throw ConfigError("nsdfb supports 2, 4 or 8 directions, got " + std::to_string(n_dir));
    }
}

Plane nsdfb_reconstruct(const std::vector<Plane>& bands) {
    if (bands.empty()) throw ShapeError("nsdfb_reconstruct needs at least one band");
    Plane out = bands.front();
    for (std::size_t i = 1; i < bands.size(); ++i) out += bands[i];
    return out;
}

NsctDecomposition nsct_decompose(const Plane& slice, const NsctConfig& cfg) {
    cfg.validate();
    auto nsp = nsp_decompose(slice, cfg.levels, ExtensionMode::periodic);
    NsctDecomposition dec;
    dec.lowpass = std::move(nsp.lowpass);
    for (const auto& b : nsp.bandpass) dec.bands.push_back(nsdfb_decompose(b, cfg.directions));
    return dec;
}

Plane nsct_reconstruct(const NsctDecomposition& dec, const NsctConfig& cfg) {
    cfg.validate();
    if (dec.bands.size() != cfg.levels) throw ShapeError("decomposition level count does not match config");
    NspDecomposition nsp;
    nsp.lowpass = dec.lowpass;
    for (const auto& level : dec.bands) {
        if (level.size() != cfg.directions) throw ShapeError("decomposition direction count does not match config");
        for (const auto& b : level)
            if (!b.same_shape(dec.lowpass)) throw ShapeError("nsct band dims differ from lowpass");
        nsp.bandpass.push_back(nsdfb_reconstruct(level));
    }
    return nsp_reconstruct(nsp);
}

AliasingReport aliasing_energy(const Plane& slice) {
    if (slice.rows % 2 != 0 || slice.cols % 2 != 0 || slice.empty()) throw SizeError("aliasing_energy needs even dims");
    const Plane band = nsp_decompose(slice, 1, ExtensionMode::periodic).bandpass.front();
    const auto G = fft2(band);
    const long N = static_cast<long>(band.rows), M = static_cast<long>(band.cols);
    auto centered = [](long u, long n) { return u < n / 2 ? u : u - n; };
    auto in_base = [](long u, long n) { return 4 * u >= -n && 4 * u < n; };
    double outside = 0.0;
    for (long u = 0; u < N; ++u)
        for (long v = 0; v < M; ++v)
            if (!(in_base(centered(u, N), N) && in_base(centered(v, M), M))) outside += std::norm(G[static_cast<std::size_t>(u * M + v)]);
    AliasingReport r;
    // Each folded copy enters the half-size spectrum scaled by 1/4.
    r.aliased = outside / (4.0 * static_cast<double>(N * M));
    r.nonsubsampled = 0.0;
    r.band_energy = energy(band);
    return r;
}

}  // namespace freqdec
