#include "freqdec/io.hpp"

#include "freqdec/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace freqdec {
namespace {

constexpr double kPi = std::numbers::pi;

class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : gen_(seed) {}
    double operator()(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

std::uint64_t modality_seed(std::uint64_t seed, std::size_t m) {
    return seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL * (m + 1);
}

// Physical-ish coordinates: z is stretched so a sphere spans the in-plane extent.
struct Grid {
    Dims dims;
    double span;  // min(H, W)
    double zscale;
    double cz, cy, cx;

    explicit Grid(const Dims& d)
        : dims(d), span(static_cast<double>(std::min(d.h, d.w))),
          zscale(d.d > 1 ? span / static_cast<double>(d.d) : 0.0), cz((static_cast<double>(d.d) - 1) / 2),
          cy((static_cast<double>(d.h) - 1) / 2), cx((static_cast<double>(d.w) - 1) / 2) {}
};

void normalize_unit(std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double a = *lo;
    const double range = *hi - *lo;
    for (double& x : v) x = range > 0 ? (x - a) / range : 0.0;
}

std::vector<double> smooth_blob(const Grid& g, Uniform& u) {
    std::vector<double> v(g.dims.count(), 0.0);
    for (int b = 0; b < 2; ++b) {
        const double oy = u(-0.12, 0.12) * g.span, ox = u(-0.12, 0.12) * g.span;
        const double sigma = u(0.12, 0.2) * g.span;
        const double amp = u(0.5, 1.0);
        for (std::size_t z = 0; z < g.dims.d; ++z)
            for (std::size_t y = 0; y < g.dims.h; ++y)
                for (std::size_t x = 0; x < g.dims.w; ++x) {
                    const double dz = (z - g.cz) * g.zscale, dy = y - g.cy - oy, dx = x - g.cx - ox;
                    v[(z * g.dims.h + y) * g.dims.w + x] += amp * std::exp(-(dz * dz + dy * dy + dx * dx) / (2 * sigma * sigma));
                }
    }
    const double peak = *std::max_element(v.begin(), v.end());
    for (double& x : v) x /= peak;
    return v;
}

std::vector<double> textured_shell(const Grid& g, Uniform& u) {
    const double oy = u(-1.0, 1.0), ox = u(-1.0, 1.0);
    const double radius = g.span * u(0.16, 0.2);
    const double phase = u(0.0, 2 * kPi);
    const double w_blob = u(0.5, 0.7);
    const double edge = 0.08 * g.span;
    const double shell_r = 1.45 * radius, shell_w = 0.22 * radius;
    std::vector<double> v(g.dims.count());
    for (std::size_t z = 0; z < g.dims.d; ++z)
        for (std::size_t y = 0; y < g.dims.h; ++y)
            for (std::size_t x = 0; x < g.dims.w; ++x) {
                const double dz = (z - g.cz) * g.zscale, dy = y - g.cy - oy, dx = x - g.cx - ox;
                const double rho = std::sqrt(dz * dz + dy * dy + dx * dx);
                const double blob = 1.0 / (1.0 + std::exp((rho - radius) / edge));
                const double env = std::exp(-std::pow((rho - shell_r) / shell_w, 2));
                const double tex = env * (0.5 + 0.5 * std::cos(kShellFrequency * rho + phase));
                v[(z * g.dims.h + y) * g.dims.w + x] = w_blob * blob + (1 - w_blob) * tex;
            }
    normalize_unit(v);
    return v;
}

std::vector<double> oriented_stripes(const Grid& g, Uniform& u, double theta_deg) {
    const double t = theta_deg * kPi / 180.0;
    const double kx = kStripeFrequency * std::cos(t), ky = kStripeFrequency * std::sin(t);
    const double phase = u(0.0, 2 * kPi);
    std::vector<double> v(g.dims.count());
    for (std::size_t z = 0; z < g.dims.d; ++z)
        for (std::size_t y = 0; y < g.dims.h; ++y)
            for (std::size_t x = 0; x < g.dims.w; ++x)
                v[(z * g.dims.h + y) * g.dims.w + x] = 0.5 + 0.5 * std::cos(kx * x + ky * y + phase);
    return v;
}

std::vector<double> checker(const Grid& g, Uniform& u) {
    const double sigma = g.span * u(0.25, 0.35);
    std::vector<double> v(g.dims.count());
    for (std::size_t z = 0; z < g.dims.d; ++z)
        for (std::size_t y = 0; y < g.dims.h; ++y)
            for (std::size_t x = 0; x < g.dims.w; ++x) {
                const double dz = (z - g.cz) * g.zscale, dy = y - g.cy, dx = x - g.cx;
                const double env = std::exp(-(dz * dz + dy * dy + dx * dx) / (2 * sigma * sigma));
                const double sign = ((x + y + z) % 2 == 0) ? 1.0 : -1.0;
                v[(z * g.dims.h + y) * g.dims.w + x] = 0.5 + 0.5 * sign * env;
            }
    return v;
}

const char* kModalityNames[] = {"t1", "t1gd", "t2", "flair"};

}  // namespace

std::string phantom_kind_name(PhantomKind kind) {
    switch (kind) {
        case PhantomKind::smooth_blob: return "smooth-blob";
        case PhantomKind::textured_shell: return "textured-shell";
        case PhantomKind::oriented_stripes: return "oriented-stripes";
        case PhantomKind::checker: return "checker";
    }
    return "unknown";
}

PhantomSpec parse_phantom_kind(std::string_view text) {
    PhantomSpec spec;
    if (text == "smooth-blob") {
        spec.kind = PhantomKind::smooth_blob;
    } else if (text == "textured-shell") {
        spec.kind = PhantomKind::textured_shell;
    } else if (text == "checker") {
        spec.kind = PhantomKind::checker;
    } else if (text.starts_with("oriented-stripes")) {
        spec.kind = PhantomKind::oriented_stripes;
        auto rest = text.substr(std::string_view("oriented-stripes").size());
        if (!rest.empty()) {
            if (rest.front() != '(' || rest.back() != ')') throw ConfigError("expected oriented-stripes(<deg>)");
            const std::string num(rest.substr(1, rest.size() - 2));
            std::size_t used = 0;
            try {
                spec.theta_deg = std::stod(num, &used);
            } catch (const std::exception&) {
                throw ConfigError("bad stripe angle '" + num + "'");
            }
            if (used != num.size()) throw ConfigError("bad stripe angle '" + num + "'");
        }
    } else {
        throw ConfigError("unknown phantom kind '" + std::string(text) + "'");
    }
    return spec;
}

MultiModalVolume make_phantom(const PhantomSpec& spec, const Dims& dims, std::uint64_t seed) {
    if (dims.d < 1 || dims.h < 16 || dims.w < 16)
        throw SizeError("phantom needs H, W >= 16 and D >= 1, got " + to_string(dims));
    if (spec.modalities < 1) throw ConfigError("phantom needs at least one modality");
    const Grid grid(dims);
    std::vector<std::pair<std::string, Volume3D>> mods;
    for (std::size_t m = 0; m < spec.modalities; ++m) {
        Uniform u(modality_seed(seed, m));
        std::vector<double> v;
        switch (spec.kind) {
            case PhantomKind::smooth_blob: v = smooth_blob(grid, u); break;
            case PhantomKind::textured_shell: v = textured_shell(grid, u); break;
            case PhantomKind::oriented_stripes: v = oriented_stripes(grid, u, spec.theta_deg); break;
            case PhantomKind::checker: v = checker(grid, u); break;
        }
        std::vector<float> f(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) f[i] = static_cast<float>(std::clamp(v[i], 0.0, 1.0));
        const std::string name = m < 4 ? kModalityNames[m] : "m" + std::to_string(m);
        mods.emplace_back(name, Volume3D(dims, std::move(f)));
    }
    return MultiModalVolume(std::move(mods));
}

}  // namespace freqdec
