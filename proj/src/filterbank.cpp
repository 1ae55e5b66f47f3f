#include "freqdec/filterbank.hpp"

#include "freqdec/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace freqdec {

long extend_index(long i, long n, ExtensionMode mode) {
    if (i >= 0 && i < n) return i;
    switch (mode) {
        case ExtensionMode::periodic: return ((i % n) + n) % n;
        case ExtensionMode::symmetric: {
            const long p = 2 * n;
            long m = ((i % p) + p) % p;
            return m < n ? m : p - 1 - m;
        }
        case ExtensionMode::zero: return -1;
    }
    return -1;
}

Kernel2D::Kernel2D(std::size_t r, std::size_t c, std::vector<double> t, long ar, long ac)
    : rows(r), cols(c), taps(std::move(t)), anchor_row(ar), anchor_col(ac) {
    if (rows == 0 || cols == 0) throw SizeError("kernel dims must be >= 1");
    if (taps.size() != rows * cols) throw ShapeError("kernel tap count does not match dims");
    for (double v : taps)
        if (!std::isfinite(v)) throw NumericError("kernel taps must be finite");
}

Kernel2D Kernel2D::centered(std::size_t r, std::size_t c, std::vector<double> t) {
    return Kernel2D(r, c, std::move(t), static_cast<long>(r / 2), static_cast<long>(c / 2));
}

double Kernel2D::sum() const {
    double s = 0.0;
    for (double v : taps) s += v;
    return s;
}

std::complex<double> Kernel2D::response(double wy, double wx) const {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = at(i, j);
            if (v == 0.0) continue;
            const double dy = static_cast<double>(static_cast<long>(i) - anchor_row);
            const double dx = static_cast<double>(static_cast<long>(j) - anchor_col);
            acc += v * std::polar(1.0, -(wy * dy + wx * dx));
        }
    return acc;
}

Kernel2D convolve(const Kernel2D& a, const Kernel2D& b) {
    Kernel2D out(a.rows + b.rows - 1, a.cols + b.cols - 1, std::vector<double>((a.rows + b.rows - 1) * (a.cols + b.cols - 1), 0.0),
                 a.anchor_row + b.anchor_row, a.anchor_col + b.anchor_col);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const double va = a.at(i, j);
            if (va == 0.0) continue;
            for (std::size_t k = 0; k < b.rows; ++k)
                for (std::size_t l = 0; l < b.cols; ++l) out.at(i + k, j + l) += va * b.at(k, l);
        }
    return out;
}

Kernel2D add(const Kernel2D& a, const Kernel2D& b, double scale_b) {
    const long top = std::max(a.anchor_row, b.anchor_row);
    const long left = std::max(a.anchor_col, b.anchor_col);
    const long bottom = std::max(static_cast<long>(a.rows) - a.anchor_row, static_cast<long>(b.rows) - b.anchor_row);
    const long right = std::max(static_cast<long>(a.cols) - a.anchor_col, static_cast<long>(b.cols) - b.anchor_col);
    const auto R = static_cast<std::size_t>(top + bottom);
    const auto C = static_cast<std::size_t>(left + right);
    Kernel2D out(R, C, std::vector<double>(R * C, 0.0), top, left);
    auto place = [&](const Kernel2D& k, double s) {
        for (std::size_t i = 0; i < k.rows; ++i)
            for (std::size_t j = 0; j < k.cols; ++j)
                out.at(static_cast<std::size_t>(static_cast<long>(i) - k.anchor_row + top),
                       static_cast<std::size_t>(static_cast<long>(j) - k.anchor_col + left)) += s * k.at(i, j);
    };
    place(a, 1.0);
    place(b, scale_b);
    return out;
}

Kernel2D scale(Kernel2D k, double s) {
    for (double& v : k.taps) v *= s;
    return k;
}

Kernel2D modulate_x(Kernel2D k) {
    for (std::size_t i = 0; i < k.rows; ++i)
        for (std::size_t j = 0; j < k.cols; ++j)
            if ((static_cast<long>(j) - k.anchor_col) % 2 != 0) k.at(i, j) = -k.at(i, j);
    return k;
}

Kernel2D resample(const Kernel2D& k, std::pair<long, long> r1, std::pair<long, long> r2) {
    struct Tap {
        long dy, dx;
        double v;
    };
    std::vector<Tap> moved;
    long min_y = 0, max_y = 0, min_x = 0, max_x = 0;
    for (std::size_t i = 0; i < k.rows; ++i)
        for (std::size_t j = 0; j < k.cols; ++j) {
            const double v = k.at(i, j);
            if (v == 0.0) continue;
            const long dy = static_cast<long>(i) - k.anchor_row;
            const long dx = static_cast<long>(j) - k.anchor_col;
            const long nx = dx * r1.first + dy * r2.first;
            const long ny = dx * r1.second + dy * r2.second;
            moved.push_back({ny, nx, v});
            min_y = std::min(min_y, ny);
            max_y = std::max(max_y, ny);
            min_x = std::min(min_x, nx);
            max_x = std::max(max_x, nx);
        }
    const auto R = static_cast<std::size_t>(max_y - min_y + 1);
    const auto C = static_cast<std::size_t>(max_x - min_x + 1);
    Kernel2D out(R, C, std::vector<double>(R * C, 0.0), -min_y, -min_x);
    for (const auto& t : moved) out.at(static_cast<std::size_t>(t.dy - min_y), static_cast<std::size_t>(t.dx - min_x)) += t.v;
    return out;
}

Kernel2D mcclellan(const std::vector<double>& poly, const Kernel2D& t) {
    if (poly.empty()) throw ConfigError("empty polynomial");
    Kernel2D power = Kernel2D::identity();
    Kernel2D acc = scale(power, poly[0]);
    for (std::size_t k = 1; k < poly.size(); ++k) {
        power = convolve(power, t);
        acc = add(acc, power, poly[k]);
    }
    return acc;
}

namespace {

struct SparseTap {
    long dy, dx;
    double v;
};

std::vector<SparseTap> sparse_taps(const Kernel2D& k, long dilation) {
    std::vector<SparseTap> out;
    for (std::size_t i = 0; i < k.rows; ++i)
        for (std::size_t j = 0; j < k.cols; ++j)
            if (k.at(i, j) != 0.0)
                out.push_back({(static_cast<long>(i) - k.anchor_row) * dilation, (static_cast<long>(j) - k.anchor_col) * dilation, k.at(i, j)});
    return out;
}

}  // namespace

Plane atrous_conv2d(const Plane& img, const Kernel2D& k, std::size_t dilation, ExtensionMode ext) {
    if (img.empty()) throw SizeError("conv2d on empty image");
    if (dilation < 1) throw ConfigError("dilation must be >= 1");
    const std::size_t ext_r = (k.rows - 1) * dilation + 1;
    const std::size_t ext_c = (k.cols - 1) * dilation + 1;
    if (ext_r > 2 * img.rows || ext_c > 2 * img.cols) throw SizeError("kernel larger than twice the image");

    const long R = static_cast<long>(img.rows);
    const long C = static_cast<long>(img.cols);
    Plane out(img.rows, img.cols);
    std::vector<long> col_idx(img.cols);
    for (const auto& t : sparse_taps(k, static_cast<long>(dilation))) {
        for (long c = 0; c < C; ++c) col_idx[static_cast<std::size_t>(c)] = extend_index(c - t.dx, C, ext);
        for (long r = 0; r < R; ++r) {
            const long sr = extend_index(r - t.dy, R, ext);
            if (sr < 0) continue;
            const double* src = img.data.data() + sr * C;
            double* dst = out.data.data() + r * C;
            for (long c = 0; c < C; ++c) {
                const long sc = col_idx[static_cast<std::size_t>(c)];
                if (sc >= 0) dst[c] += t.v * src[sc];
            }
        }
    }
    return out;
}

Plane conv2d(const Plane& img, const Kernel2D& k, ExtensionMode ext) { return atrous_conv2d(img, k, 1, ext); }

Plane filter_axis(const Plane& img, const Filter1D& f, Axis axis, ExtensionMode ext, std::size_t dilation) {
    if (img.empty()) throw SizeError("filter on empty image");
    const long R = static_cast<long>(img.rows);
    const long C = static_cast<long>(img.cols);
    const long n = axis == Axis::rows ? R : C;
    if ((f.taps.size() - 1) * dilation + 1 > static_cast<std::size_t>(2 * n)) throw SizeError("filter longer than twice the signal");
    Plane out(img.rows, img.cols);
    std::vector<long> idx(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < f.taps.size(); ++k) {
        const double v = f.taps[k];
        if (v == 0.0) continue;
        const long off = (static_cast<long>(k) - f.anchor) * static_cast<long>(dilation);
        for (long i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = extend_index(i - off, n, ext);
        if (axis == Axis::rows) {
            for (long r = 0; r < R; ++r) {
                const long sr = idx[static_cast<std::size_t>(r)];
                if (sr < 0) continue;
                for (long c = 0; c < C; ++c) out.data[r * C + c] += v * img.data[sr * C + c];
            }
        } else {
            for (long r = 0; r < R; ++r)
                for (long c = 0; c < C; ++c) {
                    const long sc = idx[static_cast<std::size_t>(c)];
                    if (sc >= 0) out.data[r * C + c] += v * img.data[r * C + sc];
                }
        }
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> FilterBank1D::analyze(const std::vector<double>& x) const {
    const long N = static_cast<long>(x.size());
    if (N < 2 || N % 2 != 0) throw SizeError("decimated analysis needs an even length >= 2");
    const long half = N / 2;
    auto run = [&](const Filter1D& f, int phase) {
        std::vector<double> y(static_cast<std::size_t>(half), 0.0);
        for (long n = 0; n < half; ++n) {
            double acc = 0.0;
            for (std::size_t k = 0; k < f.taps.size(); ++k)
                acc += f.taps[k] * x[static_cast<std::size_t>(extend_index(2 * n + phase + static_cast<long>(k) - f.anchor, N, ExtensionMode::periodic))];
            y[static_cast<std::size_t>(n)] = acc;
        }
        return y;
    };
    return {run(analysis_lo, phase_lo), run(analysis_hi, phase_hi)};
}

std::vector<double> FilterBank1D::synthesize(const std::vector<double>& lo, const std::vector<double>& hi) const {
    if (lo.size() != hi.size()) throw ShapeError("subband lengths differ");
    const long half = static_cast<long>(lo.size());
    const long N = 2 * half;
    std::vector<double> x(static_cast<std::size_t>(N), 0.0);
    auto run = [&](const std::vector<double>& c, const Filter1D& f, int phase) {
        for (long n = 0; n < half; ++n)
            for (std::size_t k = 0; k < f.taps.size(); ++k)
                x[static_cast<std::size_t>(extend_index(2 * n + phase + static_cast<long>(k) - f.anchor, N, ExtensionMode::periodic))] +=
                    c[static_cast<std::size_t>(n)] * f.taps[k];
    };
    run(lo, synthesis_lo, phase_lo);
    run(hi, synthesis_hi, phase_hi);
    return x;
}

double FilterBank1D::pr_residual(std::size_t n, std::uint64_t seed) const {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = u(gen);
    const auto [lo, hi] = analyze(x);
    const auto y = synthesize(lo, hi);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

namespace {

const FilterBank1D& checked(const FilterBank1D& b) {
    if (b.pr_residual() >= 1e-8) throw NumericError("built-in filter bank '" + b.name + "' fails perfect reconstruction");
    return b;
}

std::vector<double> scaled(std::vector<double> v, double s) {
    for (double& x : v) x *= s;
    return v;
}

std::vector<double> modulated(std::vector<double> v) {
    const long a = static_cast<long>(v.size() / 2);
    for (std::size_t k = 0; k < v.size(); ++k)
        if ((static_cast<long>(k) - a) % 2 != 0) v[k] = -v[k];
    return v;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// p(y) with y = (1 - x) / 2, returned as a polynomial in x.
std::vector<double> substitute_half_versine(const std::vector<double>& py) {
    std::vector<double> out{0.0};
    std::vector<double> power{1.0};
    const std::vector<double> lin{0.5, -0.5};
    for (double c : py) {
        if (out.size() < power.size()) out.resize(power.size(), 0.0);
        for (std::size_t i = 0; i < power.size(); ++i) out[i] += c * power[i];
        power = poly_mul(power, lin);
    }
    return out;
}

constexpr double kSqrt2 = std::numbers::sqrt2;

}  // namespace

double eval_poly(const std::vector<double>& poly, double x) {
    double acc = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<double> cosine_poly_taps(const std::vector<double>& poly) {
    const std::size_t deg = poly.size() - 1;
    std::vector<double> out(2 * deg + 1, 0.0);
    std::vector<double> power{1.0};
    for (std::size_t k = 0; k <= deg; ++k) {
        const std::size_t off = deg - k;
        for (std::size_t i = 0; i < power.size(); ++i) out[off + i] += poly[k] * power[i];
        power = poly_mul(power, {0.5, 0.0, 0.5});
    }
    return out;
}

const Prototype97& cdf97_prototype() {
    static const Prototype97 proto = [] {
        // Real root of 20y^3 + 10y^2 + 4y + 1.
        auto f = [](double y) { return ((20 * y + 10) * y + 4) * y + 1; };
        double lo = -1.0, hi = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) < 0 ? lo : hi) = mid;
        }
        const double r = 0.5 * (lo + hi);
        // P4(y) = (1 - y/r) * quad(y)
        const std::vector<double> p4{1, 4, 10, 20};
        std::vector<double> quad(3);
        quad[0] = p4[0];
        for (std::size_t k = 1; k < 3; ++k) quad[k] = p4[k] + quad[k - 1] / r;
        const std::vector<double> lin{1.0, -1.0 / r};
        const std::vector<double> cos4 = poly_mul({0.5, 0.5}, {0.5, 0.5});
        Prototype97 p;
        p.ph = poly_mul(cos4, substitute_half_versine(quad));
        p.pg = poly_mul(cos4, substitute_half_versine(lin));
        const double nh = eval_poly(p.ph, 1.0), ng = eval_poly(p.pg, 1.0);
        for (double& c : p.ph) c /= nh;
        for (double& c : p.pg) c /= ng;
        return p;
    }();
    return proto;
}

const FilterBank1D& FilterBank1D::haar() {
    static const FilterBank1D bank = [] {
        const double s = 1.0 / kSqrt2;
        FilterBank1D b;
        b.name = "haar";
        b.analysis_lo = {{s, s}, 0};
        b.analysis_hi = {{s, -s}, 0};
        b.synthesis_lo = b.analysis_lo;
        b.synthesis_hi = b.analysis_hi;
        return b;
    }();
    return checked(bank);
}

const FilterBank1D& FilterBank1D::cdf97() {
    static const FilterBank1D bank = [] {
        const auto& p = cdf97_prototype();
        const auto h = scaled(cosine_poly_taps(p.ph), kSqrt2);
        const auto g = scaled(cosine_poly_taps(p.pg), kSqrt2);
        FilterBank1D b;
        b.name = "cdf97";
        b.analysis_lo = Filter1D::centered(h);
        b.analysis_hi = Filter1D::centered(modulated(g));
        b.synthesis_lo = Filter1D::centered(g);
        b.synthesis_hi = Filter1D::centered(modulated(h));
        b.phase_lo = 0;
        b.phase_hi = 1;
        return b;
    }();
    return checked(bank);
}

const FilterBank1D& FilterBank1D::near_sym_b() {
    static const FilterBank1D bank = [] {
        const std::vector<double> h0o{-0.0017578125, 0, 0.022265625, -0.046875, -0.0482421875, 0.296875, 0.55546875,
                                      0.296875, -0.0482421875, -0.046875, 0.022265625, 0, -0.0017578125};
        const std::vector<double> h1o{-7.062639508928571e-05, 0, 0.0013419015066964285, -0.0018833705357142855,
                                      -0.007156808035714285, 0.023856026785714284, 0.05564313616071428,
                                      -0.05168805803571428, -0.29975760323660716, 0.5594308035714286,
                                      -0.29975760323660716, -0.05168805803571428, 0.05564313616071428,
                                      0.023856026785714284, -0.007156808035714285, -0.0018833705357142855,
                                      0.0013419015066964285, 0, -7.062639508928571e-05};
        const std::vector<double> g0o{7.062639508928571e-05, 0, -0.0013419015066964285, -0.0018833705357142855,
                                      0.007156808035714285, 0.023856026785714284, -0.05564313616071428,
                                      -0.05168805803571428, 0.29975760323660716, 0.5594308035714286,
                                      0.29975760323660716, -0.05168805803571428, -0.05564313616071428,
                                      0.023856026785714284, 0.007156808035714285, -0.0018833705357142855,
                                      -0.0013419015066964285, 0, 7.062639508928571e-05};
        const std::vector<double> g1o{-0.0017578125, 0, 0.022265625, 0.046875, -0.0482421875, -0.296875, 0.55546875,
                                      -0.296875, -0.0482421875, 0.046875, 0.022265625, 0, -0.0017578125};
        FilterBank1D b;
        b.name = "near_sym_b";
        b.analysis_lo = Filter1D::centered(scaled(h0o, kSqrt2));
        b.analysis_hi = Filter1D::centered(scaled(h1o, kSqrt2));
        b.synthesis_lo = Filter1D::centered(scaled(g0o, kSqrt2));
        b.synthesis_hi = Filter1D::centered(scaled(g1o, kSqrt2));
        b.phase_lo = 1;
        b.phase_hi = 0;
        return b;
    }();
    return checked(bank);
}

namespace {

std::vector<double> negate_arg(std::vector<double> poly) {
    for (std::size_t k = 1; k < poly.size(); k += 2) poly[k] = -poly[k];
    return poly;
}

Kernel2D diamond_kernel() {
    // t(w) = (cos wx + cos wy) / 2
    return Kernel2D::centered(3, 3, {0, 0.25, 0, 0.25, 0, 0.25, 0, 0.25, 0});
}

// Equalizes the peak-to-trough spread of b^2 Ph(t)^2 + Pg(-t)^2 / b^2 over t in [-1, 1].
double balance_factor(const Prototype97& p) {
    auto spread = [&](double logb) {
        const double b2 = std::exp(2 * logb);
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i <= 2000; ++i) {
            const double t = -1.0 + i / 1000.0;
            const double a = eval_poly(p.ph, t), g = eval_poly(p.pg, -t);
            const double e = b2 * a * a + g * g / b2;
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        return (hi - lo) / (hi + lo);
    };
    double a = -0.5, b = 0.5;
    const double phi = (std::sqrt(5.0) - 1) / 2;
    for (int i = 0; i < 80; ++i) {
        const double c = b - phi * (b - a), d = a + phi * (b - a);
        (spread(c) < spread(d) ? b : a) = (spread(c) < spread(d) ? d : c);
    }
    return std::exp(0.5 * (a + b));
}

}  // namespace

const FanBank& fan_bank() {
    static const FanBank bank = [] {
        const auto& p = cdf97_prototype();
        const Kernel2D t = diamond_kernel();
        FanBank fb;
        fb.balance = balance_factor(p);
        const double b = fb.balance;
        fb.analysis[0] = scale(modulate_x(mcclellan(p.ph, t)), b);
        fb.analysis[1] = scale(modulate_x(mcclellan(negate_arg(p.pg), t)), 1.0 / b);
        fb.synthesis[0] = scale(modulate_x(mcclellan(p.pg, t)), 1.0 / b);
        fb.synthesis[1] = scale(modulate_x(mcclellan(negate_arg(p.ph), t)), b);
        return fb;
    }();
    return bank;
}

std::pair<Kernel2D, Kernel2D> fan_filter_pair() {
    const auto& fb = fan_bank();
    return {fb.analysis[0], fb.analysis[1]};
}

double fan_tiling_deviation(const Kernel2D& h0, const Kernel2D& h1, std::size_t n) {
    std::vector<double> e;
    e.reserve(n * n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double wy = -std::numbers::pi + 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
            const double wx = -std::numbers::pi + 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
            const double v = std::norm(h0.response(wy, wx)) + std::norm(h1.response(wy, wx));
            e.push_back(v);
            mean += v;
        }
    mean /= static_cast<double>(e.size());
    double dev = 0.0;
    for (double v : e) dev = std::max(dev, std::abs(v - mean));
    return dev;
}

}  // namespace freqdec
