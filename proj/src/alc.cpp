#include "freqdec/alc.hpp"

#include "freqdec/error.hpp"

#include <cmath>
#include <cstring>
#include <random>

namespace freqdec {

std::vector<double> laplacian_taps(const KernelDims& k) {
    for (std::size_t e : k)
        if (e == 0 || e % 2 == 0) throw ConfigError("kernel dims must be odd");
    std::vector<double> t(k[0] * k[1] * k[2], 0.0);
    const std::size_t ci = k[0] / 2, cj = k[1] / 2, cl = k[2] / 2;
    auto idx = [&](std::size_t i, std::size_t j, std::size_t l) { return (i * k[1] + j) * k[2] + l; };
    double neighbors = 0.0;
    if (k[0] > 1) { t[idx(ci - 1, cj, cl)] = t[idx(ci + 1, cj, cl)] = 1.0; neighbors += 2; }
    if (k[1] > 1) { t[idx(ci, cj - 1, cl)] = t[idx(ci, cj + 1, cl)] = 1.0; neighbors += 2; }
    if (k[2] > 1) { t[idx(ci, cj, cl - 1)] = t[idx(ci, cj, cl + 1)] = 1.0; neighbors += 2; }
    t[idx(ci, cj, cl)] = -neighbors;
    return t;
}

Tensor4 Tensor4::from_channels(const ChannelVolume& cv) {
    const Dims& d = cv.dims();
    Tensor4 t(cv.channels(), d.d, d.h, d.w);
    for (std::size_t c = 0; c < cv.channels(); ++c)
        std::copy(cv.channel(c).data().begin(), cv.channel(c).data().end(), t.data.begin() + static_cast<long>(c * d.count()));
    return t;
}

Tensor4 Tensor4::from_modalities(const MultiModalVolume& mm) { return from_channels(to_channels(mm)); }

AlcState init_alc(std::size_t c_out, std::size_t c_in, const KernelDims& kdims) {
    if (c_out == 0 || c_in == 0) throw ConfigError("alc needs at least one input and output channel");
    const auto lap = laplacian_taps(kdims);
    AlcState s;
    s.c_out = c_out;
    s.c_in = c_in;
    s.kdims = kdims;
    for (std::size_t k = 0; k < c_out * c_in; ++k) s.benchmark.insert(s.benchmark.end(), lap.begin(), lap.end());
    s.theta = s.benchmark;
    s.fisher.assign(s.theta.size(), 0.0);
    s.mask.assign(s.theta.size(), 0);
    return s;
}

double ewc_loss(const AlcState& s) {
    double e = 0.0;
    for (std::size_t p = 0; p < s.theta.size(); ++p) {
        const double d = s.theta[p] - s.benchmark[p];
        e += d * d;
    }
    return e;
}

std::vector<double> ewc_grad(const AlcState& s) {
    std::vector<double> g(s.theta.size());
    for (std::size_t p = 0; p < g.size(); ++p) g[p] = 2.0 * (s.theta[p] - s.benchmark[p]);
    return g;
}

void accumulate_fisher(AlcState& s, const std::vector<double>& grad) {
    if (grad.size() != s.theta.size()) throw ShapeError("gradient size does not match theta");
    for (double g : grad)
        if (!std::isfinite(g)) throw NumericError("non-finite gradient");
    const double n = static_cast<double>(++s.batches_seen);
    for (std::size_t p = 0; p < grad.size(); ++p) s.fisher[p] += (grad[p] * grad[p] - s.fisher[p]) / n;
}

void compute_mask(AlcState& s, double k) {
    if (s.masked) throw StateError("importance mask already computed");
    if (s.batches_seen == 0) throw StateError("no Fisher batches accumulated");
    const double n = static_cast<double>(s.fisher.size());
    double mean = 0.0;
    for (double f : s.fisher) mean += f;
    mean /= n;
    double var = 0.0;
    for (double f : s.fisher) var += (f - mean) * (f - mean);
    const double threshold = mean + k * std::sqrt(var / n);
    for (std::size_t p = 0; p < s.fisher.size(); ++p) s.mask[p] = s.fisher[p] > threshold ? 1 : 0;
    s.masked = true;
}

std::vector<double> apply_freeze(const AlcState& s, std::vector<double> grad) {
    if (!s.masked) throw StateError("apply_freeze before the mask is computed");
    if (grad.size() != s.mask.size()) throw ShapeError("gradient size does not match theta");
    for (std::size_t p = 0; p < grad.size(); ++p)
        if (s.mask[p]) grad[p] = 0.0;
    return grad;
}

namespace {

void check_input(const Tensor4& x, const AlcState& s) {
    if (x.c != s.c_in) throw ShapeError("input has " + std::to_string(x.c) + " channels, layer expects " + std::to_string(s.c_in));
    if (x.data.size() != x.c * x.voxels() || x.voxels() == 0) throw LengthError("tensor data length does not match its shape");
}

// Calls fn(out_index, in_index, tap_offset) over every valid tap of every
// output voxel for the (co, ci) kernel.
template <typename Fn>
void for_each_tap(const Tensor4& x, const AlcState& s, Fn&& fn) {
    const long D = static_cast<long>(x.d), H = static_cast<long>(x.h), W = static_cast<long>(x.w);
    const long kh = static_cast<long>(s.kdims[0]), kw = static_cast<long>(s.kdims[1]), kd = static_cast<long>(s.kdims[2]);
    for (long i = 0; i < kh; ++i)
        for (long j = 0; j < kw; ++j)
            for (long l = 0; l < kd; ++l) {
                const long dy = i - kh / 2, dx = j - kw / 2, dz = l - kd / 2;
                const std::size_t tap = static_cast<std::size_t>((i * kw + j) * kd + l);
                for (long z = std::max(0L, -dz); z < std::min(D, D - dz); ++z)
                    for (long y = std::max(0L, -dy); y < std::min(H, H - dy); ++y) {
                        const std::size_t out_row = static_cast<std::size_t>((z * H + y) * W);
                        const std::size_t in_row = static_cast<std::size_t>(((z + dz) * H + y + dy) * W + dx);
                        fn(tap, out_row, in_row, static_cast<std::size_t>(std::max(0L, -dx)), static_cast<std::size_t>(std::min(W, W - dx)));
                    }
            }
}

}  // namespace

Tensor4 alc_forward(const Tensor4& x, const AlcState& s) {
    check_input(x, s);
    Tensor4 y(s.c_out, x.d, x.h, x.w);
    const std::size_t V = x.voxels(), T = s.taps_per_kernel();
    for (std::size_t co = 0; co < s.c_out; ++co)
        for (std::size_t ci = 0; ci < s.c_in; ++ci) {
            const double* th = s.theta.data() + (co * s.c_in + ci) * T;
            double* out = y.data.data() + co * V;
            const double* in = x.data.data() + ci * V;
            for_each_tap(x, s, [&](std::size_t tap, std::size_t orow, std::size_t irow, std::size_t x0, std::size_t x1) {
                const double w = th[tap];
                if (w == 0.0) return;
                for (std::size_t c = x0; c < x1; ++c) out[orow + c] += w * in[irow + c];
            });
        }
    return y;
}

std::vector<double> alc_theta_grad(const Tensor4& x, const Tensor4& g, const AlcState& s) {
    check_input(x, s);
    if (g.c != s.c_out || g.d != x.d || g.h != x.h || g.w != x.w) throw ShapeError("upstream gradient shape mismatch");
    std::vector<double> grad(s.theta.size(), 0.0);
    const std::size_t V = x.voxels(), T = s.taps_per_kernel();
    for (std::size_t co = 0; co < s.c_out; ++co)
        for (std::size_t ci = 0; ci < s.c_in; ++ci) {
            double* gt = grad.data() + (co * s.c_in + ci) * T;
            const double* up = g.data.data() + co * V;
            const double* in = x.data.data() + ci * V;
            for_each_tap(x, s, [&](std::size_t tap, std::size_t orow, std::size_t irow, std::size_t x0, std::size_t x1) {
                double acc = 0.0;
                for (std::size_t c = x0; c < x1; ++c) acc += up[orow + c] * in[irow + c];
                gt[tap] += acc;
            });
        }
    return grad;
}

LossGrad alc_loss_and_grad(const Tensor4& x, const Tensor4& target, const AlcState& s, double lambda2) {
    Tensor4 r = alc_forward(x, s);
    if (target.c != r.c || target.data.size() != r.data.size()) throw ShapeError("target shape does not match layer output");
    const double n = static_cast<double>(r.data.size());
    LossGrad out;
    for (std::size_t i = 0; i < r.data.size(); ++i) {
        const double e = r.data[i] - target.data[i];
        out.loss += e * e;
        r.data[i] = 2.0 * e / n;
    }
    out.loss = out.loss / n + lambda2 * ewc_loss(s);
    out.grad = alc_theta_grad(x, r, s);
    for (std::size_t p = 0; p < out.grad.size(); ++p) out.grad[p] += lambda2 * 2.0 * (s.theta[p] - s.benchmark[p]);
    return out;
}

Tensor4 alc_demo_target(const Tensor4& x, std::size_t c_out, const KernelDims& k, std::uint64_t seed) {
    AlcState t = init_alc(c_out, x.c, k);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, 0.25);
    const std::size_t T = t.taps_per_kernel();
    for (std::size_t kern = 0; kern < c_out * x.c; ++kern) {
        std::vector<double> p(T);
        double mean = 0.0;
        for (double& v : p) mean += v = noise(gen);
        mean /= static_cast<double>(T);
        for (std::size_t i = 0; i < T; ++i) t.theta[kern * T + i] += p[i] - mean;
    }
    return alc_forward(x, t);
}

std::uint64_t fnv1a(const std::vector<double>& v) {
    std::uint64_t h = 1469598103934665603ULL;
    for (double d : v) {
        unsigned char b[sizeof(double)];
        std::memcpy(b, &d, sizeof d);
        for (unsigned char c : b) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

AlcDemoResult alc_demo_train(const Tensor4& x, const AlcDemoConfig& cfg) {
    if (cfg.steps <= cfg.warmup) throw ConfigError("steps must exceed warmup steps");
    if (cfg.warmup == 0) throw ConfigError("warmup must be at least one step");
    if (!(cfg.lr >= 0.0) || !(cfg.lambda2 >= 0.0)) throw ConfigError("lr and lambda2 must be >= 0");
    AlcDemoResult res;
    res.state = init_alc(cfg.c_out, x.c);
    res.target = alc_demo_target(x, cfg.c_out, res.state.kdims, cfg.seed);
    AlcState& s = res.state;
    std::vector<double> velocity(s.theta.size(), 0.0);
    for (std::size_t step = 0; step < cfg.steps; ++step) {
        if (step == cfg.warmup) {
            compute_mask(s, cfg.k);
            for (std::size_t p = 0; p < velocity.size(); ++p)
                if (s.mask[p]) velocity[p] = 0.0;
        }
        auto lg = alc_loss_and_grad(x, res.target, s, cfg.lambda2);
        if (!std::isfinite(lg.loss)) throw NumericError("alc demo diverged at step " + std::to_string(step));
        if (step < cfg.warmup) accumulate_fisher(s, lg.grad);
        if (s.masked) lg.grad = apply_freeze(s, std::move(lg.grad));
        for (std::size_t p = 0; p < s.theta.size(); ++p) {
            velocity[p] = cfg.momentum * velocity[p] + lg.grad[p];
            s.theta[p] -= cfg.lr * velocity[p];
        }
        res.trace.push_back({step, lg.loss, fnv1a(s.theta), s.masked});
        if (cfg.on_step) cfg.on_step(step, s);
    }
    return res;
}

}  // namespace freqdec
