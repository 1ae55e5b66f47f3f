#include "freqdec/fdca.hpp"

#include "freqdec/error.hpp"
#include "freqdec/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace freqdec {

double sigmoid(double x) {
    const double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    // Keep the open interval even where the logistic rounds to 0 or 1.
    return std::clamp(s, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

std::vector<double> Affine::operator()(const std::vector<double>& x) const {
    if (x.size() != in) throw ShapeError("affine input has length " + std::to_string(x.size()) + ", expected " + std::to_string(in));
    std::vector<double> y(b);
    for (std::size_t i = 0; i < out; ++i)
        for (std::size_t j = 0; j < in; ++j) y[i] += w[i * in + j] * x[j];
    return y;
}

namespace {

Affine random_affine(std::size_t out, std::size_t in, std::mt19937_64& gen) {
    std::normal_distribution<double> nd(0.0, 0.02);
    Affine a{out, in, std::vector<double>(out * in), std::vector<double>(out, 0.0)};
    for (double& v : a.w) v = nd(gen);
    return a;
}

void check_map(const FeatureMap& f) {
    if (f.c == 0 || f.d == 0 || f.h == 0 || f.w == 0) throw SizeError("feature map dims must be >= 1");
    if (f.data.size() != f.c * f.voxels()) throw LengthError("feature map data length does not match its shape");
}

void check_params(const FeatureMap& f, const FdcaParams& p) {
    check_map(f);
    if (f.c != p.c || f.d != p.n) throw ShapeError("feature map (c, n) does not match attention params");
}

}  // namespace

FdcaParams make_fdca_params(std::size_t c, std::size_t n, std::uint64_t seed, std::size_t rank) {
    if (c == 0 || n == 0) throw ConfigError("attention needs c >= 1 and n >= 1");
    FdcaParams p;
    p.c = c;
    p.n = n;
    p.rank = rank == 0 ? std::min<std::size_t>(4, n) : rank;
    p.seed = seed;
    std::mt19937_64 gen(seed);
    p.w1 = random_affine(c, c, gen);
    p.w2 = random_affine(c, c, gen);
    const double fan_in = 2.0 * kPositionalKernel * kPositionalKernel;
    std::normal_distribution<double> kaiming(0.0, std::sqrt(2.0 / fan_in));
    p.conv.resize(2 * kPositionalKernel * kPositionalKernel);
    for (double& v : p.conv) v = kaiming(gen);
    p.w1s = random_affine(n, n, gen);
    p.w2s = random_affine(n, n, gen);
    p.wmu = random_affine(n, n, gen);
    p.wr = random_affine(n * p.rank, n, gen);
    p.wd = random_affine(n, n, gen);
    return p;
}

ComplexFeatureMap fft_split(const FeatureMap& f) {
    check_map(f);
    ComplexFeatureMap z{FeatureMap(f.c, f.d, f.h, f.w), FeatureMap(f.c, f.d, f.h, f.w)};
    const std::size_t V = f.voxels();
    for (std::size_t ch = 0; ch < f.c; ++ch) {
        const std::vector<double> part(f.data.begin() + static_cast<long>(ch * V), f.data.begin() + static_cast<long>((ch + 1) * V));
        const auto s = dft_real(part, {f.d, f.h, f.w});
        for (std::size_t i = 0; i < V; ++i) {
            z.re.data[ch * V + i] = s[i].real();
            z.im.data[ch * V + i] = s[i].imag();
        }
    }
    return z;
}

FeatureMap ifft_merge(const ComplexFeatureMap& z, double* imag_residual) {
    check_map(z.re);
    if (z.im.c != z.re.c || z.im.d != z.re.d || z.im.h != z.re.h || z.im.w != z.re.w) throw ShapeError("real and imaginary maps differ in shape");
    const std::size_t V = z.re.voxels();
    FeatureMap out(z.re.c, z.re.d, z.re.h, z.re.w);
    double resid = 0.0;
    for (std::size_t ch = 0; ch < z.re.c; ++ch) {
        std::vector<cplx> s(V);
        for (std::size_t i = 0; i < V; ++i) s[i] = {z.re.data[ch * V + i], z.im.data[ch * V + i]};
        const auto x = dft(s, {z.re.d, z.re.h, z.re.w}, true);
        for (std::size_t i = 0; i < V; ++i) {
            out.data[ch * V + i] = x[i].real();
            resid += x[i].imag() * x[i].imag();
        }
    }
    if (imag_residual) *imag_residual = std::sqrt(resid);
    return out;
}

std::vector<double> semantic_attention(const FeatureMap& fr, const FdcaParams& p) {
    check_params(fr, p);
    const std::size_t V = fr.voxels();
    std::vector<double> mx(fr.c), mean(fr.c);
    for (std::size_t ch = 0; ch < fr.c; ++ch) {
        const auto first = fr.data.begin() + static_cast<long>(ch * V);
        mx[ch] = *std::max_element(first, first + static_cast<long>(V));
        double s = 0.0;
        for (std::size_t i = 0; i < V; ++i) s += fr.data[ch * V + i];
        mean[ch] = s / static_cast<double>(V);
    }
    const auto a = p.w1(mx), b = p.w2(mean);
    std::vector<double> m(fr.c);
    for (std::size_t ch = 0; ch < fr.c; ++ch) m[ch] = sigmoid(a[ch] + b[ch]);
    return m;
}

Plane positional_attention(const FeatureMap& fr, const FdcaParams& p) {
    check_params(fr, p);
    constexpr long K = kPositionalKernel;
    if (fr.h < kPositionalKernel || fr.w < kPositionalKernel) throw SizeError("positional attention needs h, w >= 7");
    const std::size_t H = fr.h, W = fr.w, HW = H * W;
    Plane mx(H, W, -std::numeric_limits<double>::infinity()), mean(H, W);
    for (std::size_t ch = 0; ch < fr.c; ++ch)
        for (std::size_t z = 0; z < fr.d; ++z)
            for (std::size_t i = 0; i < HW; ++i) {
                const double v = fr.data[(ch * fr.d + z) * HW + i];
                mx.data[i] = std::max(mx.data[i], v);
                mean.data[i] += v;
            }
    mean *= 1.0 / static_cast<double>(fr.c * fr.d);
    const Plane* pooled[2] = {&mx, &mean};
    Plane out(H, W);
    for (long y = 0; y < static_cast<long>(H); ++y)
        for (long x = 0; x < static_cast<long>(W); ++x) {
            double acc = p.conv_bias;
            for (long k = 0; k < 2; ++k)
                for (long i = 0; i < K; ++i) {
                    const long yy = y + i - K / 2;
                    if (yy < 0 || yy >= static_cast<long>(H)) continue;
                    for (long j = 0; j < K; ++j) {
                        const long xx = x + j - K / 2;
                        if (xx < 0 || xx >= static_cast<long>(W)) continue;
                        acc += p.conv[static_cast<std::size_t>((k * K + i) * K + j)] * (*pooled[k])(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx));
                    }
                }
            out(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = sigmoid(acc);
        }
    return out;
}

std::vector<double> SliceDistribution::covariance() const {
    const std::size_t n = mu.size();
    std::vector<double> cov(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = i == j ? D[i] : 0.0;
            for (std::size_t k = 0; k < rank; ++k) s += R[i * rank + k] * R[j * rank + k];
            cov[i * n + j] = s;
        }
    return cov;
}

SliceDistribution slice_distribution(const FeatureMap& fr, const FdcaParams& p) {
    check_params(fr, p);
    const std::size_t per = fr.h * fr.w;
    std::vector<double> mx(fr.d, -std::numeric_limits<double>::infinity()), mean(fr.d, 0.0);
    for (std::size_t ch = 0; ch < fr.c; ++ch)
        for (std::size_t z = 0; z < fr.d; ++z)
            for (std::size_t i = 0; i < per; ++i) {
                const double v = fr.data[(ch * fr.d + z) * per + i];
                mx[z] = std::max(mx[z], v);
                mean[z] += v;
            }
    for (double& v : mean) v /= static_cast<double>(fr.c * per);
    auto s = p.w1s(mx);
    const auto s2 = p.w2s(mean);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += s2[i];
    SliceDistribution d;
    d.rank = p.rank;
    d.mu = p.wmu(s);
    d.R = p.wr(s);
    d.D = p.wd(s);
    for (double& v : d.D) v = std::exp(v);
    return d;
}

std::vector<double> sample_logits(const SliceDistribution& dist, const SliceNoise& noise) {
    const std::size_t n = dist.mu.size();
    if (noise.eps1.size() != dist.rank || noise.eps2.size() != n) throw ShapeError("slice noise has the wrong length");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = dist.mu[i] + std::sqrt(dist.D[i]) * noise.eps2[i];
        for (std::size_t k = 0; k < dist.rank; ++k) s += dist.R[i * dist.rank + k] * noise.eps1[k];
        v[i] = s;
    }
    return v;
}

SliceNoise draw_noise(std::size_t rank, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    SliceNoise e{std::vector<double>(rank), std::vector<double>(n)};
    for (double& v : e.eps1) v = nd(gen);
    for (double& v : e.eps2) v = nd(gen);
    return e;
}

std::vector<double> slice_attention(const FeatureMap& fr, const FdcaParams& p, const std::optional<SliceNoise>& noise) {
    const auto dist = slice_distribution(fr, p);
    auto v = sample_logits(dist, noise ? *noise : draw_noise(p.rank, p.n, p.seed));
    for (double& x : v) x = sigmoid(x);
    return v;
}

AttentionMaps attention_maps(const ComplexFeatureMap& z, const FdcaParams& p, const std::optional<SliceNoise>& noise) {
    check_params(z.re, p);
    AttentionMaps maps;
    maps.ms = semantic_attention(z.re, p);
    FeatureMap r = z.re;
    const std::size_t HW = r.h * r.w;
    for (std::size_t ch = 0; ch < r.c; ++ch)
        for (std::size_t i = 0; i < r.d * HW; ++i) r.data[ch * r.d * HW + i] *= maps.ms[ch];
    maps.mp = positional_attention(r, p);
    for (std::size_t ch = 0; ch < r.c; ++ch)
        for (std::size_t s = 0; s < r.d; ++s)
            for (std::size_t i = 0; i < HW; ++i) r.data[(ch * r.d + s) * HW + i] *= maps.mp.data[i];
    maps.mn = slice_attention(r, p, noise);
    return maps;
}

ComplexFeatureMap modulate(ComplexFeatureMap z, const AttentionMaps& maps) {
    const FeatureMap& f = z.re;
    if (maps.ms.size() != f.c || maps.mn.size() != f.d || maps.mp.rows != f.h || maps.mp.cols != f.w)
        throw ShapeError("attention maps do not match the feature map");
    const std::size_t HW = f.h * f.w;
    for (FeatureMap* m : {&z.re, &z.im})
        for (std::size_t ch = 0; ch < m->c; ++ch)
            for (std::size_t s = 0; s < m->d; ++s)
                for (std::size_t i = 0; i < HW; ++i) m->data[(ch * m->d + s) * HW + i] *= maps.ms[ch] * maps.mp.data[i] * maps.mn[s];
    return z;
}

FdcaResult fdca_apply(const FeatureMap& f, const FdcaParams& p, const std::optional<SliceNoise>& noise,
                      const std::optional<AttentionMaps>& maps_override) {
    check_params(f, p);
    auto z = fft_split(f);
    FdcaResult res;
    res.maps = maps_override ? *maps_override : attention_maps(z, p, noise);
    z = modulate(std::move(z), res.maps);
    res.output = ifft_merge(z, &res.imag_residual);
    return res;
}

}  // namespace freqdec
