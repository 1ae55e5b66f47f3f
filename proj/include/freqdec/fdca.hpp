#pragma once

#include "freqdec/alc.hpp"
#include "freqdec/volume.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace freqdec {

/// Feature map laid out (c, n, h, w): channels, slices, rows, cols.
using FeatureMap = Tensor4;

struct ComplexFeatureMap {
    FeatureMap re;
    FeatureMap im;
};

/// Row-major matrix with a bias vector: y = W x + b.
struct Affine {
    std::size_t out = 0, in = 0;
    std::vector<double> w;
    std::vector<double> b;

    std::vector<double> operator()(const std::vector<double>& x) const;
};

struct FdcaParams {
    std::size_t c = 0, n = 0, rank = 0;
    Affine w1, w2;                   // semantic, c x c
    std::vector<double> conv;        // positional, [in 2][7][7]
    double conv_bias = 0.0;
    Affine w1s, w2s, wmu, wr, wd;    // slice; wr is (n * rank) x n
    std::uint64_t seed = 0;
};

inline constexpr std::size_t kPositionalKernel = 7;

/// Affine weights ~ N(0, 0.02), conv taps ~ N(0, 2 / fan_in), zero biases.
/// rank 0 selects min(4, n).
FdcaParams make_fdca_params(std::size_t c, std::size_t n, std::uint64_t seed, std::size_t rank = 0);

/// 3D DFT over (n, h, w) for every channel.
ComplexFeatureMap fft_split(const FeatureMap& f);
/// Real part of the inverse DFT; the L2 norm of the discarded imaginary part
/// goes to *imag_residual when given.
FeatureMap ifft_merge(const ComplexFeatureMap& z, double* imag_residual = nullptr);

/// sigmoid(W1 maxpool(Fr) + W2 meanpool(Fr)), pooled over (n, h, w). Length c.
std::vector<double> semantic_attention(const FeatureMap& fr, const FdcaParams& p);
/// sigmoid(conv7x7([maxpool, meanpool])), pooled over (c, n). Shape h x w.
Plane positional_attention(const FeatureMap& fr, const FdcaParams& p);

/// Low-rank Gaussian over slice logits: v = mu + R e1 + sqrt(D) * e2.
struct SliceDistribution {
    std::vector<double> mu;  // n
    std::vector<double> R;   // n x rank, row-major
    std::vector<double> D;   // n, positive
    std::size_t rank = 0;

    std::vector<double> covariance() const;  // R R^T + diag(D), n x n
};

struct SliceNoise {
    std::vector<double> eps1;  // rank
    std::vector<double> eps2;  // n
};

SliceDistribution slice_distribution(const FeatureMap& fr, const FdcaParams& p);
std::vector<double> sample_logits(const SliceDistribution& dist, const SliceNoise& noise);
/// Standard normal noise from a seeded generator.
SliceNoise draw_noise(std::size_t rank, std::size_t n, std::uint64_t seed);
/// sigmoid of a sample; draws from params.seed when noise is absent. Length n.
std::vector<double> slice_attention(const FeatureMap& fr, const FdcaParams& p, const std::optional<SliceNoise>& noise = std::nullopt);

struct AttentionMaps {
    std::vector<double> ms;  // c
    Plane mp;                // h x w
    std::vector<double> mn;  // n
};

struct FdcaResult {
    FeatureMap output;
    AttentionMaps maps;
    double imag_residual = 0.0;
};

/// The three maps in sequence, each computed from the real part after the
/// previous map has been applied to it. The imaginary part is never read.
AttentionMaps attention_maps(const ComplexFeatureMap& z, const FdcaParams& p, const std::optional<SliceNoise>& noise = std::nullopt);

/// Both parts multiplied by ms[c] * mp[y, x] * mn[s].
ComplexFeatureMap modulate(ComplexFeatureMap z, const AttentionMaps& maps);

/// Semantic, positional, then slice attention computed from the real part
/// and applied to both parts, followed by the inverse DFT. `maps_override`
/// replaces the computed maps.
FdcaResult fdca_apply(const FeatureMap& f, const FdcaParams& p, const std::optional<SliceNoise>& noise = std::nullopt,
                      const std::optional<AttentionMaps>& maps_override = std::nullopt);

double sigmoid(double x);

}  // namespace freqdec
