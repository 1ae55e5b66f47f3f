#pragma once

#include "freqdec/volume.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace freqdec {

/// Kernel extent (kh, kw, kd); taps stored kh-major, kd fastest.
using KernelDims = std::array<std::size_t, 3>;

/// Discrete Laplacian on an odd kernel grid: +1 at each face neighbor of
/// the center that fits in the grid, minus their count at the center.
std::vector<double> laplacian_taps(const KernelDims& k);

/// Dense (channels, depth, height, width) array of doubles.
struct Tensor4 {
    std::size_t c = 0, d = 0, h = 0, w = 0;
    std::vector<double> data;

    Tensor4() = default;
    Tensor4(std::size_t c_, std::size_t d_, std::size_t h_, std::size_t w_) : c(c_), d(d_), h(h_), w(w_), data(c_ * d_ * h_ * w_, 0.0) {}

    double& at(std::size_t ch, std::size_t z, std::size_t y, std::size_t x) { return data[((ch * d + z) * h + y) * w + x]; }
    double at(std::size_t ch, std::size_t z, std::size_t y, std::size_t x) const { return data[((ch * d + z) * h + y) * w + x]; }
    std::size_t voxels() const { return d * h * w; }

    static Tensor4 from_channels(const ChannelVolume& cv);
    static Tensor4 from_modalities(const MultiModalVolume& mm);
};

struct AlcState {
    std::size_t c_out = 0, c_in = 0;
    KernelDims kdims{3, 3, 3};
    std::vector<double> theta;      // [co][ci][kh][kw][kd]
    std::vector<double> benchmark;  // Laplacian broadcast to theta's layout
    std::vector<double> fisher;
    std::size_t batches_seen = 0;
    std::vector<std::uint8_t> mask;  // 1 = frozen
    bool masked = false;

    std::size_t taps_per_kernel() const { return kdims[0] * kdims[1] * kdims[2]; }
    std::size_t index(std::size_t co, std::size_t ci, std::size_t i, std::size_t j, std::size_t l) const {
        return (((co * c_in + ci) * kdims[0] + i) * kdims[1] + j) * kdims[2] + l;
    }
};

AlcState init_alc(std::size_t c_out, std::size_t c_in, const KernelDims& kdims = {3, 3, 3});

/// sum_p (theta_p - D_p)^2
double ewc_loss(const AlcState& s);
/// 2 (theta - D)
std::vector<double> ewc_grad(const AlcState& s);

/// fisher becomes the running mean of grad^2 over all calls.
void accumulate_fisher(AlcState& s, const std::vector<double>& grad);

/// mask_p = fisher_p > mean + k * std (population std over all entries).
void compute_mask(AlcState& s, double k);

/// grad with masked entries zeroed.
std::vector<double> apply_freeze(const AlcState& s, std::vector<double> grad);

/// 3D cross-correlation with zero padding; output has c_out channels and
/// the input's spatial size. Tap (i, j, l) reads (z + l - kd/2, y + i - kh/2, x + j - kw/2).
Tensor4 alc_forward(const Tensor4& x, const AlcState& s);
/// Adjoint of alc_forward with respect to theta for upstream gradient g.
std::vector<double> alc_theta_grad(const Tensor4& x, const Tensor4& g, const AlcState& s);

/// mean((alc_forward(x) - target)^2) + lambda2 * ewc_loss and its gradient.
struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad;
};
LossGrad alc_loss_and_grad(const Tensor4& x, const Tensor4& target, const AlcState& s, double lambda2);

struct AlcDemoConfig {
    std::size_t steps = 250;
    std::size_t warmup = 20;
    double lr = 0.01;
    double lambda2 = 5e-6;
    double k = 1.0;
    std::size_t c_out = 2;
    std::uint64_t seed = 42;
    double momentum = 0.9;
    /// Called after every update with the step index and current state.
    std::function<void(std::size_t, const AlcState&)> on_step;
};

struct AlcStep {
    std::size_t step = 0;
    double loss = 0.0;
    std::uint64_t theta_hash = 0;  // FNV-1a of theta's bytes after the update
    bool masked = false;
};

struct AlcDemoResult {
    std::vector<AlcStep> trace;
    AlcState state;
    Tensor4 target;
};

/// HF target for the demo: the input correlated with the Laplacian plus a
/// seeded zero-sum perturbation of each kernel.
Tensor4 alc_demo_target(const Tensor4& x, std::size_t c_out, const KernelDims& k, std::uint64_t seed);

/// Momentum SGD on alc_loss_and_grad. Fisher accumulates over the first
/// `warmup` steps, the mask is computed when step == warmup and masked
/// gradients (and their momentum) are zeroed afterwards. Throws
/// NumericError if the loss stops being finite.
AlcDemoResult alc_demo_train(const Tensor4& x, const AlcDemoConfig& cfg);

std::uint64_t fnv1a(const std::vector<double>& v);

}  // namespace freqdec
