#pragma once

#include "freqdec/volume.hpp"

#include <vector>

namespace freqdec {

/// Per-voxel class probabilities, class-major (class, z, y, x).
struct Prediction {
    std::size_t classes = 0;
    Dims dims{};
    std::vector<double> prob;

    Prediction() = default;
    /// Checks shape, [0, 1] range and per-voxel sums within 1e-6 of 1
    /// unless `checked` is false.
    Prediction(std::size_t n_classes, Dims d, std::vector<double> p, bool checked = true);

    double& at(std::size_t c, std::size_t i) { return prob[c * dims.count() + i]; }
    double at(std::size_t c, std::size_t i) const { return prob[c * dims.count() + i]; }

    void validate() const;
    static Prediction from_channels(const ChannelVolume& cv, bool checked = true);
    static Prediction one_hot(const LabelVolume& labels, std::size_t n_classes);
};

struct LossWeights {
    double lambda_max = 15.0;
    double lambda2 = 5e-6;
    double alpha = 1.0;
    double T = 40.0;

    void validate() const;
};

inline constexpr double kDiceSmooth = 1e-5;

/// 1 - mean over classes of (2 sum pg + s) / (sum p + sum g + s).
double dice_loss(const Prediction& pred, const LabelVolume& target);

/// Mean over classes of (1/N) sum |DFT(l - h)|^(alpha + 2), 3D DFT per class.
double dfl(const Prediction& out_l, const Prediction& out_h, double alpha);
/// d dfl / d out_l, laid out like out_l.prob.
std::vector<double> dfl_grad(const Prediction& out_l, const Prediction& out_h, double alpha);

/// lambda_max * t / T, clamped to lambda_max for t > T.
double lambda_schedule(double t, double T, double lambda_max);

/// sum(sup) + lambda_schedule(t) * unsup + lambda2 * ewc.
double total_loss(const std::vector<double>& sup, double unsup, double ewc, const LossWeights& w, double t);

}  // namespace freqdec
