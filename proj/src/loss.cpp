#include "freqdec/loss.hpp"

#include "freqdec/error.hpp"
#include "freqdec/fft.hpp"

#include <cmath>

namespace freqdec {

Prediction::Prediction(std::size_t n_classes, Dims d, std::vector<double> p, bool checked)
    : classes(n_classes), dims(d), prob(std::move(p)) {
    if (classes == 0) throw ConfigError("prediction needs at least one class");
    if (dims.count() == 0) throw SizeError("prediction dims must be positive");
    if (prob.size() != classes * dims.count()) throw LengthError("prediction data length does not match classes x dims");
    for (double v : prob)
        if (!std::isfinite(v)) throw NumericError("prediction contains non-finite values");
    if (checked) validate();
}

void Prediction::validate() const {
    const std::size_t n = dims.count();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            const double v = at(c, i);
            if (v < 0.0 || v > 1.0) throw ConfigError("probability outside [0, 1]");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-6) throw ConfigError("class probabilities do not sum to 1 at voxel " + std::to_string(i));
    }
}

Prediction Prediction::from_channels(const ChannelVolume& cv, bool checked) {
    std::vector<double> p;
    p.reserve(cv.channels() * cv.dims().count());
    for (const auto& ch : cv.all()) p.insert(p.end(), ch.data().begin(), ch.data().end());
    return Prediction(cv.channels(), cv.dims(), std::move(p), checked);
}

Prediction Prediction::one_hot(const LabelVolume& labels, std::size_t n_classes) {
    labels.validate();
    if (static_cast<std::size_t>(labels.classes) > n_classes) throw ConfigError("label classes exceed prediction classes");
    const std::size_t n = labels.dims.count();
    std::vector<double> p(n_classes * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) p[labels.data[i] * n + i] = 1.0;
    return Prediction(n_classes, labels.dims, std::move(p));
}

void LossWeights::validate() const {
    if (!(lambda2 >= 0.0)) throw ConfigError("lambda2 must be >= 0");
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
    if (!(T >= 1.0)) throw ConfigError("T must be >= 1");
    if (!(lambda_max >= 0.0)) throw ConfigError("lambda_max must be >= 0");
}

double dice_loss(const Prediction& pred, const LabelVolume& target) {
    if (!(pred.dims == target.dims)) throw ShapeError("prediction and target dims differ");
    target.validate();
    if (static_cast<std::size_t>(target.classes) > pred.classes) throw ConfigError("target class ids exceed prediction classes");
    const std::size_t n = pred.dims.count();
    double sum_dice = 0.0;
    for (std::size_t c = 0; c < pred.classes; ++c) {
        double inter = 0.0, sp = 0.0, sg = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = pred.at(c, i);
            const double g = target.data[i] == c ? 1.0 : 0.0;
            inter += p * g;
            sp += p;
            sg += g;
        }
        sum_dice += (2.0 * inter + kDiceSmooth) / (sp + sg + kDiceSmooth);
    }
    return 1.0 - sum_dice / static_cast<double>(pred.classes);
}

namespace {

void check_pair(const Prediction& a, const Prediction& b, double alpha) {
    if (a.classes != b.classes || !(a.dims == b.dims)) throw ShapeError("dfl operands differ in shape");
    if (a.prob.size() != a.classes * a.dims.count() || b.prob.size() != a.prob.size()) throw LengthError("prediction data length mismatch");
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
}

std::vector<cplx> class_spectrum(const Prediction& a, const Prediction& b, std::size_t c) {
    const std::size_t n = a.dims.count();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a.at(c, i) - b.at(c, i);
    return dft_real(diff, {a.dims.d, a.dims.h, a.dims.w});
}

}  // namespace

double dfl(const Prediction& out_l, const Prediction& out_h, double alpha) {
    check_pair(out_l, out_h, alpha);
    const double N = static_cast<double>(out_l.dims.count());
    double total = 0.0;
    for (std::size_t c = 0; c < out_l.classes; ++c) {
        double s = 0.0;
        for (const auto& z : class_spectrum(out_l, out_h, c)) s += std::pow(std::abs(z), alpha + 2.0);
        total += s / N;
    }
    return total / static_cast<double>(out_l.classes);
}

std::vector<double> dfl_grad(const Prediction& out_l, const Prediction& out_h, double alpha) {
    check_pair(out_l, out_h, alpha);
    const std::size_t n = out_l.dims.count();
    const std::vector<std::size_t> shape{out_l.dims.d, out_l.dims.h, out_l.dims.w};
    const double k = (alpha + 2.0) / static_cast<double>(out_l.classes);
    std::vector<double> g(out_l.prob.size());
    for (std::size_t c = 0; c < out_l.classes; ++c) {
        auto Z = class_spectrum(out_l, out_h, c);
        for (auto& z : Z) z *= std::pow(std::abs(z), alpha);
        const auto back = dft(Z, shape, true);
        for (std::size_t i = 0; i < n; ++i) g[c * n + i] = k * back[i].real();
    }
    return g;
}

double lambda_schedule(double t, double T, double lambda_max) {
    if (!(T >= 1.0)) throw ConfigError("schedule length T must be >= 1");
    if (!(t >= 0.0)) throw ConfigError("schedule step t must be >= 0");
    if (t >= T) return lambda_max;
    return lambda_max * t / T;
}

double total_loss(const std::vector<double>& sup, double unsup, double ewc, const LossWeights& w, double t) {
    w.validate();
    double s = 0.0;
    for (double v : sup) s += v;
    return s + lambda_schedule(t, w.T, w.lambda_max) * unsup + w.lambda2 * ewc;
}

}  // namespace freqdec
