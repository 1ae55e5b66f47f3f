#pragma once

#include "freqdec/volume.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace freqdec {

enum class ExtensionMode {
    symmetric,  // half-sample: x[-1] = x[0]
    periodic,
    zero,
};

/// Maps an out-of-range index into [0, n) for the given mode; returns -1
/// for zero extension outside the signal.
long extend_index(long i, long n, ExtensionMode mode);

/// 2D kernel. Tap (i, j) sits at offset (i - anchor_row, j - anchor_col)
/// from the output sample, under convolution.
struct Kernel2D {
    std::size_t rows = 1;
    std::size_t cols = 1;
    std::vector<double> taps{1.0};
    long anchor_row = 0;
    long anchor_col = 0;

    Kernel2D() = default;
    Kernel2D(std::size_t r, std::size_t c, std::vector<double> t, long ar, long ac);

    /// Odd-sized kernel anchored at its center.
    static Kernel2D centered(std::size_t r, std::size_t c, std::vector<double> t);
    static Kernel2D identity() { return {}; }

    double& at(std::size_t i, std::size_t j) { return taps[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return taps[i * cols + j]; }

    double sum() const;
    /// H(w) = sum h[dy, dx] exp(-i (wy dy + wx dx)).
    std::complex<double> response(double wy, double wx) const;
};

/// Full (linear) convolution of two kernels; anchors add.
Kernel2D convolve(const Kernel2D& a, const Kernel2D& b);
/// Sum of kernels aligned on their anchors.
Kernel2D add(const Kernel2D& a, const Kernel2D& b, double scale_b = 1.0);
Kernel2D scale(Kernel2D k, double s);
/// Multiplies tap at offset (dy, dx) by (-1)^dx, moving the response by pi along x.
Kernel2D modulate_x(Kernel2D k);
/// Moves the tap at offset n = (dx, dy) to dx * r1 + dy * r2, so the new
/// response is H(r1 . w, r2 . w). Used for quincunx and shear resampling.
Kernel2D resample(const Kernel2D& k, std::pair<long, long> r1, std::pair<long, long> r2);
/// sum_k c[k] T^{*k}: a polynomial in the frequency response of t.
Kernel2D mcclellan(const std::vector<double>& poly, const Kernel2D& t);

/// "Same"-size convolution. Throws SizeError when the kernel extent
/// exceeds twice the image extent along either axis.
Plane conv2d(const Plane& img, const Kernel2D& k, ExtensionMode ext = ExtensionMode::symmetric);

/// conv2d with (dilation - 1) zeros inserted between taps.
Plane atrous_conv2d(const Plane& img, const Kernel2D& k, std::size_t dilation, ExtensionMode ext = ExtensionMode::symmetric);

struct Filter1D {
    std::vector<double> taps;
    long anchor = 0;

    static Filter1D centered(std::vector<double> t) {
        const long a = static_cast<long>(t.size() / 2);
        return {std::move(t), a};
    }
};

enum class Axis { rows, cols };

/// Undecimated 1D convolution along one axis: along `rows` filters each
/// column vertically, along `cols` filters each row horizontally.
Plane filter_axis(const Plane& img, const Filter1D& f, Axis axis, ExtensionMode ext, std::size_t dilation = 1);

/// Two-channel 1D bank. Analysis samples the correlation
///   lo[n] = sum_k h_lo[k] x[2n + phase_lo + k - anchor]
/// and synthesis is its transpose with the synthesis taps.
/// Decimated transforms use periodic extension.
struct FilterBank1D {
    std::string name;
    Filter1D analysis_lo;
    Filter1D analysis_hi;
    Filter1D synthesis_lo;
    Filter1D synthesis_hi;
    int phase_lo = 0;
    int phase_hi = 0;

    std::pair<std::vector<double>, std::vector<double>> analyze(const std::vector<double>& x) const;
    std::vector<double> synthesize(const std::vector<double>& lo, const std::vector<double>& hi) const;

    /// Max |x - synth(analyze(x))| for a seeded random signal of length n.
    double pr_residual(std::size_t n = 64, std::uint64_t seed = 1) const;

    /// Orthonormal Haar.
    static const FilterBank1D& haar();
    /// Cohen-Daubechies-Feauveau 9/7, each lowpass with DC gain sqrt(2).
    static const FilterBank1D& cdf97();
    /// Near-symmetric 13/19 level-1 pair used by the dual-tree transform.
    static const FilterBank1D& near_sym_b();
};

/// Lowpass prototypes of the 9/7 pair as polynomials in x = cos(w),
/// lowest order first. ph has degree 4 (9 taps), pg degree 3 (7 taps);
/// ph(1) = pg(1) = 1 and ph(x)pg(x) + ph(-x)pg(-x) = 1.
struct Prototype97 {
    std::vector<double> ph;
    std::vector<double> pg;
};
const Prototype97& cdf97_prototype();

/// Symmetric taps of a polynomial in cos(w), centered.
std::vector<double> cosine_poly_taps(const std::vector<double>& poly);
double eval_poly(const std::vector<double>& poly, double x);

/// Fan filter bank. analysis[0] passes the horizontal-frequency fan
/// (|wx| > |wy|), analysis[1] the vertical one. analysis[k] * synthesis[k]
/// summed over k is the identity.
struct FanBank {
    Kernel2D analysis[2];
    Kernel2D synthesis[2];
    double balance = 1.0;
};
const FanBank& fan_bank();

/// Analysis pair of fan_bank().
std::pair<Kernel2D, Kernel2D> fan_filter_pair();

/// max |(|H0|^2 + |H1|^2) - mean| over an n x n grid on [-pi, pi)^2.
double fan_tiling_deviation(const Kernel2D& h0, const Kernel2D& h1, std::size_t n = 64);

}  // namespace freqdec
