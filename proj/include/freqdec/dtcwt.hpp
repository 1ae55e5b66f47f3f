#pragma once

#include "freqdec/filterbank.hpp"
#include "freqdec/volume.hpp"

#include <array>

namespace freqdec {

/// Edge orientation of each highpass subband in degrees, counterclockwise
/// from +x with y pointing up (rows run down).
inline constexpr std::array<double, 6> kDtcwtOrientations{15, 45, 75, 105, 135, 165};

/// Level-1 dual-tree output, all planes at half size.
///
/// The lowpass of the separable undecimated bank is split into its four
/// polyphase quads (a, b; c, d). Tree a (even rows, even cols) gives the
/// real part and tree b (odd, odd) the imaginary part of lf. The remaining
/// two quads are kept in lf_cross so the transform stays invertible.
struct DtcwtLevel1 {
    ComplexPlane lf;
    std::array<ComplexPlane, 6> hf;
    ComplexPlane lf_cross;
};

DtcwtLevel1 dtcwt_level1(const Plane& slice);
Plane idtcwt_level1(const DtcwtLevel1& coeffs);

/// Per modality and slice: |lf| resized back to H x W. One channel per modality.
ChannelVolume dtcwt_lowpass_volume(const MultiModalVolume& mm, std::size_t threads = 1);

/// max |e(w) - mean| / mean for e(w) = |P(w)|^2 + |Q(w)|^2 sampled at
/// w = -pi + 2 pi k / n, k = 0..n-1.
double energy_flatness(const std::vector<double>& p, const std::vector<double>& q, std::size_t n = 512);
/// energy_flatness of the bank's analysis lowpass/highpass pair.
double energy_flatness(const FilterBank1D& bank);

}  // namespace freqdec
