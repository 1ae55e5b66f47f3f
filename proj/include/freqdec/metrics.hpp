#pragma once

#include "freqdec/volume.hpp"

#include <functional>

namespace freqdec {

/// Mean SSIM over all 8x8 windows (uniform weights, population moments).
/// L is the larger of the two dynamic ranges, or 1 when both are constant.
double ssim(const Plane& a, const Plane& b);

/// Shannon entropy (natural log) of the normalized DFT amplitudes.
double freq_entropy(const Volume3D& vol);
double freq_entropy(const std::vector<double>& values, const std::vector<std::size_t>& shape);

/// log(1 + |DFT2(p)|)
Plane log_amplitude(const Plane& p);

using PlaneMap = std::function<Plane(const Plane&)>;

/// Mean over k in [-K, K], k != 0, of SSIM(I, I_k), where I_k is the
/// log-amplitude spectrum of map(img circularly shifted by k columns).
double shift_invariance_score(const Plane& img, int K, const PlaneMap& map);
/// Identity map. Always 1 up to rounding by the DFT shift theorem.
double shift_invariance_score(const Plane& img, int K);

/// 100 * 2|A n B| / (|A| + |B|) on the masks of class cls; 100 if both are empty.
double dice_score(const LabelVolume& a, const LabelVolume& b, int cls);

/// 95th percentile (linear interpolation) of the symmetric set of distances
/// from each boundary voxel of one mask to the nearest boundary voxel of the
/// other, in mm. Boundary voxels have a 6-neighbor outside the mask or the grid.
double hd95(const LabelVolume& a, const LabelVolume& b, int cls, const Spacing& spacing);

}  // namespace freqdec
