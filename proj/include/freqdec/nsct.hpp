#pragma once

#include "freqdec/filterbank.hpp"
#include "freqdec/volume.hpp"

#include <vector>

namespace freqdec {

/// Pyramid depth and the directional split applied at every level.
struct NsctConfig {
    std::size_t levels = 1;
    std::size_t directions = 4;

    void validate() const;
    std::size_t band_count() const { return levels * directions; }
};

struct NspDecomposition {
    Plane lowpass;
    std::vector<Plane> bandpass;  // finest first
};

/// All planes keep the input dims. bands[level][direction].
struct NsctDecomposition {
    Plane lowpass;
    std::vector<std::vector<Plane>> bands;
};

/// Separable maximally flat halfband lowpass, DC gain 1.
const Kernel2D& nsp_lowpass_kernel();

/// A-trous pyramid: lowpass_j = h_(2^(j-1)) * lowpass_(j-1),
/// bandpass_j = lowpass_(j-1) - lowpass_j.
NspDecomposition nsp_decompose(const Plane& slice, std::size_t levels, ExtensionMode ext = ExtensionMode::periodic);
Plane nsp_reconstruct(const NspDecomposition& dec);

/// Directional split of a band into n_dir in {2, 4, 8} full-size planes
/// whose sum is the input band. Wedges are ordered by angle of the
/// frequency vector, measured from +x toward +y; see nsdfb_wedge_centers.
std::vector<Plane> nsdfb_decompose(const Plane& band, std::size_t n_dir);
Plane nsdfb_reconstruct(const std::vector<Plane>& bands);
/// Center angle (degrees, in [0, 180)) of each wedge.
std::vector<double> nsdfb_wedge_centers(std::size_t n_dir);

NsctDecomposition nsct_decompose(const Plane& slice, const NsctConfig& cfg);
Plane nsct_reconstruct(const NsctDecomposition& dec, const NsctConfig& cfg);

struct AliasingReport {
    double aliased = 0.0;        // shifted-copy energy after 2x decimation
    double nonsubsampled = 0.0;  // same functional on the undecimated band
    double band_energy = 0.0;
};

/// Level-1 pyramid band of the slice; the decimated path sums the energy
/// of the spectral copies that fold onto the half-size grid.
AliasingReport aliasing_energy(const Plane& slice);

}  // namespace freqdec
