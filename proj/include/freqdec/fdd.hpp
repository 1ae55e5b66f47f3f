#pragma once

#include "freqdec/nsct.hpp"
#include "freqdec/volume.hpp"

#include <string>
#include <string_view>

namespace freqdec {

enum class Strategy { dwt, dtcwt, nsct };

Strategy parse_strategy(std::string_view text);
std::string strategy_name(Strategy s);

struct FddConfig {
    Strategy lf = Strategy::dtcwt;
    Strategy hf = Strategy::nsct;
    NsctConfig nsct{};

    void validate() const;
    /// HF channels per modality: 3 for dwt, 6 for dtcwt, levels * directions for nsct.
    std::size_t hf_directions() const;
};

/// x_l has one channel per modality, x_h has hf_directions() per modality,
/// modality-major (channel m * d_hf + k is direction k of modality m).
/// All channels have the input dims.
struct FddOutput {
    ChannelVolume x_l;
    ChannelVolume x_h;
};

/// Complex subbands are reduced to magnitudes; half-size subbands are
/// resized bilinearly to H x W. H and W must be even.
FddOutput fdd_decompose(const MultiModalVolume& mm, const FddConfig& cfg, std::size_t threads = 1);

/// Per modality: x_l / |x_l| + sum_k x_h[k] / |x_h[k]|. All-zero channels
/// are skipped.
ChannelVolume fdd_fuse(const FddOutput& out);

/// Raw invertible coefficients of one strategy, modality-major.
///   dwt:   ll, lh, hl, hh                       (half size)
///   dtcwt: lf re/im, lf_cross re/im, 6 x hf re/im (half size)
///   nsct:  lowpass, then bands level-major      (full size)
std::size_t coefficient_channels(Strategy s, const NsctConfig& cfg);
ChannelVolume transform_coefficients(const MultiModalVolume& mm, Strategy s, const NsctConfig& cfg, std::size_t threads = 1);
ChannelVolume inverse_coefficients(const ChannelVolume& coeffs, Strategy s, const NsctConfig& cfg, std::size_t threads = 1);

}  // namespace freqdec
