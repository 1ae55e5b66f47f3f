#pragma once

#include "freqdec/volume.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace freqdec {

/// Reads an uncompressed 3D NIfTI-1 file (single "n+1" file or "ni1" header
/// with a companion .img). Supports uint8, int16 and float32 voxels and
/// either byte order. dim[1..3] map to (W, H, D).
MultiModalVolume read_nifti(const std::filesystem::path& path);

// FREQVOL1 container:
//   16 bytes  magic "FREQVOL1" + 8 NUL
//   4 x u32   C, D, H, W (little endian)
//   3 x f32   spacing (D, H, W)
//   C*D*H*W   f32 payload, channel-major, W fastest
inline constexpr std::size_t kRawHeaderBytes = 16 + 16 + 12;

void write_raw(const ChannelVolume& vol, const std::filesystem::path& path);
ChannelVolume read_raw(const std::filesystem::path& path);

/// Loads either container, picked by extension (.nii / .hdr / .img are NIfTI).
ChannelVolume read_volume(const std::filesystem::path& path);

enum class PhantomKind { smooth_blob, textured_shell, oriented_stripes, checker };

struct PhantomSpec {
    PhantomKind kind = PhantomKind::smooth_blob;
    double theta_deg = 0.0;  // stripes only: angle of the wave vector from +x toward +y
    std::size_t modalities = 1;
};

/// Parses "smooth-blob", "textured-shell", "checker", "oriented-stripes" or
/// "oriented-stripes(45)".
PhantomSpec parse_phantom_kind(std::string_view text);
std::string phantom_kind_name(PhantomKind kind);

/// Radian frequency of the stripes and of the textured shell's carrier.
inline constexpr double kStripeFrequency = 0.7 * 3.14159265358979323846;
inline constexpr double kShellFrequency = 0.8 * 3.14159265358979323846;

/// Deterministic synthetic volume with values in [0, 1]. H and W must be
/// at least 16; D may be as small as 1.
MultiModalVolume make_phantom(const PhantomSpec& spec, const Dims& dims, std::uint64_t seed);

}  // namespace freqdec
