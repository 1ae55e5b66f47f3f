#include "freqdec/io.hpp"

#include "freqdec/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace freqdec {
namespace {

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <typename T>
T load(const unsigned char* p, bool swap) {
    std::array<unsigned char, sizeof(T)> b;
    std::memcpy(b.data(), p, sizeof(T));
    if (swap) std::reverse(b.begin(), b.end());
    T v;
    std::memcpy(&v, b.data(), sizeof(T));
    return v;
}

constexpr bool kHostLittle = std::endian::native == std::endian::little;

template <typename T>
T load_le(const unsigned char* p) {
    return load<T>(p, !kHostLittle);
}

template <typename T>
void store_le(std::vector<unsigned char>& out, T v) {
    std::array<unsigned char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    if (!kHostLittle) std::reverse(b.begin(), b.end());
    out.insert(out.end(), b.begin(), b.end());
}

constexpr char kRawMagic[16] = {'F', 'R', 'E', 'Q', 'V', 'O', 'L', '1', 0, 0, 0, 0, 0, 0, 0, 0};

}  // namespace

MultiModalVolume read_nifti(const std::filesystem::path& path) {
    const auto bytes = slurp(path);
    if (bytes.size() < 348) throw LengthError("NIfTI header truncated: " + path.string());
    const unsigned char* h = bytes.data();

    bool swap = false;
    if (load<std::int32_t>(h, false) != 348) {
        if (load<std::int32_t>(h, true) != 348) throw FormatError("sizeof_hdr is not 348");
        swap = true;
    }
    const bool single = std::memcmp(h + 344, "n+1\0", 4) == 0;
    const bool pair = std::memcmp(h + 344, "ni1\0", 4) == 0;
    if (!single && !pair) throw FormatError("missing NIfTI-1 magic in " + path.string());

    std::array<std::int16_t, 8> dim{};
    for (int i = 0; i < 8; ++i) dim[i] = load<std::int16_t>(h + 40 + 2 * i, swap);
    if (dim[0] != 3) throw SizeError("only 3D NIfTI volumes are supported, dim[0]=" + std::to_string(dim[0]));
    for (int i = 1; i <= 3; ++i)
        if (dim[i] < 1) throw FormatError("non-positive NIfTI dimension");

    const auto datatype = load<std::int16_t>(h + 70, swap);
    std::size_t bpv = 0;
    switch (datatype) {
        case 2: bpv = 1; break;
        case 4: bpv = 2; break;
        case 16: bpv = 4; break;
        default: throw UnsupportedError("unsupported NIfTI datatype " + std::to_string(datatype));
    }
    std::array<float, 8> pixdim{};
    for (int i = 0; i < 8; ++i) pixdim[i] = load<float>(h + 76 + 4 * i, swap);
    const float vox_offset = load<float>(h + 108, swap);
    const float slope = load<float>(h + 112, swap);
    const float inter = load<float>(h + 116, swap);

    std::vector<unsigned char> img;
    const unsigned char* payload = nullptr;
    std::size_t available = 0;
    const auto offset = static_cast<std::size_t>(std::max(0.0f, vox_offset));
    if (single) {
        if (offset > bytes.size()) throw LengthError("vox_offset beyond end of file");
        payload = bytes.data() + offset;
        available = bytes.size() - offset;
    } else {
        auto img_path = path;
        img_path.replace_extension(".img");
        img = slurp(img_path);
        if (offset > img.size()) throw LengthError("vox_offset beyond end of image file");
        payload = img.data() + offset;
        available = img.size() - offset;
    }

    const Dims dims{static_cast<std::size_t>(dim[3]), static_cast<std::size_t>(dim[2]), static_cast<std::size_t>(dim[1])};
    const std::size_t n = dims.count();
    if (available < n * bpv) throw LengthError("NIfTI payload truncated: need " + std::to_string(n * bpv) + " bytes");

    const bool scale = slope != 0.0f && std::isfinite(slope);
    std::vector<float> data(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        const unsigned char* p = payload + i * bpv;
        switch (datatype) {
            case 2: v = *p; break;
            case 4: v = load<std::int16_t>(p, swap); break;
            default: v = load<float>(p, swap); break;
        }
        if (scale) v = v * slope + inter;
        data[i] = static_cast<float>(v);
    }
    auto sp = [](float s) { return (s > 0.0f && std::isfinite(s)) ? static_cast<double>(s) : 1.0; };
    Volume3D vol(dims, std::move(data), {sp(pixdim[3]), sp(pixdim[2]), sp(pixdim[1])});
    return MultiModalVolume({{path.stem().string(), std::move(vol)}});
}

void write_raw(const ChannelVolume& vol, const std::filesystem::path& path) {
    const Dims& d = vol.dims();
    std::vector<unsigned char> out;
    out.reserve(kRawHeaderBytes + 4 * vol.channels() * d.count());
    out.insert(out.end(), std::begin(kRawMagic), std::end(kRawMagic));
    store_le<std::uint32_t>(out, static_cast<std::uint32_t>(vol.channels()));
    store_le<std::uint32_t>(out, static_cast<std::uint32_t>(d.d));
    store_le<std::uint32_t>(out, static_cast<std::uint32_t>(d.h));
    store_le<std::uint32_t>(out, static_cast<std::uint32_t>(d.w));
    for (double s : vol.spacing()) store_le<float>(out, static_cast<float>(s));
    for (const auto& ch : vol.all())
        for (float v : ch.data()) store_le<float>(out, v);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error("write failed for " + path.string());
}

ChannelVolume read_raw(const std::filesystem::path& path) {
    const auto bytes = slurp(path);
    if (bytes.size() < kRawHeaderBytes || std::memcmp(bytes.data(), kRawMagic, 16) != 0)
        throw FormatError("not a FREQVOL1 file: " + path.string());
    const unsigned char* p = bytes.data() + 16;
    const std::size_t C = load_le<std::uint32_t>(p);
    const Dims dims{load_le<std::uint32_t>(p + 4), load_le<std::uint32_t>(p + 8), load_le<std::uint32_t>(p + 12)};
    const Spacing spacing{load_le<float>(p + 16), load_le<float>(p + 20), load_le<float>(p + 24)};
    if (C == 0) throw FormatError("FREQVOL1 file declares zero channels");
    const std::size_t n = dims.count();
    if (bytes.size() != kRawHeaderBytes + 4 * C * n)
        throw LengthError("FREQVOL1 payload length mismatch in " + path.string());

    std::vector<Volume3D> channels;
    channels.reserve(C);
    const unsigned char* payload = bytes.data() + kRawHeaderBytes;
    for (std::size_t c = 0; c < C; ++c) {
        std::vector<float> data(n);
        for (std::size_t i = 0; i < n; ++i) data[i] = load_le<float>(payload + 4 * (c * n + i));
        channels.emplace_back(dims, std::move(data), spacing);
    }
    return ChannelVolume(std::move(channels));
}

ChannelVolume read_volume(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".nii" || ext == ".hdr" || ext == ".img") {
        auto p = path;
        if (ext == ".img") p.replace_extension(".hdr");
        return to_channels(read_nifti(p));
    }
    return read_raw(path);
}

}  // namespace freqdec
