#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace freqdec {

/// Dense row-major 2D plane of doubles (columns fastest).
struct Plane {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Plane() = default;
    Plane(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
    bool same_shape(const Plane& o) const { return rows == o.rows && cols == o.cols; }

    Plane& operator+=(const Plane& o);
    Plane& operator-=(const Plane& o);
    Plane& operator*=(double s);
};

Plane operator+(Plane a, const Plane& b);
Plane operator-(Plane a, const Plane& b);
Plane operator*(Plane a, double s);

double max_abs_diff(const Plane& a, const Plane& b);
double energy(const Plane& p);

/// Circular shift: out(r, c) = in(r - dr, c - dc) modulo the plane size.
Plane circshift(const Plane& p, long dr, long dc);

/// Paired real and imaginary planes.
struct ComplexPlane {
    Plane re;
    Plane im;

    ComplexPlane() = default;
    ComplexPlane(std::size_t r, std::size_t c) : re(r, c), im(r, c) {}
    ComplexPlane(Plane r, Plane i);

    std::size_t rows() const { return re.rows; }
    std::size_t cols() const { return re.cols; }
    Plane magnitude() const;
};

struct Dims {
    std::size_t d = 0;
    std::size_t h = 0;
    std::size_t w = 0;

    std::size_t count() const { return d * h * w; }
    bool operator==(const Dims&) const = default;
};

std::string to_string(const Dims& dims);

using Spacing = std::array<double, 3>;

/// Real voxel grid stored as 32-bit floats, W fastest.
/// Values must be finite; spacing is (depth, height, width) in mm.
class Volume3D {
public:
    Volume3D() = default;
    explicit Volume3D(Dims dims, Spacing spacing = {1.0, 1.0, 1.0});
    Volume3D(Dims dims, std::vector<float> data, Spacing spacing = {1.0, 1.0, 1.0});

    const Dims& dims() const { return dims_; }
    const Spacing& spacing() const { return spacing_; }
    void set_spacing(const Spacing& s) { spacing_ = s; }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    float& at(std::size_t z, std::size_t y, std::size_t x) { return data_[(z * dims_.h + y) * dims_.w + x]; }
    float at(std::size_t z, std::size_t y, std::size_t x) const { return data_[(z * dims_.h + y) * dims_.w + x]; }

    Plane slice(std::size_t z) const;
    void set_slice(std::size_t z, const Plane& p);

    std::vector<double> to_double() const;

    bool operator==(const Volume3D& o) const { return dims_ == o.dims_ && spacing_ == o.spacing_ && data_ == o.data_; }

private:
    Dims dims_{};
    Spacing spacing_{1.0, 1.0, 1.0};
    std::vector<float> data_;
};

/// Named modalities sharing dims and spacing.
struct MultiModalVolume {
    std::vector<std::pair<std::string, Volume3D>> modalities;

    MultiModalVolume() = default;
    explicit MultiModalVolume(std::vector<std::pair<std::string, Volume3D>> mods);

    std::size_t count() const { return modalities.size(); }
    const Volume3D& volume(std::size_t m) const { return modalities.at(m).second; }
    const Dims& dims() const;
    void validate() const;
};

/// C >= 1 channels with uniform dims.
class ChannelVolume {
public:
    ChannelVolume() = default;
    explicit ChannelVolume(std::vector<Volume3D> channels);

    std::size_t channels() const { return channels_.size(); }
    const Volume3D& channel(std::size_t c) const { return channels_.at(c); }
    Volume3D& channel(std::size_t c) { return channels_.at(c); }
    const std::vector<Volume3D>& all() const { return channels_; }
    const Dims& dims() const { return channels_.front().dims(); }
    const Spacing& spacing() const { return channels_.front().spacing(); }

    bool operator==(const ChannelVolume& o) const { return channels_ == o.channels_; }

private:
    std::vector<Volume3D> channels_;
};

ChannelVolume to_channels(const MultiModalVolume& mm);
MultiModalVolume to_modalities(const ChannelVolume& cv);

/// Integer class ids, each < classes.
struct LabelVolume {
    Dims dims{};
    int classes = 2;
    std::vector<std::uint8_t> data;
    Spacing spacing{1.0, 1.0, 1.0};

    LabelVolume() = default;
    LabelVolume(Dims d, int n_classes);
    LabelVolume(Dims d, int n_classes, std::vector<std::uint8_t> values);

    std::uint8_t& at(std::size_t z, std::size_t y, std::size_t x) { return data[(z * dims.h + y) * dims.w + x]; }
    std::uint8_t at(std::size_t z, std::size_t y, std::size_t x) const { return data[(z * dims.h + y) * dims.w + x]; }
    void validate() const;
};

/// Rounds a real volume to class ids; values must be integral and in range.
LabelVolume to_labels(const Volume3D& v, int n_classes);


/// Bilinear resize with half-pixel centers and edge clamping.
Plane resize_bilinear(const Plane& p, std::size_t rows, std::size_t cols);

}  // namespace freqdec
