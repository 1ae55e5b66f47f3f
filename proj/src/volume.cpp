#include "freqdec/volume.hpp"

#include "freqdec/error.hpp"

#include <algorithm>
#include <cmath>

namespace freqdec {

Plane& Plane::operator+=(const Plane& o) {
    if (!same_shape(o)) throw ShapeError("plane shape mismatch in +=");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
}

Plane& Plane::operator-=(const Plane& o) {
    if (!same_shape(o)) throw ShapeError("plane shape mismatch in -=");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
    return *this;
}

Plane& Plane::operator*=(double s) {
    for (double& v : data) v *= s;
    return *this;
}

Plane operator+(Plane a, const Plane& b) { return a += b; }
Plane operator-(Plane a, const Plane& b) { return a -= b; }
Plane operator*(Plane a, double s) { return a *= s; }

double max_abs_diff(const Plane& a, const Plane& b) {
    if (!a.same_shape(b)) throw ShapeError("plane shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

double energy(const Plane& p) {
    double e = 0.0;
    for (double v : p.data) e += v * v;
    return e;
}

Plane circshift(const Plane& p, long dr, long dc) {
    Plane out(p.rows, p.cols);
    const long R = static_cast<long>(p.rows);
    const long C = static_cast<long>(p.cols);
    for (long r = 0; r < R; ++r) {
        const long sr = ((r - dr) % R + R) % R;
        for (long c = 0; c < C; ++c) {
            const long sc = ((c - dc) % C + C) % C;
            out(r, c) = p(sr, sc);
        }
    }
    return out;
}

ComplexPlane::ComplexPlane(Plane r, Plane i) : re(std::move(r)), im(std::move(i)) {
    if (!re.same_shape(im)) throw ShapeError("complex plane parts differ in shape");
}

Plane ComplexPlane::magnitude() const {
    Plane m(re.rows, re.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = std::hypot(re.data[i], im.data[i]);
    return m;
}

std::string to_string(const Dims& dims) {
    return std::to_string(dims.d) + "x" + std::to_string(dims.h) + "x" + std::to_string(dims.w);
}

namespace {

void check_dims(const Dims& dims) {
    if (dims.d == 0 || dims.h == 0 || dims.w == 0) throw SizeError("volume dims must be positive, got " + to_string(dims));
}

}  // namespace

Volume3D::Volume3D(Dims dims, Spacing spacing) : dims_(dims), spacing_(spacing) {
    check_dims(dims_);
    data_.assign(dims_.count(), 0.0f);
}

Volume3D::Volume3D(Dims dims, std::vector<float> data, Spacing spacing)
    : dims_(dims), spacing_(spacing), data_(std::move(data)) {
    check_dims(dims_);
    if (data_.size() != dims_.count()) throw LengthError("volume data length does not match dims " + to_string(dims_));
    for (float v : data_)
        if (!std::isfinite(v)) throw NumericError("volume contains non-finite values");
}

Plane Volume3D::slice(std::size_t z) const {
    if (z >= dims_.d) throw SizeError("slice index out of range");
    Plane p(dims_.h, dims_.w);
    const float* src = data_.data() + z * dims_.h * dims_.w;
    for (std::size_t i = 0; i < p.data.size(); ++i) p.data[i] = src[i];
    return p;
}

void Volume3D::set_slice(std::size_t z, const Plane& p) {
    if (z >= dims_.d) throw SizeError("slice index out of range");
    if (p.rows != dims_.h || p.cols != dims_.w) throw ShapeError("slice shape mismatch");
    float* dst = data_.data() + z * dims_.h * dims_.w;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        if (!std::isfinite(p.data[i])) throw NumericError("non-finite value written to volume");
        dst[i] = static_cast<float>(p.data[i]);
    }
}

std::vector<double> Volume3D::to_double() const { return {data_.begin(), data_.end()}; }

MultiModalVolume::MultiModalVolume(std::vector<std::pair<std::string, Volume3D>> mods) : modalities(std::move(mods)) {
    validate();
}

const Dims& MultiModalVolume::dims() const {
    if (modalities.empty()) throw ShapeError("multimodal volume has no modalities");
    return modalities.front().second.dims();
}

void MultiModalVolume::validate() const {
    if (modalities.empty()) throw ShapeError("multimodal volume needs at least one modality");
    const auto& ref = modalities.front().second;
    for (const auto& [name, v] : modalities) {
        if (!(v.dims() == ref.dims())) throw ShapeError("modality '" + name + "' dims differ");
        if (v.spacing() != ref.spacing()) throw ShapeError("modality '" + name + "' spacing differs");
    }
}

ChannelVolume::ChannelVolume(std::vector<Volume3D> channels) : channels_(std::move(channels)) {
    if (channels_.empty()) throw ShapeError("channel volume needs C >= 1");
    for (const auto& c : channels_)
        if (!(c.dims() == channels_.front().dims())) throw ShapeError("channel dims are not uniform");
}

ChannelVolume to_channels(const MultiModalVolume& mm) {
    std::vector<Volume3D> ch;
    ch.reserve(mm.count());
    for (const auto& m : mm.modalities) ch.push_back(m.second);
    return ChannelVolume(std::move(ch));
}

MultiModalVolume to_modalities(const ChannelVolume& cv) {
    std::vector<std::pair<std::string, Volume3D>> mods;
    for (std::size_t c = 0; c < cv.channels(); ++c) mods.emplace_back("ch" + std::to_string(c), cv.channel(c));
    return MultiModalVolume(std::move(mods));
}

LabelVolume::LabelVolume(Dims d, int n_classes) : dims(d), classes(n_classes), data(d.count(), 0) {
    if (n_classes < 1 || n_classes > 255) throw ConfigError("class count must be in [1, 255]");
    check_dims(d);
}

LabelVolume::LabelVolume(Dims d, int n_classes, std::vector<std::uint8_t> values)
    : dims(d), classes(n_classes), data(std::move(values)) {
    if (n_classes < 1 || n_classes > 255) throw ConfigError("class count must be in [1, 255]");
    check_dims(d);
    validate();
}

void LabelVolume::validate() const {
    if (data.size() != dims.count()) throw LengthError("label data length does not match dims");
    for (auto v : data)
        if (v >= classes) throw ConfigError("label id " + std::to_string(v) + " >= class count " + std::to_string(classes));
}

LabelVolume to_labels(const Volume3D& v, int n_classes) {
    std::vector<std::uint8_t> ids(v.data().size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const float f = v.data()[i];
        const float r = std::round(f);
        if (r != f || r < 0.0f || r >= static_cast<float>(n_classes))
            throw ConfigError("voxel value is not a valid class id");
        ids[i] = static_cast<std::uint8_t>(r);
    }
    LabelVolume out(v.dims(), n_classes, std::move(ids));
    out.spacing = v.spacing();
    return out;
}


Plane resize_bilinear(const Plane& p, std::size_t rows, std::size_t cols) {
    if (p.empty()) throw SizeError("resize of empty plane");
    auto coords = [](std::size_t n_out, std::size_t n_in) {
        std::vector<std::pair<std::size_t, double>> out(n_out);
        const double ratio = static_cast<double>(n_in) / static_cast<double>(n_out);
        for (std::size_t i = 0; i < n_out; ++i) {
            double s = (static_cast<double>(i) + 0.5) * ratio - 0.5;
            s = std::clamp(s, 0.0, static_cast<double>(n_in - 1));
            const auto i0 = static_cast<std::size_t>(std::floor(s));
            out[i] = {i0, s - static_cast<double>(i0)};
        }
        return out;
    };
    const auto rc = coords(rows, p.rows);
    const auto cc = coords(cols, p.cols);
    Plane out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto [r0, fr] = rc[r];
        const std::size_t r1 = std::min(r0 + 1, p.rows - 1);
        for (std::size_t c = 0; c < cols; ++c) {
            const auto [c0, fc] = cc[c];
            const std::size_t c1 = std::min(c0 + 1, p.cols - 1);
            const double top = p(r0, c0) * (1 - fc) + p(r0, c1) * fc;
            const double bot = p(r1, c0) * (1 - fc) + p(r1, c1) * fc;
            out(r, c) = top * (1 - fr) + bot * fr;
        }
    }
    return out;
}

}  // namespace freqdec
