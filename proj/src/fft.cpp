#include "freqdec/fft.hpp"

#include "freqdec/error.hpp"

#include <fftw3.h>

#include <mutex>

namespace freqdec {
namespace {

// FFTW planning is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::vector<cplx> dft(const std::vector<cplx>& in, const std::vector<std::size_t>& shape, bool inverse) {
    std::size_t n = 1;
    std::vector<int> dims;
    for (auto s : shape) {
        if (s == 0) throw SizeError("dft axis of length zero");
        n *= s;
        dims.push_back(static_cast<int>(s));
    }
    if (in.size() != n) throw ShapeError("dft input length does not match shape");
    if (dims.empty()) throw SizeError("dft needs at least one axis");

    std::vector<cplx> out(n);
    std::vector<cplx> work(in);
    auto* src = reinterpret_cast<fftw_complex*>(work.data());
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), src, dst, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                             FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    if (inverse) {
        const double s = 1.0 / static_cast<double>(n);
        for (auto& v : out) v *= s;
    }
    return out;
}

std::vector<cplx> dft_real(const std::vector<double>& in, const std::vector<std::size_t>& shape) {
    return dft(std::vector<cplx>(in.begin(), in.end()), shape, false);
}

std::vector<cplx> fft2(const Plane& p) { return dft_real(p.data, {p.rows, p.cols}); }

}  // namespace freqdec
