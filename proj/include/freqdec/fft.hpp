#pragma once

#include "freqdec/volume.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace freqdec {

using cplx = std::complex<double>;

/// N-dimensional complex DFT over a row-major array (last axis fastest).
/// Forward uses exp(-i...), inverse uses exp(+i...) and divides by the
/// element count. Thread safe.
std::vector<cplx> dft(const std::vector<cplx>& in, const std::vector<std::size_t>& shape, bool inverse = false);

std::vector<cplx> dft_real(const std::vector<double>& in, const std::vector<std::size_t>& shape);

std::vector<cplx> fft2(const Plane& p);

}  // namespace freqdec
