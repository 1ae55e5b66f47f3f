#pragma once

#include "freqdec/filterbank.hpp"
#include "freqdec/volume.hpp"

namespace freqdec {

/// One-level 2D DWT. First letter is the vertical filter, second the
/// horizontal one: lh is vertical lowpass + horizontal highpass.
/// rows/cols are the input dims before odd-size padding.
struct DwtLevel1 {
    Plane ll, lh, hl, hh;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

DwtLevel1 dwt2_level1(const Plane& slice, const FilterBank1D& bank = FilterBank1D::haar());

Plane idwt2_level1(const DwtLevel1& bands, const FilterBank1D& bank = FilterBank1D::haar());

}  // namespace freqdec
