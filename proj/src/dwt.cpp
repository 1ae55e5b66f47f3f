#include "freqdec/dwt.hpp"

#include "freqdec/error.hpp"

#include <algorithm>

namespace freqdec {
namespace {

// Odd dims are padded by repeating the last row/column.
Plane pad_even(const Plane& p) {
    const std::size_t R = p.rows + (p.rows % 2), C = p.cols + (p.cols % 2);
    if (R == p.rows && C == p.cols) return p;
    Plane out(R, C);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) out(r, c) = p(std::min(r, p.rows - 1), std::min(c, p.cols - 1));
    return out;
}

std::pair<Plane, Plane> split_cols(const Plane& p, const FilterBank1D& bank) {
    Plane lo(p.rows, p.cols / 2), hi(p.rows, p.cols / 2);
    std::vector<double> row(p.cols);
    for (std::size_t r = 0; r < p.rows; ++r) {
        for (std::size_t c = 0; c < p.cols; ++c) row[c] = p(r, c);
        const auto [l, h] = bank.analyze(row);
        for (std::size_t c = 0; c < l.size(); ++c) {
            lo(r, c) = l[c];
            hi(r, c) = h[c];
        }
    }
    return {lo, hi};
}

std::pair<Plane, Plane> split_rows(const Plane& p, const FilterBank1D& bank) {
    Plane lo(p.rows / 2, p.cols), hi(p.rows / 2, p.cols);
    std::vector<double> col(p.rows);
    for (std::size_t c = 0; c < p.cols; ++c) {
        for (std::size_t r = 0; r < p.rows; ++r) col[r] = p(r, c);
        const auto [l, h] = bank.analyze(col);
        for (std::size_t r = 0; r < l.size(); ++r) {
            lo(r, c) = l[r];
            hi(r, c) = h[r];
        }
    }
    return {lo, hi};
}

Plane merge_cols(const Plane& lo, const Plane& hi, const FilterBank1D& bank) {
    Plane out(lo.rows, 2 * lo.cols);
    std::vector<double> l(lo.cols), h(lo.cols);
    for (std::size_t r = 0; r < lo.rows; ++r) {
        for (std::size_t c = 0; c < lo.cols; ++c) {
            l[c] = lo(r, c);
            h[c] = hi(r, c);
        }
        const auto x = bank.synthesize(l, h);
        for (std::size_t c = 0; c < x.size(); ++c) out(r, c) = x[c];
    }
    return out;
}

Plane merge_rows(const Plane& lo, const Plane& hi, const FilterBank1D& bank) {
    Plane out(2 * lo.rows, lo.cols);
    std::vector<double> l(lo.rows), h(lo.rows);
    for (std::size_t c = 0; c < lo.cols; ++c) {
        for (std::size_t r = 0; r < lo.rows; ++r) {
            l[r] = lo(r, c);
            h[r] = hi(r, c);
        }
        const auto x = bank.synthesize(l, h);
        for (std::size_t r = 0; r < x.size(); ++r) out(r, c) = x[r];
    }
    return out;
}

}  // namespace

DwtLevel1 dwt2_level1(const Plane& slice, const FilterBank1D& bank) {
    if (slice.empty()) throw SizeError("dwt2 on empty input");
    const Plane x = pad_even(slice);
    const auto [lo_h, hi_h] = split_cols(x, bank);
    auto [ll, hl] = split_rows(lo_h, bank);
    auto [lh, hh] = split_rows(hi_h, bank);
    return {std::move(ll), std::move(lh), std::move(hl), std::move(hh), slice.rows, slice.cols};
}

Plane idwt2_level1(const DwtLevel1& b, const FilterBank1D& bank) {
    if (!b.ll.same_shape(b.lh) || !b.ll.same_shape(b.hl) || !b.ll.same_shape(b.hh))
        throw ShapeError("dwt subbands differ in size");
    if (b.ll.empty()) throw SizeError("empty subbands");
    if (2 * b.ll.rows < b.rows || 2 * b.ll.rows > b.rows + 1 || 2 * b.ll.cols < b.cols || 2 * b.ll.cols > b.cols + 1)
        throw ShapeError("subband size inconsistent with original dims");
    const Plane lo_h = merge_rows(b.ll, b.hl, bank);
    const Plane hi_h = merge_rows(b.lh, b.hh, bank);
    const Plane full = merge_cols(lo_h, hi_h, bank);
    if (full.rows == b.rows && full.cols == b.cols) return full;
    Plane out(b.rows, b.cols);
    for (std::size_t r = 0; r < b.rows; ++r)
        for (std::size_t c = 0; c < b.cols; ++c) out(r, c) = full(r, c);
    return out;
}

}  // namespace freqdec
