#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "freqdec/dwt.hpp"
#include "freqdec/error.hpp"
#include "freqdec/io.hpp"
#include "test_util.hpp"

using namespace freqdec;

namespace {

// Haar on 2x2 blocks written out directly: a b / c d.
DwtLevel1 haar_blocks(const Plane& x) {
    const std::size_t R = x.rows / 2, C = x.cols / 2;
    DwtLevel1 o{Plane(R, C), Plane(R, C), Plane(R, C), Plane(R, C), x.rows, x.cols};
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            const double a = x(2 * r, 2 * c), b = x(2 * r, 2 * c + 1), cc = x(2 * r + 1, 2 * c), d = x(2 * r + 1, 2 * c + 1);
            o.ll(r, c) = (a + b + cc + d) / 2;
            o.lh(r, c) = (a - b + cc - d) / 2;
            o.hl(r, c) = (a + b - cc - d) / 2;
            o.hh(r, c) = (a - b - cc + d) / 2;
        }
    return o;
}

double rel_energy_change(const Plane& a, const Plane& b) {
    return std::abs(energy(a) - energy(b)) / energy(a);
}

}  // namespace

TEST_CASE("constant image maps to 2c in LL and zero elsewhere") {
    const Plane x(16, 12, 3.25);
    const auto b = dwt2_level1(x);
    CHECK(b.ll.rows == 8);
    CHECK(b.ll.cols == 6);
    for (double v : b.ll.data) CHECK(v == doctest::Approx(6.5).epsilon(1e-14));
    for (const Plane* p : {&b.lh, &b.hl, &b.hh})
        for (double v : p->data) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("impulse lands on the tensor filter taps") {
    for (std::size_t r0 : {4u, 5u})
        for (std::size_t c0 : {6u, 7u}) {
            Plane x(12, 12);
            x(r0, c0) = 1.0;
            const auto b = dwt2_level1(x);
            const double sr = (r0 % 2 == 0) ? 1.0 : -1.0, sc = (c0 % 2 == 0) ? 1.0 : -1.0;
            const std::size_t r = r0 / 2, c = c0 / 2;
            CHECK(b.ll(r, c) == doctest::Approx(0.5));
            CHECK(b.lh(r, c) == doctest::Approx(0.5 * sc));
            CHECK(b.hl(r, c) == doctest::Approx(0.5 * sr));
            CHECK(b.hh(r, c) == doctest::Approx(0.5 * sr * sc));
            double total = 0;
            for (const Plane* p : {&b.ll, &b.lh, &b.hl, &b.hh}) total += energy(*p);
            CHECK(total == doctest::Approx(1.0));
        }
}

TEST_CASE("matches the 2x2 block formula on random input") {
    testutil::Gen g(3);
    for (int t = 0; t < 10; ++t) {
        const Plane x = testutil::random_plane(2 * g.index(1, 10), 2 * g.index(1, 10), g);
        const auto b = dwt2_level1(x);
        const auto o = haar_blocks(x);
        CHECK(max_abs_diff(b.ll, o.ll) < 1e-12);
        CHECK(max_abs_diff(b.lh, o.lh) < 1e-12);
        CHECK(max_abs_diff(b.hl, o.hl) < 1e-12);
        CHECK(max_abs_diff(b.hh, o.hh) < 1e-12);
    }
}

TEST_CASE("round trip for every built-in bank") {
    testutil::Gen g(4);
    for (const FilterBank1D* bank : {&FilterBank1D::haar(), &FilterBank1D::cdf97(), &FilterBank1D::near_sym_b()}) {
        for (int t = 0; t < 5; ++t) {
            const Plane x = testutil::random_plane(16, 16, g);
            CHECK(max_abs_diff(idwt2_level1(dwt2_level1(x, *bank), *bank), x) < 1e-10);
        }
    }
}

TEST_CASE("odd dims are padded and cropped back") {
    testutil::Gen g(5);
    const Plane x = testutil::random_plane(9, 7, g);
    const auto b = dwt2_level1(x);
    CHECK(b.ll.rows == 5);
    CHECK(b.ll.cols == 4);
    CHECK(b.rows == 9);
    CHECK(b.cols == 7);
    const Plane y = idwt2_level1(b);
    REQUIRE(y.same_shape(x));
    CHECK(max_abs_diff(x, y) < 1e-10);
}

TEST_CASE("zero subbands give a zero image and constants survive the round trip") {
    DwtLevel1 z{Plane(4, 5), Plane(4, 5), Plane(4, 5), Plane(4, 5), 8, 10};
    for (double v : idwt2_level1(z).data) CHECK(v == 0.0);
    const Plane c(8, 10, -1.5);
    const Plane y = idwt2_level1(dwt2_level1(c));
    CHECK(max_abs_diff(c, y) < 1e-10);
}

TEST_CASE("Parseval holds for Haar") {
    testutil::Gen g(6);
    for (int t = 0; t < 20; ++t) {
        const Plane x = testutil::random_plane(2 * g.index(2, 12), 2 * g.index(2, 12), g);
        const auto b = dwt2_level1(x);
        const double sum = energy(b.ll) + energy(b.lh) + energy(b.hl) + energy(b.hh);
        CHECK(std::abs(sum - energy(x)) < 1e-9);
    }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(dwt2_level1(Plane()), SizeError);
    DwtLevel1 bad{Plane(4, 4), Plane(4, 5), Plane(4, 4), Plane(4, 4), 8, 8};
    CHECK_THROWS_AS(idwt2_level1(bad), ShapeError);
    DwtLevel1 wrong_dims{Plane(4, 4), Plane(4, 4), Plane(4, 4), Plane(4, 4), 16, 8};
    CHECK_THROWS_AS(idwt2_level1(wrong_dims), ShapeError);
}

TEST_CASE("some one pixel shift of a stripe phantom moves LL energy by more than 1 percent") {
    double worst = 0;
    for (double theta : {0.0, 45.0, 90.0, 135.0}) {
        PhantomSpec spec{PhantomKind::oriented_stripes, theta, 1};
        const Plane x = make_phantom(spec, {1, 32, 32}, 42).volume(0).slice(0);
        const Plane ll = dwt2_level1(x).ll;
        for (auto [dr, dc] : {std::pair{0L, 1L}, std::pair{1L, 0L}, std::pair{1L, 1L}})
            worst = std::max(worst, rel_energy_change(ll, dwt2_level1(circshift(x, dr, dc)).ll));
    }
    CHECK(worst > 0.01);
}
