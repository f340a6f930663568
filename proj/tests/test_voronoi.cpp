#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rswb/arith.hpp"
#include "rswb/voronoi.hpp"

using namespace rswb;
using namespace rswb::voronoi;

namespace {
TestWindow gaussian_window(double center, double width) {
    TestWindow w;
    w.center = center;
    w.width = width;
    w.shape = TestWindow::Shape::gaussian;
    return w;
}

TestWindow compact_window(double center, double width) {
    TestWindow w = gaussian_window(center, width);
    w.shape = TestWindow::Shape::compact;
    return w;
}
} // namespace

TEST_CASE("window validation and shapes") {
    CHECK_THROWS_AS(gaussian_window(0.0, 1.0).validate(), ValidationError);
    CHECK_THROWS_AS(gaussian_window(5.0, 0.0).validate(), ValidationError);
    // support would dip below zero
    CHECK_THROWS_AS(gaussian_window(1.0, 0.5).validate(), ValidationError);

    TestWindow g = gaussian_window(20.0, 4.0);
    g.validate();
    CHECK(g(20.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g(24.0) == doctest::Approx(std::exp(-3.125)).epsilon(1e-14));
    CHECK(g(20.0 + 12.0 + 1e-9) == 0.0);
    CHECK(g(20.0 - 12.0 - 1e-9) == 0.0);

    TestWindow c = compact_window(20.0, 4.0);
    CHECK(c(20.0) == 1.0);
    CHECK(c(32.0) == 0.0);
    CHECK(c(8.0) == 0.0);
    // u = 1/2 gives (1 - 1/4)^4 exactly
    CHECK(c(26.0) == doctest::Approx(std::pow(0.75, 4)).epsilon(1e-15));
}

TEST_CASE("twisted sum matches a hand loop and respects twist structure") {
    gl2::HolomorphicForm f = gl2::build_eigenform(12, 3000);
    TestWindow F = gaussian_window(20.0, 4.0);

    Complex hand{0, 0};
    for (long long m = 8; m <= 32; ++m) hand += f(m) * F((double)m) * arith::e_frac(3 * m, 7);
    Complex got = voronoi_lhs(f, 3, 7, F);
    CHECK(std::abs(got - hand) < 1e-14 * (1.0 + std::abs(hand)));

    // shifting the residue by the modulus cannot change anything
    Complex shifted = voronoi_lhs(f, 3 + 7, 7, F);
    CHECK(got.real() == shifted.real());
    CHECK(got.imag() == shifted.imag());

    // negating the residue conjugates the sum (real coefficients)
    Complex neg = voronoi_lhs(f, -3, 7, F);
    CHECK(std::abs(neg - std::conj(got)) < 1e-14 * (1.0 + std::abs(got)));
}

TEST_CASE("window with no integer support sums to zero") {
    gl2::HolomorphicForm f = gl2::build_eigenform(12, 100);
    TestWindow F = gaussian_window(0.4, 0.1);
    Complex z = voronoi_lhs(f, 1, 3, F);
    CHECK(z.real() == 0.0);
    CHECK(z.imag() == 0.0);
}

TEST_CASE("twist and table guards") {
    gl2::HolomorphicForm f = gl2::build_eigenform(12, 100);
    TestWindow F = gaussian_window(20.0, 4.0);
    CHECK_THROWS_AS((void)voronoi_lhs(f, 2, 4, F), ValidationError);
    CHECK_THROWS_AS((void)voronoi_lhs(f, 1, 0, F), ValidationError);
    CHECK_THROWS_AS((void)voronoi_lhs(f, 1, 3, gaussian_window(150.0, 4.0)), DataError);
}

TEST_CASE("summation formula balances both sides") {
    QuadratureSpec q;
    gl2::HolomorphicForm f12 = gl2::build_eigenform(12, 4000);
    gl2::HolomorphicForm f16 = gl2::build_eigenform(16, 4000);

    SUBCASE("weight 12, modulus 2, gaussian window") {
        TestWindow F = gaussian_window(20.0, 4.0);
        Complex lhs = voronoi_lhs(f12, 1, 2, F);
        DualSide rhs = voronoi_rhs(f12, 1, 2, F, q);
        CHECK(std::abs(lhs - rhs.value) <= 1e-8 * (1.0 + std::abs(lhs)));
        CHECK(rhs.truncation_index >= 1);
        CHECK(!rhs.non_decay_warning);
    }
    SUBCASE("weight 16, modulus 3, compact window") {
        TestWindow F = compact_window(30.0, 5.0);
        Complex lhs = voronoi_lhs(f16, 2, 3, F);
        DualSide rhs = voronoi_rhs(f16, 2, 3, F, q);
        CHECK(std::abs(lhs - rhs.value) <= 1e-8 * (1.0 + std::abs(lhs)));
        CHECK(rhs.truncation_index >= 1);
        CHECK(!rhs.non_decay_warning);
    }
    SUBCASE("dual side is deterministic") {
        TestWindow F = gaussian_window(20.0, 4.0);
        DualSide a = voronoi_rhs(f12, 1, 2, F, q);
        DualSide b = voronoi_rhs(f12, 1, 2, F, q);
        CHECK(a.value.real() == b.value.real());
        CHECK(a.value.imag() == b.value.imag());
        CHECK(a.truncation_index == b.truncation_index);
    }
}

TEST_CASE("derivative identity check converges at second order") {
    // halving the difference step should cut the deviation about fourfold
    double e1 = bessel_recurrence_check(12, 3.0, 12, 4e-3);
    double e2 = bessel_recurrence_check(12, 3.0, 12, 2e-3);
    CHECK(e1 > 0.0);
    CHECK(e1 / e2 > 2.5);
    CHECK(e1 / e2 < 6.5);
    // far inside the small-argument regime everything is minuscule
    CHECK(bessel_recurrence_check(12, 0.5, 8, 1e-3) < 1e-8);
}

TEST_CASE("derivative identity guards") {
    CHECK_THROWS_AS((void)bessel_recurrence_check(1, 3.0, 8), ValidationError);
    CHECK_THROWS_AS((void)bessel_recurrence_check(61, 3.0, 8), ValidationError);
    CHECK_THROWS_AS((void)bessel_recurrence_check(12, 3.0, 1), ValidationError);
    CHECK_THROWS_AS((void)bessel_recurrence_check(12, -1.0, 8), ValidationError);
    CHECK_THROWS_AS((void)bessel_recurrence_check(12, 3.0, 8, 0.5), ValidationError);
}
