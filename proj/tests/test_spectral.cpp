#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "rswb/numerics.hpp"
#include "rswb/spectral.hpp"

using namespace rswb;
using namespace rswb::spectral;

TEST_CASE("spectral coordinate maps invert each other") {
    LanglandsParameter mu{Complex{0.3, 2.0}, Complex{-0.1, -0.5}, Complex{-0.2, -1.5}};
    auto nu = to_spectral_coords(mu);
    CHECK(std::abs(nu[0] - (mu.mu[0] - mu.mu[1]) / 3.0) < 1e-15);
    CHECK(std::abs(nu[1] - (mu.mu[1] - mu.mu[2]) / 3.0) < 1e-15);
    CHECK(std::abs(nu[0] + nu[1] + nu[2]) < 1e-15);
    LanglandsParameter back = from_spectral_coords(nu);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(back.mu[j] - mu.mu[j]) < 1e-14);
}

TEST_CASE("weyl orbit consists of the six coordinate permutations") {
    LanglandsParameter mu = LanglandsParameter::from_imag(1.0, 2.5, -3.5);
    auto orbit = weyl_orbit(mu);
    for (int j = 0; j < 3; ++j) CHECK(orbit[0].mu[j] == mu.mu[j]);
    for (const auto& w : orbit) {
        // each image is a permutation: same multiset of coordinates
        double sum = 0, sumsq = 0;
        for (const auto& m : w.mu) {
            sum += m.imag();
            sumsq += m.imag() * m.imag();
        }
        CHECK(std::abs(sum) < 1e-14);
        CHECK(sumsq == doctest::Approx(1.0 + 6.25 + 12.25).epsilon(1e-14));
    }
}

TEST_CASE("test function is weyl invariant") {
    auto spec = TestFunctionSpec::centered(6.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-8.0, 8.0);
    for (int trial = 0; trial < 20; ++trial) {
        double t1 = U(rng), t2 = U(rng);
        LanglandsParameter mu = LanglandsParameter::from_imag(t1, t2, -t1 - t2);
        Complex ref = test_function(mu, spec);
        for (const auto& w : weyl_orbit(mu)) {
            Complex v = test_function(w, spec);
            CHECK(std::abs(v - ref) <= 1e-12 * std::max(1e-300, std::abs(ref)));
        }
    }
}

TEST_CASE("test function is real nonnegative on the unitary axis") {
    auto spec = TestFunctionSpec::centered(6.0);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        double t1 = U(rng), t2 = U(rng);
        Complex v = test_function(LanglandsParameter::from_imag(t1, t2, -t1 - t2), spec);
        CHECK(std::abs(v.imag()) <= 1e-13 * std::max(1.0, std::abs(v)));
        CHECK(v.real() >= -1e-300);
        CHECK(test_function_axis(t1, t2, spec) ==
              doctest::Approx(v.real()).epsilon(1e-12).scale(std::abs(v.real()) + 1e-300));
    }
}

TEST_CASE("test function vanishes at the admissibility points") {
    auto spec = TestFunctionSpec::centered(6.0, 0.5, 2);
    for (int n = 0; n <= 2; ++n) {
        double c = (1.0 + 2.0 * n) / 3.0;
        for (double sgn : {1.0, -1.0}) {
            std::array<Complex, 3> nu{Complex{sgn * c, 0.0}, Complex{0.11, 0.0},
                                      Complex{-sgn * c - 0.11, 0.0}};
            LanglandsParameter mu = from_spectral_coords(nu);
            CHECK(std::abs(test_function(mu, spec)) < 1e-250);
        }
    }
}

TEST_CASE("spectral measure sign and pole guard") {
    // nonpositive on the axis, and the axis form matches the general one
    for (double t1 : {0.3, 2.0, -5.5}) {
        for (double t2 : {0.9, -1.7}) {
            Complex s = spec_measure(LanglandsParameter::from_imag(t1, t2, -t1 - t2));
            CHECK(std::abs(s.imag()) < 1e-12 * std::max(1.0, std::abs(s)));
            CHECK(s.real() <= 1e-12);
            CHECK(neg_spec_measure_axis(t1, t2) ==
                  doctest::Approx(-s.real()).epsilon(1e-12).scale(std::abs(s.real()) + 1e-300));
            CHECK(neg_spec_measure_axis(t1, t2) >= 0.0);
        }
    }
    // at 3 nu_1 = 1 (real coordinates) the tangent blows up
    std::array<Complex, 3> nu{Complex{1.0 / 3.0, 0.0}, Complex{0.2, 0.0},
                              Complex{-1.0 / 3.0 - 0.2, 0.0}};
    CHECK_THROWS_AS((void)spec_measure(from_spectral_coords(nu)), PoleError);
}

TEST_CASE("moment grid structure") {
    auto spec = TestFunctionSpec::centered(6.0);
    QuadratureSpec q;
    auto grid = build_moment_grid(spec, q);
    REQUIRE(!grid.nodes.empty());
    long long mult = (long long)std::llround(spec.M / 0.4);
    CHECK(grid.t_step == doctest::Approx(q.step * std::max(1LL, mult)).epsilon(1e-15));
    double wmax = 0;
    for (const auto& nd : grid.nodes) wmax = std::max(wmax, nd.weight);
    for (const auto& nd : grid.nodes) {
        // nodes sit on the integer lattice
        CHECK(std::abs(nd.t1 / grid.t_step - std::llround(nd.t1 / grid.t_step)) < 1e-9);
        CHECK(std::abs(nd.t2 / grid.t_step - std::llround(nd.t2 / grid.t_step)) < 1e-9);
        // each weight reproduces h * (-spec) * t_step^2 and respects the prune
        double want = test_function_axis(nd.t1, nd.t2, spec) *
                      neg_spec_measure_axis(nd.t1, nd.t2) * grid.t_step * grid.t_step;
        CHECK(nd.weight == doctest::Approx(want).epsilon(1e-12));
        CHECK(nd.weight > 1e-18 * wmax * (1.0 - 1e-12));
    }
    CHECK(grid.total_weight() > 0.0);
    // deterministic: a rebuild yields the identical node list
    auto again = build_moment_grid(spec, q);
    REQUIRE(again.nodes.size() == grid.nodes.size());
    for (size_t i = 0; i < grid.nodes.size(); ++i) {
        CHECK(again.nodes[i].t1 == grid.nodes[i].t1);
        CHECK(again.nodes[i].t2 == grid.nodes[i].t2);
        CHECK(again.nodes[i].weight == grid.nodes[i].weight);
    }
    // kernel grid only refines the spacing
    auto kg = build_kernel_grid(spec, q);
    CHECK(kg.t_step == doctest::Approx(5.0 * q.step).epsilon(1e-15));
    CHECK(kg.nodes.size() > grid.nodes.size());
}

TEST_CASE("box grid covers a single window") {
    auto spec = TestFunctionSpec::centered(6.0);
    double c1 = spec.mu0.mu[0].imag(), c2 = spec.mu0.mu[1].imag();
    auto box = build_box_grid(spec, c1, c2, 4.0, 0.5);
    REQUIRE(!box.nodes.empty());
    for (const auto& nd : box.nodes) {
        CHECK(std::abs(nd.t1 - c1) <= 4.0 + 1e-12);
        CHECK(std::abs(nd.t2 - c2) <= 4.0 + 1e-12);
    }
}

TEST_CASE("localized window integral matches the brute-force plane integral") {
    auto spec = TestFunctionSpec::centered(4.0);
    QuadratureSpec q;
    q.step = 0.1;
    double loc = h_spectral_integral(spec, q);
    CHECK(loc > 0.0);
    QuadratureSpec box;
    box.step = 0.1;
    box.height = 30.0;
    Complex brute = numerics::spectral_plane_integral(
        [&](const LanglandsParameter& mu) {
            double t1 = mu.mu[0].imag(), t2 = mu.mu[1].imag();
            return Complex{test_function_axis(t1, t2, spec), 0.0} *
                   spec_measure(mu);
        },
        box);
    CHECK(std::abs(brute.imag()) < 1e-10 * std::abs(brute));
    CHECK(loc == doctest::Approx(brute.real()).epsilon(1e-4));
}

TEST_CASE("window integral is stable under step refinement") {
    auto spec = TestFunctionSpec::centered(6.0);
    QuadratureSpec q1, q2;
    q1.step = 0.05;
    q2.step = 0.025;
    double a = h_spectral_integral(spec, q1);
    double b = h_spectral_integral(spec, q2);
    CHECK(std::abs(a - b) < 1e-4 * std::abs(b));
}
