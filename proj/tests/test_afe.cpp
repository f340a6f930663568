#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rswb/afe.hpp"
#include "rswb/eisenstein.hpp"
#include "support/oracles.hpp"

using namespace rswb;
using namespace rswb::afe;

namespace {
const LanglandsParameter MU_REF =
    LanglandsParameter::from_imag(oracles::WEIGHT_MU_T1, oracles::WEIGHT_MU_T2,
                                  oracles::WEIGHT_MU_T3);

double rel(Complex got, Complex want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

const gl2::HolomorphicForm& delta_form() {
    static gl2::HolomorphicForm f = gl2::build_eigenform(12, 50000);
    return f;
}
} // namespace

TEST_CASE("gamma ratio product matches the frozen reference") {
    CHECK(rel(pi_gamma_ratio(12, MU_REF), oracles::PI_GAMMA_K12) < 1e-12);
    // purely imaginary parameters pair off, so the product has modulus one
    CHECK(std::abs(std::abs(pi_gamma_ratio(12, MU_REF)) - 1.0) < 1e-13);
    CHECK(rel(pi_gamma_ratio(16, LanglandsParameter::from_imag(0, 0, 0)), {1.0, 0.0}) < 1e-14);
}

TEST_CASE("weight values match the frozen references") {
    QuadratureSpec q;
    CHECK(rel(v_weight(3.0, 12, MU_REF, q), oracles::V_AT_3) < 1e-10);
    CHECK(rel(v_weight(2.0, 12, MU_REF, q), oracles::V_AT_2) < 1e-10);
    CHECK(rel(v_weight(0.5, 12, MU_REF, q), oracles::V_AT_HALF) < 1e-10);
    CHECK(rel(v_tilde_weight(3.0, 12, MU_REF, q), oracles::VTILDE_AT_3) < 1e-10);
}

TEST_CASE("tilde weight coincides with the plain weight at zero parameter") {
    QuadratureSpec q;
    auto mu0 = LanglandsParameter::from_imag(0.0, 0.0, 0.0);
    for (double y : {1e-3, 0.05, 0.7, 1.0, 4.0, 33.0, 900.0}) {
        Complex a = v_weight(y, 12, mu0, q);
        Complex b = v_tilde_weight(y, 12, mu0, q);
        CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("weights are continuous across the contour switch") {
    // the integration line flips sign where 8 pi^3 y crosses 1 and the
    // s = 0 residue enters; both branches must agree at the seam
    QuadratureSpec q;
    double ystar = 1.0 / (8.0 * std::pow(PI, 3));
    Complex lo = v_weight(ystar * (1.0 - 1e-7), 12, MU_REF, q);
    Complex hi = v_weight(ystar * (1.0 + 1e-7), 12, MU_REF, q);
    CHECK(std::abs(lo - hi) < 1e-6 * (1.0 + std::abs(lo)));
    Complex tlo = v_tilde_weight(ystar * (1.0 - 1e-7), 12, MU_REF, q);
    Complex thi = v_tilde_weight(ystar * (1.0 + 1e-7), 12, MU_REF, q);
    CHECK(std::abs(tlo - thi) < 1e-6 * (1.0 + std::abs(tlo)));
}

TEST_CASE("weights approach their residues for small argument and decay for large") {
    QuadratureSpec q;
    CHECK(std::abs(v_weight(1e-6, 12, MU_REF, q) - Complex{1.0, 0.0}) < 1e-3);
    CHECK(std::abs(v_tilde_weight(1e-6, 12, MU_REF, q) - pi_gamma_ratio(12, MU_REF)) < 1e-3);
    CHECK(std::abs(v_weight(1e7, 12, MU_REF, q)) < 1e-6);
    CHECK(std::abs(v_tilde_weight(1e7, 12, MU_REF, q)) < 1e-6);
}

TEST_CASE("weight argument guards") {
    QuadratureSpec q;
    CHECK_THROWS_AS((void)v_weight(0.0, 12, MU_REF, q), ValidationError);
    CHECK_THROWS_AS((void)v_weight(2e30, 12, MU_REF, q), ValidationError);
    CHECK_THROWS_AS((void)v_weight(1.0, 11, MU_REF, q), ValidationError);
    CHECK_THROWS_AS((void)v_weight(1.0, 10, MU_REF, q), ValidationError);
    // k = 14 is a valid weight index even though the central-value
    // assembly later restricts to multiples of four
    CHECK_NOTHROW((void)v_weight(1.0, 14, MU_REF, q));
}

TEST_CASE("delta coefficient source reduces the central value to the weight pair at one") {
    QuadratureSpec q;
    q.tolerance = 1e-6;
    CoefficientSource src;
    src.label = "delta";
    src.eval = [](long long m, long long n) {
        return (m == 1 && n == 1) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    };
    CentralValue r = afe_central_value(delta_form(), MU_REF, src, q);
    Complex want = v_weight(1.0, 12, MU_REF, q) + v_tilde_weight(1.0, 12, MU_REF, q);
    CHECK(std::abs(r.value - want) < 1e-8 * (1.0 + std::abs(want)));
    CHECK(r.x_cut >= 8);
    CHECK(r.tail_bound < q.tolerance);
    CHECK(r.cache_used);
}

TEST_CASE("central value is deterministic across repeated runs") {
    QuadratureSpec q;
    q.tolerance = 1e-6;
    CoefficientSource src;
    src.label = "delta";
    src.eval = [](long long m, long long n) {
        return (m == 1 && n == 1) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    };
    CentralValue a = afe_central_value(delta_form(), MU_REF, src, q);
    CentralValue b = afe_central_value(delta_form(), MU_REF, src, q);
    CHECK(a.value.real() == b.value.real());
    CHECK(a.value.imag() == b.value.imag());
    CHECK(a.x_cut == b.x_cut);
}

TEST_CASE("self-dual minimal series gives a real central value") {
    // parameter set {it, 0, -it} is closed under negation, so the
    // completed coefficient sum must be conjugation invariant
    QuadratureSpec q;
    q.tolerance = 1e-6;
    eis::MinimalEisenstein e{LanglandsParameter::from_imag(1.1, 0.0, -1.1)};
    CoefficientSource src;
    src.label = "minimal self-dual";
    src.eval = [e](long long m, long long n) { return eis::a_min(e, m, n); };
    CentralValue r = afe_central_value(delta_form(), e.param, src, q);
    CHECK(std::abs(r.value) > 1e-6);
    CHECK(std::abs(r.value.imag()) < 1e-8 * std::abs(r.value));

    // tightening the cutoff tolerance moves the value by less than the
    // reported tail envelopes
    QuadratureSpec q2 = q;
    q2.tolerance = 2e-7;
    CentralValue r2 = afe_central_value(delta_form(), e.param, src, q2);
    CHECK(std::abs(r.value - r2.value) < r.tail_bound + r2.tail_bound + 1e-8);
}

TEST_CASE("central value guards") {
    QuadratureSpec q;
    q.tolerance = 1e-6;
    CoefficientSource delta;
    delta.label = "delta";
    delta.eval = [](long long m, long long n) {
        return (m == 1 && n == 1) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    };

    SUBCASE("default tolerance needs more pairs than the default budget") {
        QuadratureSpec tight; // tolerance 1e-10
        CHECK_THROWS_WITH_AS((void)afe_central_value(delta_form(), MU_REF, delta, tight),
                             doctest::Contains("budget"), ValidationError);
    }
    SUBCASE("short coefficient table is a data failure") {
        gl2::HolomorphicForm small = gl2::build_eigenform(12, 1000);
        CHECK_THROWS_AS((void)afe_central_value(small, MU_REF, delta, q, (long long)1e12),
                        DataError);
    }
    SUBCASE("source must be normalized at the identity") {
        CoefficientSource bad;
        bad.label = "doubled";
        bad.eval = [](long long, long long) { return Complex{2.0, 0.0}; };
        CHECK_THROWS_AS((void)afe_central_value(delta_form(), MU_REF, bad, q), ValidationError);
    }
    SUBCASE("missing eval callback") {
        CoefficientSource none;
        none.label = "empty";
        CHECK_THROWS_AS((void)afe_central_value(delta_form(), MU_REF, none, q), ValidationError);
    }
    SUBCASE("weight index must be a multiple of four") {
        gl2::HolomorphicForm f;
        f.k = 18;
        f.n_max = 1;
        f.lambda = {0.0, 1.0};
        CHECK_THROWS_AS((void)afe_central_value(f, MU_REF, delta, q), ValidationError);
    }
    SUBCASE("budget must be positive") {
        CHECK_THROWS_AS((void)afe_central_value(delta_form(), MU_REF, delta, q, 0),
                        ValidationError);
    }
}
