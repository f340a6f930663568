#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "rswb/arith.hpp"

using namespace rswb;
using namespace rswb::arith;

TEST_CASE("factorize small and structured values") {
    CHECK(factorize(1).empty());
    auto f12 = factorize(12);
    REQUIRE(f12.size() == 2);
    CHECK(f12[0] == std::pair<long long, int>{2, 2});
    CHECK(f12[1] == std::pair<long long, int>{3, 1});
    auto fp = factorize(999983); // prime
    REQUIRE(fp.size() == 1);
    CHECK(fp[0] == std::pair<long long, int>{999983, 1});
    // cofactor beyond the trial bound must be certified, not assumed
    auto big = factorize(1000003LL * 999983LL);
    REQUIRE(big.size() == 2);
    CHECK(big[0].first == 999983);
    CHECK(big[1].first == 1000003);
    CHECK_THROWS_AS((void)factorize(0), ValidationError);
    CHECK_THROWS_AS((void)factorize(2000000000001LL), ValidationError);
}

TEST_CASE("mobius values") {
    int want[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0};
    for (int n = 1; n <= 12; ++n) CHECK(mobius(n) == want[n - 1]);
    // mobius is multiplicative on coprime arguments
    CHECK(mobius(2 * 3 * 5 * 7) == 1);
    CHECK(mobius(4 * 9) == 0);
}

TEST_CASE("divisors ascending and complete") {
    auto d = divisors(60);
    std::vector<long long> want{1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60};
    CHECK(d == want);
    CHECK(divisors(1) == std::vector<long long>{1});
    CHECK(divisors(97).size() == 2);
}

TEST_CASE("sum over divisors of mobius collapses to the unit") {
    for (long long n = 2; n <= 300; ++n) {
        long long s = 0;
        for (long long d : divisors(n)) s += mobius(d);
        CHECK(s == 0);
    }
}

TEST_CASE("mod_inverse") {
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(mod_inverse(1, 1) == 0);
    CHECK(mod_inverse(-3, 7) == mod_inverse(4, 7));
    for (long long a : {1LL, 2LL, 5LL, 11LL, 29LL}) {
        long long b = mod_inverse(a, 31);
        CHECK((a * b) % 31 == 1);
    }
    CHECK_THROWS_AS((void)mod_inverse(6, 9), ValidationError);
}

TEST_CASE("e_frac exactness and periodicity") {
    CHECK(std::abs(e_frac(0, 5) - Complex{1, 0}) < 1e-15);
    CHECK(std::abs(e_frac(1, 2) - Complex{-1, 0}) < 1e-15);
    CHECK(std::abs(e_frac(1, 4) - Complex{0, 1}) < 1e-15);
    // reduction happens in integers, so huge numerators stay exact
    CHECK(std::abs(e_frac(3000000000000007LL, 4) - e_frac(3, 4)) < 1e-15);
    CHECK(std::abs(e_frac(-1, 3) - std::conj(e_frac(1, 3))) < 1e-15);
    // additivity e(a/c) e(b/c) = e((a+b)/c)
    CHECK(std::abs(e_frac(5, 12) * e_frac(9, 12) - e_frac(14, 12)) < 1e-15);
}

TEST_CASE("residue normalization") {
    CHECK(Residue(-1, 7).value == 6);
    CHECK(Residue(15, 7).value == 1);
    CHECK(Residue(0, 1).value == 0);
    CHECK_THROWS_AS(Residue(3, 0), ValidationError);
}

TEST_CASE("gcd_ll") {
    CHECK(gcd_ll(12, 18) == 6);
    CHECK(gcd_ll(0, 5) == 5);
    CHECK(gcd_ll(-12, 18) == 6);
    CHECK(gcd_ll(1, 1) == 1);
}
