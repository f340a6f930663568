#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rswb/types.hpp"

namespace rswb::arith {

// A reduced residue class value mod modulus.
struct Residue {
    long long value = 0;
    long long modulus = 1;

    Residue() = default;
    Residue(long long v, long long m) : modulus(m) {
        if (m < 1) throw ValidationError("Residue: modulus must be >= 1");
        value = v % m;
        if (value < 0) value += m;
    }
};

// Canonical factorization, primes ascending. n <= 1e12.
// Trial division to 1e6; any remaining cofactor is certified prime with a
// deterministic Miller-Rabin check (its smallest factor exceeds 1e6, so a
// composite cofactor would exceed 1e12).
std::vector<std::pair<long long, int>> factorize(long long n);

int mobius(long long n);

// All positive divisors of n <= 1e12, ascending.
std::vector<long long> divisors(long long n);

// b with a*b == 1 (mod m), 0 <= b < m; m = 1 yields 0.
// Throws ValidationError when gcd(a, m) > 1.
long long mod_inverse(long long a, long long m);

// e(a/c) = exp(2 pi i a/c), with a reduced mod c exactly in integers first.
Complex e_frac(long long a, long long c);

long long gcd_ll(long long a, long long b);

} // namespace rswb::arith
