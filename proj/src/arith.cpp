#include "rswb/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rswb::arith {

long long gcd_ll(long long a, long long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

namespace {

using u128 = unsigned __int128;

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) { return (u128)a * b % m; }

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // deterministic witness set for n < 3.3e24
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

} // namespace

std::vector<std::pair<long long, int>> factorize(long long n) {
    if (n < 1) throw ValidationError("factorize: need n >= 1");
    if (n > 1000000000000LL) throw ValidationError("factorize: n exceeds 1e12");
    std::vector<std::pair<long long, int>> out;
    auto strip = [&](long long p) {
        if (n % p) return;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (long long p = 5; p <= 1000000 && p * p <= n; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1) {
        if (!miller_rabin((uint64_t)n))
            throw InternalError("factorize: cofactor " + std::to_string(n) + " not prime");
        out.emplace_back(n, 1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int mobius(long long n) {
    if (n < 1) throw ValidationError("mobius: need n >= 1");
    auto f = factorize(n);
    for (const auto& [p, e] : f)
        if (e > 1) return 0;
    return (f.size() % 2 == 0) ? 1 : -1;
}

std::vector<long long> divisors(long long n) {
    auto f = factorize(n);
    std::vector<long long> out{1};
    for (const auto& [p, e] : f) {
        size_t base = out.size();
        long long pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

long long mod_inverse(long long a, long long m) {
    if (m < 1) throw ValidationError("mod_inverse: modulus must be >= 1");
    if (m == 1) return 0;
    long long r0 = m, r1 = ((a % m) + m) % m;
    long long t0 = 0, t1 = 1;
    while (r1) {
        long long q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        t0 -= q * t1;
        std::swap(t0, t1);
    }
    if (r0 != 1)
        throw ValidationError("mod_inverse: gcd(" + std::to_string(a) + "," + std::to_string(m) +
                              ") = " + std::to_string(r0) + " is not 1");
    t0 %= m;
    if (t0 < 0) t0 += m;
    return t0;
}

Complex e_frac(long long a, long long c) {
    if (c < 1) throw ValidationError("e_frac: need c >= 1");
    long long r = a % c;
    if (r < 0) r += c;
    // exact small-angle cases keep the algebraic checks exact
    if (r == 0) return {1, 0};
    if (2 * r == c) return {-1, 0};
    if (4 * r == c) return {0, 1};
    if (4 * r == 3 * c) return {0, -1};
    double theta = 2.0 * PI * ((double)r / (double)c);
    return {std::cos(theta), std::sin(theta)};
}

} // namespace rswb::arith
