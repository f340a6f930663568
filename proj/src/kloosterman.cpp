#include "rswb/kloosterman.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "rswb/arith.hpp"

namespace rswb::kloosterman {

using arith::e_frac;
using arith::gcd_ll;
using arith::mod_inverse;

namespace {

using i128 = __int128;

long long mod_ll(i128 x, long long m) {
    long long r = (long long)(x % m);
    return r < 0 ? r + m : r;
}

// Y, Z with Y*B + Z*C == 1 (mod D), canonical nonnegative representatives.
// Requires gcd(B, C, D) = 1. For D = 1 returns (0, 0).
void solve_yz(long long B, long long C, long long D, long long* Y, long long* Z) {
    *Y = 0;
    *Z = 0;
    if (D == 1) return;
    // extended Euclid on (B, C): u*B + v*C = g = gcd(B,C); then scale by
    // the inverse of g mod D (gcd(g, D) = 1 by admissibility).
    long long old_r = B, r = C;
    long long old_u = 1, u = 0;
    long long old_v = 0, v = 1;
    while (r != 0) {
        long long q = old_r / r;
        long long t;
        t = old_r - q * r; old_r = r; r = t;
        t = old_u - q * u; old_u = u; u = t;
        t = old_v - q * v; old_v = v; v = t;
    }
    long long g = old_r >= 0 ? old_r : -old_r;
    if (old_r < 0) { old_u = -old_u; old_v = -old_v; }
    if (g == 0) return; // B = C = 0 only admissible when D = 1
    long long ginv = mod_inverse(g % D, D);
    *Y = mod_ll((i128)old_u * ginv, D);
    *Z = mod_ll((i128)old_v * ginv, D);
}

} // namespace

Complex classical_kloosterman(long long a, long long b, long long c) {
    if (c < 1) throw ValidationError("classical_kloosterman: need c >= 1");
    if (c > 100000) throw ValidationError("classical_kloosterman: c exceeds 1e5 budget");
    if (c == 1) return {1, 0};
    Complex s{0, 0};
    for (long long x = 1; x < c; ++x) {
        if (gcd_ll(x, c) != 1) continue;
        long long xb = mod_inverse(x, c);
        s += e_frac(mod_ll((i128)a * x + (i128)b * xb, c), c);
    }
    return s;
}

Complex incomplete_kloosterman(const KloostermanInput& in) {
    if (in.D1 < 1 || in.D2 < 1) throw ValidationError("incomplete_kloosterman: moduli must be >= 1");
    if (in.D2 % in.D1 != 0) throw ValidationError("incomplete_kloosterman: D1 must divide D2");
    if (in.D1 * in.D2 > 100000000LL)
        throw ValidationError("incomplete_kloosterman: D1*D2 exceeds 1e8 budget");
    const long long D1 = in.D1, D2 = in.D2, q = D2 / D1;
    Complex s{0, 0};
    for (long long C1 = 0; C1 < D1; ++C1) {
        if (gcd_ll(C1, D1) != 1 && D1 > 1) continue;
        long long C1bar = D1 == 1 ? 0 : mod_inverse(C1, D1);
        for (long long C2 = 0; C2 < D2; ++C2) {
            if (q > 1 && gcd_ll(C2 % q, q) != 1) continue;
            long long C2bar = q == 1 ? 0 : mod_inverse(C2 % q, q);
            Complex term = e_frac(mod_ll((i128)in.n2 * C1bar % D1 * C2, D1), D1) *
                           e_frac(mod_ll((i128)in.m1 * C2bar, q), q) *
                           e_frac(mod_ll((i128)in.n1 * C1, D1), D1);
            s += term;
        }
    }
    return s;
}

namespace detail {

Complex complete_kloosterman_shifted(const KloostermanInput& in, long long k) {
    const long long D1 = in.D1, D2 = in.D2;
    Complex s{0, 0};
    for (long long B1 = 0; B1 < D1; ++B1) {
        for (long long C1 = 0; C1 < D1; ++C1) {
            if (gcd_ll(gcd_ll(B1, C1), D1) != 1) continue;
            long long Y1, Z1;
            solve_yz(B1, C1, D1, &Y1, &Z1);
            Y1 = mod_ll((i128)Y1 + (i128)k * C1, D1);
            Z1 = mod_ll((i128)Z1 - (i128)k * B1, D1);
            for (long long B2 = 0; B2 < D2; ++B2) {
                i128 K = (i128)B1 * B2 + (i128)D2 * C1;
                if (K % D1 != 0) continue;
                long long C2 = mod_ll(-(K / D1), D2);
                if (gcd_ll(gcd_ll(B2, C2), D2) != 1) continue;
                // congruence holds by construction; recheck cheaply
                if (mod_ll((i128)D1 * C2 + K, D1 * D2) != 0)
                    throw InternalError("complete_kloosterman: congruence recheck failed");
                long long Y2, Z2;
                solve_yz(B2, C2, D2, &Y2, &Z2);
                Y2 = mod_ll((i128)Y2 + (i128)k * C2, D2);
                Z2 = mod_ll((i128)Z2 - (i128)k * B2, D2);
                long long ph1 = mod_ll((i128)in.n1 * B1 + (i128)in.m1 * (((i128)Y1 * D2 - (i128)Z1 * B2) % D1), D1);
                long long ph2 = mod_ll((i128)in.m2 * B2 + (i128)in.n2 * (((i128)Y2 * D1 - (i128)Z2 * B1) % D2), D2);
                s += e_frac(ph1, D1) * e_frac(ph2, D2);
            }
        }
    }
    return s;
}

} // namespace detail

Complex complete_kloosterman(const KloostermanInput& in) {
    if (in.D1 < 1 || in.D2 < 1) throw ValidationError("complete_kloosterman: moduli must be >= 1");
    if (in.D1 * in.D2 > 1000000LL)
        throw ValidationError("complete_kloosterman: D1*D2 exceeds 1e6 budget");
    Complex a = detail::complete_kloosterman_shifted(in, 0);
    Complex b = detail::complete_kloosterman_shifted(in, 1);
    if (std::abs(a - b) > 1e-9)
        throw InternalError("complete_kloosterman: (Y,Z)-choice dependence detected, |diff| = " +
                            std::to_string(std::abs(a - b)));
    return a;
}

namespace {

double tau_of(long long n) {
    double c = 1;
    for (const auto& [p, e] : arith::factorize(n)) c *= (e + 1.0);
    return c;
}

} // namespace

WeilReport weil_bound_report(int max_d) {
    if (max_d < 1 || max_d > 30) throw ValidationError("weil_bound_report: max_d must be in [1,30]");
    static const long long ARGS[4][4] = {{1, 1, 1, 1}, {1, 2, 3, 1}, {2, 1, 1, 3}, {3, 3, 2, 2}};
    WeilReport rep;
    for (long long D1 = 1; D1 <= max_d; ++D1) {
        for (long long D2 = 1; D2 <= max_d; ++D2) {
            double tau = tau_of(D1 * D2);
            long long g = gcd_ll(D1, D2);
            long long lcm = D1 / g * D2;
            for (const auto& A : ARGS) {
                KloostermanInput in{A[0], A[1], A[2], A[3], D1, D2};
                if (D2 % D1 == 0) {
                    WeilRow row;
                    row.in = in;
                    row.complete = false;
                    row.abs_sum = std::abs(incomplete_kloosterman(in));
                    row.bound = (double)gcd_ll(gcd_ll(in.m1, D2 / D1) * D1 * D1,
                                               gcd_ll(gcd_ll(in.n1, in.n2), D1) * D2) * tau;
                    row.pass = row.abs_sum <= row.bound + 1e-9;
                    rep.worst_ratio = std::max(rep.worst_ratio, row.abs_sum / row.bound);
                    rep.all_pass = rep.all_pass && row.pass;
                    rep.rows.push_back(row);
                }
                WeilRow row;
                row.in = in;
                row.complete = true;
                row.abs_sum = std::abs(complete_kloosterman(in));
                row.bound = std::sqrt((double)(D1 * D2)) *
                            std::sqrt((double)(g * gcd_ll(in.m1 * in.n1, lcm) * gcd_ll(in.m2 * in.n2, lcm))) *
                            tau;
                row.pass = row.abs_sum <= row.bound + 1e-9;
                rep.worst_ratio = std::max(rep.worst_ratio, row.abs_sum / row.bound);
                rep.all_pass = rep.all_pass && row.pass;
                rep.rows.push_back(row);
            }
        }
    }
    return rep;
}

} // namespace rswb::kloosterman
