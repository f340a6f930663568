#pragma once

#include <vector>

#include "rswb/types.hpp"

namespace rswb::kloosterman {

// Argument pack for the two GL(3) sums. m2 is ignored by the incomplete sum.
struct KloostermanInput {
    long long n1 = 1, n2 = 1, m1 = 1, m2 = 1;
    long long D1 = 1, D2 = 1;
};

// S(a,b;c) = sum over x mod c, (x,c)=1 of e((a x + b xbar)/c). c <= 1e5.
Complex classical_kloosterman(long long a, long long b, long long c);

// Incomplete sum: C1 mod D1 with (C1,D1)=1, C2 mod D2 with (C2,D2/D1)=1,
// phase e(n2 C1bar C2 / D1 + m1 C2bar / (D2/D1) + n1 C1 / D1).
// Requires D1 | D2 and D1*D2 <= 1e8. Terms are accumulated in ascending
// (C1, C2) order, so the result is reproducible bit for bit.
Complex incomplete_kloosterman(const KloostermanInput& in);

// Complete sum over B1,C1 mod D1, B2,C2 mod D2 with gcd(B_j,C_j,D_j)=1 and
// D1 C2 + B1 B2 + D2 C1 == 0 (mod D1 D2); phases use Y_j, Z_j solving
// Y_j B_j + Z_j C_j == 1 (mod D_j), from extended Euclid with canonical
// nonnegative representatives. The sum is evaluated twice, with Y,Z and with
// the shifted pair (Y + C, Z - B); disagreement beyond 1e-9 throws
// InternalError since the phase must not depend on the choice.
// Requires D1*D2 <= 1e6.
Complex complete_kloosterman(const KloostermanInput& in);

struct WeilRow {
    KloostermanInput in;
    bool complete = false; // which sum this row tested
    double abs_sum = 0;
    double bound = 0;
    bool pass = false;
};

struct WeilReport {
    std::vector<WeilRow> rows;
    bool all_pass = true;
    double worst_ratio = 0; // max |S| / bound over rows
};

// Evaluates both sums for all admissible D1,D2 <= max_d over a fixed small
// set of (n1,n2,m1,m2) and compares against the standard bounds
//   |S~| <= gcd((m1,D2/D1) D1^2, (n1,n2,D1) D2) * tau(D1 D2)
//   |S|  <= sqrt(D1 D2) * sqrt((D1,D2) (m1 n1,[D1,D2]) (m2 n2,[D1,D2])) * tau(D1 D2)
// with the epsilon factor realized as the divisor count tau(D1 D2) and
// constant 1 (calibrated: the worst observed ratio is exactly 1 at D = 1).
WeilReport weil_bound_report(int max_d);

namespace detail {
// complete sum with (Y,Z) -> (Y + k C, Z - k B); k = 0 is the canonical value.
Complex complete_kloosterman_shifted(const KloostermanInput& in, long long k);
} // namespace detail

} // namespace rswb::kloosterman
