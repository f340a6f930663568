#pragma once

#include <functional>
#include <string>

#include "rswb/gl2.hpp"
#include "rswb/types.hpp"

namespace rswb::afe {

// Product of Gamma((k/2)+mu_j)/Gamma((k/2)-mu_j); modulus 1 for purely
// imaginary mu. This is the s=0 residue of the tilde weight and the
// reflection factor in the first-moment main term.
Complex pi_gamma_ratio(int k, const LanglandsParameter& mu);

// Smoothed weight V_k(y; mu): contour integral of
//   (8 pi^3 y)^{-s} prod_j Gamma(s + k/2 - mu_j)/Gamma(k/2 - mu_j) e^{s^2} / s
// over Re s = 3 when 8 pi^3 y >= 1; for smaller y the contour sits at
// Re s = -3 and the s = 0 residue (1) is added, so V -> 1 as y -> 0.
// Preconditions: k >= 12 even, 0 < y <= 1e30.
Complex v_weight(double y, int k, const LanglandsParameter& mu, const QuadratureSpec& q);

// Companion weight with the mu_j signs flipped in the numerator; its s = 0
// residue is pi_gamma_ratio(k, mu). Coincides with v_weight at mu = 0.
Complex v_tilde_weight(double y, int k, const LanglandsParameter& mu, const QuadratureSpec& q);

// Coefficient feed for the central-value double sum. eval(1,1) must be 1.
struct CoefficientSource {
    std::function<Complex(long long, long long)> eval;
    std::string label;
};

struct CentralValue {
    Complex value{0, 0};
    long long x_cut = 0;    // truncation bound on m1^2 m2
    double tail_bound = 0;  // envelope estimate for the dropped tail
    bool cache_used = true; // false when interpolation failed its spot check
};

// Central value L(1/2, f x phi) by the smoothed approximate functional
// equation: sum of lambda_f(m2) A(m2,m1) (m1^2 m2)^{-1/2} V(m1^2 m2) plus
// i^k times the mirror sum with A(m1,m2) and the tilde weight. Requires
// k = 0 mod 4 (so i^k = 1). X_cut is the smallest value on the geometric
// ladder 8 * 1.25^n with max(|V|,|V~|) < q.tolerance / (10 X); if the pair
// count at that cut exceeds `budget`, a ValidationError reports the cut.
// V values come from a log-grid cubic interpolation cache unless a sampled
// comparison against direct evaluation exceeds 1e-9.
CentralValue afe_central_value(const gl2::HolomorphicForm& f, const LanglandsParameter& mu,
                               const CoefficientSource& src, const QuadratureSpec& q,
                               long long budget = 2000000);

} // namespace rswb::afe
