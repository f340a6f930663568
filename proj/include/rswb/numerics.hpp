#pragma once

#include <functional>

#include "rswb/types.hpp"

namespace rswb::numerics {

// Principal branch of log Gamma (continuous on C minus the cut (-inf,0]),
// fixed-coefficient Lanczos with reflection for Re z < 1/2.
// Throws PoleError within 1e-14 of a non-positive integer.
Complex log_gamma(Complex z);

// Gamma_R(s) = pi^{-s/2} Gamma(s/2).
Complex gamma_r(Complex s);

// J_order(x) for integer order in [0,200], x >= 0; absolute error <= 1e-12.
// Power series for small x, Hankel asymptotics for x >= max(20, 2*order)
// when they converge to 1e-13, otherwise a normalized backward (Miller)
// recurrence. See bessel notes in the implementation.
double bessel_j(int order, double x);

// Upper incomplete gamma Gamma(s,x), x > 0, complex s.
// Continued fraction for x >= |s|*0.35 + 1.2, else series via Gamma(s) - lower.
// Throws OverflowError if the result is not finite.
Complex incomplete_gamma_upper(Complex s, double x);

// Euler-Maclaurin zeta, relative error <= 1e-12 for |Im s| <= 100.
// Throws PoleError within 1e-14 of s = 1.
Complex riemann_zeta(Complex s);

// (1/2pi i) * integral of f over the truncated vertical line Re s = sigma,
// |Im s| <= spec.height, node spacing spec.step. Nodes are summed in
// ascending |Im s| with compensated accumulation, so the result is
// deterministic for a fixed spec. The tail is estimated from the integrand
// magnitude at the truncation ends; if the estimate exceeds spec.tolerance
// a ConvergenceError is thrown.
// scheme double_exponential substitutes v = sinh(2 sinh(w)) to concentrate
// nodes near the real axis for peaked integrands.
Complex vertical_line_integral(const std::function<Complex(Complex)>& integrand,
                               double sigma, const QuadratureSpec& spec);

// Oriented double integral of F over the unitary spectral plane
// mu = (i t1, i t2, -i(t1+t2)), |t1|,|t2| <= spec.height, spacing spec.step.
// Orientation: d(mu_1) d(mu_2) := -dt1 dt2, i.e. the returned value is
//   (-1) * sum F(mu(t1,t2)) * step^2.
// This sign convention makes the spectral-measure density h * measure
// nonnegative (see spectral module). Deterministic: nodes are accumulated
// in ascending t1^2 + t2^2 (lexicographic tie-break) with compensation.
Complex spectral_plane_integral(const std::function<Complex(const LanglandsParameter&)>& integrand,
                                const QuadratureSpec& spec);

namespace detail {
// log(sin(pi z)) continuous off the real axis, safe for large |Im z|.
Complex log_sin_pi(Complex z);
// Smoothly tapered weight: 1 on the middle 75% of [-height, height],
// cos^2 roll-off on the outer 25% of each side.
double cos2_taper(double v, double height);
} // namespace detail

} // namespace rswb::numerics
