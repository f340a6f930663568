#pragma once

#include <array>
#include <vector>

#include "rswb/errors.hpp"
#include "rswb/types.hpp"

namespace rswb::spectral {

// nu1 = (mu1 - mu2)/3, nu2 = (mu2 - mu3)/3, nu3 = -nu1 - nu2
std::array<Complex, 3> to_spectral_coords(const LanglandsParameter& mu);

// inverse map; round-trips with to_spectral_coords to 1e-14
LanglandsParameter from_spectral_coords(const std::array<Complex, 3>& nu);

// the six coordinate permutations, canonical order:
// identity, the three transpositions (12),(13),(23), then the 3-cycles (123),(132)
std::array<LanglandsParameter, 6> weyl_orbit(const LanglandsParameter& mu);

// h(mu) = P(mu)^2 (sum_w psi((w(mu)-mu0)/M))^2 with psi(z) = exp(z1^2+z2^2+z3^2)
// and P(mu) = prod_{0<=n<=A0} prod_j (nu_j - c_n)(nu_j + c_n)/|nu0_j|^2, c_n = (1+2n)/3.
// Real and >= 0 on Re mu = 0. The c_n zeros realize the admissibility vanishing.
Complex test_function(const LanglandsParameter& mu, const TestFunctionSpec& spec);

// fast path on the unitary axis: mu = i(t1, t2, -t1-t2)
double test_function_axis(double t1, double t2, const TestFunctionSpec& spec);

// spec(mu) = prod_j 3 nu_j tan(3 pi nu_j / 2); <= 0 on the unitary axis.
// Throws PoleError when some 3 nu_j is within 1e-10 of an odd integer.
Complex spec_measure(const LanglandsParameter& mu);

// -spec on the axis: prod_j 3 x_j tanh(3 pi x_j / 2) >= 0, x = Im nu
double neg_spec_measure_axis(double t1, double t2);

// Localized quadrature lattice over the spectral plane. Each node carries
// weight = h * (-spec) * t_step^2, so sums over nodes realize
// iint h F d_spec under the sign convention of numerics::spectral_plane_integral.
// Nodes sit at integer multiples of t_step, are deduplicated across the six
// Weyl windows |t_j - center_j| <= radius, sorted lexicographically, and pruned
// below 1e-18 of the peak weight.
struct SpectralNode {
    double t1, t2;
    double weight;
};

struct SpectralGrid {
    double t_step = 0;
    std::vector<SpectralNode> nodes;
    double total_weight() const;
};

// moment-scale lattice: spacing tied to the window width M (multiplier fixed
// against the 0.05 reference step so halving q.step halves the spacing)
SpectralGrid build_moment_grid(const TestFunctionSpec& spec, const QuadratureSpec& q);

// kernel-scale lattice: spacing 5 * q.step (kernel transforms need finer t resolution)
SpectralGrid build_kernel_grid(const TestFunctionSpec& spec, const QuadratureSpec& q);

// single explicit window, for degenerate-window experiments
SpectralGrid build_box_grid(const TestFunctionSpec& spec, double c1, double c2, double radius,
                            double t_step);

// iint h d_spec over the localized window; real positive for admissible specs
double h_spectral_integral(const TestFunctionSpec& spec, const QuadratureSpec& q);

} // namespace rswb::spectral
