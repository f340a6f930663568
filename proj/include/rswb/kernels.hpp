#pragma once

#include <utility>

#include "rswb/errors.hpp"
#include "rswb/spectral.hpp"
#include "rswb/types.hpp"

namespace rswb::kernels {

// The two sign components of the first-kernel transform:
//   pi^{-3s} / (12288 pi^{7/2}) * (prod_j R1_j(s) +- i prod_j R2_j(s))
// with R1_j = Gamma((s-mu_j)/2) / Gamma((1-s+mu_j)/2)
// and  R2_j = Gamma((1+s-mu_j)/2) / Gamma((2-s+mu_j)/2).
// PoleError when s sits on a numerator Gamma pole.
std::pair<Complex, Complex> g_tilde(Complex s, const LanglandsParameter& mu);

// K_{w4}(y; mu) = (1/2 pi i) int |y|^{-s} Gtilde^{sgn y}(s, mu) ds on Re s = sigma0.
// sigma0 must lie inside the pole-free strip (0, 1) for unitary mu; the value is
// sigma0-independent there (tested by contour shift). |y| in [1e-6, 1e12].
// Truncated at height max(q.height, max|Im mu_j| + 12) with a cos^2 taper on the
// last quarter of the window.
Complex kernel_w4(double y, const LanglandsParameter& mu, const QuadratureSpec& q,
                  double sigma0 = 0.25);

// double contour transform of the G-product alone (no trigonometric factor):
//   iint |4pi^2 y1|^{-s1} |4pi^2 y2|^{-s2} G(s1,s2,mu) ds1 ds2 / (2 pi i)^2
// on Re s1 = line1, Re s2 = line2
Complex g_transform(double y1, double y2, const LanglandsParameter& mu, const QuadratureSpec& q,
                    double line1 = 0.25, double line2 = 0.25);

// K_{wl}^{sgn y1, sgn y2}(y1, y2; mu): same double contour with the sign-selected
// trigonometric factor. Lines must satisfy line1 + line2 = 1/2 so the mixed-sign
// denominators sin(pi(s1+s2)) stay zero-free on the contour. PoleError when mu
// sits on a zero of the mu-dependent sine denominators (mixed and -- cases).
Complex kernel_wl(double y1, double y2, const LanglandsParameter& mu, const QuadratureSpec& q,
                  double line1 = 0.25, double line2 = 0.25);

// h-averaged transforms over the localized spectral window:
//   phi_w4(y)      = iint h(mu) K_{w4}(y; mu) d_spec
//   phi_w5(y)      = iint h(mu) K_{w4}(-y; -mu) d_spec
//   phi_wl(y1,y2)  = iint h(mu) K_{wl}^{sgn}(y1, y2; mu) d_spec
// Evaluated over an explicit grid (weights carry h * (-spec) * step^2); the grid
// spacing must be an integer multiple of q.step so the per-axis gamma tables
// (w4) and the tilted FFT convolution (wl) can share one contour lattice.
Complex phi_w4_on_grid(double y, const spectral::SpectralGrid& grid, const QuadratureSpec& q,
                       double sigma0 = 0.25, bool reflected = false);
Complex phi_wl_on_grid(double y1, double y2, const spectral::SpectralGrid& grid,
                       const QuadratureSpec& q, double line1 = 0.25, double line2 = 0.25);

Complex phi_w4(double y, const TestFunctionSpec& spec, const QuadratureSpec& q,
               double sigma0 = 0.25);
Complex phi_w5(double y, const TestFunctionSpec& spec, const QuadratureSpec& q,
               double sigma0 = 0.25);
Complex phi_wl(double y1, double y2, const TestFunctionSpec& spec, const QuadratureSpec& q,
               double line1 = 0.25, double line2 = 0.25);

} // namespace rswb::kernels
