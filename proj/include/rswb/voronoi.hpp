#pragma once

#include "rswb/gl2.hpp"
#include "rswb/types.hpp"

namespace rswb::voronoi {

// Smooth test window on (0, infinity), effectively supported in
// [center - 3 width, center + 3 width], which must stay positive.
//   gaussian: exp(-(x-center)^2 / (2 sigma^2)), sigma = width / 2.5,
//             truncated at 3 width (tail below 1e-12 there);
//   compact:  (1 - u^2)^4 with u = (x - center) / (3 width), hard support.
struct TestWindow {
    enum class Shape { gaussian, compact };
    double center = 0;
    double width = 0;
    Shape shape = Shape::gaussian;

    void validate() const;
    double lo() const { return center - 3.0 * width; }
    double hi() const { return center + 3.0 * width; }
    double operator()(double x) const;
};

// Twisted coefficient sum  sum_m lambda_f(m) e(a m / c) F(m)  over the
// window's support. gcd(a, c) = 1 required; DataError when the support
// exceeds the coefficient table.
Complex voronoi_lhs(const gl2::HolomorphicForm& f, long long a, long long c,
                    const TestWindow& F);

struct DualSide {
    Complex value{0, 0};
    long long truncation_index = 0;  // last n whose transform was accumulated
    bool non_decay_warning = false;  // |G(n)| still above tolerance at n = 1e5
};

// Dual sum  (1/c) sum_n lambda_f(n) e(-abar n / c) G(n)  with
//   G(y) = 2 pi i^k  integral F(x) J_{k-1}(4 pi sqrt(x y) / c) dx,
// G by adaptive-bisection Simpson quadrature (per-panel share of
// q.tolerance), the n-sum truncated once |G(n)| * max|lambda| stays below
// q.tolerance (three consecutive n), truncation index reported.
DualSide voronoi_rhs(const gl2::HolomorphicForm& f, long long a, long long c,
                     const TestWindow& F, const QuadratureSpec& q);

// Max deviation, over a y-grid in [1/2, 3], of the derivative identity
//   d/dy [ (R sqrt y)^{s+1} J_{s+1}(R sqrt y) ] = (R^2/2) (R sqrt y)^s J_s(R sqrt y)
// at s = k - 1, left side by central differences with the given step.
// Preconditions: 2 <= k <= 60, samples >= 2.
double bessel_recurrence_check(int k, double R, int samples, double step = 1e-4);

} // namespace rswb::voronoi
