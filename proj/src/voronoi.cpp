#include "rswb/voronoi.hpp"

#include <cmath>
#include <functional>

#include "rswb/arith.hpp"
#include "rswb/numerics.hpp"

namespace rswb::voronoi {

void TestWindow::validate() const {
    if (!(center > 0.0) || !(width > 0.0))
        throw ValidationError("TestWindow: center and width must be positive");
    if (!(lo() > 0.0))
        throw ValidationError("TestWindow: support [center - 3 width, center + 3 width] "
                              "must stay inside (0, infinity)");
}

double TestWindow::operator()(double x) const {
    if (x <= lo() || x >= hi()) return 0.0;
    if (shape == Shape::gaussian) {
        double sigma = width / 2.5;
        double u = (x - center) / sigma;
        return std::exp(-0.5 * u * u);
    }
    double u = (x - center) / (3.0 * width);
    double t = 1.0 - u * u;
    return t * t * t * t;
}

namespace {

void check_twist(long long a, long long c) {
    if (c < 1) throw ValidationError("voronoi: modulus c must be >= 1");
    if (arith::gcd_ll(a, c) != 1) throw ValidationError("voronoi: gcd(a, c) must be 1");
}

// adaptive Simpson bisection; tol is this panel's share of the budget
double adaptive_panel(const std::function<double(double)>& g, double a, double b, double fa,
                      double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = g(lm), frm = g(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth > 40) throw ConvergenceError("voronoi transform quadrature exceeded depth 40");
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_panel(g, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_panel(g, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

double adaptive_simpson(const std::function<double(double)>& g, double a, double b, double tol) {
    double fa = g(a), fm = g(0.5 * (a + b)), fb = g(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_panel(g, a, b, fa, fm, fb, whole, tol, 0);
}

} // namespace

Complex voronoi_lhs(const gl2::HolomorphicForm& f, long long a, long long c,
                    const TestWindow& F) {
    F.validate();
    check_twist(a, c);
    long long mlo = (long long)std::ceil(F.lo());
    long long mhi = (long long)std::floor(F.hi());
    if (mlo < 1) mlo = 1;
    if (mhi > f.n_max)
        throw DataError("voronoi_lhs: window reaches m = " + std::to_string(mhi) +
                        " beyond the coefficient table (n_max = " + std::to_string(f.n_max) +
                        ")");
    long long ar = arith::Residue(a, c).value; // avoids a*m overflow for large a
    Complex sum{0, 0};
    for (long long m = mlo; m <= mhi; ++m) {
        double Fm = F((double)m);
        if (Fm != 0.0) sum += f(m) * Fm * arith::e_frac(ar * m, c);
    }
    return sum;
}

DualSide voronoi_rhs(const gl2::HolomorphicForm& f, long long a, long long c,
                     const TestWindow& F, const QuadratureSpec& q) {
    F.validate();
    check_twist(a, c);
    q.validate();
    long long abar = arith::mod_inverse(a, c);
    double ik = (f.k % 4 == 0) ? 1.0 : -1.0; // i^k for even k
    int order = f.k - 1;

    double max_lambda = 0.0;
    for (long long n = 1; n <= f.n_max; ++n) max_lambda = std::max(max_lambda, std::abs(f(n)));
    if (max_lambda == 0.0) max_lambda = 1.0;

    auto transform = [&](double y) {
        double R = 4.0 * PI * std::sqrt(y) / (double)c;
        auto g = [&](double x) {
            return F(x) * numerics::bessel_j(order, R * std::sqrt(x));
        };
        return 2.0 * PI * ik * adaptive_simpson(g, F.lo(), F.hi(), q.tolerance);
    };

    const long long n_limit = 100000;
    DualSide out;
    Complex sum{0, 0};
    int quiet = 0;
    long long n = 0;
    while (n < n_limit) {
        ++n;
        double G = transform((double)n);
        if (n <= f.n_max) {
            sum += f(n) * G * arith::e_frac(-abar * n, c);
            out.truncation_index = n;
        } else if (std::abs(G) * max_lambda >= q.tolerance) {
            throw DataError("voronoi_rhs: dual sum still significant at n = " +
                            std::to_string(n) + " beyond the coefficient table (n_max = " +
                            std::to_string(f.n_max) + ")");
        }
        if (std::abs(G) * max_lambda < q.tolerance) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    if (quiet < 3) out.non_decay_warning = true;
    out.value = sum / (double)c;
    return out;
}

double bessel_recurrence_check(int k, double R, int samples, double step) {
    if (k < 2 || k > 60) throw ValidationError("bessel_recurrence_check: k must be in [2, 60]");
    if (samples < 2) throw ValidationError("bessel_recurrence_check: samples must be >= 2");
    if (!(R >= 0.0)) throw ValidationError("bessel_recurrence_check: R must be >= 0");
    if (!(step > 0.0 && step < 0.1))
        throw ValidationError("bessel_recurrence_check: step must be in (0, 0.1)");
    int s = k - 1;
    auto g = [&](double y) {
        double z = R * std::sqrt(y);
        return std::pow(z, s + 1) * numerics::bessel_j(s + 1, z);
    };
    double dev = 0.0;
    for (int i = 0; i < samples; ++i) {
        double y = 0.5 + 2.5 * (double)i / (double)(samples - 1);
        double lhs = (g(y + step) - g(y - step)) / (2.0 * step);
        double z = R * std::sqrt(y);
        double rhs = 0.5 * R * R * std::pow(z, s) * numerics::bessel_j(s, z);
        dev = std::max(dev, std::abs(lhs - rhs));
    }
    return dev;
}

} // namespace rswb::voronoi
