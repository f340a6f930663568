#include "rswb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rswb::spectral {

namespace {

constexpr std::array<std::array<int, 3>, 6> PERMS = {{
    {0, 1, 2}, // identity
    {1, 0, 2}, // (12)
    {2, 1, 0}, // (13)
    {0, 2, 1}, // (23)
    {1, 2, 0}, // (123)
    {2, 0, 1}, // (132)
}};

// tan(w) without overflow for large |Im w|
Complex stable_tan(Complex w) {
    double a = w.real(), b = w.imag();
    if (b > 20.0) {
        double e = 2.0 * std::exp(-2.0 * b);
        return {std::sin(2.0 * a) * e, 1.0 - std::cos(2.0 * a) * e};
    }
    if (b < -20.0) {
        double e = 2.0 * std::exp(2.0 * b);
        return {std::sin(2.0 * a) * e, -1.0 + std::cos(2.0 * a) * e};
    }
    double den = std::cos(2.0 * a) + std::cosh(2.0 * b);
    return {std::sin(2.0 * a) / den, std::sinh(2.0 * b) / den};
}

void axis_nu(double t1, double t2, double x[3]) {
    double t3 = -t1 - t2;
    x[0] = (t1 - t2) / 3.0;
    x[1] = (t2 - t3) / 3.0;
    x[2] = -x[0] - x[1];
}

} // namespace

std::array<Complex, 3> to_spectral_coords(const LanglandsParameter& mu) {
    Complex n1 = (mu.mu[0] - mu.mu[1]) / 3.0;
    Complex n2 = (mu.mu[1] - mu.mu[2]) / 3.0;
    return {n1, n2, -n1 - n2};
}

LanglandsParameter from_spectral_coords(const std::array<Complex, 3>& nu) {
    LanglandsParameter mu;
    mu.mu[0] = 2.0 * nu[0] + nu[1];
    mu.mu[1] = nu[1] - nu[0];
    mu.mu[2] = -nu[0] - 2.0 * nu[1];
    return mu;
}

std::array<LanglandsParameter, 6> weyl_orbit(const LanglandsParameter& mu) {
    std::array<LanglandsParameter, 6> out;
    for (size_t w = 0; w < 6; ++w)
        for (int j = 0; j < 3; ++j) out[w].mu[(size_t)j] = mu.mu[(size_t)PERMS[w][(size_t)j]];
    return out;
}

Complex test_function(const LanglandsParameter& mu, const TestFunctionSpec& spec) {
    spec.validate();
    auto nu = to_spectral_coords(mu);
    auto nu0 = to_spectral_coords(spec.mu0);
    double n0sq[3];
    for (int j = 0; j < 3; ++j) {
        n0sq[j] = std::norm(nu0[(size_t)j]);
        if (n0sq[j] < 1e-18)
            throw ValidationError("test_function: center parameter is non-generic (nu0_j = 0)");
    }
    Complex P{1.0, 0.0};
    for (int n = 0; n <= spec.A0; ++n) {
        double c = (1.0 + 2.0 * n) / 3.0;
        for (int j = 0; j < 3; ++j)
            P *= (nu[(size_t)j] - c) * (nu[(size_t)j] + c) / n0sq[j];
    }
    Complex S{0.0, 0.0};
    for (const auto& w : weyl_orbit(mu)) {
        Complex e{0.0, 0.0};
        for (int j = 0; j < 3; ++j) {
            Complex z = (w.mu[(size_t)j] - spec.mu0.mu[(size_t)j]) / spec.M;
            e += z * z;
        }
        S += std::exp(e);
    }
    return P * P * S * S;
}

double test_function_axis(double t1, double t2, const TestFunctionSpec& spec) {
    double x[3], x0[3];
    axis_nu(t1, t2, x);
    double t0[3] = {spec.mu0.mu[0].imag(), spec.mu0.mu[1].imag(), spec.mu0.mu[2].imag()};
    axis_nu(t0[0], t0[1], x0);
    double P = 1.0;
    for (int n = 0; n <= spec.A0; ++n) {
        double c = (1.0 + 2.0 * n) / 3.0;
        for (int j = 0; j < 3; ++j) P *= -(x[j] * x[j] + c * c) / (x0[j] * x0[j]);
    }
    double t[3] = {t1, t2, -t1 - t2};
    double S = 0.0;
    for (const auto& perm : PERMS) {
        double q = 0.0;
        for (int j = 0; j < 3; ++j) {
            double d = t[perm[(size_t)j]] - t0[j];
            q += d * d;
        }
        S += std::exp(-q / (spec.M * spec.M));
    }
    return (P * P) * (S * S);
}

Complex spec_measure(const LanglandsParameter& mu) {
    auto nu = to_spectral_coords(mu);
    Complex prod{1.0, 0.0};
    for (int j = 0; j < 3; ++j) {
        Complex th = 3.0 * nu[(size_t)j];
        double nearest_odd = 2.0 * std::round((th.real() - 1.0) / 2.0) + 1.0;
        if (std::abs(th - Complex(nearest_odd, 0.0)) <= 1e-10)
            throw PoleError("spec_measure: 3 nu_j at a tangent pole");
        prod *= th * stable_tan(0.5 * PI * th);
    }
    return prod;
}

double neg_spec_measure_axis(double t1, double t2) {
    double x[3];
    axis_nu(t1, t2, x);
    double prod = 1.0;
    for (int j = 0; j < 3; ++j) prod *= 3.0 * x[j] * std::tanh(1.5 * PI * x[j]);
    return prod;
}

double SpectralGrid::total_weight() const {
    double s = 0.0, c = 0.0;
    for (const auto& n : nodes) { // Kahan: many tiny tail weights
        double y = n.weight - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

namespace {

SpectralGrid build_grid(const TestFunctionSpec& spec, double t_step,
                        const std::vector<std::array<double, 2>>& centers, double radius) {
    SpectralGrid g;
    g.t_step = t_step;
    std::set<std::pair<long long, long long>> idx;
    for (const auto& c : centers) {
        long long i1lo = (long long)std::ceil((c[0] - radius) / t_step);
        long long i1hi = (long long)std::floor((c[0] + radius) / t_step);
        long long i2lo = (long long)std::ceil((c[1] - radius) / t_step);
        long long i2hi = (long long)std::floor((c[1] + radius) / t_step);
        for (long long i1 = i1lo; i1 <= i1hi; ++i1)
            for (long long i2 = i2lo; i2 <= i2hi; ++i2) idx.insert({i1, i2});
    }
    double w2 = t_step * t_step;
    double wmax = 0.0;
    for (const auto& [i1, i2] : idx) {
        double t1 = t_step * (double)i1, t2 = t_step * (double)i2;
        double density = test_function_axis(t1, t2, spec) * neg_spec_measure_axis(t1, t2);
        if (density < -1e-12)
            throw InternalError("spectral grid: negative h*(-spec) density");
        g.nodes.push_back({t1, t2, density * w2});
        wmax = std::max(wmax, density * w2);
    }
    std::vector<SpectralNode> kept;
    kept.reserve(g.nodes.size());
    for (const auto& n : g.nodes)
        if (n.weight >= 1e-18 * wmax) kept.push_back(n);
    g.nodes = std::move(kept);
    return g;
}

std::vector<std::array<double, 2>> weyl_centers(const TestFunctionSpec& spec) {
    double t0[3] = {spec.mu0.mu[0].imag(), spec.mu0.mu[1].imag(), spec.mu0.mu[2].imag()};
    std::vector<std::array<double, 2>> centers;
    for (const auto& perm : PERMS) centers.push_back({t0[perm[0]], t0[perm[1]]});
    return centers;
}

} // namespace

SpectralGrid build_moment_grid(const TestFunctionSpec& spec, const QuadratureSpec& q) {
    spec.validate();
    q.validate();
    // multiplier frozen against the 0.05 reference step: spacing ~ M/8, refines with q.step
    int mult = std::max(1, (int)std::lround(spec.M / 0.4));
    double t_step = q.step * mult;
    return build_grid(spec, t_step, weyl_centers(spec), 12.0 * spec.M);
}

SpectralGrid build_kernel_grid(const TestFunctionSpec& spec, const QuadratureSpec& q) {
    spec.validate();
    q.validate();
    return build_grid(spec, 5.0 * q.step, weyl_centers(spec), 12.0 * spec.M);
}

SpectralGrid build_box_grid(const TestFunctionSpec& spec, double c1, double c2, double radius,
                            double t_step) {
    spec.validate();
    if (t_step <= 0 || radius <= 0) throw ValidationError("build_box_grid: bad geometry");
    return build_grid(spec, t_step, {{c1, c2}}, radius);
}

double h_spectral_integral(const TestFunctionSpec& spec, const QuadratureSpec& q) {
    return build_moment_grid(spec, q).total_weight();
}

} // namespace rswb::spectral
