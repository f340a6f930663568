#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "rswb/errors.hpp"

namespace rswb {

using Complex = std::complex<double>;

inline constexpr double PI = 3.141592653589793238462643383279502884;

// Contour/grid controls shared by every quadrature in the library.
// step: node spacing along a vertical line (and the unit all coarser grids
// are commensurate with); height: half-length of the truncated contour;
// tolerance: absolute target for tail estimates and stopping rules.
struct QuadratureSpec {
    double step = 0.05;
    double height = 40.0;
    double tolerance = 1e-10;
    enum class Scheme { trapezoid, double_exponential } scheme = Scheme::trapezoid;

    void validate() const {
        if (!(step > 0) || !(height > 0) || !(tolerance > 0))
            throw ValidationError("QuadratureSpec: step, height, tolerance must be positive");
        if (step > height)
            throw ValidationError("QuadratureSpec: step exceeds height");
    }
};

// Spectral parameter of a GL(3) representation: mu = (mu_1, mu_2, mu_3)
// with mu_1 + mu_2 + mu_3 = 0. The unitary principal series we integrate
// over has all mu_j purely imaginary.
struct LanglandsParameter {
    std::array<Complex, 3> mu{};

    LanglandsParameter() = default;
    explicit LanglandsParameter(const std::array<Complex, 3>& m) : mu(m) { check_sum(); }
    LanglandsParameter(Complex m1, Complex m2, Complex m3) : mu{m1, m2, m3} { check_sum(); }

    // Purely imaginary triple from its imaginary parts (t1 + t2 + t3 = 0).
    static LanglandsParameter from_imag(double t1, double t2, double t3) {
        return LanglandsParameter{Complex(0, t1), Complex(0, t2), Complex(0, t3)};
    }

    void check_sum() const {
        double scale = 0;
        for (const auto& m : mu) scale = std::max(scale, std::abs(m));
        Complex s = mu[0] + mu[1] + mu[2];
        if (std::abs(s) > 1e-12 * std::max(1.0, scale))
            throw ValidationError("LanglandsParameter: coordinates must sum to zero");
    }

    bool is_imaginary(double tol = 1e-12) const {
        for (const auto& m : mu)
            if (std::abs(m.real()) > tol) return false;
        return true;
    }

    LanglandsParameter negated() const { return LanglandsParameter{-mu[0], -mu[1], -mu[2]}; }

    // Conjugate-reversed triple: the parameter of the dual representation.
    LanglandsParameter dual() const {
        return LanglandsParameter{-std::conj(mu[0]), -std::conj(mu[1]), -std::conj(mu[2])};
    }
};

// Localized, Weyl-symmetric, nonnegative test function on the spectral plane:
//   h(mu) = P(mu)^2 * ( sum_{w in Weyl} psi((w(mu) - mu0)/M) )^2,
//   psi(mu) = exp(mu_1^2 + mu_2^2 + mu_3^2),
// with P a polynomial killing the poles of the spectral measure up to height
// (1 + 2*A0)/3. mu0 = i*T*d on a fixed direction d in the sum-zero plane,
// M = T^theta is the localization width.
struct TestFunctionSpec {
    LanglandsParameter mu0;
    double T = 10.0;
    double theta = 0.5;
    double M = 0.0; // derived: T^theta
    int A0 = 2;

    // Fixed generic direction, unit length, coordinates summing to zero.
    static std::array<double, 3> default_direction() { return {0.5441, 0.2551, -0.7992}; }

    static TestFunctionSpec centered(double T, double theta = 0.5, int A0 = 2) {
        TestFunctionSpec s;
        auto d = default_direction();
        s.mu0 = LanglandsParameter::from_imag(T * d[0], T * d[1], T * d[2]);
        s.T = T;
        s.theta = theta;
        s.M = std::pow(T, theta);
        s.A0 = A0;
        s.validate();
        return s;
    }

    void validate() const {
        if (!(T > 1)) throw ValidationError("TestFunctionSpec: need T > 1");
        if (!(M > 0) || M >= T) throw ValidationError("TestFunctionSpec: need 0 < M < T");
        if (A0 < 0 || A0 > 16) throw ValidationError("TestFunctionSpec: A0 out of range");
        for (const auto& m : mu0.mu) {
            double a = std::abs(m);
            if (a < T / 4.0 || a > 4.0 * T)
                throw ValidationError("TestFunctionSpec: |mu0_j| must lie in [T/4, 4T]");
        }
    }
};

} // namespace rswb
