#include "rswb/eisenstein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rswb/arith.hpp"
#include "rswb/numerics.hpp"
#include "rswb/spectral.hpp"

namespace rswb::eis {

namespace {

Complex cpow(long long d, Complex e) { // d^e for d >= 1
    if (d == 1) return {1.0, 0.0};
    return std::exp(e * std::log((double)d));
}

bool imaginary_axis(const LanglandsParameter& mu) {
    for (const auto& m : mu.mu)
        if (std::abs(m.real()) > 1e-12 * (1.0 + std::abs(m.imag()))) return false;
    return true;
}

void require_budget(long long m, long long n) {
    if (m < 1 || n < 1) throw ValidationError("coefficient indices must be >= 1");
    if (m > 1000000 / n) throw ValidationError("coefficient index budget m*n <= 1e6 exceeded");
}

Complex a_min_1n(const MinimalEisenstein& E, long long n) {
    Complex acc{0.0, 0.0};
    for (long long d1 : arith::divisors(n))
        for (long long d2 : arith::divisors(n / d1)) {
            long long d3 = n / d1 / d2;
            acc += cpow(d1, -E.param.mu[0]) * cpow(d2, -E.param.mu[1]) * cpow(d3, -E.param.mu[2]);
        }
    return acc;
}

Complex a_max_1n(const MaximalEisenstein& E, long long n) {
    Complex acc{0.0, 0.0};
    for (long long d1 : arith::divisors(n))
        acc += lambda_g_extended(E.g, d1) * cpow(d1, -E.u) * cpow(n / d1, 2.0 * E.u);
    return acc;
}

// general (m,n) from the (1,n) column, its conjugate row, and the Moebius relation
template <typename A1>
Complex bilinear(long long m, long long n, A1&& a1, bool axis) {
    require_budget(m, n);
    if (m == 1) return a1(n);
    if (!axis)
        throw ValidationError(
            "coefficient conjugation A(m,1) = conj A(1,m) is only defined on the unitary axis");
    Complex acc{0.0, 0.0};
    for (long long d : arith::divisors(std::gcd(m, n))) {
        int mu = arith::mobius(d);
        if (mu == 0) continue;
        acc += (double)mu * std::conj(a1(m / d)) * a1(n / d);
    }
    return acc;
}

struct Satake {
    Complex s[3];
    Complex e1() const { return s[0] + s[1] + s[2]; }
    Complex e2() const { return s[0] * s[1] + s[0] * s[2] + s[1] * s[2]; }
};

Complex schur_hook(const Satake& sk, int a, int b) {
    if (a < 0 || b < 0) throw ValidationError("prime-power exponents must be >= 0");
    Complex e1 = sk.e1(), e2 = sk.e2();
    // h_k via h_k = e1 h_{k-1} - e2 h_{k-2} + h_{k-3} (e3 = 1 for unimodular Satake)
    std::vector<Complex> h((size_t)(a + b + 2), Complex{0.0, 0.0});
    h[0] = 1.0;
    for (int k = 1; k <= a + b + 1; ++k) {
        Complex v = e1 * h[(size_t)(k - 1)];
        if (k >= 2) v -= e2 * h[(size_t)(k - 2)];
        if (k >= 3) v += h[(size_t)(k - 3)];
        h[(size_t)k] = v;
    }
    // Jacobi-Trudi for the partition (a+b, a, 0); the second row carries the
    // FIRST coefficient index, matching A(m,1) = conj A(1,m) on the axis.
    Complex lower = (a >= 1) ? h[(size_t)(a + b + 1)] * h[(size_t)(a - 1)] : Complex{0.0, 0.0};
    return h[(size_t)(a + b)] * h[(size_t)a] - lower;
}

} // namespace

double lambda_g_extended(const gl2::MaassFormRecord& g, long long n) {
    if (n < 1) throw ValidationError("lambda_g_extended: n must be >= 1");
    double out = 1.0;
    for (const auto& [p, e] : arith::factorize(n)) {
        double lp = g.lambda_p(p);
        double prev = 1.0, cur = lp; // lambda(p^0), lambda(p^1)
        for (int j = 2; j <= e; ++j) {
            double nxt = lp * cur - prev;
            prev = cur;
            cur = nxt;
        }
        out *= (e == 0) ? 1.0 : cur;
    }
    return out;
}

Complex maass_l_value(const gl2::MaassFormRecord& g, Complex s, long long pmax) {
    Complex logprod{0.0, 0.0};
    for (long long p = 2; p <= pmax; ++p) {
        bool prime = true;
        for (long long d = 2; d * d <= p; ++d)
            if (p % d == 0) { prime = false; break; }
        if (!prime) continue;
        Complex x = cpow(p, -s);
        logprod -= std::log(1.0 - g.lambda_p(p) * x + x * x);
    }
    return std::exp(logprod);
}

Complex a_min(const MinimalEisenstein& E, long long m, long long n) {
    return bilinear(m, n, [&](long long v) { return a_min_1n(E, v); },
                    imaginary_axis(E.param));
}

Complex a_max(const MaximalEisenstein& E, long long m, long long n) {
    return bilinear(m, n, [&](long long v) { return a_max_1n(E, v); },
                    std::abs(E.u.real()) <= 1e-12 * (1.0 + std::abs(E.u.imag())));
}

Complex a_min_schur(const MinimalEisenstein& E, long long p, int a, int b) {
    Satake sk;
    for (int j = 0; j < 3; ++j) sk.s[j] = cpow(p, -E.param.mu[(size_t)j]);
    return schur_hook(sk, a, b);
}

Complex a_max_schur(const MaximalEisenstein& E, long long p, int a, int b) {
    double lg = E.g.lambda_p(p);
    Complex disc = std::sqrt(Complex(0.25 * lg * lg - 1.0, 0.0));
    Satake sk;
    sk.s[0] = (0.5 * lg + disc) * cpow(p, -E.u);
    sk.s[1] = (0.5 * lg - disc) * cpow(p, -E.u);
    sk.s[2] = cpow(p, 2.0 * E.u);
    return schur_hook(sk, a, b);
}

double min_normalizer(const MinimalEisenstein& E) {
    auto nu = spectral::to_spectral_coords(E.param);
    double prod = 1.0 / 16.0;
    for (const auto& n : nu) {
        if (std::abs(3.0 * n) <= 1e-8)
            throw PoleError("min_normalizer: zeta argument at the pole (nu_j = 0)");
        prod *= std::norm(numerics::riemann_zeta(1.0 + 3.0 * n));
    }
    return prod;
}

double max_normalizer(const MaximalEisenstein& E) {
    long long pmax = 0;
    for (const auto& [p, v] : E.g.lambda) pmax = std::max(pmax, p);
    if (pmax < 2) throw DataError("max_normalizer: record has no eigenvalue data");
    return 8.0 * E.g.ad2_value * std::norm(maass_l_value(E.g, 1.0 + 3.0 * E.u, pmax));
}

double factorization_check_min(const MinimalEisenstein& E, long long N) {
    if (N < 1 || N > 10000) throw ValidationError("factorization_check_min: N must be in [1, 1e4]");
    std::vector<Complex> u1((size_t)N + 1), c12((size_t)N + 1, Complex{0, 0}),
        c((size_t)N + 1, Complex{0, 0});
    for (long long n = 1; n <= N; ++n) u1[(size_t)n] = cpow(n, -E.param.mu[0]);
    for (long long i = 1; i <= N; ++i)
        for (long long j = 1; i * j <= N; ++j)
            c12[(size_t)(i * j)] += u1[(size_t)i] * cpow(j, -E.param.mu[1]);
    for (long long i = 1; i <= N; ++i)
        for (long long j = 1; i * j <= N; ++j)
            c[(size_t)(i * j)] += c12[(size_t)i] * cpow(j, -E.param.mu[2]);
    double dev = 0.0;
    for (long long n = 1; n <= N; ++n)
        dev = std::max(dev, std::abs(a_min(E, 1, n) - c[(size_t)n]));
    return dev;
}

double factorization_check_max(const MaximalEisenstein& E, long long N) {
    if (N < 1 || N > 10000) throw ValidationError("factorization_check_max: N must be in [1, 1e4]");
    std::vector<Complex> c((size_t)N + 1, Complex{0, 0});
    for (long long i = 1; i <= N; ++i) {
        Complex zi = cpow(i, 2.0 * E.u); // zeta(s - 2u) coefficient
        for (long long j = 1; i * j <= N; ++j)
            c[(size_t)(i * j)] += zi * lambda_g_extended(E.g, j) * cpow(j, -E.u);
    }
    double dev = 0.0;
    for (long long n = 1; n <= N; ++n)
        dev = std::max(dev, std::abs(a_max(E, 1, n) - c[(size_t)n]));
    return dev;
}

} // namespace rswb::eis
