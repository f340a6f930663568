#pragma once

#include "rswb/errors.hpp"
#include "rswb/gl2.hpp"
#include "rswb/types.hpp"

namespace rswb::eis {

struct MinimalEisenstein {
    LanglandsParameter param;
};

// Langlands parameter (u + i t_g, u - i t_g, -2u)
struct MaximalEisenstein {
    Complex u;
    gl2::MaassFormRecord g;

    LanglandsParameter parameter() const {
        LanglandsParameter mu;
        mu.mu = {u + Complex(0, g.t_g), u - Complex(0, g.t_g), -2.0 * u};
        return mu;
    }
};

// lambda_g at composite arguments, extended from the prime table by the
// Chebyshev recursion lambda(p^k) = lambda(p)lambda(p^{k-1}) - lambda(p^{k-2})
// and multiplicativity. Throws DataError naming the first missing prime.
double lambda_g_extended(const gl2::MaassFormRecord& g, long long n);

// Euler product over primes <= pmax of (1 - lambda_g(p)p^{-s} + p^{-2s})^{-1}
Complex maass_l_value(const gl2::MaassFormRecord& g, Complex s, long long pmax);

// A(1,n) = sum_{d1 d2 d3 = n} d1^{-mu1} d2^{-mu2} d3^{-mu3};
// A(m,1) = conj A(1,m) (unitary axis only); general (m,n) by the Moebius
// bilinear relation A(m,n) = sum_{d | (m,n)} mobius(d) A(m/d,1) A(1,n/d).
// Requires m*n <= 1e6.
Complex a_min(const MinimalEisenstein& E, long long m, long long n);

// A(1,n) = sum_{d1 d2 = n} lambda_g(d1) d1^{-u} d2^{2u}; relations as above.
Complex a_max(const MaximalEisenstein& E, long long m, long long n);

// independent route for prime powers: A(p^a, p^b) as the Schur polynomial
// h_{a+b} h_b - h_{a+b+1} h_{b-1} in the complete homogeneous functions of the
// Satake parameters (h_k = e1 h_{k-1} - e2 h_{k-2} + h_{k-3})
Complex a_min_schur(const MinimalEisenstein& E, long long p, int a, int b);
Complex a_max_schur(const MaximalEisenstein& E, long long p, int a, int b);

// (1/16) prod_j |zeta(1 + 3 nu_j)|^2; PoleError when some |3 nu_j| <= 1e-8
double min_normalizer(const MinimalEisenstein& E);

// 8 * L(1, Ad^2 g) * |L(1 + 3u, g)|^2, the L-value truncated at the largest
// prime the record supplies
double max_normalizer(const MaximalEisenstein& E);

// max_n<=N |a_min(1,n) - [n-th Dirichlet coefficient of
// zeta(s+mu1)zeta(s+mu2)zeta(s+mu3)]|, the latter by sieve-style triple
// divisor convolution. Requires N <= 1e4.
double factorization_check_min(const MinimalEisenstein& E, long long N);

// same against zeta(s-2u) L(s+u,g)
double factorization_check_max(const MaximalEisenstein& E, long long N);

} // namespace rswb::eis
