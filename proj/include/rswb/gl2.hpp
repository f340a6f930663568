#pragma once

#include <map>
#include <string>
#include <vector>

#include "rswb/types.hpp"

namespace rswb::gl2 {

// Level-1 holomorphic Hecke eigenform with Deligne-normalized eigenvalues
// lambda(n) = a(n) / n^{(k-1)/2}, exact integer a(n) underneath.
struct HolomorphicForm {
    int k = 12;
    long long n_max = 0;
    std::vector<double> lambda; // 1-based; lambda[0] unused

    double operator()(long long n) const {
        if (n < 1 || n > n_max) throw DataError("HolomorphicForm: lambda(" + std::to_string(n) +
                                                ") outside table (n_max = " + std::to_string(n_max) + ")");
        return lambda[(size_t)n];
    }
};

// One row of ingested GL(2) Maass data: spectral parameter, adjoint-square
// L-value at 1, and Hecke eigenvalues keyed by prime.
struct MaassFormRecord {
    double t_g = 0;
    double ad2_value = 0;
    std::map<long long, double> lambda;
    std::string source_id;

    double lambda_p(long long p) const;
};

// Exact q-expansions of the one-dimensional spaces:
//   k=12: Delta = q prod (1-q^n)^24,  k=16: Delta*E4,  k=20: Delta*E4^2,
// built by repeated multiplication with the sparse cube of the eta function
// and E4 = 1 + 240 sum sigma_3(n) q^n. All arithmetic is exact (128-bit,
// widened to 256-bit accumulators where products can exceed it).
HolomorphicForm build_eigenform(int k, long long n_max);

// Exact integer coefficient a(n) of the weight-k eigenform; throws
// ValidationError if it does not fit in 64 bits (test/diagnostic use).
long long eigenform_integer_coefficient(int k, long long n);

// L(s, f) by the smoothed symmetric series for the completed L-function,
//   Lambda(s) = 2 sum_n lambda(n) n^a [ (2pi n)^{-s-a} Gamma(s+a, 2pi n)
//                    + i^k (2pi n)^{-(1-s)-a} Gamma((1-s)+a, 2pi n) ],
// a = (k-1)/2, then dividing by Gamma_R(s+(k-1)/2) Gamma_R(s+(k+1)/2).
// Valid for every s by rapid convergence; terms stop at tolerance/10.
// Throws DataError naming the required table size if f is too short.
Complex l_value(const HolomorphicForm& f, Complex s, const QuadratureSpec& spec);

// Strict CSV ingestion. Header: t_g, ad2_value, then prime-labeled columns.
// Missing/unreadable file -> DataError. Malformed rows -> DataError with
// line numbers. Bound violations (t_g <= 0, |lambda(p)| > p^{7/64} + 0.01)
// -> ValidationError listing every offending line. Empty file -> empty list.
std::vector<MaassFormRecord> ingest_maass_data(const std::string& path);

struct RankinSelbergValue {
    Complex value{0, 0};
    double tail_bound = 0;
    int primes_used = 0;
};

// L(s, f x g) as a degree-4 Euler product over the primes of g's table
// (all primes <= 2000 must be present), absolute-convergence region only:
// Re s >= 1.1. The dropped tail is estimated crudely from the degree-4
// Dirichlet coefficients' size and reported.
RankinSelbergValue rankin_selberg_gl2_value(const HolomorphicForm& f, const MaassFormRecord& g,
                                            Complex s);

} // namespace rswb::gl2
