#include "rswb/gl2.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "rswb/numerics.hpp"

namespace rswb::gl2 {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

// ---- exact integer layer ------------------------------------------------
// The eta ladder fits 128 bits (|tau(n)| < 1e28 for n <= 1e5), but the E4
// convolution products tau(m) * E4(n-m) reach ~142 bits, and the weight-20
// coefficients themselves reach ~2^174. Accumulate in a small sign-magnitude
// 256-bit type.

struct Mag {
    u128 lo = 0, hi = 0;
};

int mag_cmp(const Mag& a, const Mag& b) {
    if (a.hi != b.hi) return a.hi < b.hi ? -1 : 1;
    if (a.lo != b.lo) return a.lo < b.lo ? -1 : 1;
    return 0;
}

Mag mag_add(const Mag& a, const Mag& b) {
    Mag r{a.lo + b.lo, a.hi + b.hi};
    if (r.lo < a.lo) ++r.hi;
    if (r.hi < a.hi) throw OverflowError("integer accumulator exceeded 256 bits");
    return r;
}

Mag mag_sub(const Mag& a, const Mag& b) { // requires a >= b
    Mag r;
    r.lo = a.lo - b.lo;
    r.hi = a.hi - b.hi - (a.lo < b.lo ? 1 : 0);
    return r;
}

Mag mag_mul_u128_u64(u128 a, uint64_t b) {
    u128 p0 = (u128)(uint64_t)a * b;
    u128 p1 = (a >> 64) * b;
    Mag r{p0, p1 >> 64};
    u128 shifted = p1 << 64;
    r.lo += shifted;
    if (r.lo < shifted) ++r.hi;
    return r;
}

struct I256 {
    int sg = 0;
    Mag m;

    void fma(i128 a, long long b) { // += a * b, exact
        if (a == 0 || b == 0) return;
        int s = 1;
        u128 ua, ub;
        if (a < 0) { ua = (u128)(-(a + 1)) + 1; s = -s; } else ua = (u128)a;
        if (b < 0) { ub = (u128)(-(b + 1)) + 1; s = -s; } else ub = (u128)b;
        Mag p = mag_mul_u128_u64(ua, (uint64_t)ub);
        if (sg == 0) { sg = s; m = p; return; }
        if (s == sg) { m = mag_add(m, p); return; }
        int c = mag_cmp(m, p);
        if (c == 0) { sg = 0; m = Mag{}; return; }
        if (c > 0) m = mag_sub(m, p);
        else { m = mag_sub(p, m); sg = s; }
    }

    bool fits_i128() const {
        return m.hi == 0 && m.lo <= ((u128)1 << 127) - (sg > 0 ? 1 : 0);
    }

    i128 to_i128() const {
        if (!fits_i128()) throw OverflowError("coefficient exceeds 128 bits");
        i128 v = (i128)m.lo;
        return sg < 0 ? -v : v;
    }

    double to_double() const {
        double d = std::ldexp((double)m.hi, 128) + (double)m.lo;
        return sg < 0 ? -d : d;
    }
};

// cube of the eta q-series (without the q^{1/8} prefactor):
// sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2}
std::vector<std::pair<long long, long long>> eta_cube_sparse(long long n_max) {
    std::vector<std::pair<long long, long long>> s;
    for (long long j = 0;; ++j) {
        long long idx = j * (j + 1) / 2;
        if (idx > n_max) break;
        s.emplace_back(idx, (j % 2 ? -1 : 1) * (2 * j + 1));
    }
    return s;
}

// dense * sparse convolution in exact 128-bit arithmetic
std::vector<i128> conv_sparse(const std::vector<i128>& a,
                              const std::vector<std::pair<long long, long long>>& sp,
                              long long n_max) {
    std::vector<i128> out(n_max + 1, 0);
    for (const auto& [idx, val] : sp) {
        for (long long i = 0; i + idx <= n_max; ++i) {
            if (a[(size_t)i] == 0) continue;
            i128 prod;
            if (__builtin_mul_overflow(a[(size_t)i], (i128)val, &prod))
                throw OverflowError("eta ladder product exceeds 128 bits");
            if (__builtin_add_overflow(out[(size_t)(i + idx)], prod, &out[(size_t)(i + idx)]))
                throw OverflowError("eta ladder sum exceeds 128 bits");
        }
    }
    return out;
}

// coefficients a(n), n = 1..n_max, of Delta = q * (eta-series)^24
std::vector<i128> delta_coefficients(long long n_max) {
    long long N = n_max - 1; // q-power budget of the eta series
    auto sp = eta_cube_sparse(N);
    std::vector<i128> pw(N + 1, 0);
    for (const auto& [idx, val] : sp)
        if (idx <= N) pw[(size_t)idx] = val;
    for (int step = 0; step < 7; ++step) pw = conv_sparse(pw, sp, N); // eta^6 .. eta^24
    std::vector<i128> a(n_max + 1, 0);
    for (long long n = 1; n <= n_max; ++n) a[(size_t)n] = pw[(size_t)(n - 1)];
    return a;
}

std::vector<long long> e4_coefficients(long long n_max) {
    std::vector<long long> s3(n_max + 1, 0);
    for (long long d = 1; d <= n_max; ++d) {
        long long d3 = d * d * d;
        for (long long m = d; m <= n_max; m += d) s3[(size_t)m] += d3;
    }
    std::vector<long long> e4(n_max + 1, 0);
    e4[0] = 1;
    for (long long n = 1; n <= n_max; ++n) e4[(size_t)n] = 240 * s3[(size_t)n];
    return e4;
}

std::vector<I256> conv_e4(const std::vector<i128>& a, const std::vector<long long>& e4,
                          long long n_max) {
    std::vector<I256> out((size_t)n_max + 1);
    for (long long i = 0; i <= n_max; ++i) {
        if (a[(size_t)i] == 0) continue;
        for (long long j = 0; i + j <= n_max; ++j) {
            if (e4[(size_t)j] == 0) continue;
            out[(size_t)(i + j)].fma(a[(size_t)i], e4[(size_t)j]);
        }
    }
    return out;
}

std::vector<I256> exact_coefficients(int k, long long n_max) {
    auto delta = delta_coefficients(n_max);
    if (k == 12) {
        std::vector<I256> out((size_t)n_max + 1);
        for (long long n = 0; n <= n_max; ++n) out[(size_t)n].fma(delta[(size_t)n], 1);
        return out;
    }
    auto e4 = e4_coefficients(n_max);
    auto a16 = conv_e4(delta, e4, n_max);
    if (k == 16) return a16;
    // k == 20: one more E4 factor; a16 values still fit 128 bits for n <= 1e5
    std::vector<i128> a16n((size_t)n_max + 1);
    for (long long n = 0; n <= n_max; ++n) a16n[(size_t)n] = a16[(size_t)n].to_i128();
    return conv_e4(a16n, e4, n_max);
}

} // namespace

HolomorphicForm build_eigenform(int k, long long n_max) {
    if (k != 12 && k != 16 && k != 20)
        throw ValidationError("build_eigenform: weight must be 12, 16 or 20");
    if (n_max < 1 || n_max > 100000)
        throw ValidationError("build_eigenform: n_max must be in [1, 1e5]");
    auto a = exact_coefficients(k, n_max);
    HolomorphicForm f;
    f.k = k;
    f.n_max = n_max;
    f.lambda.assign((size_t)n_max + 1, 0.0);
    double ha = (k - 1) / 2.0;
    for (long long n = 1; n <= n_max; ++n)
        f.lambda[(size_t)n] = a[(size_t)n].to_double() / std::pow((double)n, ha);
    return f;
}

long long eigenform_integer_coefficient(int k, long long n) {
    if (n < 1 || n > 100000) throw ValidationError("eigenform_integer_coefficient: n out of range");
    auto a = exact_coefficients(k, n);
    auto& v = a[(size_t)n];
    if (!v.fits_i128()) throw ValidationError("coefficient exceeds 128 bits");
    i128 x = v.to_i128();
    if (x > (i128)9223372036854775807LL || x < -(i128)9223372036854775807LL - 1)
        throw ValidationError("coefficient exceeds 64 bits");
    return (long long)x;
}

Complex l_value(const HolomorphicForm& f, Complex s, const QuadratureSpec& spec) {
    spec.validate();
    const double a = (f.k - 1) / 2.0;
    const double ik = (f.k % 4 == 0) ? 1.0 : -1.0; // i^k for even k
    Complex acc{0, 0};
    int quiet = 0;
    for (long long n = 1;; ++n) {
        if (n > f.n_max)
            throw DataError("l_value: coefficient table exhausted at n = " + std::to_string(f.n_max) +
                            " before terms fell below tolerance; extend n_max to ~" +
                            std::to_string(f.n_max + 16));
        double x = 2.0 * PI * (double)n;
        double lx = std::log(x);
        Complex t1 = std::exp(-(s + a) * lx) * numerics::incomplete_gamma_upper(s + a, x);
        Complex t2 = std::exp(-((1.0 - s) + a) * lx) *
                     numerics::incomplete_gamma_upper((1.0 - s) + a, x);
        Complex term = f(n) * std::pow((double)n, a) * (t1 + ik * t2);
        acc += term;
        if (std::abs(term) < 0.1 * spec.tolerance * std::max(1.0, std::abs(acc))) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    Complex lam = 2.0 * acc;
    return lam / (numerics::gamma_r(s + (f.k - 1) / 2.0) * numerics::gamma_r(s + (f.k + 1) / 2.0));
}

double MaassFormRecord::lambda_p(long long p) const {
    auto it = lambda.find(p);
    if (it == lambda.end())
        throw DataError("MaassFormRecord " + source_id + ": missing lambda at prime " +
                        std::to_string(p));
    return it->second;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace((unsigned char)c)) {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

std::vector<MaassFormRecord> ingest_maass_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("ingest_maass_data: cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    size_t first = 0;
    while (first < lines.size() && split_csv(lines[first]).size() == 1 && split_csv(lines[first])[0].empty())
        ++first;
    if (first >= lines.size()) return {};
    auto header = split_csv(lines[first]);
    // Two header dialects are accepted: "t_g,ad2_value,2,3,5,..." and "t_g,ad2,p2,p3,p5,..."
    if (header.size() < 2 || header[0] != "t_g" ||
        (header[1] != "ad2_value" && header[1] != "ad2"))
        throw DataError("ingest_maass_data: header must start with t_g,ad2_value (or t_g,ad2)");
    std::vector<long long> primes;
    for (size_t c = 2; c < header.size(); ++c) {
        std::string lab = header[c];
        if (!lab.empty() && lab[0] == 'p') lab = lab.substr(1);
        try {
            size_t used = 0;
            long long p = std::stoll(lab, &used);
            if (used != lab.size() || p < 2 || (!primes.empty() && p <= primes.back()))
                throw std::invalid_argument("");
            primes.push_back(p);
        } catch (...) {
            throw DataError("ingest_maass_data: header column " + std::to_string(c + 1) +
                            " is not an ascending prime label");
        }
    }
    std::vector<MaassFormRecord> records;
    std::vector<size_t> parse_bad, bound_bad;
    for (size_t li = first + 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        auto cells = split_csv(lines[li]);
        if (cells.size() != header.size()) {
            parse_bad.push_back(li + 1);
            continue;
        }
        MaassFormRecord rec;
        bool ok = true;
        try {
            size_t u1 = 0, u2 = 0;
            rec.t_g = std::stod(cells[0], &u1);
            rec.ad2_value = std::stod(cells[1], &u2);
            if (u1 != cells[0].size() || u2 != cells[1].size()) ok = false;
            for (size_t c = 2; c < cells.size() && ok; ++c) {
                size_t u = 0;
                double v = std::stod(cells[c], &u);
                if (u != cells[c].size()) { ok = false; break; }
                rec.lambda[primes[c - 2]] = v;
            }
        } catch (...) {
            ok = false;
        }
        if (!ok) {
            parse_bad.push_back(li + 1);
            continue;
        }
        bool bounds_ok = rec.t_g > 0;
        for (const auto& [p, v] : rec.lambda)
            if (std::abs(v) > std::pow((double)p, 7.0 / 64.0) + 0.01) bounds_ok = false;
        if (!bounds_ok) {
            bound_bad.push_back(li + 1);
            continue;
        }
        std::string base = path.substr(path.find_last_of("/\\") + 1);
        rec.source_id = base + ":" + std::to_string(records.size() + 1);
        records.push_back(std::move(rec));
    }
    auto join = [](const std::vector<size_t>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s;
    };
    if (!parse_bad.empty())
        throw DataError("ingest_maass_data: malformed rows at lines " + join(parse_bad));
    if (!bound_bad.empty())
        throw ValidationError("ingest_maass_data: invariant violations at lines " + join(bound_bad));
    return records;
}

RankinSelbergValue rankin_selberg_gl2_value(const HolomorphicForm& f, const MaassFormRecord& g,
                                            Complex s) {
    if (s.real() < 1.1)
        throw ValidationError("rankin_selberg_gl2_value: Re s must be >= 1.1 (absolute convergence)");
    const long long PMAX = 2000;
    RankinSelbergValue out;
    Complex logprod{0, 0};
    for (long long p = 2; p <= PMAX; ++p) {
        bool prime = p >= 2;
        for (long long d = 2; d * d <= p && prime; ++d)
            if (p % d == 0) prime = false;
        if (!prime) continue;
        if (p > f.n_max)
            throw DataError("rankin_selberg_gl2_value: f table missing prime " + std::to_string(p));
        double lf = f(p);
        double lg = g.lambda_p(p); // throws naming the first missing prime
        Complex af = 0.5 * lf, ag = 0.5 * lg;
        Complex ra = std::sqrt(af * af - 1.0);
        Complex rb = std::sqrt(ag * ag - 1.0);
        Complex alpha[2] = {af + ra, af - ra};
        Complex beta[2] = {ag + rb, ag - rb};
        Complex x = std::exp(-s * std::log((double)p));
        for (const auto& va : alpha)
            for (const auto& vb : beta) logprod -= std::log(1.0 - va * vb * x);
        ++out.primes_used;
    }
    out.value = std::exp(logprod);
    double sigma = s.real();
    // |log local factor| <~ 4 |x| (1 + O(|x|)); crude prime-counting tail
    out.tail_bound = std::abs(out.value) * 8.0 * std::pow((double)PMAX, 1.0 - sigma) /
                     ((sigma - 1.0) * std::log((double)PMAX));
    return out;
}

} // namespace rswb::gl2
