#include "rswb/afe.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rswb/numerics.hpp"

namespace rswb::afe {

namespace {

using numerics::log_gamma;

void check_weight_args(double y, int k) {
    if (!(y > 0.0 && y <= 1e30)) throw ValidationError("weight argument y must lie in (0, 1e30]");
    if (k < 12 || k % 2 != 0) throw ValidationError("weight index k must be even and >= 12");
}

Complex weight_core(double y, int k, const LanglandsParameter& mu, const QuadratureSpec& q,
                    bool tilde) {
    check_weight_args(y, k);
    mu.check_sum();
    double lx = std::log(y) + std::log(8.0) + 3.0 * std::log(PI);
    Complex dlog{0, 0};
    for (const auto& m : mu.mu) dlog += log_gamma(0.5 * (double)k - m);
    double sgn = tilde ? 1.0 : -1.0;
    double sigma = lx >= 0.0 ? 3.0 : -3.0;
    auto integrand = [&](Complex s) {
        Complex lg = s * s - s * lx - dlog;
        for (const auto& m : mu.mu) lg += log_gamma(s + 0.5 * (double)k + sgn * m);
        return std::exp(lg) / s;
    };
    Complex val = numerics::vertical_line_integral(integrand, sigma, q);
    if (sigma < 0.0) val += tilde ? pi_gamma_ratio(k, mu) : Complex{1.0, 0.0};
    return val;
}

} // namespace

Complex pi_gamma_ratio(int k, const LanglandsParameter& mu) {
    mu.check_sum();
    Complex lg{0, 0};
    for (const auto& m : mu.mu)
        lg += log_gamma(0.5 * (double)k + m) - log_gamma(0.5 * (double)k - m);
    return std::exp(lg);
}

Complex v_weight(double y, int k, const LanglandsParameter& mu, const QuadratureSpec& q) {
    return weight_core(y, k, mu, q, false);
}

Complex v_tilde_weight(double y, int k, const LanglandsParameter& mu, const QuadratureSpec& q) {
    return weight_core(y, k, mu, q, true);
}

namespace {

// log-grid cubic interpolation cache for V / V~ over [1, x_max]
class WeightCache {
  public:
    WeightCache(double x_max, int k, const LanglandsParameter& mu, const QuadratureSpec& q,
                bool tilde)
        : lo_(std::log(1.0) - 0.05), hi_(std::log(x_max) + 0.05) {
        size_t n = 1024;
        step_ = (hi_ - lo_) / (double)(n - 1);
        vals_.resize(n);
        for (size_t i = 0; i < n; ++i)
            vals_[i] = weight_core(std::exp(lo_ + step_ * (double)i), k, mu, q, tilde);
    }

    Complex operator()(double y) const {
        double u = (std::log(y) - lo_) / step_;
        long long i0 = (long long)std::floor(u);
        i0 = std::clamp(i0, (long long)1, (long long)vals_.size() - 3);
        double t = u - (double)i0;
        // 4-point Lagrange cubic on the uniform log grid
        double c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        double c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        double c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        double c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
        return c0 * vals_[(size_t)(i0 - 1)] + c1 * vals_[(size_t)i0] +
               c2 * vals_[(size_t)(i0 + 1)] + c3 * vals_[(size_t)(i0 + 2)];
    }

  private:
    double lo_, hi_, step_;
    std::vector<Complex> vals_;
};

struct CKahan {
    double sr = 0, cr = 0, si = 0, ci = 0;
    void add(Complex v) {
        double yr = v.real() - cr, tr = sr + yr;
        cr = (tr - sr) - yr;
        sr = tr;
        double yi = v.imag() - ci, ti = si + yi;
        ci = (ti - si) - yi;
        si = ti;
    }
    Complex value() const { return {sr, si}; }
};

} // namespace

CentralValue afe_central_value(const gl2::HolomorphicForm& f, const LanglandsParameter& mu,
                               const CoefficientSource& src, const QuadratureSpec& q,
                               long long budget) {
    q.validate();
    mu.check_sum();
    if (f.k % 4 != 0)
        throw ValidationError("afe_central_value requires weight k divisible by 4");
    if (!src.eval) throw ValidationError("coefficient source '" + src.label + "' has no eval");
    if (std::abs(src.eval(1, 1) - Complex{1.0, 0.0}) > 1e-9)
        throw ValidationError("coefficient source '" + src.label + "' violates eval(1,1) = 1");
    if (budget < 1) throw ValidationError("afe budget must be positive");

    // truncation ladder on the weight envelope
    double X = 8.0;
    double env = 0.0;
    while (true) {
        env = std::max(std::abs(v_weight(X, f.k, mu, q)),
                       std::abs(v_tilde_weight(X, f.k, mu, q)));
        if (env < q.tolerance / (10.0 * X)) break;
        X *= 1.25;
        if (X > 1e9) throw ConvergenceError("afe truncation ladder found no cut below 1e9");
    }
    long long xcut = (long long)std::floor(X);

    long long pairs = 0;
    for (long long m1 = 1; m1 * m1 <= xcut; ++m1) pairs += 2 * (xcut / (m1 * m1));
    if (pairs > budget)
        throw ValidationError("afe budget exceeded: required X_cut = " + std::to_string(xcut) +
                              " needs " + std::to_string(pairs) + " coefficient pairs, budget " +
                              std::to_string(budget));
    if (xcut > f.n_max)
        throw DataError("afe_central_value needs eigenform coefficients up to n = " +
                        std::to_string(xcut) + ", table holds n_max = " +
                        std::to_string(f.n_max));

    WeightCache vc((double)xcut, f.k, mu, q, false);
    WeightCache vtc((double)xcut, f.k, mu, q, true);
    // sampled interpolation check; fall back to direct evaluation on failure
    bool cache_ok = true;
    const double fracs[] = {0.13, 0.29, 0.47, 0.61, 0.79, 0.93};
    for (double fr : fracs) {
        double ys = std::exp(fr * std::log((double)xcut));
        if (std::abs(vc(ys) - v_weight(ys, f.k, mu, q)) > 1e-9 ||
            std::abs(vtc(ys) - v_tilde_weight(ys, f.k, mu, q)) > 1e-9) {
            cache_ok = false;
            break;
        }
    }
    auto V = [&](double y) { return cache_ok ? vc(y) : v_weight(y, f.k, mu, q); };
    auto Vt = [&](double y) { return cache_ok ? vtc(y) : v_tilde_weight(y, f.k, mu, q); };

    CKahan first, second;
    for (long long m1 = 1; m1 * m1 <= xcut; ++m1) {
        long long m2max = xcut / (m1 * m1);
        for (long long m2 = 1; m2 <= m2max; ++m2) {
            double y = (double)(m1 * m1 * m2);
            double w = f(m2) / std::sqrt(y);
            first.add(w * src.eval(m2, m1) * V(y));
            second.add(w * src.eval(m1, m2) * Vt(y));
        }
    }
    CentralValue out;
    out.value = first.value() + second.value(); // i^k = 1 enforced above
    out.x_cut = xcut;
    out.tail_bound = 10.0 * X * env;
    out.cache_used = cache_ok;
    return out;
}

} // namespace rswb::afe
