#include "rswb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fftw3.h>

#include "rswb/numerics.hpp"

namespace rswb::kernels {

namespace {

using numerics::log_gamma;
using numerics::detail::cos2_taper;
using numerics::detail::log_sin_pi;

constexpr Complex I{0.0, 1.0};

bool near_gamma_pole(Complex z) {
    double r = std::round(z.real());
    if (r > 0.5) return false;
    return std::abs(z - Complex(r, 0.0)) <= 1e-12;
}

void check_y(double y) {
    double a = std::abs(y);
    if (!(a >= 1e-6 && a <= 1e12))
        throw ValidationError("kernel argument |y| must lie in [1e-6, 1e12]");
}

double contour_height(const LanglandsParameter& mu, const QuadratureSpec& q) {
    double m = 0.0;
    for (const auto& c : mu.mu) m = std::max(m, std::abs(c.imag()));
    return std::max(q.height, m + 12.0);
}

// log(cosh x), log(sinh |x|) without overflow
double log_cosh(double x) {
    double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}
double log_sinh_abs(double x) {
    double a = std::abs(x);
    if (a == 0.0) throw InternalError("log_sinh_abs at 0");
    return a + std::log1p(-std::exp(-2.0 * a)) - std::log(2.0);
}

// Kahan-compensated complex accumulator
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

std::pair<Complex, Complex> g_tilde(Complex s, const LanglandsParameter& mu) {
    mu.check_sum();
    Complex l1{0, 0}, l2{0, 0};
    for (const auto& m : mu.mu) {
        Complex a1 = 0.5 * (s - m), b1 = 0.5 * (1.0 - s + m);
        Complex a2 = 0.5 * (1.0 + s - m), b2 = 0.5 * (2.0 - s + m);
        if (near_gamma_pole(a1) || near_gamma_pole(a2))
            throw PoleError("g_tilde: s on a numerator Gamma pole");
        l1 += log_gamma(a1) - log_gamma(b1);
        l2 += log_gamma(a2) - log_gamma(b2);
    }
    Complex pref = std::exp(-3.0 * s * std::log(PI)) / (12288.0 * std::pow(PI, 3.5));
    Complex p1 = std::exp(l1), p2 = std::exp(l2);
    return {pref * (p1 + I * p2), pref * (p1 - I * p2)};
}

Complex kernel_w4(double y, const LanglandsParameter& mu, const QuadratureSpec& q, double sigma0) {
    q.validate();
    check_y(y);
    if (!(sigma0 > 0.0 && sigma0 < 1.0))
        throw ValidationError("kernel_w4: sigma0 must lie in the pole-free strip (0,1)");
    double H = contour_height(mu, q);
    long long NV = (long long)std::floor(H / q.step + 1e-9);
    double lay = std::log(std::abs(y));
    bool pos = y > 0;
    CKahan acc;
    for (long long m = 0; m <= NV; ++m) {
        for (int sgn = (m == 0 ? 1 : -1); sgn <= 1; sgn += 2) {
            double v = q.step * (double)(sgn * m);
            Complex s{sigma0, v};
            auto [gp, gm] = g_tilde(s, mu);
            acc.add(cos2_taper(v, H) * std::exp(-s * lay) * (pos ? gp : gm));
            if (m == 0) break;
        }
    }
    return acc.value() * (q.step / (2.0 * PI));
}

namespace {

// shared lattice geometry for the double-contour transforms
struct WlLattice {
    double step, H;
    long long NV;               // contour nodes at v = i*step, |i| <= NV
    std::vector<Complex> lg1, lg2;   // log Gamma(line + i w) on the w-lattice
    std::vector<Complex> ls1, ls2;   // log sin(pi(line + i w)) (mixed kernels)
    long long NW;               // table offset
};

} // namespace

Complex g_transform(double y1, double y2, const LanglandsParameter& mu, const QuadratureSpec& q,
                    double line1, double line2) {
    q.validate();
    check_y(y1);
    check_y(y2);
    if (!(line1 > 0.0 && line2 > 0.0))
        throw ValidationError("g_transform: lines must be positive");
    double H = contour_height(mu, q);
    long long NV = (long long)std::floor(H / q.step + 1e-9);
    long long n = 2 * NV + 1;
    double L1 = std::log(4.0 * PI * PI * std::abs(y1));
    double L2 = std::log(4.0 * PI * PI * std::abs(y2));
    std::vector<Complex> A((size_t)n), B((size_t)n);
    for (long long i = -NV; i <= NV; ++i) {
        double v = q.step * (double)i;
        Complex s1{line1, v}, s2{line2, v};
        Complex la{0, 0}, lb{0, 0};
        for (const auto& m : mu.mu) {
            if (near_gamma_pole(s1 - m) || near_gamma_pole(s2 + m))
                throw PoleError("g_transform: contour through a Gamma pole");
            la += log_gamma(s1 - m);
            lb += log_gamma(s2 + m);
        }
        double tp = cos2_taper(v, H);
        A[(size_t)(i + NV)] = tp * std::exp(la - s1 * L1);
        B[(size_t)(i + NV)] = tp * std::exp(lb - s2 * L2);
    }
    // 1/Gamma(s1+s2) on the u-lattice
    std::vector<Complex> C((size_t)(4 * NV + 1));
    for (long long u = -2 * NV; u <= 2 * NV; ++u)
        C[(size_t)(u + 2 * NV)] =
            std::exp(-log_gamma(Complex(line1 + line2, q.step * (double)u)));
    CKahan acc;
    for (long long i = -NV; i <= NV; ++i) {
        Complex ai = A[(size_t)(i + NV)];
        if (ai == Complex{0, 0}) continue;
        for (long long j = -NV; j <= NV; ++j)
            acc.add(ai * B[(size_t)(j + NV)] * C[(size_t)(i + j + 2 * NV)]);
    }
    double st = q.step / (2.0 * PI);
    return acc.value() * st * st;
}

Complex kernel_wl(double y1, double y2, const LanglandsParameter& mu, const QuadratureSpec& q,
                  double line1, double line2) {
    q.validate();
    check_y(y1);
    check_y(y2);
    if (!(line1 > 0.0 && line2 > 0.0) || std::abs(line1 + line2 - 0.5) > 1e-12)
        throw ValidationError("kernel_wl: lines must be positive with line1 + line2 = 1/2");
    int e1 = y1 > 0 ? +1 : -1, e2 = y2 > 0 ? +1 : -1;
    auto nu = spectral::to_spectral_coords(mu);

    // mu-dependent trigonometric prefactor and the s-dependent sine selections
    auto sin_zero = [](Complex z) { // zeros of sin(1.5 pi nu): 1.5 nu integer
        double r = std::round(1.5 * z.real());
        return std::abs(1.5 * z - Complex(r, 0.0)) <= 1e-10 && std::abs(z.imag()) <= 1e-10 / 1.5;
    };
    auto lcos = [](Complex z) { return log_sin_pi(1.5 * z + 0.5); }; // log cos(1.5 pi z)
    auto lsin = [](Complex z) { return log_sin_pi(1.5 * z); };
    Complex pref_log{0, 0};
    double pref_sign = 1.0;
    std::vector<int> sins1, sins2; // indices j: extra sin(pi(s1 - mu_j)) / sin(pi(s2 + mu_j))
    bool mixed = false;
    if (e1 > 0 && e2 > 0) {
        pref_log = std::log(Complex(1.0 / (24.0 * PI * PI), 0.0));
        for (int j = 0; j < 3; ++j) pref_log += lcos(nu[(size_t)j]);
    } else if (e1 > 0 && e2 < 0) {
        if (sin_zero(nu[0]) || sin_zero(nu[2]))
            throw PoleError("kernel_wl: trigonometric denominator vanishes at this mu");
        pref_sign = -1.0;
        pref_log = std::log(Complex(1.0 / (32.0 * PI * PI), 0.0)) + lcos(nu[1]) - lsin(nu[0]) -
                   lsin(nu[2]);
        sins1 = {0};
        sins2 = {1, 2};
        mixed = true;
    } else if (e1 < 0 && e2 > 0) {
        if (sin_zero(nu[1]) || sin_zero(nu[2]))
            throw PoleError("kernel_wl: trigonometric denominator vanishes at this mu");
        pref_sign = -1.0;
        pref_log = std::log(Complex(1.0 / (32.0 * PI * PI), 0.0)) + lcos(nu[0]) - lsin(nu[1]) -
                   lsin(nu[2]);
        sins1 = {0, 1};
        sins2 = {2};
        mixed = true;
    } else {
        if (sin_zero(nu[0]) || sin_zero(nu[1]))
            throw PoleError("kernel_wl: trigonometric denominator vanishes at this mu");
        pref_log = std::log(Complex(1.0 / (32.0 * PI * PI), 0.0)) + lcos(nu[2]) - lsin(nu[1]) -
                   lsin(nu[0]);
        sins1 = {1};
        sins2 = {1};
    }

    double H = contour_height(mu, q);
    long long NV = (long long)std::floor(H / q.step + 1e-9);
    long long n = 2 * NV + 1;
    double L1 = std::log(4.0 * PI * PI * std::abs(y1));
    double L2 = std::log(4.0 * PI * PI * std::abs(y2));
    std::vector<Complex> LA((size_t)n), LB((size_t)n);
    std::vector<double> TP((size_t)n);
    for (long long i = -NV; i <= NV; ++i) {
        double v = q.step * (double)i;
        Complex s1{line1, v}, s2{line2, v};
        Complex la{0, 0}, lb{0, 0};
        for (const auto& m : mu.mu) {
            if (near_gamma_pole(s1 - m) || near_gamma_pole(s2 + m))
                throw PoleError("kernel_wl: contour through a Gamma pole");
            la += log_gamma(s1 - m);
            lb += log_gamma(s2 + m);
        }
        for (int j : sins1) la += log_sin_pi(s1 - mu.mu[(size_t)j]);
        for (int j : sins2) lb += log_sin_pi(s2 + mu.mu[(size_t)j]);
        LA[(size_t)(i + NV)] = la - s1 * L1;
        LB[(size_t)(i + NV)] = lb - s2 * L2;
        TP[(size_t)(i + NV)] = cos2_taper(v, H);
    }
    std::vector<Complex> LC((size_t)(4 * NV + 1));
    for (long long u = -2 * NV; u <= 2 * NV; ++u) {
        Complex su{line1 + line2, q.step * (double)u};
        Complex lc = -log_gamma(su);
        if (mixed) lc -= log_sin_pi(su);
        LC[(size_t)(u + 2 * NV)] = lc;
    }
    CKahan acc;
    for (long long i = -NV; i <= NV; ++i) {
        if (TP[(size_t)(i + NV)] == 0.0) continue;
        for (long long j = -NV; j <= NV; ++j) {
            double tp = TP[(size_t)(i + NV)] * TP[(size_t)(j + NV)];
            if (tp == 0.0) continue;
            Complex lg =
                LA[(size_t)(i + NV)] + LB[(size_t)(j + NV)] + LC[(size_t)(i + j + 2 * NV)];
            if (lg.real() < -745.0) continue;
            acc.add(tp * std::exp(lg + pref_log));
        }
    }
    double st = q.step / (2.0 * PI);
    return pref_sign * acc.value() * st * st;
}

namespace {

struct GridIndex {
    std::vector<std::array<long long, 2>> it; // node t / t_step, exact
    long long max_abs = 0;                    // max over nodes, components incl. t3
    long long ratio = 1;                      // t_step / q.step
};

GridIndex index_grid(const spectral::SpectralGrid& grid, const QuadratureSpec& q) {
    GridIndex gi;
    double r = grid.t_step / q.step;
    gi.ratio = (long long)std::llround(r);
    if (gi.ratio < 1 || std::abs(r - (double)gi.ratio) > 1e-9)
        throw ValidationError("spectral grid spacing must be an integer multiple of q.step");
    gi.it.reserve(grid.nodes.size());
    for (const auto& nd : grid.nodes) {
        long long i1 = (long long)std::llround(nd.t1 / grid.t_step);
        long long i2 = (long long)std::llround(nd.t2 / grid.t_step);
        if (std::abs(nd.t1 - (double)i1 * grid.t_step) > 1e-9 ||
            std::abs(nd.t2 - (double)i2 * grid.t_step) > 1e-9)
            throw ValidationError("spectral grid nodes must sit on the t_step lattice");
        gi.it.push_back({i1, i2});
        gi.max_abs = std::max({gi.max_abs, std::llabs(i1), std::llabs(i2), std::llabs(i1 + i2)});
    }
    return gi;
}

size_t fft_size(size_t need) {
    size_t n = 1;
    while (n < need) n <<= 1;
    return n;
}

} // namespace

Complex phi_w4_on_grid(double y, const spectral::SpectralGrid& grid, const QuadratureSpec& q,
                       double sigma0, bool reflected) {
    q.validate();
    check_y(y);
    if (!(sigma0 > 0.0 && sigma0 < 1.0))
        throw ValidationError("phi_w4: sigma0 must lie in the pole-free strip (0,1)");
    if (grid.nodes.empty()) return {0.0, 0.0};
    GridIndex gi = index_grid(grid, q);
    double maxT = (double)gi.max_abs * grid.t_step;
    double H = maxT + 12.0;
    long long NV = (long long)std::floor(H / q.step + 1e-9);
    long long NW = NV + gi.ratio * gi.max_abs;

    // per-axis ratio tables on the shared w-lattice
    std::vector<Complex> T1((size_t)(2 * NW + 1)), T2((size_t)(2 * NW + 1));
    for (long long iw = -NW; iw <= NW; ++iw) {
        Complex w{0.0, q.step * (double)iw};
        T1[(size_t)(iw + NW)] = std::exp(log_gamma(0.5 * (sigma0 + w)) -
                                         log_gamma(0.5 * (1.0 - sigma0 - w)));
        T2[(size_t)(iw + NW)] = std::exp(log_gamma(0.5 * (1.0 + sigma0 + w)) -
                                         log_gamma(0.5 * (2.0 - sigma0 - w)));
    }
    // contour weights: taper * (step/2pi) * |y_eff|^{-s} * pi^{-3s} / (12288 pi^{7/2})
    double y_eff = reflected ? -y : y;
    bool pos = y_eff > 0;
    double lbase = std::log(std::abs(y_eff)) + 3.0 * std::log(PI);
    double c0 = q.step / (2.0 * PI) / (12288.0 * std::pow(PI, 3.5));
    std::vector<Complex> zv((size_t)(2 * NV + 1));
    for (long long iv = -NV; iv <= NV; ++iv) {
        double v = q.step * (double)iv;
        zv[(size_t)(iv + NV)] =
            cos2_taper(v, H) * c0 * std::exp(-Complex(sigma0, v) * lbase);
    }
    int flip = reflected ? -1 : +1; // reflected evaluates at -mu, i.e. t_j -> -t_j
    CKahan total;
    for (size_t k = 0; k < grid.nodes.size(); ++k) {
        long long i1 = flip * gi.ratio * gi.it[k][0];
        long long i2 = flip * gi.ratio * gi.it[k][1];
        long long i3 = -i1 - i2;
        Complex acc{0, 0};
        for (long long iv = -NV; iv <= NV; ++iv) {
            Complex p1 = T1[(size_t)(iv - i1 + NW)] * T1[(size_t)(iv - i2 + NW)] *
                         T1[(size_t)(iv - i3 + NW)];
            Complex p2 = T2[(size_t)(iv - i1 + NW)] * T2[(size_t)(iv - i2 + NW)] *
                         T2[(size_t)(iv - i3 + NW)];
            acc += zv[(size_t)(iv + NV)] * (pos ? p1 + I * p2 : p1 - I * p2);
        }
        total.add(grid.nodes[k].weight * acc);
    }
    return total.value();
}

Complex phi_wl_on_grid(double y1, double y2, const spectral::SpectralGrid& grid,
                       const QuadratureSpec& q, double line1, double line2) {
    q.validate();
    check_y(y1);
    check_y(y2);
    if (!(line1 > 0.0 && line2 > 0.0) || std::abs(line1 + line2 - 0.5) > 1e-12)
        throw ValidationError("phi_wl: lines must be positive with line1 + line2 = 1/2");
    if (grid.nodes.empty()) return {0.0, 0.0};
    GridIndex gi = index_grid(grid, q);

    int e1 = y1 > 0 ? +1 : -1, e2 = y2 > 0 ? +1 : -1;
    if (e1 != e2) {
        // Mixed signs: one contour axis grows like e^{pi |v| / 2} before the
        // s1+s2 coupling damps it, so any rearrangement of the double sum
        // (the FFT convolution included) drowns in cancellation at double
        // precision. Summing the direct kernel per node keeps this entry
        // point identical to the reference route instead of noisier.
        const double den_tol = 1e-8;
        CKahan total;
        for (const auto& nd : grid.nodes) {
            double x1 = (nd.t1 - nd.t2) / 3.0;
            double x2 = (nd.t1 + 2.0 * nd.t2) / 3.0;
            double x3 = -x1 - x2;
            // removable zeros of the sine denominators, as in the node loop below
            if (e1 > 0 ? (std::abs(x1) < den_tol || std::abs(x3) < den_tol)
                       : (std::abs(x2) < den_tol || std::abs(x3) < den_tol))
                continue;
            LanglandsParameter mu =
                LanglandsParameter::from_imag(nd.t1, nd.t2, -nd.t1 - nd.t2);
            total.add(nd.weight * kernel_wl(y1, y2, mu, q, line1, line2));
        }
        return total.value();
    }

    double maxT = (double)gi.max_abs * grid.t_step;
    double H = maxT + 12.0;
    long long NV = (long long)std::floor(H / q.step + 1e-9);
    long long n = 2 * NV + 1;
    long long NW = NV + gi.ratio * gi.max_abs;

    std::vector<int> sins1, sins2;
    if (e1 < 0 && e2 < 0) { sins1 = {1}; sins2 = {1}; }

    // universal log tables on the w-lattice
    std::vector<Complex> LG1((size_t)(2 * NW + 1)), LG2((size_t)(2 * NW + 1));
    std::vector<Complex> LS1, LS2;
    if (!sins1.empty()) LS1.resize((size_t)(2 * NW + 1));
    if (!sins2.empty()) LS2.resize((size_t)(2 * NW + 1));
    for (long long iw = -NW; iw <= NW; ++iw) {
        Complex z1{line1, q.step * (double)iw}, z2{line2, q.step * (double)iw};
        LG1[(size_t)(iw + NW)] = log_gamma(z1);
        LG2[(size_t)(iw + NW)] = log_gamma(z2);
        if (!LS1.empty()) LS1[(size_t)(iw + NW)] = log_sin_pi(z1);
        if (!LS2.empty()) LS2[(size_t)(iw + NW)] = log_sin_pi(z2);
    }
    // coupling factor exp(-log Gamma(1/2+iu) - tilt*u), tabulated per tilt on
    // the half where the tilt compensates the 1/Gamma growth
    const double tilt = 0.5 * PI;
    long long NU = 2 * NV;
    std::vector<Complex> Cp((size_t)(NU + 1)), Cm((size_t)(NU + 1)); // u >= 0 / u <= 0
    for (long long iu = 0; iu <= NU; ++iu) {
        double u = q.step * (double)iu;
        Complex sp{line1 + line2, u}, sm{line1 + line2, -u};
        Cp[(size_t)iu] = std::exp(-log_gamma(sp) - tilt * u);
        Cm[(size_t)iu] = std::exp(-log_gamma(sm) - tilt * u);
    }

    double L1 = std::log(4.0 * PI * PI * std::abs(y1));
    double L2 = std::log(4.0 * PI * PI * std::abs(y2));
    std::vector<double> TP((size_t)n);
    for (long long iv = -NV; iv <= NV; ++iv)
        TP[(size_t)(iv + NV)] = cos2_taper(q.step * (double)iv, H);

    size_t NF = fft_size((size_t)(2 * n - 1));
    std::vector<std::complex<double>> bufA(NF), bufB(NF), bufFA(NF), bufFB(NF), bufC(NF);
    fftw_plan pa = fftw_plan_dft_1d((int)NF, reinterpret_cast<fftw_complex*>(bufA.data()),
                                    reinterpret_cast<fftw_complex*>(bufFA.data()), FFTW_FORWARD,
                                    FFTW_ESTIMATE);
    fftw_plan pb = fftw_plan_dft_1d((int)NF, reinterpret_cast<fftw_complex*>(bufB.data()),
                                    reinterpret_cast<fftw_complex*>(bufFB.data()), FFTW_FORWARD,
                                    FFTW_ESTIMATE);
    fftw_plan pc = fftw_plan_dft_1d((int)NF, reinterpret_cast<fftw_complex*>(bufFA.data()),
                                    reinterpret_cast<fftw_complex*>(bufC.data()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE);

    std::vector<Complex> la((size_t)n), lb((size_t)n);
    auto convolve = [&](double g) {
        // fill tilted, rescaled arrays; returns max-log scale (real)
        double amax = -1e300, bmax = -1e300;
        for (long long iv = -NV; iv <= NV; ++iv) {
            size_t ix = (size_t)(iv + NV);
            if (TP[ix] > 0.0) {
                double v = q.step * (double)iv;
                amax = std::max(amax, la[ix].real() + g * v);
                bmax = std::max(bmax, lb[ix].real() + g * v);
            }
        }
        std::fill(bufA.begin(), bufA.end(), std::complex<double>{0, 0});
        std::fill(bufB.begin(), bufB.end(), std::complex<double>{0, 0});
        for (long long iv = -NV; iv <= NV; ++iv) {
            size_t ix = (size_t)(iv + NV);
            if (TP[ix] == 0.0) continue;
            double v = q.step * (double)iv;
            bufA[ix] = TP[ix] * std::exp(la[ix] + g * v - amax);
            bufB[ix] = TP[ix] * std::exp(lb[ix] + g * v - bmax);
        }
        fftw_execute(pa);
        fftw_execute(pb);
        for (size_t i = 0; i < NF; ++i) bufFA[i] *= bufFB[i];
        fftw_execute(pc);
        return amax + bmax;
    };

    // Nodes where a trigonometric denominator vanishes lie on a measure-zero
    // diagonal of the spectral plane; they are removable and skipped.
    const double den_tol = 1e-8;
    CKahan total;
    for (size_t k = 0; k < grid.nodes.size(); ++k) {
        double t1 = grid.nodes[k].t1, t2 = grid.nodes[k].t2;
        double x1 = (t1 - t2) / 3.0;
        double x2 = (t1 + 2.0 * t2) / 3.0;
        double x3 = -x1 - x2;
        double m0, sign;
        if (e1 > 0) { // ++
            m0 = -std::log(24.0 * PI * PI) + log_cosh(1.5 * PI * x1) +
                 log_cosh(1.5 * PI * x2) + log_cosh(1.5 * PI * x3);
            sign = 1.0;
        } else { // --
            if (std::abs(x1) < den_tol || std::abs(x2) < den_tol) continue;
            m0 = -std::log(32.0 * PI * PI) + log_cosh(1.5 * PI * x3) -
                 log_sinh_abs(1.5 * PI * x1) - log_sinh_abs(1.5 * PI * x2);
            sign = -(x1 > 0 ? 1.0 : -1.0) * (x2 > 0 ? 1.0 : -1.0);
        }
        long long i1 = gi.ratio * gi.it[k][0];
        long long i2 = gi.ratio * gi.it[k][1];
        long long i3 = -i1 - i2;
        auto idx = [&](int j) { return j == 0 ? i1 : j == 1 ? i2 : i3; };
        for (long long iv = -NV; iv <= NV; ++iv) {
            size_t ix = (size_t)(iv + NV);
            double v = q.step * (double)iv;
            Complex a = LG1[(size_t)(iv - i1 + NW)] + LG1[(size_t)(iv - i2 + NW)] +
                        LG1[(size_t)(iv - i3 + NW)];
            for (int j : sins1) a += LS1[(size_t)(iv - idx(j) + NW)];
            la[ix] = a - Complex(line1, v) * L1;
            Complex b = LG2[(size_t)(iv + i1 + NW)] + LG2[(size_t)(iv + i2 + NW)] +
                        LG2[(size_t)(iv + i3 + NW)];
            for (int j : sins2) b += LS2[(size_t)(iv + idx(j) + NW)];
            lb[ix] = b - Complex(line2, v) * L2;
        }
        Complex node{0, 0};
        double scp = convolve(0.5 * PI);
        Complex sp{0, 0};
        for (long long iu = 0; iu <= NU; ++iu)
            sp += bufC[(size_t)(iu + 2 * NV)] * Cp[(size_t)iu];
        node += std::exp(m0 + scp) * sp / (double)NF;
        double scm = convolve(-0.5 * PI);
        Complex sm{0, 0};
        for (long long iu = -NU; iu < 0; ++iu)
            sm += bufC[(size_t)(iu + 2 * NV)] * Cm[(size_t)(-iu)];
        node += std::exp(m0 + scm) * sm / (double)NF;
        total.add(grid.nodes[k].weight * sign * node);
    }
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pc);
    double st = q.step / (2.0 * PI);
    return total.value() * st * st;
}

Complex phi_w4(double y, const TestFunctionSpec& spec, const QuadratureSpec& q, double sigma0) {
    return phi_w4_on_grid(y, spectral::build_kernel_grid(spec, q), q, sigma0, false);
}

Complex phi_w5(double y, const TestFunctionSpec& spec, const QuadratureSpec& q, double sigma0) {
    return phi_w4_on_grid(y, spectral::build_kernel_grid(spec, q), q, sigma0, true);
}

Complex phi_wl(double y1, double y2, const TestFunctionSpec& spec, const QuadratureSpec& q,
               double line1, double line2) {
    return phi_wl_on_grid(y1, y2, spectral::build_kernel_grid(spec, q), q, line1, line2);
}

} // namespace rswb::kernels
