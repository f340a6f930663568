#include "rswb/workbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rswb/afe.hpp"
#include "rswb/arith.hpp"
#include "rswb/eisenstein.hpp"
#include "rswb/numerics.hpp"
#include "rswb/spectral.hpp"

namespace rswb::workbench {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using numerics::log_gamma;

namespace {

std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double_strict(const std::string& s, const std::string& where) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw DataError(where + ": cannot parse number '" + s + "'");
    }
}

long long parse_ll_strict(const std::string& s, const std::string& where) {
    try {
        size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw DataError(where + ": cannot parse integer '" + s + "'");
    }
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

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

constexpr double MAIN_NORM = 192.0; // main/diagonal prefactor is 1/(192 pi^5)

double main_prefactor() { return 1.0 / (MAIN_NORM * std::pow(PI, 5)); }

bool is_prime_ll(long long p) {
    if (p < 2) return false;
    auto fac = arith::factorize(p);
    return fac.size() == 1 && fac[0].second == 1;
}

} // namespace

QuadratureSpec WorkbenchConfig::quad() const {
    QuadratureSpec q;
    q.step = step;
    q.height = height;
    q.tolerance = tolerance;
    q.validate();
    return q;
}

TestFunctionSpec WorkbenchConfig::window() const { return TestFunctionSpec::centered(T, theta, A0); }

void WorkbenchConfig::validate_moment() const {
    if (k % 4 != 0 || k < 12) throw ValidationError("moment commands require k = 0 (mod 4), k >= 12");
    if (p != 1 && !is_prime_ll(p)) throw ValidationError("p must be prime or 1");
    quad();
    window();
}

std::string WorkbenchConfig::canonical_text() const {
    std::ostringstream os;
    os << "k=" << k << "\n"
       << "p=" << p << "\n"
       << "T=" << fmt_g(T) << "\n"
       << "theta=" << fmt_g(theta) << "\n"
       << "A0=" << A0 << "\n"
       << "step=" << fmt_g(step) << "\n"
       << "height=" << fmt_g(height) << "\n"
       << "tolerance=" << fmt_g(tolerance) << "\n"
       << "maass_data_path=" << maass_data_path << "\n"
       << "cache_dir=" << cache_dir << "\n"
       << "output_path=" << output_path << "\n";
    return os.str();
}

std::string WorkbenchConfig::hash_hex() const {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

static void apply_override_inner(WorkbenchConfig& cfg, const std::string& key,
                                 const std::string& value, const std::string& where) {
    if (key == "k")
        cfg.k = (int)parse_ll_strict(value, where);
    else if (key == "p")
        cfg.p = parse_ll_strict(value, where);
    else if (key == "T")
        cfg.T = parse_double_strict(value, where);
    else if (key == "theta")
        cfg.theta = parse_double_strict(value, where);
    else if (key == "A0")
        cfg.A0 = (int)parse_ll_strict(value, where);
    else if (key == "step")
        cfg.step = parse_double_strict(value, where);
    else if (key == "height")
        cfg.height = parse_double_strict(value, where);
    else if (key == "tolerance")
        cfg.tolerance = parse_double_strict(value, where);
    else if (key == "maass_data_path")
        cfg.maass_data_path = value;
    else if (key == "cache_dir")
        cfg.cache_dir = value;
    else if (key == "output_path")
        cfg.output_path = value;
    else
        throw ValidationError("unknown config key '" + key + "'");
}

void apply_override(WorkbenchConfig& cfg, const std::string& key, const std::string& value) {
    const std::string where = "config key '" + key + "'";
    // Bad config values are a validation failure, not a data-file failure.
    try {
        apply_override_inner(cfg, key, value, where);
    } catch (const DataError& e) {
        throw ValidationError(e.what());
    }
}

WorkbenchConfig parse_config_text(const std::string& text) {
    WorkbenchConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
        apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

WorkbenchConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

namespace {

// ---- shared table machinery for the inner contours -------------------

// The inner contours all carry e^{s^2}, so truncating the s-line at
// |Im s| = 12 leaves a tail below e^{9-144}; the grids they are paired
// with are integer multiples of q.step, letting every Gamma / L value
// come from one lattice table.
constexpr double INNER_HEIGHT = 12.0;

struct InnerContour {
    long long NV;
    std::vector<Complex> zv; // (step/2pi) (8pi^3 y)^{-s} e^{s^2} / s per node
    double sigma;
};

InnerContour make_inner_contour(const QuadratureSpec& q, double sigma, double y) {
    InnerContour c;
    c.sigma = sigma;
    c.NV = (long long)std::floor(INNER_HEIGHT / q.step + 1e-9);
    c.zv.resize((size_t)(2 * c.NV + 1));
    double lx = std::log(y) + std::log(8.0) + 3.0 * std::log(PI);
    for (long long iv = -c.NV; iv <= c.NV; ++iv) {
        Complex s{sigma, q.step * (double)iv};
        c.zv[(size_t)(iv + c.NV)] = (q.step / (2.0 * PI)) * std::exp(s * s - s * lx) / s;
    }
    return c;
}

long long grid_ratio(double t_step, const QuadratureSpec& q) {
    long long r = (long long)std::llround(t_step / q.step);
    if (r < 1 || std::abs(t_step - (double)r * q.step) > 1e-9 * q.step)
        throw InternalError("lattice spacing is not an integer multiple of q.step");
    return r;
}

// log Gamma(re0 + i w) on the w-lattice, |index| <= NW
std::vector<Complex> gamma_table(double re0, long long NW, double step) {
    std::vector<Complex> t((size_t)(2 * NW + 1));
    for (long long iw = -NW; iw <= NW; ++iw)
        t[(size_t)(iw + NW)] = log_gamma(Complex(re0, step * (double)iw));
    return t;
}

// sum over grid nodes of weight * W_k(y; mu(node)) where W is the V (or
// tilde) weight; table-driven version of afe::v_weight for whole grids
Complex weighted_weight_sum(const spectral::SpectralGrid& grid, const QuadratureSpec& q, int k,
                            double y, bool tilde) {
    if (grid.nodes.empty()) return {0, 0};
    long long r = grid_ratio(grid.t_step, q);
    long long maxI = 0;
    std::vector<std::array<long long, 2>> idx(grid.nodes.size());
    for (size_t i = 0; i < grid.nodes.size(); ++i) {
        long long i1 = (long long)std::llround(grid.nodes[i].t1 / grid.t_step);
        long long i2 = (long long)std::llround(grid.nodes[i].t2 / grid.t_step);
        idx[i] = {i1, i2};
        maxI = std::max({maxI, std::llabs(i1), std::llabs(i2), std::llabs(i1 + i2)});
    }
    double lx = std::log(y) + std::log(8.0) + 3.0 * std::log(PI);
    double sigma = lx >= 0.0 ? 3.0 : -3.0;
    InnerContour c = make_inner_contour(q, sigma, y);
    long long NW = c.NV + r * maxI;
    double sgn = tilde ? 1.0 : -1.0;
    // numerator Gamma(sigma + k/2 + i(v -+ t_j)), denominator Gamma(k/2 - mu_j)
    std::vector<Complex> TG = gamma_table(sigma + 0.5 * (double)k, NW, q.step);
    std::vector<Complex> DG = gamma_table(0.5 * (double)k, r * maxI, q.step);
    long long DW = r * maxI;
    CKahan acc;
    for (size_t i = 0; i < grid.nodes.size(); ++i) {
        long long j1 = r * idx[i][0], j2 = r * idx[i][1], j3 = -j1 - j2;
        Complex dlog = DG[(size_t)(-j1 + DW)] + DG[(size_t)(-j2 + DW)] + DG[(size_t)(-j3 + DW)];
        Complex s{0, 0};
        // V uses indices iv - j, tilde flips the sign of mu_j
        long long f1 = (long long)sgn * j1, f2 = (long long)sgn * j2, f3 = (long long)sgn * j3;
        for (long long iv = -c.NV; iv <= c.NV; ++iv) {
            Complex num = TG[(size_t)(iv + f1 + NW)] + TG[(size_t)(iv + f2 + NW)] +
                          TG[(size_t)(iv + f3 + NW)];
            s += c.zv[(size_t)(iv + c.NV)] * std::exp(num - dlog);
        }
        if (sigma < 0.0) {
            // residue at s = 0: 1 for V, PiGamma for tilde
            if (!tilde)
                s += 1.0;
            else
                s += std::exp(DG[(size_t)(j1 + DW)] + DG[(size_t)(j2 + DW)] +
                              DG[(size_t)(j3 + DW)] - dlog);
        }
        acc.add(grid.nodes[i].weight * s);
    }
    return acc.value();
}

// union-of-Weyl-boxes lattice carrying plain h values (no measure factor)
struct WindowNode {
    long long i1, i2;
    double h;
};

struct WindowLattice {
    double t_step = 0;
    std::vector<WindowNode> nodes; // pruned, ascending (i1, i2)
    long long max_abs = 0;
};

std::array<std::array<int, 3>, 6> weyl_perms() {
    return {{{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}}};
}

WindowLattice build_window_lattice(const TestFunctionSpec& spec, const QuadratureSpec& q) {
    WindowLattice lat;
    long long mult = std::max((long long)1, (long long)std::llround(spec.M / 0.4));
    lat.t_step = q.step * (double)mult;
    double radius = 12.0 * spec.M;
    double t0[3] = {spec.mu0.mu[0].imag(), spec.mu0.mu[1].imag(), spec.mu0.mu[2].imag()};
    std::set<std::pair<long long, long long>> pts;
    for (const auto& pm : weyl_perms()) {
        double c1 = t0[pm[0]], c2 = t0[pm[1]];
        long long lo1 = (long long)std::ceil((c1 - radius) / lat.t_step);
        long long hi1 = (long long)std::floor((c1 + radius) / lat.t_step);
        long long lo2 = (long long)std::ceil((c2 - radius) / lat.t_step);
        long long hi2 = (long long)std::floor((c2 + radius) / lat.t_step);
        for (long long i1 = lo1; i1 <= hi1; ++i1)
            for (long long i2 = lo2; i2 <= hi2; ++i2) pts.insert({i1, i2});
    }
    std::vector<WindowNode> all;
    all.reserve(pts.size());
    double hmax = 0.0;
    for (const auto& pr : pts) {
        double h = spectral::test_function_axis(lat.t_step * (double)pr.first,
                                                lat.t_step * (double)pr.second, spec);
        hmax = std::max(hmax, h);
        all.push_back({pr.first, pr.second, h});
    }
    for (const auto& nd : all) {
        if (nd.h > 1e-18 * hmax) {
            lat.nodes.push_back(nd);
            lat.max_abs = std::max({lat.max_abs, std::llabs(nd.i1), std::llabs(nd.i2),
                                    std::llabs(nd.i1 + nd.i2)});
        }
    }
    return lat;
}

// L(1/2 + sigma + i w, f) on the w-lattice
std::vector<Complex> l_value_table(const gl2::HolomorphicForm& f, double sigma, long long NW,
                                   const QuadratureSpec& q) {
    std::vector<Complex> t((size_t)(2 * NW + 1));
    for (long long iw = -NW; iw <= NW; ++iw)
        t[(size_t)(iw + NW)] = gl2::l_value(f, Complex(0.5 + sigma, q.step * (double)iw), q);
    return t;
}

} // namespace

Complex main_term(const WorkbenchConfig& cfg) {
    cfg.validate_moment();
    auto spec = cfg.window();
    auto q = cfg.quad();
    auto grid = spectral::build_moment_grid(spec, q);
    if (grid.nodes.empty()) return {0, 0};
    long long r = grid_ratio(grid.t_step, q);
    long long maxI = 0;
    std::vector<std::array<long long, 2>> idx(grid.nodes.size());
    for (size_t i = 0; i < grid.nodes.size(); ++i) {
        long long i1 = (long long)std::llround(grid.nodes[i].t1 / grid.t_step);
        long long i2 = (long long)std::llround(grid.nodes[i].t2 / grid.t_step);
        idx[i] = {i1, i2};
        maxI = std::max({maxI, std::llabs(i1), std::llabs(i2), std::llabs(i1 + i2)});
    }
    long long DW = r * maxI;
    std::vector<Complex> DG = gamma_table(0.5 * (double)cfg.k, DW, q.step);
    CKahan acc;
    for (size_t i = 0; i < grid.nodes.size(); ++i) {
        long long j1 = r * idx[i][0], j2 = r * idx[i][1], j3 = -j1 - j2;
        Complex pig = std::exp(DG[(size_t)(j1 + DW)] + DG[(size_t)(j2 + DW)] +
                               DG[(size_t)(j3 + DW)] - DG[(size_t)(-j1 + DW)] -
                               DG[(size_t)(-j2 + DW)] - DG[(size_t)(-j3 + DW)]);
        acc.add(grid.nodes[i].weight * (1.0 + pig));
    }
    return acc.value() * main_prefactor();
}

Complex diagonal_term(const WorkbenchConfig& cfg, const gl2::HolomorphicForm& f) {
    cfg.validate_moment();
    if (f.k != cfg.k) throw ValidationError("diagonal_term: form weight does not match config");
    auto spec = cfg.window();
    auto q = cfg.quad();
    double lam = f(cfg.p); // DataError if p is outside the table
    auto grid = spectral::build_moment_grid(spec, q);
    double y = (double)cfg.p * (double)cfg.p * (double)cfg.p;
    Complex integral = weighted_weight_sum(grid, q, cfg.k, y, false);
    return lam / std::pow((double)cfg.p, 1.5) * main_prefactor() * integral;
}

Complex eis_min_inner(const gl2::HolomorphicForm& f, const LanglandsParameter& mu,
                      const QuadratureSpec& q, double sigma) {
    mu.check_sum();
    if (!(sigma >= 1.6))
        throw ValidationError("eis_min_inner: contour must stay in the region of absolute "
                              "convergence of the L-factors (Re s > 1.6)");
    Complex dlog{0, 0};
    for (const auto& m : mu.mu) dlog += log_gamma(0.5 * (double)f.k - m);
    double l8 = std::log(8.0) + 3.0 * std::log(PI);
    auto integrand = [&](Complex s) {
        Complex lg = s * s - s * l8 - dlog;
        Complex lfac{1, 0};
        for (const auto& m : mu.mu) {
            lg += log_gamma(s + 0.5 * (double)f.k - m);
            lfac *= gl2::l_value(f, 0.5 + s - m, q);
        }
        return std::exp(lg) * lfac / s;
    };
    return numerics::vertical_line_integral(integrand, sigma, q);
}

EisMinTerm eis_min_term(const WorkbenchConfig& cfg, const gl2::HolomorphicForm& f) {
    cfg.validate_moment();
    if (f.k != cfg.k) throw ValidationError("eis_min_term: form weight does not match config");
    auto spec = cfg.window();
    auto q = cfg.quad();
    WindowLattice lat = build_window_lattice(spec, q);
    EisMinTerm out;
    if (lat.nodes.empty()) return out;
    long long r = grid_ratio(lat.t_step, q);
    InnerContour c = make_inner_contour(q, 3.0, 1.0);
    long long NW = c.NV + r * lat.max_abs;
    std::vector<Complex> TG = gamma_table(3.0 + 0.5 * (double)cfg.k, NW, q.step);
    std::vector<Complex> LT = l_value_table(f, 3.0, NW, q);
    long long DW = r * lat.max_abs;
    std::vector<Complex> DG = gamma_table(0.5 * (double)cfg.k, DW, q.step);
    CKahan acc;
    for (const auto& nd : lat.nodes) {
        double t1 = lat.t_step * (double)nd.i1, t2 = lat.t_step * (double)nd.i2;
        double x1 = (t1 - t2) / 3.0, x2 = (t1 + 2.0 * t2) / 3.0, x3 = -x1 - x2;
        double m3 = std::min({std::abs(3.0 * x1), std::abs(3.0 * x2), std::abs(3.0 * x3)});
        if (m3 <= 1e-8) continue; // removable zeta pole; h vanishes quadratically
        if (m3 < 1e-3) out.pole_warning = true;
        eis::MinimalEisenstein E{LanglandsParameter::from_imag(t1, t2, -t1 - t2)};
        double nmin = eis::min_normalizer(E);
        Complex A = eis::a_min(E, cfg.p, cfg.p);
        long long j1 = r * nd.i1, j2 = r * nd.i2, j3 = -j1 - j2;
        Complex dlog = DG[(size_t)(-j1 + DW)] + DG[(size_t)(-j2 + DW)] + DG[(size_t)(-j3 + DW)];
        Complex s{0, 0};
        for (long long iv = -c.NV; iv <= c.NV; ++iv) {
            Complex num = TG[(size_t)(iv - j1 + NW)] + TG[(size_t)(iv - j2 + NW)] +
                          TG[(size_t)(iv - j3 + NW)];
            Complex lfac = LT[(size_t)(iv - j1 + NW)] * LT[(size_t)(iv - j2 + NW)] *
                           LT[(size_t)(iv - j3 + NW)];
            s += c.zv[(size_t)(iv + c.NV)] * std::exp(num - dlog) * lfac;
        }
        acc.add(nd.h * A / nmin * s);
    }
    out.value = acc.value() * lat.t_step * lat.t_step / (96.0 * PI * PI);
    return out;
}

namespace {

struct MaxLineResult {
    Complex value{0, 0};
    std::vector<double> peak_h; // per record
};

MaxLineResult eis_max_at_width(const WorkbenchConfig& cfg, const gl2::HolomorphicForm& f,
                               const std::vector<gl2::MaassFormRecord>& records, double W) {
    auto spec = cfg.window();
    auto q = cfg.quad();
    long long mult = std::max((long long)1, (long long)std::llround(spec.M / 0.4));
    double tstep = q.step * (double)mult;
    long long jmax = (long long)std::floor(W / tstep + 1e-9);
    InnerContour c = make_inner_contour(q, 3.0, 1.0);
    long long NS = c.NV + 2 * mult * jmax; // span of v + 2w indices
    long long NX = c.NV + mult * jmax;     // span of v - w indices
    std::vector<Complex> TG0 = gamma_table(3.0 + 0.5 * (double)cfg.k, NS, q.step);
    std::vector<Complex> LF = l_value_table(f, 3.0, NS, q);

    // prepass: h on every (record, w) point; global reference scale
    double t00 = spec.mu0.mu[0].imag(), t01 = spec.mu0.mu[1].imag();
    double h_ref = spectral::test_function_axis(t00, t01, spec);
    MaxLineResult out;
    out.peak_h.assign(records.size(), 0.0);
    std::vector<std::vector<double>> hline(records.size());
    for (size_t g = 0; g < records.size(); ++g) {
        hline[g].resize((size_t)(2 * jmax + 1));
        for (long long jw = -jmax; jw <= jmax; ++jw) {
            double w = tstep * (double)jw;
            double h = spectral::test_function_axis(w + records[g].t_g, w - records[g].t_g, spec);
            hline[g][(size_t)(jw + jmax)] = h;
            out.peak_h[(size_t)g] = std::max(out.peak_h[(size_t)g], h);
        }
        h_ref = std::max(h_ref, out.peak_h[(size_t)g]);
    }

    CKahan total;
    for (size_t g = 0; g < records.size(); ++g) {
        const auto& rec = records[g];
        // per-record Gamma tables: arguments 3 + k/2 + i(x step -+ t_g)
        std::vector<Complex> TG1((size_t)(2 * NX + 1)), TG2((size_t)(2 * NX + 1));
        std::vector<Complex> RS((size_t)(2 * NX + 1));
        bool tables_built = false;
        CKahan rec_acc;
        for (long long jw = -jmax; jw <= jmax; ++jw) {
            double h = hline[g][(size_t)(jw + jmax)];
            if (h <= 1e-18 * h_ref) continue;
            if (!tables_built) {
                for (long long x = -NX; x <= NX; ++x) {
                    TG1[(size_t)(x + NX)] = log_gamma(
                        Complex(3.0 + 0.5 * (double)cfg.k, q.step * (double)x - rec.t_g));
                    TG2[(size_t)(x + NX)] = log_gamma(
                        Complex(3.0 + 0.5 * (double)cfg.k, q.step * (double)x + rec.t_g));
                    RS[(size_t)(x + NX)] =
                        gl2::rankin_selberg_gl2_value(f, rec,
                                                      Complex(3.5, q.step * (double)x))
                            .value;
                }
                tables_built = true;
            }
            double w = tstep * (double)jw;
            eis::MaximalEisenstein E{Complex(0.0, w), rec};
            double nmax = eis::max_normalizer(E);
            Complex A = eis::a_max(E, cfg.p, cfg.p);
            LanglandsParameter mu = E.parameter();
            Complex dlog{0, 0};
            for (const auto& m : mu.mu) dlog += log_gamma(0.5 * (double)cfg.k - m);
            long long ju = mult * jw; // w in q.step units
            Complex s{0, 0};
            for (long long iv = -c.NV; iv <= c.NV; ++iv) {
                Complex num = TG1[(size_t)(iv - ju + NX)] + TG2[(size_t)(iv - ju + NX)] +
                              TG0[(size_t)(iv + 2 * ju + NS)];
                Complex lfac = LF[(size_t)(iv + 2 * ju + NS)] * RS[(size_t)(iv - ju + NX)];
                s += c.zv[(size_t)(iv + c.NV)] * std::exp(num - dlog) * lfac;
            }
            rec_acc.add(h * A / nmax * s);
        }
        total.add(rec_acc.value() * tstep);
    }
    out.value = total.value() / (2.0 * PI);
    return out;
}

} // namespace

EisMaxTerm eis_max_term(const WorkbenchConfig& cfg, const gl2::HolomorphicForm& f,
                        const std::vector<gl2::MaassFormRecord>& records) {
    cfg.validate_moment();
    if (f.k != cfg.k) throw ValidationError("eis_max_term: form weight does not match config");
    if (records.empty())
        throw DataError("eis_max_term: no Maass records supplied (maximal term needs data)");
    auto spec = cfg.window();
    double t0m = 0.0;
    for (const auto& m : spec.mu0.mu) t0m = std::max(t0m, std::abs(m.imag()));
    double tgm = 0.0;
    for (const auto& r : records) tgm = std::max(tgm, std::abs(r.t_g));
    double W = t0m + tgm + 12.0 * spec.M;

    MaxLineResult v1 = eis_max_at_width(cfg, f, records, W);
    MaxLineResult v2 = eis_max_at_width(cfg, f, records, 2.0 * W);

    EisMaxTerm out;
    out.value = v1.value;
    out.doubling_residual = std::abs(v2.value - v1.value);
    double peak_all = 0.0;
    for (double ph : v1.peak_h) peak_all = std::max(peak_all, ph);
    double t00 = spec.mu0.mu[0].imag(), t01 = spec.mu0.mu[1].imag();
    double ref = std::max(peak_all, spectral::test_function_axis(t00, t01, spec));
    std::ostringstream ds;
    ds << "maximal-series coverage from " << records.size() << " supplied record(s): ";
    for (size_t g = 0; g < records.size(); ++g) {
        bool contributes = v1.peak_h[g] > 1e-12 * ref;
        if (contributes) ++out.contributing;
        if (g) ds << ", ";
        ds << "t_g=" << fmt_g(records[g].t_g) << (contributes ? " (in window)" : " (negligible)");
    }
    ds << "; completeness of the underlying eigenvalue list is not claimed.";
    out.disclaimer = ds.str();
    return out;
}

// ---- report serialization --------------------------------------------

namespace {

json cplx_json(Complex z) {
    json j;
    j["re"] = fmt_g(z.real());
    j["im"] = fmt_g(z.imag());
    return j;
}

Complex cplx_parse(const json& j) {
    return {parse_double_strict(j.at("re").get<std::string>(), "report complex"),
            parse_double_strict(j.at("im").get<std::string>(), "report complex")};
}

std::string now_utc() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string MomentReport::to_json_text() const {
    json j;
    j["schema"] = "moment-report-v1";
    json jc;
    jc["k"] = cfg.k;
    jc["p"] = cfg.p;
    jc["T"] = fmt_g(cfg.T);
    jc["theta"] = fmt_g(cfg.theta);
    jc["A0"] = cfg.A0;
    jc["step"] = fmt_g(cfg.step);
    jc["height"] = fmt_g(cfg.height);
    jc["tolerance"] = fmt_g(cfg.tolerance);
    jc["maass_data_path"] = cfg.maass_data_path;
    jc["cache_dir"] = cfg.cache_dir;
    jc["output_path"] = cfg.output_path;
    j["config"] = jc;
    j["config_hash"] = config_hash;
    j["timestamp"] = timestamp;
    j["incomplete"] = incomplete;
    j["error"] = error;
    j["main_term"] = cplx_json(main);
    j["diagonal_term"] = cplx_json(diagonal);
    j["eis_min_term"] = cplx_json(eis_min);
    j["eis_min_pole_warning"] = eis_min_pole_warning;
    if (has_eis_max) {
        j["eis_max_term"] = cplx_json(eis_max);
        j["eis_max_disclaimer"] = eis_max_disclaimer;
    } else {
        j["eis_max_term"] = nullptr;
        j["eis_max_disclaimer"] = "";
    }
    json jd;
    jd["h_spectral_integral"] = fmt_g(h_integral);
    jd["t3m2"] = fmt_g(t3m2);
    jd["main_over_t3m2"] = cplx_json(main_over_t3m2);
    jd["structural_sum"] = cplx_json(structural_sum);
    jd["structural_rel_dev"] = fmt_g(structural_rel_dev);
    jd["diagonal_ratio"] = cplx_json(diagonal_ratio);
    jd["diagonal_ratio_target"] = cplx_json(diagonal_ratio_target);
    jd["main_halfstep_rel"] = fmt_g(main_halfstep_rel);
    jd["u_line_doubling"] = fmt_g(u_line_doubling);
    jd["theorem_threshold"] = fmt_g(theorem_threshold);
    jd["theorem_condition"] = theorem_condition;
    j["diagnostics"] = jd;
    return j.dump(2) + "\n";
}

MomentReport MomentReport::parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw DataError(std::string("report parse failure: ") + e.what());
    }
    MomentReport r;
    const json& jc = j.at("config");
    r.cfg.k = jc.at("k").get<int>();
    r.cfg.p = jc.at("p").get<long long>();
    r.cfg.T = parse_double_strict(jc.at("T").get<std::string>(), "report T");
    r.cfg.theta = parse_double_strict(jc.at("theta").get<std::string>(), "report theta");
    r.cfg.A0 = jc.at("A0").get<int>();
    r.cfg.step = parse_double_strict(jc.at("step").get<std::string>(), "report step");
    r.cfg.height = parse_double_strict(jc.at("height").get<std::string>(), "report height");
    r.cfg.tolerance =
        parse_double_strict(jc.at("tolerance").get<std::string>(), "report tolerance");
    r.cfg.maass_data_path = jc.at("maass_data_path").get<std::string>();
    r.cfg.cache_dir = jc.at("cache_dir").get<std::string>();
    r.cfg.output_path = jc.at("output_path").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.incomplete = j.at("incomplete").get<bool>();
    r.error = j.at("error").get<std::string>();
    r.main = cplx_parse(j.at("main_term"));
    r.diagonal = cplx_parse(j.at("diagonal_term"));
    r.eis_min = cplx_parse(j.at("eis_min_term"));
    r.eis_min_pole_warning = j.at("eis_min_pole_warning").get<bool>();
    r.has_eis_max = !j.at("eis_max_term").is_null();
    if (r.has_eis_max) r.eis_max = cplx_parse(j.at("eis_max_term"));
    r.eis_max_disclaimer = j.at("eis_max_disclaimer").get<std::string>();
    const json& jd = j.at("diagnostics");
    r.h_integral =
        parse_double_strict(jd.at("h_spectral_integral").get<std::string>(), "report h");
    r.t3m2 = parse_double_strict(jd.at("t3m2").get<std::string>(), "report t3m2");
    r.main_over_t3m2 = cplx_parse(jd.at("main_over_t3m2"));
    r.structural_sum = cplx_parse(jd.at("structural_sum"));
    r.structural_rel_dev = parse_double_strict(jd.at("structural_rel_dev").get<std::string>(),
                                               "report structural_rel_dev");
    r.diagonal_ratio = cplx_parse(jd.at("diagonal_ratio"));
    r.diagonal_ratio_target = cplx_parse(jd.at("diagonal_ratio_target"));
    r.main_halfstep_rel = parse_double_strict(jd.at("main_halfstep_rel").get<std::string>(),
                                              "report main_halfstep_rel");
    r.u_line_doubling =
        parse_double_strict(jd.at("u_line_doubling").get<std::string>(), "report u_line");
    r.theorem_threshold = parse_double_strict(jd.at("theorem_threshold").get<std::string>(),
                                              "report theorem_threshold");
    r.theorem_condition = jd.at("theorem_condition").get<bool>();
    return r;
}

namespace {

void write_report_file(const MomentReport& rep) {
    fs::path p(rep.cfg.output_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw DataError("cannot write report file " + rep.cfg.output_path);
    out << rep.to_json_text();
}

} // namespace

MomentReport moment_report(const WorkbenchConfig& cfg) {
    cfg.validate_moment();
    MomentReport rep;
    rep.cfg = cfg;
    rep.config_hash = cfg.hash_hex();
    rep.timestamp = now_utc();
    rep.t3m2 = std::pow(cfg.T, 3.0) * std::pow(std::pow(cfg.T, cfg.theta), 2.0);
    rep.theorem_threshold = std::pow((double)cfg.p, 3.0 + 7.0 / 16.0);
    rep.theorem_condition = cfg.T >= rep.theorem_threshold;
    try {
        auto spec = cfg.window();
        auto q = cfg.quad();
        long long n_max = std::max((long long)2048, cfg.p + 1);
        gl2::HolomorphicForm f = cached_eigenform(cfg, cfg.k, n_max);

        rep.h_integral = spectral::h_spectral_integral(spec, q);
        rep.main = main_term(cfg);
        rep.main_over_t3m2 = rep.main / rep.t3m2;
        {
            WorkbenchConfig half = cfg;
            half.step = cfg.step / 2.0;
            Complex m2 = main_term(half);
            rep.main_halfstep_rel = std::abs(m2 - rep.main) / std::max(1e-300, std::abs(rep.main));
        }
        rep.diagonal = diagonal_term(cfg, f);
        Complex diag1 = rep.diagonal;
        if (cfg.p != 1) {
            WorkbenchConfig c1 = cfg;
            c1.p = 1;
            diag1 = diagonal_term(c1, f);
        }
        rep.diagonal_ratio = rep.diagonal / diag1;
        rep.diagonal_ratio_target = f(cfg.p) / std::pow((double)cfg.p, 1.5);
        {
            auto grid = spectral::build_moment_grid(spec, q);
            Complex tside =
                weighted_weight_sum(grid, q, cfg.k, 1.0, true) * main_prefactor();
            rep.structural_sum = diag1 + tside;
            rep.structural_rel_dev =
                std::abs(rep.structural_sum - rep.main) / std::max(1e-300, std::abs(rep.main));
        }
        EisMinTerm emin = eis_min_term(cfg, f);
        rep.eis_min = emin.value;
        rep.eis_min_pole_warning = emin.pole_warning;
        if (!cfg.maass_data_path.empty()) {
            auto records = gl2::ingest_maass_data(cfg.maass_data_path);
            EisMaxTerm emax = eis_max_term(cfg, f, records);
            rep.has_eis_max = true;
            rep.eis_max = emax.value;
            rep.eis_max_disclaimer = emax.disclaimer;
            rep.u_line_doubling = emax.doubling_residual;
        }
    } catch (const std::exception& e) {
        rep.incomplete = true;
        rep.error = e.what();
        write_report_file(rep);
        throw;
    }
    write_report_file(rep);
    return rep;
}

// ---- caches ------------------------------------------------------------

void write_coefficient_cache(const std::string& path, const gl2::HolomorphicForm& f) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw DataError("cannot write cache file " + path);
    out << "n,value\n";
    for (long long n = 1; n <= f.n_max; ++n) out << n << "," << fmt_g(f(n)) << "\n";
}

gl2::HolomorphicForm read_coefficient_cache(const std::string& path, int expect_k) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open cache file " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "n,value")
        throw DataError("cache file " + path + " corrupt at line 1: expected header n,value");
    gl2::HolomorphicForm f;
    f.k = expect_k;
    f.lambda.push_back(0.0);
    long long expect = 1;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() && in.eof()) break;
        auto cells = split_csv_line(line);
        const std::string where = "cache file " + path + " corrupt at line " +
                                  std::to_string(lineno);
        if (cells.size() != 2) throw DataError(where + ": expected n,value");
        long long n = parse_ll_strict(cells[0], where);
        if (n != expect) throw DataError(where + ": expected n = " + std::to_string(expect));
        f.lambda.push_back(parse_double_strict(cells[1], where));
        ++expect;
    }
    f.n_max = expect - 1;
    return f;
}

gl2::HolomorphicForm cached_eigenform(const WorkbenchConfig& cfg, int k, long long n_max) {
    if (cfg.cache_dir.empty()) return gl2::build_eigenform(k, n_max);
    fs::path p = fs::path(cfg.cache_dir) / ("coeff_k" + std::to_string(k) + "_N" +
                                            std::to_string(n_max) + ".csv");
    if (fs::exists(p)) {
        gl2::HolomorphicForm f = read_coefficient_cache(p.string(), k);
        if (f.n_max != n_max)
            throw DataError("cache file " + p.string() + " holds " + std::to_string(f.n_max) +
                            " rows, expected " + std::to_string(n_max));
        return f;
    }
    gl2::HolomorphicForm f = gl2::build_eigenform(k, n_max);
    write_coefficient_cache(p.string(), f);
    return f;
}

void write_kloosterman_cache(const std::string& path,
                             const std::vector<KloostermanCacheEntry>& entries) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw DataError("cannot write cache file " + path);
    out << "kind,n1,n2,m1,m2,D1,D2,re,im\n";
    for (const auto& e : entries) {
        if (e.kind != "complete" && e.kind != "incomplete")
            throw ValidationError("kloosterman cache kind must be complete|incomplete");
        out << e.kind << "," << e.in.n1 << "," << e.in.n2 << "," << e.in.m1 << "," << e.in.m2
            << "," << e.in.D1 << "," << e.in.D2 << "," << fmt_g(e.value.real()) << ","
            << fmt_g(e.value.imag()) << "\n";
    }
}

std::vector<KloostermanCacheEntry> read_kloosterman_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open cache file " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "kind,n1,n2,m1,m2,D1,D2,re,im")
        throw DataError("cache file " + path + " corrupt at line 1: bad header");
    std::vector<KloostermanCacheEntry> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() && in.eof()) break;
        auto cells = split_csv_line(line);
        const std::string where = "cache file " + path + " corrupt at line " +
                                  std::to_string(lineno);
        if (cells.size() != 9) throw DataError(where + ": expected 9 fields");
        KloostermanCacheEntry e;
        e.kind = cells[0];
        if (e.kind != "complete" && e.kind != "incomplete")
            throw DataError(where + ": bad kind '" + e.kind + "'");
        e.in.n1 = parse_ll_strict(cells[1], where);
        e.in.n2 = parse_ll_strict(cells[2], where);
        e.in.m1 = parse_ll_strict(cells[3], where);
        e.in.m2 = parse_ll_strict(cells[4], where);
        e.in.D1 = parse_ll_strict(cells[5], where);
        e.in.D2 = parse_ll_strict(cells[6], where);
        e.value = {parse_double_strict(cells[7], where), parse_double_strict(cells[8], where)};
        out.push_back(e);
    }
    return out;
}

bool cache_roundtrip(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open cache file " + path);
    std::string header;
    std::getline(in, header);
    in.close();
    std::string tmp = path + ".roundtrip";
    if (trim(header) == "n,value") {
        gl2::HolomorphicForm a = read_coefficient_cache(path, 12);
        write_coefficient_cache(tmp, a);
        gl2::HolomorphicForm b = read_coefficient_cache(tmp, 12);
        fs::remove(tmp);
        if (a.n_max != b.n_max) throw InternalError("cache roundtrip: row count changed");
        for (long long n = 1; n <= a.n_max; ++n)
            if (a(n) != b(n))
                throw InternalError("cache roundtrip: value changed at n = " +
                                    std::to_string(n));
        return true;
    }
    if (trim(header) == "kind,n1,n2,m1,m2,D1,D2,re,im") {
        auto a = read_kloosterman_cache(path);
        write_kloosterman_cache(tmp, a);
        auto b = read_kloosterman_cache(tmp);
        fs::remove(tmp);
        if (a.size() != b.size()) throw InternalError("cache roundtrip: row count changed");
        for (size_t i = 0; i < a.size(); ++i) {
            bool same = a[i].kind == b[i].kind && a[i].in.n1 == b[i].in.n1 &&
                        a[i].in.n2 == b[i].in.n2 && a[i].in.m1 == b[i].in.m1 &&
                        a[i].in.m2 == b[i].in.m2 && a[i].in.D1 == b[i].in.D1 &&
                        a[i].in.D2 == b[i].in.D2 && a[i].value == b[i].value;
            if (!same)
                throw InternalError("cache roundtrip: entry " + std::to_string(i + 1) +
                                    " changed");
        }
        return true;
    }
    throw DataError("cache file " + path + " corrupt at line 1: unrecognized header '" +
                    trim(header) + "'");
}

} // namespace rswb::workbench
