// Command-line workbench. Subcommands mirror the library surface:
// exploratory probes print measured values and exit 0; explicit checks
// exit 1 on a failed comparison. Library errors map to stable exit codes:
// 2 invalid input, 3 non-convergence, 4 missing or corrupt data.
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rswb/afe.hpp"
#include "rswb/arith.hpp"
#include "rswb/eisenstein.hpp"
#include "rswb/errors.hpp"
#include "rswb/gl2.hpp"
#include "rswb/kernels.hpp"
#include "rswb/kloosterman.hpp"
#include "rswb/spectral.hpp"
#include "rswb/types.hpp"
#include "rswb/voronoi.hpp"
#include "rswb/workbench.hpp"

using namespace rswb;

namespace {

// Config plumbing shared by the subcommands: an optional --config file is
// parsed first, then any explicitly supplied flag overrides that key.
struct CfgFlags {
    std::string config_path;
    std::map<std::string, std::string> flag_values;
    std::vector<std::string> flag_order;

    void add_to(CLI::App* cmd, const std::vector<std::string>& keys) {
        cmd->add_option("--config", config_path, "key = value config file");
        for (const std::string& key : keys) {
            auto cb = [this, key](const std::string& v) {
                if (!flag_values.count(key)) flag_order.push_back(key);
                flag_values[key] = v;
            };
            cmd->add_option_function<std::string>("--" + key, cb,
                                                  "config key '" + key + "'");
        }
    }

    workbench::WorkbenchConfig resolve() const {
        workbench::WorkbenchConfig cfg;
        if (!config_path.empty()) cfg = workbench::parse_config_file(config_path);
        for (const std::string& key : flag_order)
            workbench::apply_override(cfg, key, flag_values.at(key));
        return cfg;
    }
};

const std::vector<std::string> kMomentKeys = {
    "k",         "p",    "T",         "theta",           "A0",       "step",
    "height",    "tolerance", "maass_data_path", "cache_dir", "output_path"};
const std::vector<std::string> kWindowKeys = {"k", "T", "theta", "A0", "step",
                                              "height", "tolerance"};

int cmd_kloosterman(long long n1, long long n2, long long m1, long long m2,
                    long long D1, long long D2, bool incomplete, int weil_max) {
    if (weil_max > 0) {
        auto rep = kloosterman::weil_bound_report(weil_max);
        for (const auto& row : rep.rows)
            std::printf("%s D1=%lld D2=%lld n=(%lld,%lld) m=(%lld,%lld) |S|=%.6f "
                        "bound=%.6f %s\n",
                        row.complete ? "complete  " : "incomplete", row.in.D1, row.in.D2,
                        row.in.n1, row.in.n2, row.in.m1, row.in.m2, row.abs_sum,
                        row.bound, row.pass ? "ok" : "VIOLATED");
        std::printf("%zu rows, worst ratio %.6f, %s\n", rep.rows.size(), rep.worst_ratio,
                    rep.all_pass ? "all within bound" : "BOUND VIOLATED");
        return rep.all_pass ? 0 : 1;
    }
    kloosterman::KloostermanInput in{n1, n2, m1, m2, D1, D2};
    Complex v = incomplete ? kloosterman::incomplete_kloosterman(in)
                           : kloosterman::complete_kloosterman(in);
    std::printf("%s(%lld,%lld;%lld,%lld;%lld,%lld) = %.12g %+.12gi  |.| = %.12g\n",
                incomplete ? "S_incomplete" : "S", n1, n2, m1, m2, D1, D2, v.real(),
                v.imag(), std::abs(v));
    return 0;
}

int cmd_afe_check(const CfgFlags& cf, long long n_max, double rel_tol) {
    workbench::WorkbenchConfig cfg = cf.resolve();
    gl2::HolomorphicForm f = workbench::cached_eigenform(cfg, cfg.k, n_max);
    TestFunctionSpec spec = cfg.window();
    const LanglandsParameter mu = spec.mu0;
    QuadratureSpec q = cfg.quad();

    eis::MinimalEisenstein e{mu};
    afe::CoefficientSource src;
    src.label = "minimal series";
    src.eval = [&e](long long m, long long n) { return eis::a_min(e, m, n); };
    afe::CentralValue cv = afe::afe_central_value(f, mu, src, q);

    QuadratureSpec ql;
    Complex prod{1.0, 0.0};
    for (int j = 0; j < 3; ++j) prod *= gl2::l_value(f, Complex(0.5, 0.0) - mu.mu[j], ql);

    double rel = std::abs(cv.value - prod) / std::abs(prod);
    std::printf("smoothed sum   = %.15g %+.15gi  (X_cut %lld, tail bound %.3g%s)\n",
                cv.value.real(), cv.value.imag(), (long long)cv.x_cut, cv.tail_bound,
                cv.cache_used ? ", cache hit" : "");
    std::printf("factored value = %.15g %+.15gi\n", prod.real(), prod.imag());
    std::printf("rel err = %.3g  (tol %.3g)\n", rel, rel_tol);
    return rel <= rel_tol ? 0 : 1;
}

int cmd_voronoi_check(int k, long long a, long long c, double center, double width,
                      const std::string& shape, long long n_max, double rel_tol) {
    voronoi::TestWindow F;
    F.center = center;
    F.width = width;
    if (shape == "compact")
        F.shape = voronoi::TestWindow::Shape::compact;
    else if (shape != "gaussian")
        throw ValidationError("shape must be gaussian or compact");
    gl2::HolomorphicForm f = gl2::build_eigenform(k, n_max);
    QuadratureSpec q;
    Complex lhs = voronoi::voronoi_lhs(f, a, c, F);
    voronoi::DualSide rhs = voronoi::voronoi_rhs(f, a, c, F, q);
    double resid = std::abs(lhs - rhs.value) / (1.0 + std::abs(lhs));
    std::printf("twisted sum = %.15g %+.15gi\n", lhs.real(), lhs.imag());
    std::printf("dual sum    = %.15g %+.15gi  (truncated at n = %lld%s)\n",
                rhs.value.real(), rhs.value.imag(), rhs.truncation_index,
                rhs.non_decay_warning ? ", NON-DECAY WARNING" : "");
    std::printf("normalized residual = %.3g  (tol %.3g)\n", resid, rel_tol);
    return resid <= rel_tol ? 0 : 1;
}

int cmd_spectral_scaling(const CfgFlags& cf, std::vector<double> Ts,
                         double max_variation) {
    workbench::WorkbenchConfig cfg = cf.resolve();
    if (Ts.empty()) Ts = {10.0, 20.0, 40.0};
    QuadratureSpec q = cfg.quad();
    double lo = 0, hi = 0;
    bool first = true;
    for (double T : Ts) {
        TestFunctionSpec spec = TestFunctionSpec::centered(T, cfg.theta, cfg.A0);
        double I = spectral::h_spectral_integral(spec, q);
        double M = std::pow(T, cfg.theta);
        double ratio = I / (T * T * T * M * M);
        std::printf("T = %6.1f  integral = %.6e  integral / (T^3 M^2) = %.6e\n", T, I,
                    ratio);
        lo = first ? ratio : std::min(lo, ratio);
        hi = first ? ratio : std::max(hi, ratio);
        first = false;
    }
    double variation = (hi - lo) / lo;
    std::printf("variation (max-min)/min = %.4g\n", variation);
    if (max_variation > 0) {
        std::printf("gate: %s (tol %.3g)\n",
                    variation < max_variation ? "pass" : "FAIL", max_variation);
        return variation < max_variation ? 0 : 1;
    }
    return 0;
}

int cmd_kernels_decay(const CfgFlags& cf, const std::string& kernel,
                      std::vector<double> ys, double sigma0, double line1,
                      double line2) {
    workbench::WorkbenchConfig cfg = cf.resolve();
    QuadratureSpec q = cfg.quad();
    TestFunctionSpec spec = cfg.window();
    auto grid = spectral::build_kernel_grid(spec, q);
    std::printf("kernel grid: %zu nodes, t_step %.3f\n", grid.nodes.size(), grid.t_step);
    if (ys.empty()) {
        double T = cfg.T;
        ys = {T, T * T, 10.0 * T * T * T};
    }
    for (double y : ys) {
        if (kernel == "w4") {
            Complex v = kernels::phi_w4_on_grid(y, grid, q, sigma0);
            std::printf("y = %12.4f  Phi_w4 = %.6e %+.6ei  |.| = %.6e\n", y, v.real(),
                        v.imag(), std::abs(v));
        } else if (kernel == "wl") {
            Complex v = kernels::phi_wl_on_grid(y, y, grid, q, line1, line2);
            std::printf("y1 = y2 = %10.4f  Phi_wl = %.6e %+.6ei  |.| = %.6e\n", y,
                        v.real(), v.imag(), std::abs(v));
        } else {
            throw ValidationError("kernel must be w4 or wl");
        }
    }
    return 0;
}

int cmd_moment_report(const CfgFlags& cf) {
    workbench::WorkbenchConfig cfg = cf.resolve();
    workbench::MomentReport r = workbench::moment_report(cfg);
    std::printf("config hash     %s\n", r.config_hash.c_str());
    std::printf("main term       %.12g %+.12gi\n", r.main.real(), r.main.imag());
    std::printf("diagonal term   %.12g %+.12gi\n", r.diagonal.real(), r.diagonal.imag());
    std::printf("eis_min term    %.12g %+.12gi%s\n", r.eis_min.real(), r.eis_min.imag(),
                r.eis_min_pole_warning ? "  (pole warning)" : "");
    if (r.has_eis_max) {
        std::printf("eis_max term    %.12g %+.12gi\n", r.eis_max.real(),
                    r.eis_max.imag());
        std::printf("  %s\n", r.eis_max_disclaimer.c_str());
    }
    std::printf("h integral      %.12g   main / (T^3 M^2) = %.6g %+.6gi\n", r.h_integral,
                r.main_over_t3m2.real(), r.main_over_t3m2.imag());
    std::printf("structural dev  %.4g   halved-step drift %.3g\n", r.structural_rel_dev,
                r.main_halfstep_rel);
    if (cfg.p > 1)
        std::printf("diagonal ratio  %.6g %+.6gi  target %.6g %+.6gi  (threshold p^3.4375 "
                    "= %.6g, condition %s)\n",
                    r.diagonal_ratio.real(), r.diagonal_ratio.imag(),
                    r.diagonal_ratio_target.real(), r.diagonal_ratio_target.imag(),
                    r.theorem_threshold, r.theorem_condition ? "holds" : "not met");
    std::printf("report written  %s\n", cfg.output_path.c_str());
    return 0;
}

int cmd_ingest_maass(const std::string& path, bool echo) {
    auto records = gl2::ingest_maass_data(path);
    double lo = 0, hi = 0;
    long long pmax_min = -1;
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i == 0) {
            lo = hi = r.t_g;
        } else {
            lo = std::min(lo, r.t_g);
            hi = std::max(hi, r.t_g);
        }
        long long pmax = r.lambda.empty() ? 0 : r.lambda.rbegin()->first;
        pmax_min = pmax_min < 0 ? pmax : std::min(pmax_min, pmax);
        if (echo)
            std::printf("t_g = %.6f  <d^2> = %.6f  %zu prime coefficients up to %lld\n",
                        r.t_g, r.ad2_value, r.lambda.size(), pmax);
    }
    std::printf("%zu records from %s, t_g in [%.4f, %.4f], prime coverage >= %lld\n",
                records.size(), path.c_str(), lo, hi, pmax_min);
    return 0;
}

int cmd_selftest() {
    int failed = 0;
    auto check = [&failed](const char* name, bool ok, double measured) {
        std::printf("%-34s %s  (%.3g)\n", name, ok ? "ok" : "FAIL", measured);
        if (!ok) ++failed;
    };

    gl2::HolomorphicForm f = gl2::build_eigenform(12, 4000);
    double hecke = 0;
    for (long long m = 2; m <= 30; ++m)
        for (long long n = 2; n <= 30; ++n) {
            double rhs = 0;
            for (long long d : arith::divisors(arith::gcd_ll(m, n)))
                rhs += f(m * n / (d * d));
            hecke = std::max(hecke, std::abs(f(m) * f(n) - rhs));
        }
    check("hecke multiplicativity", hecke <= 1e-12, hecke);

    double kl = 0;
    for (long long c = 1; c <= 20; ++c)
        kl = std::max(kl, std::abs(kloosterman::complete_kloosterman({1, 2, 1, 3, 1, c}) -
                                   kloosterman::classical_kloosterman(3, 2, c)));
    check("kloosterman degeneration", kl <= 1e-9, kl);

    auto wr = kloosterman::weil_bound_report(10);
    check("square-root cancellation bound", wr.all_pass, wr.worst_ratio);

    QuadratureSpec q;
    auto spec = TestFunctionSpec::centered(5.0, 0.5, 2);
    double vnorm = std::abs(afe::v_weight(1e-6, 12, spec.mu0, q) - Complex{1.0, 0.0});
    check("unbalanced weight normalization", vnorm < 1e-3, vnorm);

    voronoi::TestWindow F;
    F.center = 20;
    F.width = 4;
    Complex lhs = voronoi::voronoi_lhs(f, 1, 2, F);
    auto rhs = voronoi::voronoi_rhs(f, 1, 2, F, q);
    double vres = std::abs(lhs - rhs.value) / (1.0 + std::abs(lhs));
    check("summation formula identity", vres <= 1e-8, vres);

    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "rswb_selftest";
    fs::remove_all(dir);
    fs::create_directories(dir);
    workbench::write_coefficient_cache((dir / "c.csv").string(), f);
    bool rt = workbench::cache_roundtrip((dir / "c.csv").string());
    fs::remove_all(dir);
    check("cache roundtrip", rt, rt ? 1.0 : 0.0);

    std::printf("%d of 6 checks failed\n", failed);
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rankin-Selberg first-moment workbench"};
    app.require_subcommand(1);

    // kloosterman
    long long n1 = 1, n2 = 1, m1 = 1, m2 = 1, D1 = 1, D2 = 1;
    bool incomplete = false;
    int weil_max = 0;
    auto* kl = app.add_subcommand("kloosterman",
                                  "evaluate one hyper-Kloosterman sum or a bound report");
    kl->add_option("--n1", n1);
    kl->add_option("--n2", n2);
    kl->add_option("--m1", m1);
    kl->add_option("--m2", m2);
    kl->add_option("--D1", D1);
    kl->add_option("--D2", D2);
    kl->add_flag("--incomplete", incomplete, "drop the second Bezout phase");
    kl->add_option("--weil-max", weil_max,
                   "print the classical bound report up to this modulus instead");

    // afe-check
    CfgFlags afe_cf;
    long long afe_n_max = 50000;
    double afe_rel_tol = 1e-6;
    auto* ac = app.add_subcommand(
        "afe-check", "smoothed central value vs the factored reference product");
    afe_cf.add_to(ac, kWindowKeys);
    ac->add_option("--n-max", afe_n_max, "coefficient table size");
    ac->add_option("--rel-tol", afe_rel_tol, "gate on relative error");

    // voronoi-check
    int vo_k = 12;
    long long vo_a = 1, vo_c = 2, vo_n_max = 4000;
    double vo_center = 20, vo_width = 4, vo_rel_tol = 1e-8;
    std::string vo_shape = "gaussian";
    auto* vc = app.add_subcommand("voronoi-check",
                                  "twisted coefficient sum vs its dual-side evaluation");
    vc->add_option("--k", vo_k);
    vc->add_option("--a", vo_a);
    vc->add_option("--c", vo_c);
    vc->add_option("--center", vo_center);
    vc->add_option("--width", vo_width);
    vc->add_option("--shape", vo_shape, "gaussian | compact");
    vc->add_option("--n-max", vo_n_max);
    vc->add_option("--rel-tol", vo_rel_tol);

    // spectral-scaling
    CfgFlags ss_cf;
    std::vector<double> ss_Ts;
    double ss_max_variation = 0;
    auto* ss = app.add_subcommand("spectral-scaling",
                                  "localization-volume scan of the spectral integral");
    ss_cf.add_to(ss, kWindowKeys);
    ss->add_option("--T-values", ss_Ts, "centers to scan (default 10 20 40)");
    ss->add_option("--max-variation", ss_max_variation,
                   "gate on (max-min)/min when positive");

    // kernels-decay
    CfgFlags kd_cf;
    std::string kd_kernel = "w4";
    std::vector<double> kd_ys;
    double kd_sigma0 = 0.25, kd_line1 = 0.25, kd_line2 = 0.25;
    auto* kd = app.add_subcommand("kernels-decay",
                                  "aggregated integral-transform kernel probes");
    kd_cf.add_to(kd, kWindowKeys);
    kd->add_option("--kernel", kd_kernel, "w4 | wl");
    kd->add_option("--y-values", kd_ys, "arguments to probe");
    kd->add_option("--sigma0", kd_sigma0, "w4 contour line");
    kd->add_option("--line1", kd_line1, "wl first contour line");
    kd->add_option("--line2", kd_line2, "wl second contour line");

    // moment-report
    CfgFlags mr_cf;
    auto* mr = app.add_subcommand("moment-report",
                                  "assemble every term and write the JSON report");
    mr_cf.add_to(mr, kMomentKeys);

    // ingest-maass
    std::string im_path;
    bool im_echo = false;
    auto* im = app.add_subcommand("ingest-maass", "validate a Maass coefficient CSV");
    im->add_option("path", im_path, "CSV path")->required();
    im->add_flag("--echo", im_echo, "print one line per record");

    // selftest
    auto* st = app.add_subcommand("selftest", "fast internal consistency checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (kl->parsed())
            return cmd_kloosterman(n1, n2, m1, m2, D1, D2, incomplete, weil_max);
        if (ac->parsed()) return cmd_afe_check(afe_cf, afe_n_max, afe_rel_tol);
        if (vc->parsed())
            return cmd_voronoi_check(vo_k, vo_a, vo_c, vo_center, vo_width, vo_shape,
                                     vo_n_max, vo_rel_tol);
        if (ss->parsed()) return cmd_spectral_scaling(ss_cf, ss_Ts, ss_max_variation);
        if (kd->parsed())
            return cmd_kernels_decay(kd_cf, kd_kernel, kd_ys, kd_sigma0, kd_line1,
                                     kd_line2);
        if (mr->parsed()) return cmd_moment_report(mr_cf);
        if (im->parsed()) return cmd_ingest_maass(im_path, im_echo);
        if (st->parsed()) return cmd_selftest();
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 4;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 2;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "did not converge: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 0;
}
