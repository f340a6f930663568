#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rswb/gl2.hpp"
#include "rswb/kloosterman.hpp"
#include "rswb/types.hpp"

namespace rswb::workbench {

// Flat configuration shared by every CLI command. File format: one
// `key = value` per line, `#` starts a comment; CLI flags override file
// values. Moment commands additionally require k = 0 (mod 4) and p prime
// or 1.
struct WorkbenchConfig {
    int k = 12;
    long long p = 1;
    double T = 10.0;
    double theta = 0.5;
    int A0 = 2;
    double step = 0.05;
    double height = 40.0;
    double tolerance = 1e-10;
    std::string maass_data_path; // optional; empty = no maximal-Eisenstein term
    std::string cache_dir = "cache";
    std::string output_path = "report.json";

    QuadratureSpec quad() const;
    TestFunctionSpec window() const;
    void validate_moment() const;

    // fixed-order key=value text (17-significant-digit floats) and its
    // FNV-1a 64-bit hash, the report's provenance anchor
    std::string canonical_text() const;
    std::string hash_hex() const;
};

WorkbenchConfig parse_config_text(const std::string& text);
WorkbenchConfig parse_config_file(const std::string& path);
void apply_override(WorkbenchConfig& cfg, const std::string& key, const std::string& value);

// (1/192 pi^5) sum over the moment grid of h * (1 + PiGamma(mu)) against
// the oriented spectral measure. Real positive is the headline expectation;
// the measured value is reported either way.
Complex main_term(const WorkbenchConfig& cfg);

// (lambda_f(p)/p^{3/2}) (1/192 pi^5) sum of h * V_k(p^3, mu) against the
// oriented spectral measure.
Complex diagonal_term(const WorkbenchConfig& cfg, const gl2::HolomorphicForm& f);

// Inner contour of the minimal-Eisenstein term at one spectral point:
// (1/2pi i) integral at Re s = sigma of
//   (8 pi^3)^{-s} prod_j Gamma(s+k/2-mu_j)/Gamma(k/2-mu_j)
//     * prod_j L(1/2+s-mu_j, f) * e^{s^2} / s.
// sigma defaults to 3 (absolute convergence); 4 is the independence check.
Complex eis_min_inner(const gl2::HolomorphicForm& f, const LanglandsParameter& mu,
                      const QuadratureSpec& q, double sigma = 3.0);

struct EisMinTerm {
    Complex value{0, 0};
    bool pole_warning = false; // some |3 nu_j| < 1e-3 carried weight in the window
};

// (1/96 pi^2) sum over the localized window lattice of
//   A^min(p,p) h(mu) / N^min(mu) * eis_min_inner(mu),
// exact-diagonal lattice points skipped (h vanishes there quadratically,
// the zeta pole in N^min is removable).
EisMinTerm eis_min_term(const WorkbenchConfig& cfg, const gl2::HolomorphicForm& f);

struct EisMaxTerm {
    Complex value{0, 0};
    std::string disclaimer;       // t_g coverage of the supplied records
    int contributing = 0;         // records whose window weight is non-negligible
    double doubling_residual = 0; // |value at 2W - value at W| on the u-line
};

// Sum over records of the truncated u-line integral of
//   A^max(p,p) h / N^max * (inner contour with L(1/2+s+2u, f) and
//   L(1/2+s-u, f x g)), prefactor 1/(2 pi). DataError when records is
// empty; a record outside the localization window contributes ~ 0 and is
// listed as such in the disclaimer.
EisMaxTerm eis_max_term(const WorkbenchConfig& cfg, const gl2::HolomorphicForm& f,
                        const std::vector<gl2::MaassFormRecord>& records);

struct MomentReport {
    // config echo + provenance
    WorkbenchConfig cfg;
    std::string config_hash;
    std::string timestamp; // excluded from determinism comparisons
    bool incomplete = false;
    std::string error; // nonempty when incomplete

    Complex main{0, 0};
    Complex diagonal{0, 0};
    Complex eis_min{0, 0};
    bool eis_min_pole_warning = false;
    bool has_eis_max = false;
    Complex eis_max{0, 0};
    std::string eis_max_disclaimer;

    // diagnostics
    double h_integral = 0;
    double t3m2 = 0;
    Complex main_over_t3m2{0, 0};
    Complex structural_sum{0, 0}; // V-side + tilde-side at p = 1
    double structural_rel_dev = 0;
    Complex diagonal_ratio{0, 0};        // diagonal(p) / diagonal(1)
    Complex diagonal_ratio_target{0, 0}; // lambda_f(p) / p^{3/2}
    double main_halfstep_rel = 0;        // |main(step/2) - main| / |main|
    double u_line_doubling = 0;
    double theorem_threshold = 0; // p^{3 + 7/16}
    bool theorem_condition = false;

    // JSON with fixed field order; all floats as 17-significant-digit
    // strings, so serialize -> parse -> serialize is byte-identical
    std::string to_json_text() const;
    static MomentReport parse(const std::string& text);
};

// Computes every term, writes cfg.output_path, returns the report.
// A component failure still writes the file (marked incomplete, with the
// error text) and then rethrows for the caller's exit-code mapping.
MomentReport moment_report(const WorkbenchConfig& cfg);

// Coefficient cache: header "n,value", rows 1..N ascending, 17-digit
// lambda values. Strict reads: any malformed line is a DataError naming
// it, and nothing is loaded.
void write_coefficient_cache(const std::string& path, const gl2::HolomorphicForm& f);
gl2::HolomorphicForm read_coefficient_cache(const std::string& path, int expect_k);

// Load-or-build-and-store wrapper; empty cache_dir disables caching.
gl2::HolomorphicForm cached_eigenform(const WorkbenchConfig& cfg, int k, long long n_max);

struct KloostermanCacheEntry {
    std::string kind; // "complete" | "incomplete"
    kloosterman::KloostermanInput in;
    Complex value{0, 0};
};

// Kloosterman cache: header "kind,n1,n2,m1,m2,D1,D2,re,im".
void write_kloosterman_cache(const std::string& path,
                             const std::vector<KloostermanCacheEntry>& entries);
std::vector<KloostermanCacheEntry> read_kloosterman_cache(const std::string& path);

// Parse the cache at `path` (kind sniffed from the header), rewrite it to
// `path + ".roundtrip"`, parse that, and require exact equality; the
// temporary is removed. Returns true on success, throws DataError (parse,
// with the offending line) or InternalError (mismatch) otherwise.
bool cache_roundtrip(const std::string& path);

} // namespace rswb::workbench
