#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rswb/workbench.hpp"

using namespace rswb;
using namespace rswb::workbench;
namespace fs = std::filesystem;

namespace {
const char* TMP = "wb_unit_tmp";

struct TmpDir {
    TmpDir() {
        fs::remove_all(TMP);
        fs::create_directories(TMP);
    }
    ~TmpDir() { fs::remove_all(TMP); }
    fs::path operator/(const std::string& leaf) const { return fs::path(TMP) / leaf; }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// two synthetic rows: one eigenvalue-free form inside the localization
// window at T = 6, one far outside it
const char* MAASS_CSV =
    "t_g,ad2,p2,p3,p5,p7,p11,p13,p17,p19,p23,p29,p31,p37,p41,p43,p47,p53,p59,p61,p67,p71,"
    "p73,p79,p83,p89,p97\n"
    "3.163,1.0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n"
    "6.2,0.8,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,"
    "0.2,0.2,0.2,0.2,0.2,0.2\n";

WorkbenchConfig small_cfg(const TmpDir& tmp) {
    WorkbenchConfig cfg;
    cfg.k = 12;
    cfg.p = 2;
    cfg.T = 6.0;
    cfg.step = 0.1;
    cfg.tolerance = 1e-6;
    cfg.cache_dir = (tmp / "cache").string();
    cfg.output_path = (tmp / "report.json").string();
    return cfg;
}
} // namespace

TEST_CASE("config text parsing and overrides") {
    WorkbenchConfig cfg = parse_config_text(
        "# leading comment\n"
        "k = 16\n"
        "T=6.0   # trailing comment\n"
        "\n"
        "step = 0.1\n"
        "cache_dir = somewhere\n");
    CHECK(cfg.k == 16);
    CHECK(cfg.T == 6.0);
    CHECK(cfg.step == 0.1);
    CHECK(cfg.cache_dir == "somewhere");
    CHECK(cfg.p == 1);         // untouched default
    CHECK(cfg.theta == 0.5);   // untouched default

    // flags override file values
    apply_override(cfg, "T", "8.5");
    CHECK(cfg.T == 8.5);

    CHECK_THROWS_WITH_AS(parse_config_text("nosuchkey = 1\n"),
                         doctest::Contains("unknown config key"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_config_text("T = abc\n"), doctest::Contains("cannot parse"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(parse_config_text("k 12\n"), doctest::Contains("line 1"),
                         ValidationError);
    CHECK_THROWS_AS(parse_config_file("definitely_missing_config_file.cfg"), DataError);
}

TEST_CASE("canonical text and hash are stable and discriminating") {
    WorkbenchConfig a;
    WorkbenchConfig b;
    CHECK(a.canonical_text() == b.canonical_text());
    CHECK(a.hash_hex() == b.hash_hex());
    CHECK(a.hash_hex().size() == 16);
    CHECK(a.hash_hex().find_first_not_of("0123456789abcdef") == std::string::npos);
    b.k = 16;
    CHECK(a.hash_hex() != b.hash_hex());
    b = a;
    b.tolerance = 2e-10;
    CHECK(a.hash_hex() != b.hash_hex());
}

TEST_CASE("moment validation") {
    WorkbenchConfig cfg;
    CHECK_NOTHROW(cfg.validate_moment()); // k = 12, p = 1
    cfg.p = 2;
    CHECK_NOTHROW(cfg.validate_moment());
    cfg.p = 4;
    CHECK_THROWS_AS(cfg.validate_moment(), ValidationError);
    cfg.p = 1;
    cfg.k = 14;
    CHECK_THROWS_AS(cfg.validate_moment(), ValidationError);
    cfg.k = 8;
    CHECK_THROWS_AS(cfg.validate_moment(), ValidationError);
}

TEST_CASE("coefficient cache round trip is exact") {
    TmpDir tmp;
    gl2::HolomorphicForm f = gl2::build_eigenform(12, 60);
    fs::path p = tmp / "coeff.csv";
    write_coefficient_cache(p.string(), f);
    gl2::HolomorphicForm g = read_coefficient_cache(p.string(), 12);
    REQUIRE(g.n_max == f.n_max);
    CHECK(g.k == 12);
    for (long long n = 1; n <= f.n_max; ++n) CHECK(g(n) == f(n));

    SUBCASE("corrupt header") {
        write_file(p, "m,value\n1,1.0\n");
        CHECK_THROWS_WITH_AS((void)read_coefficient_cache(p.string(), 12),
                             doctest::Contains("line 1"), DataError);
    }
    SUBCASE("broken row index") {
        write_file(p, "n,value\n1,1.0\n3,252.0\n");
        CHECK_THROWS_WITH_AS((void)read_coefficient_cache(p.string(), 12),
                             doctest::Contains("line 3"), DataError);
    }
    SUBCASE("unparseable value") {
        write_file(p, "n,value\n1,one\n");
        CHECK_THROWS_AS((void)read_coefficient_cache(p.string(), 12), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)read_coefficient_cache((tmp / "nope.csv").string(), 12),
                        DataError);
    }
}

TEST_CASE("kloosterman cache round trip and self-check") {
    TmpDir tmp;
    std::vector<KloostermanCacheEntry> entries;
    KloostermanCacheEntry e1;
    e1.kind = "complete";
    e1.in = {2, 3, 1, 1, 4, 8};
    e1.value = kloosterman::complete_kloosterman(e1.in);
    KloostermanCacheEntry e2;
    e2.kind = "incomplete";
    e2.in = {1, 2, 5, 99, 1, 6};
    e2.value = kloosterman::incomplete_kloosterman(e2.in);
    entries = {e1, e2};

    fs::path p = tmp / "kloosterman.csv";
    write_kloosterman_cache(p.string(), entries);
    auto back = read_kloosterman_cache(p.string());
    REQUIRE(back.size() == 2);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(back[i].kind == entries[i].kind);
        CHECK(back[i].in.n1 == entries[i].in.n1);
        CHECK(back[i].in.D2 == entries[i].in.D2);
        CHECK(back[i].value.real() == entries[i].value.real());
        CHECK(back[i].value.imag() == entries[i].value.imag());
    }
    CHECK(cache_roundtrip(p.string()));

    // empty cache stays empty through the round trip
    fs::path pe = tmp / "empty.csv";
    write_kloosterman_cache(pe.string(), {});
    CHECK(read_kloosterman_cache(pe.string()).empty());
    CHECK(cache_roundtrip(pe.string()));

    // the coefficient flavor is recognized by its header
    fs::path pc = tmp / "coeff.csv";
    write_coefficient_cache(pc.string(), gl2::build_eigenform(12, 25));
    CHECK(cache_roundtrip(pc.string()));

    SUBCASE("field count corruption") {
        write_file(p, "kind,n1,n2,m1,m2,D1,D2,re,im\ncomplete,1,1,1,1,1\n");
        CHECK_THROWS_WITH_AS((void)read_kloosterman_cache(p.string()),
                             doctest::Contains("line 2"), DataError);
    }
    SUBCASE("bad kind") {
        write_file(p, "kind,n1,n2,m1,m2,D1,D2,re,im\npartial,1,1,1,1,1,2,0.0,0.0\n");
        CHECK_THROWS_AS((void)read_kloosterman_cache(p.string()), DataError);
    }
    SUBCASE("unrecognized header fails the self-check") {
        write_file(p, "who,knows\n1,2\n");
        CHECK_THROWS_AS((void)cache_roundtrip(p.string()), DataError);
    }
}

TEST_CASE("eigenform cache wrapper builds once and reloads exactly") {
    TmpDir tmp;
    WorkbenchConfig cfg;
    cfg.cache_dir = (tmp / "cache").string();
    gl2::HolomorphicForm a = cached_eigenform(cfg, 12, 80);
    CHECK(fs::exists(tmp / "cache" / "coeff_k12_N80.csv"));
    gl2::HolomorphicForm b = cached_eigenform(cfg, 12, 80);
    REQUIRE(b.n_max == 80);
    for (long long n = 1; n <= 80; ++n) CHECK(a(n) == b(n));

    cfg.cache_dir.clear();
    gl2::HolomorphicForm c = cached_eigenform(cfg, 12, 80);
    CHECK(c(7) == a(7));
}

TEST_CASE("minimal-series inner contour is line independent") {
    gl2::HolomorphicForm f = gl2::build_eigenform(12, 2500);
    QuadratureSpec q;
    auto mu = LanglandsParameter::from_imag(2.1, 0.9, -3.0);
    Complex at3 = eis_min_inner(f, mu, q);
    Complex at4 = eis_min_inner(f, mu, q, 4.0);
    CHECK(std::abs(at3 - at4) <= 1e-8 * (1.0 + std::abs(at3)));
    CHECK_THROWS_AS((void)eis_min_inner(f, mu, q, 1.0), ValidationError);
}

TEST_CASE("maximal series term structure") {
    TmpDir tmp;
    WorkbenchConfig cfg = small_cfg(tmp);
    gl2::HolomorphicForm f = gl2::build_eigenform(12, 2048);

    gl2::MaassFormRecord inside;
    inside.t_g = 3.163;
    inside.ad2_value = 1.0;
    for (long long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
                        67, 71, 73, 79, 83, 89, 97})
        inside.lambda[p] = 0.0;
    inside.source_id = "synthetic";

    SUBCASE("empty record list is a data failure") {
        CHECK_THROWS_AS((void)eis_max_term(cfg, f, {}), DataError);
    }
    SUBCASE("eigenvalue-free record at a twisting prime collapses to zero") {
        EisMaxTerm r = eis_max_term(cfg, f, {inside});
        CHECK(std::abs(r.value) < 1e-6);
        CHECK(r.contributing == 1);
        CHECK(r.disclaimer.find("in window") != std::string::npos);
    }
    SUBCASE("untwisted value is nonzero with a quiet truncation doubling") {
        WorkbenchConfig c1 = cfg;
        c1.p = 1;
        EisMaxTerm r = eis_max_term(c1, f, {inside});
        CHECK(std::abs(r.value) > 0.0);
        CHECK(r.doubling_residual <= 1e-6 * (1.0 + std::abs(r.value)));
    }
    SUBCASE("out-of-window record is reported as negligible") {
        gl2::MaassFormRecord outside = inside;
        outside.t_g = 11.3;
        EisMaxTerm r = eis_max_term(cfg, f, {inside, outside});
        CHECK(r.contributing == 1);
        CHECK(r.disclaimer.find("negligible") != std::string::npos);
    }
}

TEST_CASE("moment report assembles, persists, and reruns byte-identically") {
    TmpDir tmp;
    write_file(tmp / "maass.csv", MAASS_CSV);
    WorkbenchConfig cfg = small_cfg(tmp);
    cfg.maass_data_path = (tmp / "maass.csv").string();

    MomentReport r1 = moment_report(cfg);
    std::string t1 = read_file(cfg.output_path);
    CHECK(!r1.incomplete);
    CHECK(r1.config_hash == cfg.hash_hex());
    CHECK(std::isfinite(r1.main.real()));
    CHECK(r1.h_integral > 0.0);
    CHECK(r1.t3m2 == doctest::Approx(std::pow(6.0, 3) * 6.0).epsilon(1e-12));
    CHECK(r1.has_eis_max);
    CHECK(!r1.eis_min_pole_warning);
    CHECK(r1.theorem_threshold == doctest::Approx(std::pow(2.0, 3.4375)).epsilon(1e-12));
    CHECK(!r1.theorem_condition); // T = 6 sits below the threshold scale

    // target ratio echoes the twisting coefficient
    gl2::HolomorphicForm f = gl2::build_eigenform(12, 10);
    CHECK(r1.diagonal_ratio_target.real() ==
          doctest::Approx(f(2) / std::pow(2.0, 1.5)).epsilon(1e-14));

    // serialize -> parse -> serialize is byte-identical
    MomentReport back = MomentReport::parse(t1);
    CHECK(back.to_json_text() == t1);

    // a second run reuses the coefficient cache and reproduces every byte
    // except the timestamp
    MomentReport r2 = moment_report(cfg);
    r2.timestamp = r1.timestamp;
    CHECK(r2.to_json_text() == t1);
}

TEST_CASE("component failure still writes an incomplete report") {
    TmpDir tmp;
    WorkbenchConfig cfg = small_cfg(tmp);
    // a regular file where the cache directory should go breaks the first
    // component (coefficient caching) cheaply
    write_file(tmp / "blocker", "not a directory\n");
    cfg.cache_dir = (tmp / "blocker" / "cache").string();
    CHECK_THROWS_AS((void)moment_report(cfg), std::exception);
    MomentReport r = MomentReport::parse(read_file(cfg.output_path));
    CHECK(r.incomplete);
    CHECK(!r.error.empty());
}
