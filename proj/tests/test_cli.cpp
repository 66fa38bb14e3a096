#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "circleverify/cli.hpp"

using namespace circleverify;

namespace {
struct CliRun {
    int exit_code;
    std::string out, err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}
}  // namespace

TEST_CASE("parse_args fills the config") {
    RunConfig cfg;
    std::ostringstream err;
    int rc = parse_args({"theorem", "--which", "T1", "--n", "1e8", "--h", "1e6"}, cfg, err);
    REQUIRE(rc == -1);  // parsed, nothing to exit with
    CHECK(cfg.command == Command::Theorem);
    CHECK(cfg.which == TheoremId::T1);
    CHECK(cfg.N == 100000000ull);
    CHECK(cfg.H == 1000000ull);
    CHECK(cfg.tol == 1e-14);

    RunConfig cfg2;
    rc = parse_args({"identity", "--kind", "prime2", "--n", "2000", "--h", "40", "--tol",
                     "1e-14"},
                    cfg2, err);
    REQUIRE(rc == -1);
    CHECK(cfg2.command == Command::Identity);
    CHECK(cfg2.kind == RepKind::TwoPrimeSquares);
    CHECK(cfg2.N == 2000);
    CHECK(cfg2.H == 40);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run({"theorem", "--which", "T1", "--n", "100", "--h", "0"}).exit_code == 2);
    CHECK(run({"theorem", "--which", "T9", "--n", "100", "--h", "10"}).exit_code == 2);
    CHECK(run({"reps", "--kind", "cubes", "--n", "100", "--h", "10"}).exit_code == 2);
    CHECK(run({"reps", "--kind", "prime2", "--n", "1.5", "--h", "10"}).exit_code == 2);
    CHECK(run({"frobnicate"}).exit_code == 2);
    CHECK(run({}).exit_code == 2);
    CHECK(run({"sieve"}).exit_code == 2);  // needs --limit or --load
    // scientific notation must denote an exact integer
    CHECK(run({"reps", "--kind", "prime2", "--n", "2.5e-1", "--h", "10"}).exit_code == 2);
}

TEST_CASE("sieve command emits a JSON summary") {
    auto r = run({"sieve", "--limit", "1e4"});
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j["limit"] == 10000);
    CHECK(j["prime_count"] == 1229);
    CHECK(j["largest_prime"] == 9973);
}

TEST_CASE("identity run emits the documented JSON and exits 0") {
    auto r = run({"identity", "--kind", "prime2", "--n", "500", "--h", "20", "--tol", "1e-12"});
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    REQUIRE(j.contains("lhs"));
    REQUIRE(j.contains("rhs"));
    REQUIRE(j.contains("abs_diff"));
    REQUIRE(j.contains("rel_diff"));
    CHECK(j["rel_diff"].get<double>() <= 1e-8);
}

TEST_CASE("theorem run with a too-small sieve limit exits 1 naming the limit") {
    auto r = run({"theorem", "--which", "T1", "--n", "1e6", "--h", "1000", "--sieve-limit",
                  "100"});
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("need at least 1000") != std::string::npos);
}

TEST_CASE("theorem JSON carries the run fields") {
    auto r = run({"theorem", "--which", "T3", "--n", "10000", "--h", "500"});
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j["theorem"] == "T3");
    CHECK(j["N"] == 10000);
    CHECK(j["H"] == 500);
    CHECK(j["main_term"].get<double>() == Catch::Approx(kPi / 4.0 * 500.0));
    CHECK(j.contains("residual"));
    CHECK(j.contains("relative_error"));
    CHECK(j.contains("range_diag"));
}

TEST_CASE("scan emits one CSV row per entry plus the header") {
    auto r = run({"scan", "--which", "T1", "--schedule",
                  "2000:400,4000:800,8000:1600,16000:3200,32000:6400"});
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    auto rows = parse_scan_csv(in);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].N == 2000);
    CHECK(rows[4].H == 6400);
    // five points: the fit comment row must be present
    CHECK(r.out.find("# fit slope=") != std::string::npos);
}

TEST_CASE("reps CSV round-trips through its parser") {
    auto r = run({"reps", "--kind", "squares", "--n", "100", "--h", "30", "--format", "csv"});
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    auto rows = parse_repwindow_csv(in);
    REQUIRE(rows.size() == 30);
    CHECK(rows.front().first == 101);
    CHECK(rows.back().first == 130);

    auto w = compute_window(RepKind::TwoSquares, 100, 30, build_prime_table(100));
    for (size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].second == w.values[i]);
}

TEST_CASE("reps JSON summary carries the sums") {
    auto r = run({"reps", "--kind", "prime2", "--n", "5000", "--h", "500"});
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    auto w = compute_window(RepKind::TwoPrimeSquares, 5000, 500, build_prime_table(100));
    CHECK(j["plain_sum"].get<double>() == w.plain_sum);
    CHECK(j["exp_weighted_sum"].get<double>() == w.exp_weighted_sum);
    CHECK(j["kind"] == "prime2");
}

TEST_CASE("expsum grid CSV round-trips") {
    auto r = run({"expsum", "--function", "omega", "--ell", "2", "--n", "1000", "--alpha-grid",
                  "-0.5:0.5:11", "--tol", "1e-10"});
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    auto rows = parse_expsum_csv(in);
    REQUIRE(rows.size() == 11);
    CHECK(rows.front().alpha == -0.5);
    CHECK(rows.back().alpha == 0.5);
    // conjugate symmetry visible in the grid
    CHECK(rows[0].re == Catch::Approx(rows[10].re).margin(1e-12));
    CHECK(rows[0].im == Catch::Approx(-rows[10].im).margin(1e-12));
}

TEST_CASE("decompose emits the documented JSON") {
    auto r = run({"decompose", "--which", "T1", "--n", "1000", "--h", "50", "--tol", "1e-10"});
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    CHECK(j["theorem"] == "T1");
    REQUIRE(j["I"].is_array());
    CHECK(j["I"].size() == 3);
    CHECK(j["closure_error"].get<double>() <= 1e-6);
    CHECK(j.contains("main_term"));
}

TEST_CASE("lemmas command emits the bound checks") {
    auto r = run({"lemmas", "--n-grid", "10000", "--grid-points", "16"});
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    REQUIRE(j.is_array());
    bool found_u = false;
    for (const auto& item : j) {
        if (item["name"] == "u-kernel-min-bound") {
            found_u = true;
            CHECK(item["pass"].get<bool>());
            CHECK(item["max_ratio"].get<double>() <= 1.0);
        }
    }
    CHECK(found_u);
}

TEST_CASE("same config twice is byte-identical (timing fields excluded)") {
    // identity/scan/lemmas/expsum schemas carry no timing: full byte equality
    std::vector<std::string> args = {"identity", "--kind", "primesq", "--n",      "500",
                                     "--h",      "25",     "--tol",   "1e-12",    "--threads",
                                     "2"};
    auto a = run(args);
    auto b = run(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    auto s1 = run({"scan", "--which", "T3", "--schedule", "2000:100,4000:200", "--threads", "2"});
    auto s2 = run({"scan", "--which", "T3", "--schedule", "2000:100,4000:200", "--threads", "2"});
    CHECK(s1.out == s2.out);

    auto e1 = run({"expsum", "--function", "stilde", "--n", "2000", "--alpha-grid",
                   "0:0.5:7", "--tol", "1e-10", "--threads", "2"});
    auto e2 = run({"expsum", "--function", "stilde", "--n", "2000", "--alpha-grid",
                   "0:0.5:7", "--tol", "1e-10", "--threads", "2"});
    CHECK(e1.out == e2.out);

    // reps JSON includes wall_time_s; everything else must match byte-for-byte
    auto r1 = run({"reps", "--kind", "prime2", "--n", "3000", "--h", "300", "--format", "csv"});
    auto r2 = run({"reps", "--kind", "prime2", "--n", "3000", "--h", "300", "--format", "csv"});
    CHECK(r1.out == r2.out);
}

TEST_CASE("thread count does not change emitted numbers") {
    auto a = run({"reps", "--kind", "prime2", "--n", "4000", "--h", "2000", "--format", "csv",
                  "--threads", "1"});
    auto b = run({"reps", "--kind", "prime2", "--n", "4000", "--h", "2000", "--format", "csv",
                  "--threads", "4"});
    CHECK(a.out == b.out);  // disjoint-segment parallelism: bit-identical values
}

TEST_CASE("output lands in a file when requested") {
    std::string path = "cli_test_output.json";
    auto r = run({"sieve", "--limit", "100", "--output", path});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    auto j = json::parse(in);
    CHECK(j["prime_count"] == 25);
    std::remove(path.c_str());
}

TEST_CASE("CIRCLEVERIFY_THREADS is the fallback for --threads") {
    setenv("CIRCLEVERIFY_THREADS", "3", 1);
    RunConfig cfg;
    std::ostringstream err;
    REQUIRE(parse_args({"reps", "--kind", "squares", "--n", "100", "--h", "10"}, cfg, err) ==
            -1);
    CHECK(cfg.threads == 3);
    RunConfig cfg2;
    REQUIRE(parse_args({"reps", "--kind", "squares", "--n", "100", "--h", "10", "--threads",
                        "2"},
                       cfg2, err) == -1);
    CHECK(cfg2.threads == 2);  // explicit flag wins
    unsetenv("CIRCLEVERIFY_THREADS");
}

TEST_CASE("seed-report embeds the config echo") {
    auto r = run({"identity", "--kind", "prime2", "--n", "500", "--h", "20", "--tol", "1e-12",
                  "--seed-report"});
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    REQUIRE(j.contains("report"));
    CHECK(j["report"]["version"] == kVersion);
    CHECK(j["report"]["N"] == 500);
}

TEST_CASE("sieve dump and load round-trip through the CLI") {
    std::string path = "cli_test_table.cvpt";
    auto a = run({"sieve", "--limit", "12345", "--dump", path});
    REQUIRE(a.exit_code == 0);
    auto b = run({"sieve", "--load", path});
    REQUIRE(b.exit_code == 0);
    auto j = json::parse(b.out);
    CHECK(j["limit"] == 12345);
    auto direct = json::parse(a.out);
    CHECK(j["prime_count"] == direct["prime_count"]);
    std::remove(path.c_str());
}
