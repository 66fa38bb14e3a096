#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "circleverify/verify.hpp"

using namespace circleverify;

namespace {
const PrimeTable& table_1e5() {
    static PrimeTable t = build_prime_table(100000);
    return t;
}

LemmaSuiteConfig reduced_config(double offset = 0.0) {
    LemmaSuiteConfig cfg;
    cfg.N_values = {10000};
    cfg.trivial_N = {10000, 1000000};
    cfg.H_values = {100, 1000};
    cfg.alpha_points = 32;
    cfg.grid_offset = offset;
    return cfg;
}
}  // namespace

TEST_CASE("run_theorem is consistent with the window sum") {
    auto run = run_theorem(TheoremId::T1, 10000, 1000, table_1e5());
    auto window = compute_window(RepKind::TwoPrimeSquares, 10000, 1000, table_1e5());
    CHECK(run.exact_sum == Catch::Approx(window.plain_sum).epsilon(1e-12));
    CHECK(run.main_term == Catch::Approx(kPi / 4.0 * 1000.0).epsilon(1e-15));
    CHECK(run.residual == Catch::Approx(run.exact_sum - run.main_term).margin(1e-12));
    CHECK(run.relative_error == Catch::Approx(run.residual / run.main_term).epsilon(1e-14));

    auto run3 = run_theorem(TheoremId::T3, 10000, 1000, table_1e5());
    auto window3 = compute_window(RepKind::PrimeSquarePlusSquare, 10000, 1000, table_1e5());
    CHECK(run3.exact_sum == Catch::Approx(window3.plain_sum).epsilon(1e-12));
}

TEST_CASE("main term value at H = 10^6") {
    TheoremRun r;
    r.main_term = kPi / 4.0 * 1e6;
    CHECK(r.main_term == Catch::Approx(785398.163397448).epsilon(1e-12));
}

TEST_CASE("least squares exponent fit") {
    std::vector<std::pair<double, double>> pts;
    for (double x : {1.0, 2.0, 3.5, 5.0, 7.25}) pts.emplace_back(x, 2.5 * x + 1.0);
    auto f = fit_exponent(pts);
    REQUIRE(f.valid);
    CHECK(f.slope == Catch::Approx(2.5).epsilon(1e-12));
    CHECK(f.intercept == Catch::Approx(1.0).margin(1e-10));
    CHECK(f.r_squared == Catch::Approx(1.0).epsilon(1e-12));

    CHECK_FALSE(fit_exponent({{1.0, 2.0}, {2.0, 3.0}, {3.0, 4.0}}).valid);  // < 4 points
}

TEST_CASE("empty schedule yields an empty report") {
    auto res = scan(TheoremId::T1, {}, table_1e5());
    CHECK(res.runs.empty());
    CHECK_FALSE(res.fit.valid);
}

TEST_CASE("scan over a small schedule") {
    std::vector<std::pair<uint64_t, uint64_t>> schedule = {
        {2000, 500}, {4000, 1000}, {8000, 2000}, {16000, 4000}};
    auto res = scan(TheoremId::T1, schedule, table_1e5());
    REQUIRE(res.runs.size() == 4);
    for (const auto& r : res.runs) CHECK(r.main_term > 0.0);
    CHECK(res.fit.valid);
}

TEST_CASE("cumulative two-squares checkpoints") {
    auto checks = cumulative_two_squares({10000, 100000, 1000000}, table_1e5());
    REQUIRE(checks.size() == 3);
    for (const auto& c : checks) {
        CAPTURE(c.N, c.residual, c.allowance);
        CHECK(c.pass);
        // the -sqrt(N) secondary term dominates at these scales
        CHECK(c.sum - (kPi / 4.0 * static_cast<double>(c.N)) < 0.0);
    }
}

TEST_CASE("lemma suite: exact inequalities hold with constant 1") {
    auto checks = lemma_suite(reduced_config(), table_1e5());
    REQUIRE(!checks.empty());
    for (const auto& c : checks) {
        CAPTURE(c.name, c.max_ratio, c.threshold);
        CHECK(c.pass);
        if (c.name == "u-kernel-min-bound" || c.name == "z-inverse-min-bound" ||
            c.name == "weight-removal") {
            CHECK(c.max_ratio <= 1.0);
        }
    }
}

TEST_CASE("lemma suite is deterministic") {
    auto a = lemma_suite(reduced_config(), table_1e5());
    auto b = lemma_suite(reduced_config(), table_1e5());
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].max_ratio == b[i].max_ratio);  // bitwise: no randomness anywhere
        CHECK(a[i].grid_size == b[i].grid_size);
    }
}

TEST_CASE("disjoint grids give stable ratios") {
    auto a = lemma_suite(reduced_config(0.0), table_1e5());
    auto b = lemma_suite(reduced_config(0.5), table_1e5());
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != "prime-power-gap" && a[i].name != "omega-mean-square" &&
            a[i].name != "weighted-mean-square")
            continue;
        double hi = std::max(a[i].max_ratio, b[i].max_ratio);
        double lo = std::min(a[i].max_ratio, b[i].max_ratio);
        CAPTURE(a[i].name, lo, hi);
        CHECK(hi - lo <= 0.2 * hi);
    }
}

TEST_CASE("range diagnostics") {
    // T1: H / (sqrt(N) L^3); with N = e^2 (L = 2), H = 80: 80 / (e * 8)
    double d = theorem_range_diag(TheoremId::T1, 7, 80);  // log 7 ~ 1.9459
    double L = std::log(7.0);
    CHECK(d == Catch::Approx(80.0 / (std::sqrt(7.0) * L * L * L)).epsilon(1e-12));
    CHECK(theorem_range_diag(TheoremId::T2, 10000, 1000) ==
          Catch::Approx(1000.0 / std::pow(10000.0, 7.0 / 12.0)).epsilon(1e-12));
}
