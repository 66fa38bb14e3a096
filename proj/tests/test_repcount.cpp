#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <set>

#include "circleverify/repcount.hpp"

using namespace circleverify;

namespace {
const PrimeTable& table_1e4() {
    static PrimeTable t = build_prime_table(10000);
    return t;
}

double window_value(const RepWindow& w, uint64_t n) {
    REQUIRE(n >= w.N + 1);
    REQUIRE(n <= w.N + w.H);
    return w.values[n - w.N - 1];
}
}  // namespace

TEST_CASE("hand-checked window values") {
    auto w2 = compute_window(RepKind::TwoPrimeSquares, 4, 20, table_1e4());
    // 8 = 2^2 + 2^2, a single ordered pair
    CHECK(window_value(w2, 8) == Catch::Approx(std::log(2.0) * std::log(2.0)).epsilon(1e-14));
    // 13 = 2^2 + 3^2 = 3^2 + 2^2
    CHECK(window_value(w2, 13) ==
          Catch::Approx(2.0 * std::log(2.0) * std::log(3.0)).epsilon(1e-14));
    CHECK(window_value(w2, 14) == 0.0);

    auto w1 = compute_window(RepKind::PrimeSquarePlusSquare, 4, 20, table_1e4());
    // (p, m) = (2, 3) and (3, 2)
    CHECK(window_value(w1, 13) == Catch::Approx(std::log(2.0) + std::log(3.0)).epsilon(1e-14));

    auto w0 = compute_window(RepKind::TwoSquares, 20, 10, table_1e4());
    // 25 = 9 + 16 = 16 + 9; (5, 0) excluded since coordinates are >= 1
    CHECK(window_value(w0, 25) == 2.0);
}

TEST_CASE("brute force oracle fixes the small support set") {
    // n <= 100 with at least one prime-pair representation: enumerating the
    // ordered pairs over primes p1, p2 <= 9 by hand gives exactly this set,
    // frozen here and required of the oracle.
    auto w = brute_force_window(RepKind::TwoPrimeSquares, 0, 100, table_1e4());
    std::set<uint64_t> support;
    for (uint64_t n = 1; n <= 100; ++n)
        if (w.values[n - 1] > 0.0) support.insert(n);
    std::set<uint64_t> expected = {8, 13, 18, 29, 34, 50, 53, 58, 74, 98};
    CHECK(support == expected);

    auto s = brute_force_window(RepKind::TwoSquares, 0, 50, table_1e4());
    CHECK(s.values[2 - 1] == 1.0);  // 2 = 1 + 1
    CHECK(s.values[4 - 1] == 0.0);  // 4 needs a zero coordinate
}

TEST_CASE("enumeration matches brute force elementwise") {
    for (RepKind kind : {RepKind::TwoPrimeSquares, RepKind::PrimeSquarePlusSquare,
                         RepKind::TwoSquares}) {
        for (auto [N, H] : std::initializer_list<std::pair<uint64_t, uint64_t>>{
                 {4, 400}, {997, 503}, {9000, 1000}}) {
            auto fast = compute_window(kind, N, H, table_1e4());
            auto slow = brute_force_window(kind, N, H, table_1e4());
            for (uint64_t i = 0; i < H; ++i) {
                if (fast.values[i] != slow.values[i]) {
                    CAPTURE(static_cast<int>(kind), N, i);
                    REQUIRE(fast.values[i] ==
                            Catch::Approx(slow.values[i]).epsilon(1e-12).margin(0.0));
                }
            }
            CHECK(fast.plain_sum == Catch::Approx(slow.plain_sum).epsilon(1e-12));
            CHECK(fast.exp_weighted_sum ==
                  Catch::Approx(slow.exp_weighted_sum).epsilon(1e-12));
        }
    }
}

TEST_CASE("TwoSquares window equals divisor-formula oracle") {
    auto w = compute_window(RepKind::TwoSquares, 100, 20, table_1e4());
    auto slow = brute_force_window(RepKind::TwoSquares, 100, 20, table_1e4());
    for (uint64_t n = 101; n <= 120; ++n) {
        CAPTURE(n);
        CHECK(window_value(w, n) == window_value(slow, n));
        CHECK(window_value(w, n) == static_cast<double>(two_squares_positive_count(n)));
    }
}

TEST_CASE("divisor oracle hand values") {
    CHECK(two_squares_r2(25) == 12);
    CHECK(two_squares_positive_count(25) == 2);  // (3,4), (4,3)
    CHECK(two_squares_r2(2) == 4);
    CHECK(two_squares_positive_count(2) == 1);
    CHECK(two_squares_r2(3) == 0);
    CHECK(two_squares_positive_count(3) == 0);
    CHECK(two_squares_r2(1) == 4);
    CHECK(two_squares_positive_count(1) == 0);
    // large prime cofactor path: 999999999989 is prime and 1 mod 4
    CHECK(two_squares_r2(999999999989ull) == 8);
    CHECK_THROWS_AS(two_squares_r2(0), std::invalid_argument);
    CHECK_THROWS_AS(two_squares_r2(1000000000001ull), size_cap_error);
}

TEST_CASE("window sums recomputable from values") {
    auto w = compute_window(RepKind::TwoPrimeSquares, 5000, 2000, table_1e4());
    KahanSum plain, weighted;
    for (uint64_t i = 0; i < w.H; ++i) {
        plain.add(w.values[i]);
        weighted.add(std::exp(-static_cast<double>(w.N + 1 + i) / w.N) * w.values[i]);
    }
    CHECK(plain.value() == Catch::Approx(w.plain_sum).epsilon(1e-15));
    CHECK(weighted.value() == Catch::Approx(w.exp_weighted_sum).epsilon(1e-13));
    for (double v : w.values) CHECK(v >= 0.0);
}

TEST_CASE("thread count does not change results") {
    auto one = compute_window(RepKind::TwoPrimeSquares, 4000, 3000, table_1e4(), 1);
    auto four = compute_window(RepKind::TwoPrimeSquares, 4000, 3000, table_1e4(), 4);
    REQUIRE(one.values == four.values);  // disjoint segment writes: bit-identical
    CHECK(one.plain_sum == Catch::Approx(four.plain_sum).epsilon(1e-13));
    CHECK(one.exp_weighted_sum == Catch::Approx(four.exp_weighted_sum).epsilon(1e-13));
}

TEST_CASE("precondition and size-cap errors") {
    CHECK_THROWS_AS(compute_window(RepKind::TwoSquares, 3, 10, table_1e4()),
                    precondition_error);
    CHECK_THROWS_AS(compute_window(RepKind::TwoSquares, 5000, 0, table_1e4()),
                    precondition_error);
    // table too small: needs primes to sqrt(N+H)
    CHECK_THROWS_AS(compute_window(RepKind::TwoSquares, 1000000000, 100, table_1e4()),
                    precondition_error);
    CHECK_THROWS_AS(brute_force_window(RepKind::TwoSquares, 1000000, 2000, table_1e4()),
                    size_cap_error);
}

TEST_CASE("cumulative two-squares law at 10^4") {
    auto t = build_prime_table(200);
    auto w = compute_window(RepKind::TwoSquares, 4, 10000 - 4, t);
    KahanSum acc;
    acc.add(1.0);  // n in [1, 4] contribute r(2) = 1 only
    for (double v : w.values) acc.add(v);
    double N = 10000.0;
    double residual = acc.value() - (kPi / 4.0 * N - std::sqrt(N));
    CHECK(std::abs(residual) <= 5.0 * std::cbrt(N));
}

TEST_CASE("windowed enumeration cost scales with the window, not with N") {
    // At N = 10^10 a per-n scan would touch ~10^10 candidate pairs; the
    // windowed enumeration finishes in well under two seconds.
    auto t = build_prime_table(isqrt(10000000000ull + 1000000ull) + 1);
    auto start = std::chrono::steady_clock::now();
    auto w = compute_window(RepKind::TwoPrimeSquares, 10000000000ull, 1000000, t);
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    CHECK(elapsed.count() < 2.0);
    CHECK(w.plain_sum >= 0.0);
}
