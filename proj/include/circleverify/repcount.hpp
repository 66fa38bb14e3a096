// repcount.hpp
// Representation functions over short windows [N+1, N+H]:
//
//   TwoPrimeSquares        r(n) = sum over ordered prime pairs (p1, p2) with
//                                 p1^2 + p2^2 = n of log p1 * log p2
//   PrimeSquarePlusSquare  r(n) = sum over (p, m), p prime, m >= 1, with
//                                 p^2 + m^2 = n of log p
//   TwoSquares             r(n) = # ordered pairs (m1, m2), m1, m2 >= 1,
//                                 with m1^2 + m2^2 = n
//
// compute_window enumerates per first coordinate a: the admissible second
// coordinates form one integer interval, so total work is
// O(sqrt(N+H) + H * pi(sqrt(N)) / sqrt(N) + matches) rather than a per-n scan.
// brute_force_window is the naive per-n oracle used by tests, and
// two_squares_r2 is the classical divisor-formula oracle for r2(n).

#pragma once

#include <algorithm>
#include <vector>

#include "circleverify/common.hpp"
#include "circleverify/sieve.hpp"

namespace circleverify {

enum class RepKind { TwoPrimeSquares, PrimeSquarePlusSquare, TwoSquares };

inline const char* rep_kind_name(RepKind k) {
    switch (k) {
        case RepKind::TwoPrimeSquares: return "prime2";
        case RepKind::PrimeSquarePlusSquare: return "primesq";
        case RepKind::TwoSquares: return "squares";
    }
    return "?";
}

struct RepWindow {
    RepKind kind = RepKind::TwoSquares;
    uint64_t N = 0;
    uint64_t H = 0;
    std::vector<double> values;      // values[i] = r(N+1+i)
    double plain_sum = 0.0;          // sum of values
    double exp_weighted_sum = 0.0;   // sum of exp(-n/N) * r(n)
};

namespace detail {

// Second-coordinate interval for first coordinate a and target range
// [lo, hi]: all b >= 1 with lo <= a^2 + b^2 <= hi.
struct BRange {
    uint64_t lo = 1, hi = 0;  // empty when lo > hi
};

inline BRange second_coordinate_range(uint64_t a, uint64_t lo, uint64_t hi) {
    uint64_t aa = a * a;
    if (aa + 1 > hi) return {};
    uint64_t bmin = (lo > aa + 1) ? ceil_sqrt(lo - aa) : 1;
    uint64_t bmax = isqrt(hi - aa);
    if (bmin > bmax) return {};
    return {bmin, bmax};
}

// Fills values[n - N - 1] for n in [seg_lo, seg_hi] (a subrange of the
// window). Writing is confined to that slice, so disjoint segments can run
// concurrently.
inline void accumulate_segment(RepKind kind, uint64_t N, uint64_t seg_lo, uint64_t seg_hi,
                               const PrimeTable& table, std::vector<double>& values) {
    const uint64_t amax = isqrt(seg_hi - 1);
    if (kind == RepKind::TwoSquares) {
        for (uint64_t a = 1; a <= amax; ++a) {
            BRange r = second_coordinate_range(a, seg_lo, seg_hi);
            for (uint64_t b = r.lo; b <= r.hi; ++b) values[a * a + b * b - N - 1] += 1.0;
        }
        return;
    }
    const bool second_prime = (kind == RepKind::TwoPrimeSquares);
    for (uint64_t p : table.primes()) {
        if (p > amax) break;
        const double logp = std::log(static_cast<double>(p));
        BRange r = second_coordinate_range(p, seg_lo, seg_hi);
        for (uint64_t b = r.lo; b <= r.hi; ++b) {
            if (second_prime) {
                if (table.is_prime(b))
                    values[p * p + b * b - N - 1] += logp * std::log(static_cast<double>(b));
            } else {
                values[p * p + b * b - N - 1] += logp;
            }
        }
    }
}

// Second pass over the finished values: compensated plain and exp-weighted
// sums. Deterministic regardless of how the values were produced.
inline void finish_sums(RepWindow& w) {
    KahanSum plain, weighted;
    const double invN = w.N > 0 ? 1.0 / static_cast<double>(w.N) : 0.0;
    for (uint64_t i = 0; i < w.H; ++i) {
        double v = w.values[i];
        plain.add(v);
        if (v != 0.0) {
            double n = static_cast<double>(w.N + 1 + i);
            weighted.add((w.N > 0 ? std::exp(-n * invN) : 0.0) * v);
        }
    }
    w.plain_sum = plain.value();
    w.exp_weighted_sum = weighted.value();
}

}  // namespace detail

// Windowed enumeration. Parallelism splits the window into contiguous
// segments with disjoint output slices, so values are bit-identical for any
// thread count; the two sums are merged in one deterministic second pass.
inline RepWindow compute_window(RepKind kind, uint64_t N, uint64_t H, const PrimeTable& table,
                                int threads = 1) {
    if (N < 4) throw precondition_error("compute_window: N must be >= 4");
    if (H < 1) throw precondition_error("compute_window: H must be >= 1");
    if (H >= (uint64_t{1} << 62) || N > (uint64_t{1} << 62) - H)
        throw std::overflow_error("compute_window: N + H exceeds the supported integer range");
    uint64_t need = isqrt(N + H);
    if (table.limit() < need)
        throw precondition_error("compute_window: sieve limit " + std::to_string(table.limit()) +
                                 " too small, need at least " + std::to_string(need));

    RepWindow w;
    w.kind = kind;
    w.N = N;
    w.H = H;
    w.values.assign(H, 0.0);

    parallel_chunks(static_cast<int64_t>(H), threads, [&](int, int64_t b, int64_t e) {
        if (b == e) return;
        detail::accumulate_segment(kind, N, N + 1 + static_cast<uint64_t>(b),
                                   N + static_cast<uint64_t>(e), table, w.values);
    });
    detail::finish_sums(w);
    return w;
}

// Naive per-n oracle: O(H * sqrt(N+H)). Test-only; sizes are capped.
inline RepWindow brute_force_window(RepKind kind, uint64_t N, uint64_t H,
                                    const PrimeTable& table) {
    if (N > 1000000 || N + H > 1001000)
        throw size_cap_error("brute_force_window: refused, N+H above the 10^6 + 10^3 cap");
    if (H < 1) throw precondition_error("brute_force_window: H must be >= 1");
    if (table.limit() < isqrt(N + H))
        throw precondition_error("brute_force_window: sieve limit too small");

    RepWindow w;
    w.kind = kind;
    w.N = N;
    w.H = H;
    w.values.assign(H, 0.0);
    for (uint64_t n = N + 1; n <= N + H; ++n) {
        double acc = 0.0;
        for (uint64_t a = 1; a * a < n; ++a) {
            uint64_t rest = n - a * a;
            uint64_t b = isqrt(rest);
            if (b * b != rest || b < 1) continue;
            switch (kind) {
                case RepKind::TwoPrimeSquares:
                    if (table.is_prime(a) && table.is_prime(b))
                        acc += std::log(static_cast<double>(a)) * std::log(static_cast<double>(b));
                    break;
                case RepKind::PrimeSquarePlusSquare:
                    if (table.is_prime(a)) acc += std::log(static_cast<double>(a));
                    break;
                case RepKind::TwoSquares:
                    acc += 1.0;
                    break;
            }
        }
        w.values[n - N - 1] = acc;
    }
    detail::finish_sums(w);
    return w;
}

// Classical r2(n) = 4 * sum_{d | n} chi4(d) (all signed integer pairs,
// including zero coordinates), computed through the factorization of n:
// the divisor sum is multiplicative, contributing (e+1) for p = 1 mod 4,
// [e even] for p = 3 mod 4, and 1 for p = 2.
inline int64_t two_squares_r2(uint64_t n) {
    if (n == 0) throw std::invalid_argument("two_squares_r2: n must be >= 1");
    if (n > 1000000000000ull)
        throw size_cap_error("two_squares_r2: n above the 10^12 trial-factorization budget");

    static const PrimeTable factor_table = build_prime_table(1000000);

    int64_t chi_sum = 1;
    uint64_t rest = n;
    for (uint64_t p : factor_table.primes()) {
        if (p * p > rest) break;
        if (rest % p != 0) continue;
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (p % 4 == 1) chi_sum *= static_cast<int64_t>(e) + 1;
        else if (p % 4 == 3 && (e & 1)) return 0;
    }
    if (rest > 1) {
        // no factor <= 10^6 and rest <= 10^12, so rest is prime
        if (rest % 4 == 3) return 0;
        if (rest % 4 == 1) chi_sum *= 2;
    }
    return 4 * chi_sum;
}

// Positive-coordinate ordered-pair count: r2 counts 4 sign choices per pair
// with both coordinates nonzero, plus 4 axis points when n is a square.
inline int64_t two_squares_positive_count(uint64_t n) {
    int64_t r2 = two_squares_r2(n);
    uint64_t s = isqrt(n);
    bool square = (s * s == n);
    return (r2 - (square ? 4 : 0)) / 4;
}

}  // namespace circleverify
