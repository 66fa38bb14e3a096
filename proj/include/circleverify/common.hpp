// common.hpp
// Shared numeric machinery: exact integer roots, compensated summation,
// phase reduction for e(x) = exp(2*pi*i*x) with exact integer frequencies,
// FNV-1a hashing, and a deterministic chunked parallel-for.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace circleverify {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr const char* kVersion = "0.1.0";

// Error taxonomy. CLI maps precondition/argument problems to exit 2 when they
// come from flag validation, and runtime failures (size caps, quadrature
// non-convergence) to exit 1.
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct size_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct quadrature_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Exact integer roots. Floating point provides only the seed; the returned
// value is verified with integer multiplications.
// ---------------------------------------------------------------------------

// floor(sqrt(n)), exact for all n < 2^63
inline uint64_t isqrt(uint64_t n) {
    if (n == 0) return 0;
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    if (r > 0xFFFFFFFFull) r = 0xFFFFFFFFull;
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// smallest b with b*b >= x (x >= 1)
inline uint64_t ceil_sqrt(uint64_t x) {
    if (x <= 1) return x;
    return isqrt(x - 1) + 1;
}

// b^k with saturation at UINT64_MAX
inline uint64_t pow_sat(uint64_t b, unsigned k) {
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
        acc *= b;
        if (acc > ~uint64_t{0}) return ~uint64_t{0};
    }
    return static_cast<uint64_t>(acc);
}

// floor(n^(1/k)), exact
inline uint64_t ikroot(uint64_t n, unsigned k) {
    if (k <= 1 || n < 2) return n;
    uint64_t r = static_cast<uint64_t>(std::pow(static_cast<double>(n), 1.0 / k));
    if (r < 1) r = 1;
    while (r > 1 && pow_sat(r, k) > n) --r;
    while (pow_sat(r + 1, k) <= n) ++r;
    return r;
}

// ---------------------------------------------------------------------------
// Compensated (Kahan) summation for long accumulations.
// ---------------------------------------------------------------------------
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

struct KahanSumComplex {
    KahanSum re, im;
    void add(cdouble x) {
        re.add(x.real());
        im.add(x.imag());
    }
    cdouble value() const { return {re.value(), im.value()}; }
};

// ---------------------------------------------------------------------------
// Unit-circle phases. Frequencies are exact integers (n^l) that can exceed
// 2^53, so the phase m*alpha is reduced with fma residuals: m is split into
// two exact doubles, each product is kept as value + residual, and only the
// fractional parts are recombined. The reduced phase is accurate to a few
// ulps of 1 regardless of the size of m.
// ---------------------------------------------------------------------------

// x - nearest integer, in [-1/2, 1/2]; exact for every double
inline double frac_nearest(double x) { return x - std::nearbyint(x); }

inline double reduced_phase(unsigned __int128 m, double alpha) {
    if (m <= (static_cast<unsigned __int128>(1) << 53)) {
        return frac_nearest(static_cast<double>(static_cast<uint64_t>(m)) * alpha);
    }
    double hi = std::ldexp(static_cast<double>(static_cast<uint64_t>(m >> 32)), 32);
    double lo = static_cast<double>(static_cast<uint64_t>(m & 0xFFFFFFFFull));
    double p = hi * alpha;
    double pe = std::fma(hi, alpha, -p);
    double q = lo * alpha;
    double qe = std::fma(lo, alpha, -q);
    double r = frac_nearest(p) + frac_nearest(pe) + frac_nearest(q) + frac_nearest(qe);
    return frac_nearest(r);
}

// e(x) = exp(2 pi i x)
inline cdouble unit_circle(double x) {
    double t = kTwoPi * x;
    return {std::cos(t), std::sin(t)};
}

inline cdouble unit_circle_int(unsigned __int128 m, double alpha) {
    return unit_circle(reduced_phase(m, alpha));
}

// ---------------------------------------------------------------------------
// FNV-1a 64-bit, used to checksum binary dumps.
// ---------------------------------------------------------------------------
inline uint64_t fnv1a64(const void* data, size_t len,
                        uint64_t h = 14695981039346656037ull) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Deterministic chunked parallel-for. [0, n) is split into at most `threads`
// contiguous chunks whose boundaries depend only on (n, threads), so results
// merged in chunk order do not depend on the execution schedule. Exceptions
// thrown by workers are rethrown on the calling thread.
// ---------------------------------------------------------------------------
inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

inline void parallel_chunks(int64_t n, int threads,
                            const std::function<void(int, int64_t, int64_t)>& fn) {
    threads = resolve_threads(threads);
    int chunks = static_cast<int>(std::min<int64_t>(threads, std::max<int64_t>(n, 1)));
    if (chunks <= 1) {
        fn(0, 0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(chunks);
    pool.reserve(chunks);
    for (int c = 0; c < chunks; ++c) {
        int64_t b = n * c / chunks;
        int64_t e = n * (c + 1) / chunks;
        pool.emplace_back([&, c, b, e] {
            try {
                fn(c, b, e);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

}  // namespace circleverify
