// expsums.hpp
// Generating functions on the unit circle. All the infinite series share the
// shape  sum_n w(n) exp(-n^l/N) e(n^l alpha)  and are represented as
// TruncatedSeries: a finite list (frequency n^l, coefficient w(n) e^{-n^l/N})
// plus a rigorous bound on the dropped tail. Truncation keeps n while
// n^l / N <= X with X = max(45, log(1/tol) + 5) + log(coefficient scale);
// e^{-45} is already below the double rounding floor, and the recorded
// tail bound is checked against tol (the cutoff is pushed further if not).
//
// Phases e(n^l alpha) go through reduced_phase, so they stay accurate even
// when n^l exceeds 2^53.

#pragma once

#include <limits>

#include "circleverify/common.hpp"
#include "circleverify/sieve.hpp"

namespace circleverify {

// z = 1/N - 2 pi i alpha, the circle-method variable; Y = Re(1/z).
struct CircleParams {
    uint64_t N = 1;
    double alpha = 0.0;
    cdouble z;
    double Y = 0.0;

    static CircleParams make(uint64_t N, double alpha) {
        if (N < 1) throw precondition_error("CircleParams: N must be >= 1");
        if (!(alpha >= -0.5 && alpha <= 0.5))
            throw precondition_error("CircleParams: alpha must lie in [-1/2, 1/2]");
        CircleParams p;
        p.N = N;
        p.alpha = alpha;
        double dN = static_cast<double>(N);
        p.z = cdouble{1.0 / dN, -kTwoPi * alpha};
        p.Y = dN / (1.0 + 4.0 * kPi * kPi * alpha * alpha * dN * dN);
        return p;
    }
};

struct TruncatedSeries {
    unsigned ell = 2;
    uint64_t N = 1;
    std::vector<std::pair<int64_t, double>> terms;  // frequency n^l -> coefficient
    int64_t cutoff = 0;                             // largest base n kept
    double tail_bound = 0.0;                        // bound on the dropped |tail|

    cdouble eval(double alpha) const {
        KahanSumComplex acc;
        for (const auto& [freq, c] : terms)
            acc.add(c * unit_circle_int(static_cast<unsigned __int128>(freq), alpha));
        return acc.value();
    }
};

enum class SeriesKind {
    VonMangoldt,  // weights Lambda(n), n >= 2
    PrimeLog,     // weights log p over primes
    Unit          // weight 1 over all m >= 1
};

namespace detail {

inline void check_tol(double tol) {
    if (!(tol > 0.0 && tol <= 1e-6))
        throw precondition_error("tol must lie in (0, 1e-6]");
}

// Tail of sum_{n > n0} w(n) exp(-n^l/N) by the geometric majorant
// exp(-n^l/N) <= exp(-x0) q^(n-n0) with q = exp(-l n0^(l-1)/N), using
// w(n0+j) <= wmax + j/n0 for the logarithmic weights (w <= 1 for unit).
inline double series_tail_bound(unsigned ell, uint64_t N, uint64_t n0, bool log_weights) {
    double x0 = static_cast<double>(pow_sat(n0, ell)) / static_cast<double>(N);
    double decay = static_cast<double>(ell) *
                   static_cast<double>(pow_sat(n0, ell - 1)) / static_cast<double>(N);
    double q = std::exp(-decay);
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    double geo = q / (1.0 - q);
    double head = std::exp(-x0);
    if (!log_weights) return head * geo;
    double wmax = std::log(static_cast<double>(n0) + 1.0);
    return head * (wmax * geo + (1.0 / static_cast<double>(n0)) * geo / (1.0 - q));
}

}  // namespace detail

// Builds the truncated series for one of the three weights. For the two
// log-weighted kinds the table must cover the cutoff; the error message
// names the required limit.
inline TruncatedSeries build_series(SeriesKind kind, unsigned ell, uint64_t N, double tol,
                                    const PrimeTable* table) {
    detail::check_tol(tol);
    if (ell < 1) throw precondition_error("build_series: ell must be >= 1");
    if (N < 1) throw precondition_error("build_series: N must be >= 1");

    const bool log_weights = (kind != SeriesKind::Unit);
    double X = std::max(45.0, std::log(1.0 / tol) + 5.0);
    for (int attempt = 0;; ++attempt) {
        // coefficient scale: log(cutoff) for log weights, 1 otherwise
        double budget = X;
        uint64_t guess = ikroot(static_cast<uint64_t>(static_cast<double>(N) * budget), ell);
        if (log_weights) budget += std::log(std::max(2.0, std::log(static_cast<double>(guess + 2))) );
        uint64_t cutoff = std::max<uint64_t>(
            ikroot(static_cast<uint64_t>(static_cast<double>(N) * budget), ell), 1);

        double tail = detail::series_tail_bound(ell, N, cutoff, log_weights);
        if (tail > tol && attempt < 60) {
            X += 10.0;
            continue;
        }

        if (log_weights) {
            if (table == nullptr)
                throw precondition_error("build_series: prime table required for log weights");
            if (table->limit() < cutoff)
                throw precondition_error(
                    "build_series: sieve limit " + std::to_string(table->limit()) +
                    " too small, need at least " + std::to_string(cutoff));
        }

        TruncatedSeries s;
        s.ell = ell;
        s.N = N;
        s.cutoff = static_cast<int64_t>(cutoff);
        s.tail_bound = tail;
        double invN = 1.0 / static_cast<double>(N);
        switch (kind) {
            case SeriesKind::Unit:
                s.terms.reserve(cutoff);
                for (uint64_t m = 1; m <= cutoff; ++m) {
                    uint64_t f = pow_sat(m, ell);
                    s.terms.emplace_back(static_cast<int64_t>(f),
                                         std::exp(-static_cast<double>(f) * invN));
                }
                break;
            case SeriesKind::PrimeLog:
                for (uint64_t p : table->primes()) {
                    if (p > cutoff) break;
                    uint64_t f = pow_sat(p, ell);
                    s.terms.emplace_back(static_cast<int64_t>(f),
                                         std::log(static_cast<double>(p)) *
                                             std::exp(-static_cast<double>(f) * invN));
                }
                break;
            case SeriesKind::VonMangoldt:
                for (uint64_t n = 2; n <= cutoff; ++n) {
                    double w = von_mangoldt(*table, n);
                    if (w == 0.0) continue;
                    uint64_t f = pow_sat(n, ell);
                    s.terms.emplace_back(static_cast<int64_t>(f),
                                         w * std::exp(-static_cast<double>(f) * invN));
                }
                break;
        }
        return s;
    }
}

// S~_l(alpha) = sum Lambda(n) e^{-n^l/N} e(n^l alpha)
inline cdouble s_tilde(unsigned ell, const CircleParams& p, double tol,
                       const PrimeTable& table) {
    return build_series(SeriesKind::VonMangoldt, ell, p.N, tol, &table).eval(p.alpha);
}

// T~_l(alpha) = sum over primes log p e^{-p^l/N} e(p^l alpha)
inline cdouble t_tilde(unsigned ell, const CircleParams& p, double tol,
                       const PrimeTable& table) {
    return build_series(SeriesKind::PrimeLog, ell, p.N, tol, &table).eval(p.alpha);
}

// omega_l(alpha) = sum_{m >= 1} e^{-m^l/N} e(m^l alpha)
inline cdouble omega_series(unsigned ell, const CircleParams& p, double tol) {
    return build_series(SeriesKind::Unit, ell, p.N, tol, nullptr).eval(p.alpha);
}

// U(alpha, H) = sum_{1 <= m <= H} e(m alpha); closed form away from integers,
// exactly H at integer alpha.
inline cdouble u_kernel(double alpha, uint64_t H) {
    if (H < 1) throw precondition_error("u_kernel: H must be >= 1");
    double fr = frac_nearest(alpha);
    if (fr == 0.0) return {static_cast<double>(H), 0.0};
    double dH = static_cast<double>(H);
    cdouble prefactor = unit_circle(frac_nearest((dH + 1.0) * 0.5 * alpha));
    return prefactor * (std::sin(kPi * dH * fr) / std::sin(kPi * fr));
}

// |U| without the unit-modulus prefactor; used by the exact-inequality suite.
inline double u_kernel_abs(double alpha, uint64_t H) {
    double fr = frac_nearest(alpha);
    if (fr == 0.0) return static_cast<double>(H);
    return std::abs(std::sin(kPi * static_cast<double>(H) * fr) / std::sin(kPi * fr));
}

namespace detail {
// Lanczos approximation, g = 7, the standard 9-coefficient double set
// (about 15 significant digits); reflection below 1/2.
inline double gamma_positive(double x) {
    static const double c[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_positive(1.0 - x));
    x -= 1.0;
    double a = c[0];
    double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
    return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

inline cdouble principal_root(cdouble z, unsigned ell) {
    if (ell == 1) return z;
    if (ell == 2) return std::sqrt(z);
    return std::pow(z, 1.0 / static_cast<double>(ell));
}
}  // namespace detail

// Gamma(1/l) / (l z^{1/l}) with the principal branch of z^{1/l}
// (well defined since Re z = 1/N > 0).
inline cdouble gamma_factor(unsigned ell, const CircleParams& p) {
    if (ell < 1) throw precondition_error("gamma_factor: ell must be >= 1");
    double g = detail::gamma_positive(1.0 / static_cast<double>(ell));
    return g / (static_cast<double>(ell) * detail::principal_root(p.z, ell));
}

// E~_l(alpha) = S~_l(alpha) - Gamma(1/l)/(l z^{1/l})
inline cdouble e_tilde(unsigned ell, const CircleParams& p, double tol,
                       const PrimeTable& table) {
    return s_tilde(ell, p, tol, table) - gamma_factor(ell, p);
}

// sum_{k >= 1} e^{-k^2 pi^2 / z}; magnitudes decay like exp(-k^2 pi^2 Y).
inline cdouble omega_tail(const CircleParams& p) {
    cdouble inv_z = 1.0 / p.z;
    cdouble w = kPi * kPi * inv_z;  // Re w = pi^2 Y > 0
    double rew = w.real();
    double budget = 50.0;
    uint64_t kmax = static_cast<uint64_t>(std::sqrt(budget / std::max(rew, 1e-300))) + 2;
    KahanSumComplex acc;
    for (uint64_t k = 1; k <= kmax; ++k) {
        double kk = static_cast<double>(k) * static_cast<double>(k);
        if (kk * rew > 745.0) break;
        acc.add(std::exp(-kk * w));
    }
    return acc.value();
}

namespace detail {
// theta at a general argument w with Re w > 0: 1 + 2 sum_{k>=1} e^{-k^2 w},
// truncated once the magnitude budget is exhausted.
inline cdouble theta_at(cdouble w, double tol) {
    double rew = w.real();
    double budget = std::max(45.0, std::log(1.0 / tol) + 5.0);
    uint64_t kmax = static_cast<uint64_t>(std::sqrt(budget / std::max(rew, 1e-300))) + 2;
    KahanSumComplex acc;
    for (uint64_t k = 1; k <= kmax; ++k) {
        double kk = static_cast<double>(k) * static_cast<double>(k);
        if (kk * rew > 745.0) break;
        acc.add(std::exp(-kk * w));
    }
    return 1.0 + 2.0 * acc.value();
}
}  // namespace detail

// theta(z) = sum_{n in Z} e^{-n^2 z} = 1 + 2 omega_2(alpha); evaluated with
// reduced phases since the frequencies n^2 are exact integers.
inline cdouble theta_value(const CircleParams& p, double tol) {
    return 1.0 + 2.0 * omega_series(2, p, tol);
}

// | theta(z) - (pi/z)^{1/2} theta(pi^2/z) |, both sides truncated to tol.
inline double theta_functional_residual(const CircleParams& p, double tol) {
    detail::check_tol(tol);
    cdouble lhs = theta_value(p, tol);
    cdouble w = kPi * kPi / p.z;
    cdouble rhs = std::sqrt(kPi / p.z) * detail::theta_at(w, tol);
    return std::abs(lhs - rhs);
}

// T_2(alpha) = sum_{1 <= m^2 <= N} e(m^2 alpha)
inline cdouble finite_t2(double alpha, uint64_t N) {
    uint64_t mmax = isqrt(N);
    KahanSumComplex acc;
    for (uint64_t m = 1; m <= mmax; ++m)
        acc.add(unit_circle_int(static_cast<unsigned __int128>(m) * m, alpha));
    return acc.value();
}

// f_2(alpha) = (1/2) sum_{1 <= m <= N} m^{-1/2} e(m alpha)
inline cdouble finite_f2(double alpha, uint64_t N) {
    if (N > 100000000ull)
        throw size_cap_error("finite_f2: N above the 10^8 direct-sum budget");
    KahanSumComplex acc;
    for (uint64_t m = 1; m <= N; ++m)
        acc.add(unit_circle_int(m, alpha) / std::sqrt(static_cast<double>(m)));
    return 0.5 * acc.value();
}

}  // namespace circleverify
