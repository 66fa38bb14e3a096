// circle.hpp
// Exact full-circle integration and arc quadrature.
//
// Full-circle integrals of band-limited integrands are never quadratured:
// the integrand is a truncated trigonometric polynomial, so the integral is
// an exact Fourier coefficient extracted from an FFT product. Only partial
// arcs use composite Gauss-Legendre panels (16 nodes, panel width at most
// 1/(4*bandwidth), accepted after a panel-halving check).
//
// decompose() reproduces the main-term/minor-arc splits numerically: the
// window sum equals the sum of the pieces I_0.., each evaluated by Fourier
// extraction (full circle) or panel quadrature (arcs).

#pragma once

#include <functional>
#include <map>
#include <optional>

#include "circleverify/common.hpp"
#include "circleverify/expsums.hpp"
#include "circleverify/fft.hpp"
#include "circleverify/repcount.hpp"

namespace circleverify {

// ---------------------------------------------------------------------------
// Sparse trigonometric polynomials: frequency -> complex coefficient.
// ---------------------------------------------------------------------------
struct TrigPolynomial {
    std::vector<std::pair<int64_t, cdouble>> coeffs;  // sorted by frequency

    static TrigPolynomial from_series(const TruncatedSeries& s) {
        TrigPolynomial p;
        p.coeffs.reserve(s.terms.size());
        for (const auto& [f, c] : s.terms) p.coeffs.emplace_back(f, cdouble{c, 0.0});
        return p;
    }

    static TrigPolynomial single(int64_t freq, cdouble c) {
        TrigPolynomial p;
        p.coeffs.emplace_back(freq, c);
        return p;
    }

    int64_t degree() const {
        int64_t d = 0;
        for (const auto& [f, c] : coeffs) d = std::max(d, std::abs(f));
        return d;
    }

    cdouble coefficient(int64_t freq) const {
        auto it = std::lower_bound(coeffs.begin(), coeffs.end(), freq,
                                   [](const auto& a, int64_t f) { return a.first < f; });
        if (it != coeffs.end() && it->first == freq) return it->second;
        return {};
    }

    cdouble eval(double alpha) const {
        KahanSumComplex acc;
        for (const auto& [f, c] : coeffs) {
            cdouble e = unit_circle_int(static_cast<unsigned __int128>(std::abs(f)), alpha);
            acc.add(c * (f >= 0 ? e : std::conj(e)));
        }
        return acc.value();
    }
};

// Exact Fourier coefficient of a trig polynomial: full-circle integral of
// p(alpha) e(-freq alpha) is the stored coefficient, by orthogonality.
inline cdouble fourier_coefficient(const TrigPolynomial& p, int64_t freq) {
    return p.coefficient(freq);
}

namespace detail {
inline std::pair<int64_t, int64_t> freq_range(const TrigPolynomial& p) {
    if (p.coeffs.empty()) return {0, 0};
    return {p.coeffs.front().first, p.coeffs.back().first};
}
}  // namespace detail

// Exact sparse convolution; reference path for the FFT product.
inline TrigPolynomial multiply_direct(const TrigPolynomial& a, const TrigPolynomial& b) {
    std::map<int64_t, cdouble> acc;
    for (const auto& [fa, ca] : a.coeffs)
        for (const auto& [fb, cb] : b.coeffs) acc[fa + fb] += ca * cb;
    TrigPolynomial r;
    r.coeffs.assign(acc.begin(), acc.end());
    return r;
}

// Dense FFT convolution. Coefficients below 1e-15 of the largest are dropped
// so the sparse representation is not flooded with FFT noise.
inline TrigPolynomial multiply_fft(const TrigPolynomial& a, const TrigPolynomial& b) {
    if (a.coeffs.empty() || b.coeffs.empty()) return {};
    auto [alo, ahi] = detail::freq_range(a);
    auto [blo, bhi] = detail::freq_range(b);
    size_t na = static_cast<size_t>(ahi - alo) + 1;
    size_t nb = static_cast<size_t>(bhi - blo) + 1;
    if (next_pow2(na + nb - 1) > (size_t{1} << 25))
        throw size_cap_error("multiply_fft: product degree exceeds the FFT size cap");
    std::vector<cdouble> da(na), db(nb);
    for (const auto& [f, c] : a.coeffs) da[static_cast<size_t>(f - alo)] = c;
    for (const auto& [f, c] : b.coeffs) db[static_cast<size_t>(f - blo)] = c;
    auto prod = fft_convolve(std::move(da), std::move(db));

    double peak = 0.0;
    for (const auto& c : prod) peak = std::max(peak, std::abs(c));
    double drop = peak * 1e-15;
    TrigPolynomial r;
    for (size_t i = 0; i < prod.size(); ++i)
        if (std::abs(prod[i]) > drop)
            r.coeffs.emplace_back(alo + blo + static_cast<int64_t>(i), prod[i]);
    return r;
}

// Auto-select: small products go through the exact sparse path.
inline TrigPolynomial multiply_series(const TrigPolynomial& a, const TrigPolynomial& b) {
    double pairs = static_cast<double>(a.coeffs.size()) * static_cast<double>(b.coeffs.size());
    int64_t deg = a.degree() + b.degree();
    if (deg > 4096 && pairs > 1e6) return multiply_fft(a, b);
    return multiply_direct(a, b);
}

// ---------------------------------------------------------------------------
// Window extraction: sum over n in [N+1, N+H] of the coefficient of
// frequency n in a*b, computed from the dense FFT product. This equals the
// full-circle integral of a(alpha) b(alpha) U(-alpha, H) e(-N alpha) exactly
// (orthogonality), up to the series truncation tails.
// ---------------------------------------------------------------------------
inline cdouble window_coefficient_sum(const TrigPolynomial& a, const TrigPolynomial& b,
                                      uint64_t N, uint64_t H) {
    if (a.coeffs.empty() || b.coeffs.empty()) return {};
    auto [alo, ahi] = detail::freq_range(a);
    auto [blo, bhi] = detail::freq_range(b);
    size_t na = static_cast<size_t>(ahi - alo) + 1;
    size_t nb = static_cast<size_t>(bhi - blo) + 1;
    if (next_pow2(na + nb - 1) > (size_t{1} << 25))
        throw size_cap_error("window_coefficient_sum: FFT size cap exceeded");
    std::vector<cdouble> da(na), db(nb);
    for (const auto& [f, c] : a.coeffs) da[static_cast<size_t>(f - alo)] = c;
    for (const auto& [f, c] : b.coeffs) db[static_cast<size_t>(f - blo)] = c;
    auto prod = fft_convolve(std::move(da), std::move(db));

    int64_t base = alo + blo;  // frequency of prod[0]
    KahanSumComplex acc;
    for (uint64_t n = N + 1; n <= N + H; ++n) {
        int64_t idx = static_cast<int64_t>(n) - base;
        if (idx < 0 || idx >= static_cast<int64_t>(prod.size())) continue;
        acc.add(prod[static_cast<size_t>(idx)]);
    }
    return acc.value();
}

// ---------------------------------------------------------------------------
// The exact circle identity: the exp-weighted window sum of a representation
// function equals the full-circle integral of the matching generating
// product against U(-alpha, H) e(-N alpha).
// ---------------------------------------------------------------------------
struct IdentityCheck {
    double lhs = 0.0;      // exp-weighted window sum (enumeration)
    double rhs = 0.0;      // Fourier-extracted integral (FFT product)
    double abs_diff = 0.0;
    double rel_diff = 0.0;  // abs_diff / max(lhs, 1)
};

namespace detail {
inline std::pair<TrigPolynomial, TrigPolynomial> identity_factors(RepKind kind, uint64_t N,
                                                                  double tol,
                                                                  const PrimeTable& table) {
    switch (kind) {
        case RepKind::TwoPrimeSquares: {
            auto t = TrigPolynomial::from_series(
                build_series(SeriesKind::PrimeLog, 2, N, tol, &table));
            return {t, t};
        }
        case RepKind::PrimeSquarePlusSquare: {
            auto t = TrigPolynomial::from_series(
                build_series(SeriesKind::PrimeLog, 2, N, tol, &table));
            auto o = TrigPolynomial::from_series(
                build_series(SeriesKind::Unit, 2, N, tol, nullptr));
            return {t, o};
        }
        case RepKind::TwoSquares: {
            auto o = TrigPolynomial::from_series(
                build_series(SeriesKind::Unit, 2, N, tol, nullptr));
            return {o, o};
        }
    }
    throw std::invalid_argument("identity_factors: bad kind");
}
}  // namespace detail

inline IdentityCheck full_circle_identity(RepKind kind, uint64_t N, uint64_t H, double tol,
                                          const PrimeTable& table, int threads = 1) {
    if (N > 100000) throw size_cap_error("full_circle_identity: exact path capped at N <= 1e5");
    auto window = compute_window(kind, N, H, table, threads);
    auto [fa, fb] = detail::identity_factors(kind, N, tol, table);
    cdouble rhs = window_coefficient_sum(fa, fb, N, H);

    IdentityCheck out;
    out.lhs = window.exp_weighted_sum;
    out.rhs = rhs.real();
    out.abs_diff = std::abs(out.lhs - out.rhs);
    out.rel_diff = out.abs_diff / std::max(out.lhs, 1.0);
    return out;
}

// ---------------------------------------------------------------------------
// Composite Gauss-Legendre panel quadrature over [a, b]. Panel width is at
// most 1/(4*bandwidth); the result is accepted once halving the panels moves
// it by no more than tol*max(1,|I|) plus a rounding floor proportional to
// the accumulated |f| mass (32 eps int |f|).
// ---------------------------------------------------------------------------
namespace detail {
// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirrored)
inline constexpr double kGL16Node[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr double kGL16Weight[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

struct PanelPass {
    cdouble integral;
    double abs_mass;  // int |f|, used as a rounding floor
};

inline PanelPass panel_pass(const std::function<cdouble(double)>& f, double a, double b,
                            int64_t panels, int threads) {
    std::vector<cdouble> chunk_sum;
    std::vector<double> chunk_mass;
    int max_chunks = resolve_threads(threads);
    chunk_sum.assign(std::max(1, max_chunks), cdouble{});
    chunk_mass.assign(std::max(1, max_chunks), 0.0);
    double width = (b - a) / static_cast<double>(panels);
    parallel_chunks(panels, threads, [&](int chunk, int64_t lo, int64_t hi) {
        KahanSumComplex acc;
        KahanSum mass;
        for (int64_t k = lo; k < hi; ++k) {
            double mid = a + (static_cast<double>(k) + 0.5) * width;
            double half = 0.5 * width;
            for (int j = 0; j < 8; ++j) {
                cdouble fp = f(mid + half * kGL16Node[j]);
                cdouble fm = f(mid - half * kGL16Node[j]);
                double w = kGL16Weight[j] * half;
                acc.add(w * (fp + fm));
                mass.add(w * (std::abs(fp) + std::abs(fm)));
            }
        }
        chunk_sum[static_cast<size_t>(chunk)] = acc.value();
        chunk_mass[static_cast<size_t>(chunk)] = mass.value();
    });
    PanelPass out{};
    KahanSumComplex total;
    KahanSum mass;
    for (size_t i = 0; i < chunk_sum.size(); ++i) {
        total.add(chunk_sum[i]);
        mass.add(chunk_mass[i]);
    }
    out.integral = total.value();
    out.abs_mass = mass.value();
    return out;
}
}  // namespace detail

inline cdouble integrate_arc(const std::function<cdouble(double)>& f, double a, double b,
                             double bandwidth, double tol, int threads = 1) {
    if (!(a < b)) throw precondition_error("integrate_arc: need a < b");
    if (!(tol > 0.0)) throw precondition_error("integrate_arc: tol must be positive");
    int64_t panels =
        std::max<int64_t>(1, static_cast<int64_t>(std::ceil((b - a) * 4.0 * bandwidth)));
    if (panels > (int64_t{1} << 22))
        throw size_cap_error("integrate_arc: initial panel count exceeds the cap");

    auto coarse = detail::panel_pass(f, a, b, panels, threads);
    for (int refine = 0; refine < 8; ++refine) {
        if (panels > (int64_t{1} << 22))
            throw quadrature_failure("integrate_arc: panel cap reached before convergence");
        auto fine = detail::panel_pass(f, a, b, panels * 2, threads);
        double diff = std::abs(fine.integral - coarse.integral);
        double gate = std::max(tol * std::max(1.0, std::abs(fine.integral)),
                               32.0 * std::numeric_limits<double>::epsilon() * fine.abs_mass);
        if (diff <= gate) return fine.integral;
        panels *= 2;
        coarse = fine;
    }
    throw quadrature_failure("integrate_arc: no convergence after 8 refinements (last diff " +
                             std::to_string(std::abs(coarse.integral.real())) + ")");
}

// ---------------------------------------------------------------------------
// Mean squares int_{-xi}^{xi} |f|^2.
// ---------------------------------------------------------------------------

// Exact route for a truncated series with real coefficients:
//   int_{-xi}^{xi} |sum c_m e(f_m a)|^2 da
//     = 2 xi sum c_m^2 + 2 sum_{m<m'} c_m c_m' sin(2 pi (f_m'-f_m) xi)/(pi (f_m'-f_m))
inline double mean_square_series(const TruncatedSeries& s, double xi) {
    size_t K = s.terms.size();
    if (K > 30000) throw size_cap_error("mean_square_series: too many terms for the pairwise path");
    KahanSum acc;
    for (const auto& [f, c] : s.terms) acc.add(2.0 * xi * c * c);
    for (size_t i = 0; i < K; ++i) {
        for (size_t j = i + 1; j < K; ++j) {
            int64_t d = s.terms[j].first - s.terms[i].first;
            double cross = 2.0 * s.terms[i].second * s.terms[j].second;
            double phase = reduced_phase(static_cast<unsigned __int128>(d), xi);
            acc.add(cross * std::sin(kTwoPi * phase) / (kPi * static_cast<double>(d)));
        }
    }
    return acc.value();
}

// Full-circle route via a dense DFT grid: for a trig polynomial of degree D
// and any M > 2D, (1/M) sum_j |f(j/M)|^2 is the exact integral.
inline double mean_square_dft(const TruncatedSeries& s) {
    int64_t deg = 0;
    for (const auto& [f, c] : s.terms) deg = std::max(deg, std::abs(f));
    size_t M = next_pow2(static_cast<size_t>(2 * deg + 2));
    if (M > (size_t{1} << 24)) throw size_cap_error("mean_square_dft: FFT size cap exceeded");
    std::vector<cdouble> grid(M);
    for (const auto& [f, c] : s.terms) grid[static_cast<size_t>(f)] += c;
    fft_inplace(grid, true);  // grid[j] = (1/M) f(j/M)
    KahanSum acc;
    for (const auto& v : grid) acc.add(std::norm(v));
    return acc.value() * static_cast<double>(M);
}

// Quadrature route for arbitrary evaluators, 2 int_0^xi |f|^2 by symmetry.
inline double mean_square_quadrature(const std::function<cdouble(double)>& f, double xi,
                                     double bandwidth, double tol, int threads = 1) {
    auto sq = [&f](double alpha) -> cdouble {
        return {std::norm(f(alpha)), 0.0};
    };
    return 2.0 * integrate_arc(sq, 0.0, xi, bandwidth, tol, threads).real();
}

// ---------------------------------------------------------------------------
// Numeric reproduction of the window-sum decompositions: the weighted window
// sum splits into I_0 + I_1 + ... with the main term inside I_1 and every
// other piece small. Full-circle pieces are Fourier extractions; arc pieces
// are panel quadratures sharing one integrand evaluation per node.
// ---------------------------------------------------------------------------
enum class TheoremId { T1, T2, T3, T4 };

inline const char* theorem_name(TheoremId t) {
    switch (t) {
        case TheoremId::T1: return "T1";
        case TheoremId::T2: return "T2";
        case TheoremId::T3: return "T3";
        case TheoremId::T4: return "T4";
    }
    return "?";
}

inline TheoremId theorem_from_name(const std::string& s) {
    if (s == "T1" || s == "t1") return TheoremId::T1;
    if (s == "T2" || s == "t2") return TheoremId::T2;
    if (s == "T3" || s == "t3") return TheoremId::T3;
    if (s == "T4" || s == "t4") return TheoremId::T4;
    throw std::invalid_argument("unknown theorem id: " + s);
}

inline RepKind theorem_kind(TheoremId t) {
    return (t == TheoremId::T1 || t == TheoremId::T2) ? RepKind::TwoPrimeSquares
                                                      : RepKind::PrimeSquarePlusSquare;
}

// B(N, c) = exp(c (L / log L)^{1/3}), L = log N
inline double arc_cut_B(uint64_t N, double c) {
    double L = std::log(static_cast<double>(N));
    return std::exp(c * std::cbrt(L / std::log(L)));
}

struct ArcDecomposition {
    TheoremId theorem = TheoremId::T1;
    uint64_t N = 0, H = 0;
    double c_or_A = 0.0;   // the c of B(N,c) for T2/T4, the A for T3, 0 for T1
    double B = 0.0;        // computed B (T2/T4) or A (T3); 0 for T1
    double arc_cut = 0.5;  // the major arc is [-arc_cut, arc_cut]
    std::vector<cdouble> I;
    std::optional<std::pair<double, double>> J;
    double main_term = 0.0;       // (pi/4) sum exp(-n/N) over the window
    double weighted_sum = 0.0;    // enumeration side
    double reconstruction = 0.0;  // Re(sum I)
    double closure_error = 0.0;   // |reconstruction - weighted_sum| / max(|weighted_sum|,1)
};

namespace detail {

struct DecomposeContext {
    uint64_t N, H;
    double tol;
    int threads;
    const PrimeTable* table;
    TruncatedSeries St, Ss, So;  // T~_2, S~_2, omega_2
    bool fe_omega = false;       // evaluate omega through the functional equation

    cdouble z_at(double alpha) const {
        return {1.0 / static_cast<double>(N), -kTwoPi * alpha};
    }
    // U(-alpha, H) e(-N alpha)
    cdouble kernel(double alpha) const {
        return u_kernel(-alpha, H) * unit_circle_int(N, -alpha);
    }
    cdouble singular(double alpha) const {  // sqrt(pi)/(2 sqrt(z)), the l=2 gamma factor
        return std::sqrt(kPi) / (2.0 * std::sqrt(z_at(alpha)));
    }
    cdouble omega(double alpha) const {
        if (!fe_omega) return So.eval(alpha);
        cdouble z = z_at(alpha);
        cdouble piz = std::sqrt(kPi / z);
        return 0.5 * piz - 0.5 + piz * omega_tail(CircleParams::make(N, alpha));
    }
    cdouble e2(double alpha) const { return Ss.eval(alpha) - singular(alpha); }
};

// Decide the omega evaluation route for a major arc [-cut, cut]: the
// functional-equation tail needs ~sqrt(50/(pi^2 Y)) terms at the arc edge,
// the direct series always needs ~cutoff terms.
inline bool omega_fe_cheaper(const DecomposeContext& ctx, double cut) {
    double Yedge = CircleParams::make(ctx.N, cut).Y;
    double fe_terms = std::sqrt(50.0 / (kPi * kPi * std::max(Yedge, 1e-300)));
    return fe_terms < 0.5 * static_cast<double>(ctx.So.cutoff);
}

}  // namespace detail

inline ArcDecomposition decompose(TheoremId theorem, uint64_t N, uint64_t H, double c_or_A,
                                  double tol, const PrimeTable& table, int threads = 1) {
    if (N > 100000) throw size_cap_error("decompose: exact path capped at N <= 1e5");
    detail::check_tol(tol);

    detail::DecomposeContext ctx;
    ctx.N = N;
    ctx.H = H;
    ctx.tol = tol;
    ctx.threads = threads;
    ctx.table = &table;
    ctx.St = build_series(SeriesKind::PrimeLog, 2, N, tol, &table);
    ctx.Ss = build_series(SeriesKind::VonMangoldt, 2, N, tol, &table);

    RepKind kind = theorem_kind(theorem);
    auto window = compute_window(kind, N, H, table, threads);

    ArcDecomposition out;
    out.theorem = theorem;
    out.N = N;
    out.H = H;
    out.c_or_A = c_or_A;
    out.weighted_sum = window.exp_weighted_sum;
    {
        KahanSum m;
        for (uint64_t n = N + 1; n <= N + H; ++n)
            m.add(std::exp(-static_cast<double>(n) / static_cast<double>(N)));
        out.main_term = kPi / 4.0 * m.value();
    }

    const double dN = static_cast<double>(N), dH = static_cast<double>(H);
    auto Pt = TrigPolynomial::from_series(ctx.St);
    auto Ps = TrigPolynomial::from_series(ctx.Ss);
    const double kernel_bw = dN + dH;

    if (theorem == TheoremId::T1 || theorem == TheoremId::T2) {
        // integrand T~^2 U e(-N alpha); pieces split off pi/(4z)
        cdouble extractT = window_coefficient_sum(Pt, Pt, N, H);
        cdouble extractS = window_coefficient_sum(Ps, Ps, N, H);
        double sbw = 2.0 * static_cast<double>(Ps.degree()) + kernel_bw;

        auto pole = [&](double a) { return kPi / (4.0 * ctx.z_at(a)) * ctx.kernel(a); };

        if (theorem == TheoremId::T1) {
            out.arc_cut = 0.5;
            cdouble q = integrate_arc(pole, -0.5, 0.5, kernel_bw, tol, threads);
            out.I = {extractT - extractS, q, extractS - q};
        } else {
            double c = c_or_A > 0.0 ? c_or_A : 0.1;
            out.c_or_A = c;
            out.B = arc_cut_B(N, c);
            double cut = out.B / dH;
            if (cut > 0.5)
                throw precondition_error("decompose: B/H exceeds 1/2; enlarge H or shrink c");
            out.arc_cut = cut;
            auto s2_minus_pole = [&](double a) {
                cdouble s = ctx.Ss.eval(a);
                return (s * s - kPi / (4.0 * ctx.z_at(a))) * ctx.kernel(a);
            };
            auto s2 = [&](double a) {
                cdouble s = ctx.Ss.eval(a);
                return s * s * ctx.kernel(a);
            };
            cdouble q1 = integrate_arc(pole, -cut, cut, kernel_bw, tol, threads);
            cdouble q2 = integrate_arc(s2_minus_pole, -cut, cut, sbw, tol, threads);
            cdouble q3 = integrate_arc(s2, -cut, cut, sbw, tol, threads);
            out.I = {extractT - extractS, q1, q2, extractS - q3};

            // diagnostic bounds on the major arc: int |E~|/|z|^{1/2}, int |E~|^2
            auto j1 = [&](double a) -> cdouble {
                return {std::abs(ctx.e2(a)) / std::sqrt(std::abs(ctx.z_at(a))), 0.0};
            };
            auto j2 = [&](double a) -> cdouble { return {std::norm(ctx.e2(a)), 0.0}; };
            double jbw = static_cast<double>(Ps.degree());
            out.J = {{integrate_arc(j1, -cut, cut, jbw, 1e-6, threads).real(),
                      integrate_arc(j2, -cut, cut, 2.0 * jbw, 1e-6, threads).real()}};
        }
    } else {
        // T3/T4: integrand T~ omega U e(-N alpha); omega swapped through the
        // theta functional equation on the major arc
        ctx.So = build_series(SeriesKind::Unit, 2, N, tol, nullptr);
        auto Po = TrigPolynomial::from_series(ctx.So);
        cdouble extractT = window_coefficient_sum(Pt, Po, N, H);
        cdouble extractS = window_coefficient_sum(Ps, Po, N, H);

        double cut;
        if (theorem == TheoremId::T3) {
            double L = std::log(dN);
            double A = c_or_A > 0.0 ? c_or_A : L * L / std::log(L);
            out.c_or_A = A;
            out.B = A;
            cut = A / dH;
            if (A <= 1.0 || cut > 0.5)
                throw precondition_error("decompose: need 1 < A and A/H <= 1/2");
        } else {
            double c = c_or_A > 0.0 ? c_or_A : 0.1;
            out.c_or_A = c;
            out.B = arc_cut_B(N, c);
            cut = out.B / dH;
            if (cut > 0.5)
                throw precondition_error("decompose: B/H exceeds 1/2; enlarge H or shrink c");
        }
        out.arc_cut = cut;
        ctx.fe_omega = detail::omega_fe_cheaper(ctx, cut);

        double obw = static_cast<double>(Po.degree());
        double sbw = static_cast<double>(Ps.degree());

        auto main_pole = [&](double a) {
            cdouble z = ctx.z_at(a);
            return (kPi / (4.0 * z) - std::sqrt(kPi) / (4.0 * std::sqrt(z))) * ctx.kernel(a);
        };
        auto etilde_omega = [&](double a) { return ctx.e2(a) * ctx.omega(a) * ctx.kernel(a); };
        auto tail_pole = [&](double a) {
            cdouble z = ctx.z_at(a);
            return kPi / (2.0 * z) * omega_tail(CircleParams::make(N, a)) * ctx.kernel(a);
        };
        auto s_omega = [&](double a) { return ctx.Ss.eval(a) * ctx.omega(a) * ctx.kernel(a); };

        cdouble q1 = integrate_arc(main_pole, -cut, cut, kernel_bw, tol, threads);
        cdouble q2 = integrate_arc(etilde_omega, -cut, cut, sbw + obw + kernel_bw, tol, threads);
        cdouble q3 = integrate_arc(tail_pole, -cut, cut, kernel_bw, tol, threads);
        cdouble q4 = integrate_arc(s_omega, -cut, cut, sbw + obw + kernel_bw, tol, threads);
        out.I = {extractT - extractS, q1, q2, q3, extractS - q4};

        if (theorem == TheoremId::T4) {
            auto j1 = [&](double a) -> cdouble { return {std::norm(ctx.e2(a)), 0.0}; };
            auto j2 = [&](double a) -> cdouble { return {std::norm(ctx.omega(a)), 0.0}; };
            out.J = {{integrate_arc(j1, -cut, cut, 2.0 * sbw, 1e-6, threads).real(),
                      integrate_arc(j2, -cut, cut, 2.0 * obw, 1e-6, threads).real()}};
        }
    }

    KahanSumComplex recon;
    for (const auto& piece : out.I) recon.add(piece);
    out.reconstruction = recon.value().real();
    out.closure_error =
        std::abs(out.reconstruction - out.weighted_sum) / std::max(std::abs(out.weighted_sum), 1.0);
    return out;
}

}  // namespace circleverify
