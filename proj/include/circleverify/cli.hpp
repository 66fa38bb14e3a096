// cli.hpp
// Command-line front door. Subcommands: sieve, reps, expsum, identity,
// decompose, theorem, scan, lemmas. Numeric flags accept scientific notation
// (1e8) but reject non-integral values. Exit codes: 0 success, 1
// computational failure, 2 usage error.

#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "circleverify/io.hpp"

namespace circleverify {

enum class Command { Sieve, Reps, Expsum, Identity, Decompose, Theorem, Scan, Lemmas };

struct RunConfig {
    Command command = Command::Sieve;
    uint64_t N = 0;
    uint64_t H = 0;
    RepKind kind = RepKind::TwoPrimeSquares;
    unsigned ell = 2;
    double tol = 1e-14;
    double c = 0.1;
    double A = 0.0;  // 0 = choose L^2 / log L
    int threads = 0;
    std::string output;  // empty = stdout
    std::string format;  // "csv" or "json"; empty = command default
    bool seed_report = false;

    // command-specific
    uint64_t sieve_limit = 0;  // 0 = auto-size from N + H
    std::string dump_path, load_path;
    TheoremId which = TheoremId::T1;
    std::string function = "stilde";
    double alpha_lo = 0.0, alpha_hi = 0.0;
    uint64_t alpha_count = 1;
    std::vector<std::pair<uint64_t, uint64_t>> schedule;
    std::vector<uint64_t> n_grid = {10000, 1000000};
    int grid_points = 64;
    double grid_offset = 0.0;
};

namespace cli_detail {

// Accepts plain integers and scientific notation that denotes an exact
// integer (1e8, 2.5e5); rejects fractional values and junk.
inline uint64_t parse_integer_like(const std::string& s, const std::string& flag) {
    if (s.empty()) throw CLI::ValidationError(flag, "empty numeric value");
    errno = 0;
    char* end = nullptr;
    unsigned long long direct = std::strtoull(s.c_str(), &end, 10);
    if (end && *end == '\0' && errno == 0 && s.find('-') == std::string::npos)
        return static_cast<uint64_t>(direct);
    char* dend = nullptr;
    double v = std::strtod(s.c_str(), &dend);
    if (!dend || *dend != '\0')
        throw CLI::ValidationError(flag, "not a number: " + s);
    if (!(v >= 0.0) || !std::isfinite(v))
        throw CLI::ValidationError(flag, "must be a non-negative finite value: " + s);
    if (v > 4.6e18) throw CLI::ValidationError(flag, "value too large: " + s);
    if (v != std::floor(v))
        throw CLI::ValidationError(flag, "must be an integer (got " + s + ")");
    return static_cast<uint64_t>(v);
}

inline RepKind parse_kind(const std::string& s) {
    if (s == "prime2") return RepKind::TwoPrimeSquares;
    if (s == "primesq") return RepKind::PrimeSquarePlusSquare;
    if (s == "squares") return RepKind::TwoSquares;
    throw CLI::ValidationError("--kind", "expected prime2, primesq or squares: " + s);
}

// "lo:hi:count" or a single value
inline void parse_alpha_grid(const std::string& s, RunConfig& cfg) {
    size_t c1 = s.find(':');
    if (c1 == std::string::npos) {
        cfg.alpha_lo = cfg.alpha_hi = std::stod(s);
        cfg.alpha_count = 1;
        return;
    }
    size_t c2 = s.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw CLI::ValidationError("--alpha-grid", "expected lo:hi:count: " + s);
    cfg.alpha_lo = std::stod(s.substr(0, c1));
    cfg.alpha_hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    cfg.alpha_count = parse_integer_like(s.substr(c2 + 1), "--alpha-grid");
    if (cfg.alpha_count < 1)
        throw CLI::ValidationError("--alpha-grid", "count must be >= 1");
}

// "N:H,N:H,..."
inline void parse_schedule(const std::string& s, RunConfig& cfg) {
    cfg.schedule.clear();
    std::istringstream ss(s);
    std::string entry;
    while (std::getline(ss, entry, ',')) {
        if (entry.empty()) continue;
        size_t colon = entry.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--schedule", "expected N:H entries: " + entry);
        uint64_t N = parse_integer_like(entry.substr(0, colon), "--schedule");
        uint64_t H = parse_integer_like(entry.substr(colon + 1), "--schedule");
        if (H < 1) throw CLI::ValidationError("--schedule", "H must be >= 1");
        cfg.schedule.emplace_back(N, H);
    }
}

inline int env_threads() {
    const char* env = std::getenv("CIRCLEVERIFY_THREADS");
    if (!env) return 0;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    return (end && *end == '\0' && v > 0) ? static_cast<int>(v) : 0;
}

inline PrimeTable table_for(const RunConfig& cfg, uint64_t needed) {
    uint64_t limit = cfg.sieve_limit > 0 ? cfg.sieve_limit : std::max<uint64_t>(needed, 2);
    return build_prime_table(limit);
}

inline void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + cfg.output);
    file << text;
}

inline json config_echo(const RunConfig& cfg) {
    return json{{"version", kVersion},
                {"N", cfg.N},
                {"H", cfg.H},
                {"tol", cfg.tol},
                {"c", cfg.c},
                {"threads", cfg.threads},
                {"kind", rep_kind_name(cfg.kind)},
                {"which", theorem_name(cfg.which)}};
}

}  // namespace cli_detail

// Builds the CLI11 application around a RunConfig. Kept separate from main()
// so tests can drive parsing and execution in-process.
inline int parse_args(const std::vector<std::string>& args, RunConfig& cfg, std::ostream& err) {
    CLI::App app{"numerical verification toolkit for short-interval square representations"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // frees -h / --h for the window length

    std::string kind_str = "prime2", which_str = "T1", alpha_spec, schedule_spec, n_grid_spec;
    std::string n_str, h_str, limit_str;

    auto add_sub = [&](const char* name, const char* desc) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->set_help_flag("--help", "print help");
        return s;
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", cfg.tol, "series/quadrature tolerance")
            ->check(CLI::Range(1e-300, 1e-6));
        sub->add_option("--threads", cfg.threads, "worker threads (0 = auto)")
            ->check(CLI::Range(0, 4096));
        sub->add_option("--output", cfg.output, "output path (default stdout)");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--seed-report", cfg.seed_report, "embed config echo and version");
        sub->add_option("--sieve-limit", limit_str, "explicit sieve limit (default: auto)");
    };

    auto* sieve = add_sub("sieve", "build a prime table");
    sieve->add_option("--limit", limit_str, "sieve limit (required unless --load)");
    sieve->add_option("--dump", cfg.dump_path, "write the binary table");
    sieve->add_option("--load", cfg.load_path, "load and verify a binary table");
    sieve->add_option("--threads", cfg.threads)->check(CLI::Range(0, 4096));
    sieve->add_option("--output", cfg.output);
    sieve->add_flag("--seed-report", cfg.seed_report);

    auto* reps = add_sub("reps", "representation window");
    reps->add_option("--kind", kind_str, "prime2 | primesq | squares");
    reps->add_option("--n", n_str, "window base N")->required();
    reps->add_option("--h", h_str, "window length H")->required();
    add_common(reps);

    auto* expsum = add_sub("expsum", "evaluate a series on an alpha grid");
    expsum->add_option("--function", cfg.function,
                       "stilde|ttilde|omega|u|gamma|etilde|theta|thetaresidual|omegatail|t2|f2");
    expsum->add_option("--ell", cfg.ell)->check(CLI::Range(1u, 8u));
    expsum->add_option("--n", n_str)->required();
    expsum->add_option("--h", h_str);
    expsum->add_option("--alpha-grid", alpha_spec, "alpha value or lo:hi:count")->required();
    add_common(expsum);

    auto* identity = add_sub("identity", "exact circle identity check");
    identity->add_option("--kind", kind_str);
    identity->add_option("--n", n_str)->required();
    identity->add_option("--h", h_str)->required();
    add_common(identity);

    auto* decomp = add_sub("decompose", "window-sum decomposition");
    decomp->add_option("--which", which_str, "T1 | T2 | T3 | T4");
    decomp->add_option("--n", n_str)->required();
    decomp->add_option("--h", h_str)->required();
    decomp->add_option("--c", cfg.c, "arc-cut constant for T2/T4")->check(CLI::Range(1e-6, 10.0));
    decomp->add_option("--a", cfg.A, "arc cut A for T3 (default L^2/log L)");
    add_common(decomp);

    auto* theorem = add_sub("theorem", "window sum vs pi H / 4");
    theorem->add_option("--which", which_str);
    theorem->add_option("--n", n_str)->required();
    theorem->add_option("--h", h_str)->required();
    add_common(theorem);

    auto* scan = add_sub("scan", "run a schedule of (N, H)");
    scan->add_option("--which", which_str);
    scan->add_option("--schedule", schedule_spec, "comma-separated N:H entries")->required();
    add_common(scan);

    auto* lemmas = add_sub("lemmas", "bound suite");
    lemmas->add_option("--n-grid", n_grid_spec, "comma-separated N values");
    lemmas->add_option("--grid-points", cfg.grid_points)->check(CLI::Range(4, 100000));
    lemmas->add_option("--grid-offset", cfg.grid_offset)->check(CLI::Range(0.0, 0.99));
    add_common(lemmas);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (sieve->parsed()) cfg.command = Command::Sieve;
        else if (reps->parsed()) cfg.command = Command::Reps;
        else if (expsum->parsed()) cfg.command = Command::Expsum;
        else if (identity->parsed()) cfg.command = Command::Identity;
        else if (decomp->parsed()) cfg.command = Command::Decompose;
        else if (theorem->parsed()) cfg.command = Command::Theorem;
        else if (scan->parsed()) cfg.command = Command::Scan;
        else if (lemmas->parsed()) cfg.command = Command::Lemmas;

        if (!n_str.empty()) cfg.N = cli_detail::parse_integer_like(n_str, "--n");
        if (!h_str.empty()) cfg.H = cli_detail::parse_integer_like(h_str, "--h");
        if (!limit_str.empty())
            cfg.sieve_limit = cli_detail::parse_integer_like(limit_str, "--limit");
        cfg.kind = cli_detail::parse_kind(kind_str);
        cfg.which = theorem_from_name(which_str);
        if (!alpha_spec.empty()) cli_detail::parse_alpha_grid(alpha_spec, cfg);
        if (!schedule_spec.empty()) cli_detail::parse_schedule(schedule_spec, cfg);
        if (!n_grid_spec.empty()) {
            cfg.n_grid.clear();
            std::istringstream ss(n_grid_spec);
            std::string item;
            while (std::getline(ss, item, ','))
                cfg.n_grid.push_back(cli_detail::parse_integer_like(item, "--n-grid"));
        }

        // command-level argument validation beyond CLI11's
        bool needs_window = cfg.command == Command::Reps || cfg.command == Command::Identity ||
                            cfg.command == Command::Decompose || cfg.command == Command::Theorem;
        if (needs_window && cfg.H < 1) throw CLI::ValidationError("--h", "H must be >= 1");
        if (needs_window && cfg.N < 4) throw CLI::ValidationError("--n", "N must be >= 4");
        if (cfg.command == Command::Sieve && cfg.load_path.empty() && cfg.sieve_limit < 2)
            throw CLI::ValidationError("--limit", "limit must be >= 2");
        if (cfg.threads == 0) cfg.threads = cli_detail::env_threads();
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::ostringstream help;
            help << app.help();
            err << help.str();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return -1;  // parsed fine, not an exit
}

namespace cli_detail {

inline std::string run_command(const RunConfig& cfg) {
    using clock = std::chrono::steady_clock;
    std::ostringstream text;

    switch (cfg.command) {
        case Command::Sieve: {
            auto t0 = clock::now();
            PrimeTable table;
            if (!cfg.load_path.empty()) {
                std::ifstream in(cfg.load_path, std::ios::binary);
                if (!in) throw std::runtime_error("cannot open " + cfg.load_path);
                table = PrimeTable::load(in);
            } else {
                table = build_prime_table(cfg.sieve_limit);
            }
            if (!cfg.dump_path.empty()) {
                std::ofstream out(cfg.dump_path, std::ios::binary);
                if (!out) throw std::runtime_error("cannot open " + cfg.dump_path);
                table.dump(out);
            }
            double dt = std::chrono::duration<double>(clock::now() - t0).count();
            json j{{"limit", table.limit()},
                   {"prime_count", table.primes().size()},
                   {"largest_prime", table.primes().empty() ? 0 : table.primes().back()},
                   {"wall_time_s", dt}};
            if (cfg.seed_report) j["report"] = config_echo(cfg);
            text << j.dump(2) << '\n';
            break;
        }
        case Command::Reps: {
            auto t0 = clock::now();
            auto table = table_for(cfg, isqrt(cfg.N + cfg.H) + 1);
            auto w = compute_window(cfg.kind, cfg.N, cfg.H, table, cfg.threads);
            double dt = std::chrono::duration<double>(clock::now() - t0).count();
            if (cfg.format == "csv") {
                if (cfg.seed_report)
                    text << "# version " << kVersion << " config " << config_echo(cfg).dump()
                         << '\n';
                repwindow_to_csv(w, text);
            } else {
                json j = repwindow_summary_json(w, dt);
                if (cfg.seed_report) j["report"] = config_echo(cfg);
                text << j.dump(2) << '\n';
            }
            break;
        }
        case Command::Expsum: {
            uint64_t N = cfg.N;
            std::vector<ExpsumRow> rows;
            std::optional<TruncatedSeries> series;
            std::unique_ptr<PrimeTable> table;
            auto need_table = [&](double budget_hint) {
                uint64_t cutoff = ikroot(
                    static_cast<uint64_t>(static_cast<double>(N) * budget_hint), cfg.ell);
                table = std::make_unique<PrimeTable>(table_for(cfg, cutoff + 16));
            };
            const std::string& f = cfg.function;
            if (f == "stilde" || f == "etilde") {
                need_table(60.0 + std::log(1.0 / cfg.tol));
                series = build_series(SeriesKind::VonMangoldt, cfg.ell, N, cfg.tol, table.get());
            } else if (f == "ttilde") {
                need_table(60.0 + std::log(1.0 / cfg.tol));
                series = build_series(SeriesKind::PrimeLog, cfg.ell, N, cfg.tol, table.get());
            } else if (f == "omega") {
                series = build_series(SeriesKind::Unit, cfg.ell, N, cfg.tol, nullptr);
            }
            for (uint64_t i = 0; i < cfg.alpha_count; ++i) {
                double alpha = cfg.alpha_count == 1
                                   ? cfg.alpha_lo
                                   : cfg.alpha_lo + (cfg.alpha_hi - cfg.alpha_lo) *
                                         static_cast<double>(i) /
                                         static_cast<double>(cfg.alpha_count - 1);
                cdouble v;
                double tail = 0.0;
                if (f == "stilde" || f == "ttilde" || f == "omega") {
                    v = series->eval(alpha);
                    tail = series->tail_bound;
                } else if (f == "etilde") {
                    auto p = CircleParams::make(N, alpha);
                    v = series->eval(alpha) - gamma_factor(cfg.ell, p);
                    tail = series->tail_bound;
                } else if (f == "u") {
                    v = u_kernel(alpha, cfg.H ? cfg.H : 1);
                } else if (f == "gamma") {
                    v = gamma_factor(cfg.ell, CircleParams::make(N, alpha));
                } else if (f == "theta") {
                    v = theta_value(CircleParams::make(N, alpha), cfg.tol);
                    tail = cfg.tol;
                } else if (f == "thetaresidual") {
                    v = theta_functional_residual(CircleParams::make(N, alpha), cfg.tol);
                    tail = cfg.tol;
                } else if (f == "omegatail") {
                    v = omega_tail(CircleParams::make(N, alpha));
                } else if (f == "t2") {
                    v = finite_t2(alpha, N);
                } else if (f == "f2") {
                    v = finite_f2(alpha, N);
                } else {
                    throw std::invalid_argument("unknown function: " + f);
                }
                rows.push_back({alpha, v.real(), v.imag(), tail});
            }
            if (cfg.seed_report)
                text << "# version " << kVersion << " config " << config_echo(cfg).dump() << '\n';
            expsum_to_csv(rows, text);
            break;
        }
        case Command::Identity: {
            auto table = table_for(cfg, std::max(isqrt(cfg.N + cfg.H) + 1,
                                                 ikroot(static_cast<uint64_t>(
                                                            60.0 * static_cast<double>(cfg.N)),
                                                        2) + 16));
            auto check =
                full_circle_identity(cfg.kind, cfg.N, cfg.H, cfg.tol, table, cfg.threads);
            json j = identity_json(check);
            if (cfg.seed_report) j["report"] = config_echo(cfg);
            text << j.dump(2) << '\n';
            break;
        }
        case Command::Decompose: {
            auto table = table_for(cfg, std::max(isqrt(cfg.N + cfg.H) + 1,
                                                 ikroot(static_cast<uint64_t>(
                                                            60.0 * static_cast<double>(cfg.N)),
                                                        2) + 16));
            double c_or_A =
                (cfg.which == TheoremId::T3) ? cfg.A : cfg.c;
            auto d = decompose(cfg.which, cfg.N, cfg.H, c_or_A, cfg.tol, table, cfg.threads);
            json j = decomposition_json(d);
            if (cfg.seed_report) j["report"] = config_echo(cfg);
            text << j.dump(2) << '\n';
            break;
        }
        case Command::Theorem: {
            auto table = table_for(cfg, isqrt(cfg.N + cfg.H) + 1);
            auto r = run_theorem(cfg.which, cfg.N, cfg.H, table, cfg.threads);
            if (cfg.format == "csv") {
                ScanResult res;
                res.runs = {r};
                scan_to_csv(res, text);
            } else {
                json j = theorem_run_json(r);
                if (cfg.seed_report) j["report"] = config_echo(cfg);
                text << j.dump(2) << '\n';
            }
            break;
        }
        case Command::Scan: {
            uint64_t need = 2;
            for (auto [N, H] : cfg.schedule) need = std::max(need, isqrt(N + H) + 1);
            auto table = table_for(cfg, need);
            auto res = scan(cfg.which, cfg.schedule, table, cfg.threads);
            if (cfg.seed_report)
                text << "# version " << kVersion << " config " << config_echo(cfg).dump() << '\n';
            scan_to_csv(res, text);
            break;
        }
        case Command::Lemmas: {
            LemmaSuiteConfig lcfg;
            lcfg.N_values = cfg.n_grid;
            lcfg.alpha_points = cfg.grid_points;
            lcfg.grid_offset = cfg.grid_offset;
            lcfg.tol = std::min(cfg.tol, 1e-10);
            uint64_t biggest = 2;
            for (uint64_t n : lcfg.trivial_N) biggest = std::max(biggest, n);
            for (uint64_t n : lcfg.N_values) biggest = std::max(biggest, n);
            auto table = table_for(
                cfg, ikroot(static_cast<uint64_t>(60.0 * static_cast<double>(biggest)), 2) + 16);
            auto checks = lemma_suite(lcfg, table, cfg.threads);
            json j = lemma_suite_json(checks);
            if (cfg.seed_report) {
                json wrapped{{"report", config_echo(cfg)}, {"checks", j}};
                text << wrapped.dump(2) << '\n';
            } else {
                text << j.dump(2) << '\n';
            }
            break;
        }
    }
    return text.str();
}

}  // namespace cli_detail

inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        std::string text = cli_detail::run_command(cfg);
        cli_detail::write_output(cfg, text, out);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    int parse_result = parse_args(args, cfg, err);
    if (parse_result >= 0) return parse_result;
    return execute(cfg, out, err);
}

}  // namespace circleverify
