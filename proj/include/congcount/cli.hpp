#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "congcount/audit.hpp"
#include "congcount/config.hpp"
#include "congcount/congcount.hpp"
#include "congcount/report.hpp"
#include "congcount/smoothing.hpp"

namespace congcount::cli {

// Exit codes: 0 ok, 1 failed assertion or violated certificate, 2 usage,
// 3 I/O.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssert = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QueryOptions {
    std::string kind;
    uint64_t p = 0;
    std::optional<uint64_t> g;
    int64_t H = 0;
    int64_t M = 0;
    int64_t S = 0;
    std::optional<uint64_t> K, N, T, h;
    std::string u_list, v_list, x_list;
    std::optional<uint64_t> u_size, v_size, x_size;
    std::optional<int64_t> xs, ys;
    std::optional<uint64_t> xt, yt;
    uint64_t seed = 0;
};

struct SweepOptions {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<uint32_t> workers;
};

struct LemmaOptions {
    uint64_t trials = 500;
    uint64_t m_min = 31;
    uint64_t m_max = 257;
    uint64_t seed = 0;
    std::optional<std::string> out;
};

struct WeilOptions {
    std::vector<uint64_t> primes;
    std::optional<uint64_t> max_p;
    uint64_t cap = 199;
    uint64_t samples = 2000;
    uint64_t h = 1;
    uint64_t seed = 0;
    std::optional<std::string> out;
};

struct L1Options {
    std::vector<uint64_t> primes;
    std::vector<std::string> T = {"1", "p/4", "p/2", "p"};
    std::vector<int64_t> S = {0};
    std::optional<std::string> out;
};

struct ReportOptions {
    std::string in;
    std::optional<std::string> to_json;
};

struct Command {
    enum class Sub { Help, Count, Sandwich, Sweep, CheckLemma, CheckWeil, CheckL1, Report };
    Sub sub = Sub::Help;
    std::string help_text;
    QueryOptions query;
    SweepOptions sweep;
    LemmaOptions lemma;
    WeilOptions weil;
    L1Options l1;
    ReportOptions report;
};

namespace detail {

inline std::vector<uint64_t> parse_u64_list(const std::string& csv) {
    std::vector<uint64_t> out;
    std::istringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw usage_error("bad entry '" + tok + "' in list '" + csv + "'");
        try {
            out.push_back(std::stoull(tok));
        } catch (const std::out_of_range&) {
            throw usage_error("value out of range in list '" + csv + "'");
        }
    }
    return out;
}

inline void add_query_flags(CLI::App* sub, QueryOptions& q) {
    sub->add_option("--kind", q.kind, "count kind: J, J1, J2, J3 or J4")
        ->required()
        ->check(CLI::IsMember({"J", "J1", "J2", "J3", "J4"}));
    sub->add_option("--p", q.p, "prime modulus")->required();
    sub->add_option("--g", q.g, "generator override (must be a primitive root)");
    sub->add_option("--H", q.H, "exponent interval offset (J)");
    sub->add_option("--K", q.K, "exponent interval length (J)");
    sub->add_option("--M", q.M, "value interval offset (J)");
    sub->add_option("--N", q.N, "value interval length (J)");
    sub->add_option("--h", q.h, "target residue (J1, J4)");
    sub->add_option("--n", q.N, "range length N (J1, J4)");
    sub->add_option("--u", q.u_list, "set U as comma list (J2)");
    sub->add_option("--v", q.v_list, "set V as comma list (J2)");
    sub->add_option("--u-size", q.u_size, "random set U of this size (J2)");
    sub->add_option("--v-size", q.v_size, "random set V of this size (J2)");
    sub->add_option("--x", q.x_list, "set X as comma list (J3)");
    sub->add_option("--x-size", q.x_size, "random set X of this size (J3)");
    sub->add_option("--S", q.S, "interval offset (J2, J3)");
    sub->add_option("--T", q.T, "interval length (J2, J3)");
    sub->add_option("--xs", q.xs, "x-range offset (J4 rectangle)");
    sub->add_option("--xt", q.xt, "x-range length (J4 rectangle)");
    sub->add_option("--ys", q.ys, "y-range offset (J4 rectangle)");
    sub->add_option("--yt", q.yt, "y-range length (J4 rectangle)");
    sub->add_option("--seed", q.seed, "seed for random sets");
}

inline void validate_query(const QueryOptions& q) {
    if (!is_prime(q.p)) throw usage_error("--p " + std::to_string(q.p) + " is not prime");
    auto need = [&](bool ok, const char* what) {
        if (!ok) throw usage_error(std::string("kind ") + q.kind + " requires " + what);
    };
    if (q.kind == "J") {
        need(q.K.has_value() && q.N.has_value(), "--K and --N");
    } else if (q.kind == "J1") {
        need(q.N.has_value(), "--n");
        need(q.h.has_value(), "--h");
    } else if (q.kind == "J2") {
        need(!q.u_list.empty() || q.u_size.has_value(), "--u or --u-size");
        need(!q.v_list.empty() || q.v_size.has_value(), "--v or --v-size");
        need(q.T.has_value(), "--T");
    } else if (q.kind == "J3") {
        need(!q.x_list.empty() || q.x_size.has_value(), "--x or --x-size");
        need(q.T.has_value(), "--T");
    } else if (q.kind == "J4") {
        need(q.h.has_value(), "--h");
        need(q.N.has_value() || (q.xt.has_value() && q.yt.has_value()), "--n or --xt/--yt");
    }
}

} // namespace detail

inline Command parse_args(const std::vector<std::string>& args) {
    Command cmd;
    CLI::App app{"exact congruence-solution counting and error-envelope verification"};
    app.require_subcommand(1);
    // --h is a query flag, so the short help flag has to go
    app.set_help_flag("--help", "print help and exit");

    auto* count = app.add_subcommand("count", "exact count, main term, error and envelope");
    detail::add_query_flags(count, cmd.query);

    auto* sandwich = app.add_subcommand("sandwich", "smoothed bracket J'/D <= J <= J''/D");
    detail::add_query_flags(sandwich, cmd.query);

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config file");
    sweep->add_option("--config", cmd.sweep.config_path, "sweep config file")->required();
    sweep->add_option("--out", cmd.sweep.out, "output path (overrides config)");
    sweep->add_option("--format", cmd.sweep.format, "csv or json (overrides config)")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--workers", cmd.sweep.workers, "worker threads (overrides config)");

    auto* lemma = app.add_subcommand("check-lemma", "audit the bilinear-sum certificate");
    lemma->add_option("--trials", cmd.lemma.trials, "number of random trials");
    lemma->add_option("--m-min", cmd.lemma.m_min, "smallest modulus");
    lemma->add_option("--m-max", cmd.lemma.m_max, "largest modulus");
    lemma->add_option("--seed", cmd.lemma.seed, "RNG seed");
    lemma->add_option("--out", cmd.lemma.out, "also write the report here");

    auto* weil = app.add_subcommand("check-weil", "audit the Kloosterman Weil certificate");
    std::string weil_primes;
    weil->add_option("--primes", weil_primes, "comma list of primes");
    weil->add_option("--max-p", cmd.weil.max_p, "audit every prime up to this bound");
    weil->add_option("--cap", cmd.weil.cap, "exhaustive (a,b) enumeration cap");
    weil->add_option("--samples", cmd.weil.samples, "samples per prime beyond the cap");
    weil->add_option("--h", cmd.weil.h, "fixed h");
    weil->add_option("--seed", cmd.weil.seed, "RNG seed");
    weil->add_option("--out", cmd.weil.out, "also write the report here");

    auto* l1 = app.add_subcommand("check-l1", "report the interval-sum L1 norm against both bounds");
    std::string l1_primes, l1_T, l1_S;
    l1->add_option("--primes", l1_primes, "comma list of primes")->required();
    l1->add_option("--T", l1_T, "comma list of lengths (numbers, p, p/k, p-k)");
    l1->add_option("--S", l1_S, "comma list of offsets");
    l1->add_option("--out", cmd.l1.out, "also write the report here");

    auto* report = app.add_subcommand("report", "validate a CSV report; optionally mirror to JSON");
    report->add_option("--in", cmd.report.in, "CSV report to validate")->required();
    report->add_option("--json", cmd.report.to_json, "write a JSON mirror here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        cmd.sub = Command::Sub::Help;
        for (const auto* s : app.get_subcommands()) {
            cmd.help_text = s->help();
            return cmd;
        }
        cmd.help_text = app.help();
        return cmd;
    } catch (const CLI::ParseError& e) {
        throw usage_error(e.what());
    }

    if (count->parsed() || sandwich->parsed()) {
        cmd.sub = count->parsed() ? Command::Sub::Count : Command::Sub::Sandwich;
        detail::validate_query(cmd.query);
    } else if (sweep->parsed()) {
        cmd.sub = Command::Sub::Sweep;
    } else if (lemma->parsed()) {
        cmd.sub = Command::Sub::CheckLemma;
    } else if (weil->parsed()) {
        cmd.sub = Command::Sub::CheckWeil;
        if (!weil_primes.empty()) cmd.weil.primes = detail::parse_u64_list(weil_primes);
        if (cmd.weil.max_p) {
            auto extra = primes_in_range(3, *cmd.weil.max_p);
            cmd.weil.primes.insert(cmd.weil.primes.end(), extra.begin(), extra.end());
        }
        if (cmd.weil.primes.empty()) throw usage_error("check-weil needs --primes or --max-p");
        for (uint64_t p : cmd.weil.primes) {
            if (!is_prime(p)) throw usage_error(std::to_string(p) + " is not prime");
        }
    } else if (l1->parsed()) {
        cmd.sub = Command::Sub::CheckL1;
        cmd.l1.primes = detail::parse_u64_list(l1_primes);
        for (uint64_t p : cmd.l1.primes) {
            if (!is_prime(p)) throw usage_error(std::to_string(p) + " is not prime");
        }
        if (!l1_T.empty()) {
            cmd.l1.T.clear();
            std::istringstream ss(l1_T);
            std::string tok;
            while (std::getline(ss, tok, ',')) cmd.l1.T.push_back(tok);
        }
        if (!l1_S.empty()) {
            cmd.l1.S.clear();
            std::istringstream ss(l1_S);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                try {
                    cmd.l1.S.push_back(std::stoll(tok));
                } catch (const std::exception&) {
                    throw usage_error("bad offset '" + tok + "' in --S");
                }
            }
        }
    } else if (report->parsed()) {
        cmd.sub = Command::Sub::Report;
    }
    return cmd;
}

namespace detail {

inline ResidueSet build_set(const std::string& list, const std::optional<uint64_t>& size, uint64_t p,
                            std::mt19937_64& rng) {
    if (!list.empty()) return ResidueSet(parse_u64_list(list));
    return random_residue_set(*size, p, rng);
}

inline void write_text_report(const std::optional<std::string>& path, const std::string& text) {
    if (!path) return;
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw io_error("cannot open report for writing", *path);
    f << text;
    if (!f.flush()) throw io_error("failed writing report", *path);
}

// Shared by `count` and `sandwich`. Runs the fast counter and evaluates both
// envelopes; `sandwich` additionally brackets.
inline int run_query(const QueryOptions& opt, bool do_sandwich, std::ostream& out) {
    const PrimeField field(opt.p);
    std::mt19937_64 rng(opt.seed);
    const auto ip = static_cast<int64_t>(opt.p);
    std::ostringstream line;
    line << "kind=" << opt.kind << " p=" << opt.p;

    uint64_t count = 0;
    Rational main;
    EnvelopeParams ep;
    ep.p = static_cast<double>(opt.p);
    EnvelopeKind kind{};
    std::optional<SandwichCounts> sw;

    if (opt.kind == "J" || opt.kind == "J1") {
        GeneratorCtx ctx = find_primitive_root(field);
        if (opt.g) {
            if (!congcount::detail::is_primitive_root(*opt.g % opt.p, field))
                throw usage_error("--g is not a primitive root mod p");
            ctx.g = *opt.g % opt.p;
        }
        if (opt.kind == "J") {
            PowerBoxQuery q(ctx, opt.H, *opt.K, opt.M, *opt.N);
            line << " g=" << ctx.g << " H=" << opt.H << " K=" << *opt.K << " M=" << opt.M << " N=" << *opt.N;
            count = count_J(q);
            main = Rational(static_cast<__int128>(*opt.K) * *opt.N, ip);
            ep.K = static_cast<double>(*opt.K);
            ep.N = static_cast<double>(*opt.N);
            kind = EnvelopeKind::THM1;
            if (do_sandwich) sw = bracket_J(q);
        } else {
            PowerDiffQuery q(ctx, *opt.h, *opt.N);
            line << " g=" << ctx.g << " h=" << *opt.h << " n=" << *opt.N;
            count = count_J1(q);
            main = Rational(static_cast<__int128>(*opt.N) * *opt.N, ip);
            ep.N = static_cast<double>(*opt.N);
            kind = EnvelopeKind::THM2;
            if (do_sandwich) sw = bracket_J1(q);
        }
    } else if (opt.kind == "J2") {
        ResidueSet U = build_set(opt.u_list, opt.u_size, opt.p, rng);
        ResidueSet V = build_set(opt.v_list, opt.v_size, opt.p, rng);
        const auto u = static_cast<int64_t>(U.size()), v = static_cast<int64_t>(V.size());
        ProductIntervalQuery q(field, std::move(U), std::move(V), {opt.S, *opt.T});
        line << " u=" << u << " v=" << v << " S=" << opt.S << " T=" << *opt.T;
        if (opt.u_list.empty() || opt.v_list.empty()) line << " seed=" << opt.seed;
        count = count_J2(q);
        main = Rational(static_cast<__int128>(u) * v * *opt.T, ip);
        ep.u = static_cast<double>(u);
        ep.v = static_cast<double>(v);
        ep.T = static_cast<double>(*opt.T);
        kind = EnvelopeKind::THM3;
        if (do_sandwich) sw = bracket_J2(q);
    } else if (opt.kind == "J3") {
        ResidueSet X = build_set(opt.x_list, opt.x_size, opt.p, rng);
        const auto size = static_cast<int64_t>(X.size());
        const auto summary = max_nontrivial_spectrum(X, field);
        SetIntervalQuery q(field, std::move(X), {opt.S, *opt.T});
        line << " size=" << size << " S=" << opt.S << " T=" << *opt.T << " delta=" << format_real(summary.delta);
        if (opt.x_list.empty()) line << " seed=" << opt.seed;
        count = count_J3(q);
        main = Rational(static_cast<__int128>(size) * *opt.T, ip);
        ep.set_size = static_cast<double>(size);
        ep.T = static_cast<double>(*opt.T);
        ep.delta = summary.delta;
        kind = EnvelopeKind::THM4;
        if (do_sandwich) sw = bracket_J3(q);
    } else { // J4
        ResidueInterval xr{0, 0}, yr{0, 0};
        if (opt.N) {
            xr = {0, *opt.N};
            yr = {0, *opt.N};
        } else {
            xr = {opt.xs.value_or(0), *opt.xt};
            yr = {opt.ys.value_or(0), *opt.yt};
        }
        HyperbolaBoxQuery q(field, *opt.h, xr, yr);
        line << " h=" << *opt.h;
        if (opt.N) {
            line << " n=" << *opt.N;
        } else {
            line << " xs=" << xr.S << " xt=" << xr.T << " ys=" << yr.S << " yt=" << yr.T;
        }
        count = count_J4(q);
        main = Rational(static_cast<__int128>(xr.T) * yr.T, ip);
        ep.N = static_cast<double>(std::min(xr.T, yr.T));
        kind = EnvelopeKind::THM5;
        if (do_sandwich) sw = bracket_J4(q);
    }

    const Rational err = (Rational::from_int(static_cast<int64_t>(count)) - main).abs();
    line << " count=" << count << " main=" << main.str() << " abs_error=" << err.str();
    if (!do_sandwich) {
        line << " envelope_new=" << format_real(envelope(kind, ep))
             << " envelope_old=" << format_real(reference_envelope(kind, ep));
        out << line.str() << '\n';
        return kExitOk;
    }
    const Rational c = Rational::from_int(static_cast<int64_t>(count));
    const bool ok = sw->lower <= c && c <= sw->upper;
    line << " j_prime=" << sw->j_prime << " j_dprime=" << sw->j_dprime << " divisor=" << sw->divisor
         << " lower=" << sw->lower.str() << " upper=" << sw->upper.str()
         << " bracket=" << (ok ? "ok" : "VIOLATED");
    out << line.str() << '\n';
    return ok ? kExitOk : kExitAssert;
}

} // namespace detail

inline int run(const Command& cmd, std::ostream& out = std::cout) {
    try {
        switch (cmd.sub) {
            case Command::Sub::Help:
                out << cmd.help_text;
                return kExitOk;
            case Command::Sub::Count:
                return detail::run_query(cmd.query, false, out);
            case Command::Sub::Sandwich:
                return detail::run_query(cmd.query, true, out);
            case Command::Sub::Sweep: {
                SweepConfig cfg = load_sweep_config(cmd.sweep.config_path);
                if (cmd.sweep.out) cfg.out = *cmd.sweep.out;
                if (cmd.sweep.format) cfg.format = *cmd.sweep.format;
                if (cmd.sweep.workers) cfg.workers = *cmd.sweep.workers;
                if (cfg.out.empty()) throw usage_error("sweep: no output path (config 'out' or --out)");
                const auto records = run_sweep(cfg);
                write_report(records, cfg.out, cfg.format == "json" ? ReportFormat::Json : ReportFormat::Csv);
                out << "records=" << records.size() << " out=" << cfg.out
                    << " crossover_violations=" << crossover_violations(records).size() << " seed=" << cfg.seed
                    << '\n';
                return kExitOk;
            }
            case Command::Sub::CheckLemma: {
                const auto rep = audit_lemma({cmd.lemma.trials, cmd.lemma.m_min, cmd.lemma.m_max, cmd.lemma.seed});
                std::ostringstream text;
                text << "trials=" << rep.trials << " violations=" << rep.violations
                     << " max_ratio=" << format_real(rep.max_ratio) << " seed=" << rep.seed << '\n';
                out << text.str();
                detail::write_text_report(cmd.lemma.out, text.str());
                return rep.violations == 0 ? kExitOk : kExitAssert;
            }
            case Command::Sub::CheckWeil: {
                WeilAuditConfig cfg;
                cfg.primes = cmd.weil.primes;
                cfg.exhaustive_cap = cmd.weil.cap;
                cfg.samples_per_large_prime = cmd.weil.samples;
                cfg.h = cmd.weil.h;
                cfg.seed = cmd.weil.seed;
                const auto rep = audit_weil(cfg);
                std::ostringstream text;
                text << "primes=" << cfg.primes.size() << " sums_checked=" << rep.sums_checked
                     << " violations=" << rep.violations << " max_ratio=" << format_real(rep.max_ratio)
                     << " minus_one=" << (rep.minus_one_ok ? "ok" : "VIOLATED") << " seed=" << rep.seed
                     << '\n';
                out << text.str();
                detail::write_text_report(cmd.weil.out, text.str());
                return rep.violations == 0 && rep.minus_one_ok ? kExitOk : kExitAssert;
            }
            case Command::Sub::CheckL1: {
                L1AuditConfig cfg;
                cfg.primes = cmd.l1.primes;
                cfg.T.clear();
                for (const auto& t : cmd.l1.T) cfg.T.push_back(ParamSpec::parse(t));
                cfg.S = cmd.l1.S;
                std::ostringstream text;
                for (const auto& row : audit_l1_claim(cfg)) {
                    text << "p=" << row.p << " S=" << row.S << " T=" << row.T
                         << " l1=" << format_real(row.value)
                         << " ratio_sqrtp_logp=" << format_real(row.ratio_sqrt_p_log_p)
                         << " ratio_p_logp=" << format_real(row.ratio_p_log_p) << '\n';
                }
                out << text.str();
                detail::write_text_report(cmd.l1.out, text.str());
                return kExitOk;
            }
            case Command::Sub::Report: {
                const auto problems = verify_report_csv(cmd.report.in);
                if (cmd.report.to_json) {
                    const auto records = read_report_csv(cmd.report.in);
                    std::ofstream js(*cmd.report.to_json, std::ios::binary);
                    if (!js) throw io_error("cannot open JSON output", *cmd.report.to_json);
                    js << records_to_json(records).dump(2) << '\n';
                }
                out << "report=" << cmd.report.in << " problems=" << problems.size() << '\n';
                for (const auto& p : problems) out << "  " << p << '\n';
                return problems.empty() ? kExitOk : kExitAssert;
            }
        }
    } catch (const usage_error& e) {
        out << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const io_error& e) {
        out << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        out << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        out << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        out << "error: " << e.what() << '\n';
        return kExitAssert;
    }
    return kExitAssert;
}

} // namespace congcount::cli
