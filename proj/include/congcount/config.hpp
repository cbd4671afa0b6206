#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "congcount/errors.hpp"
#include "congcount/modarith.hpp"
#include "congcount/sweep.hpp"

namespace congcount {

namespace detail {

inline std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] inline void config_fail(size_t line, const std::string& msg) {
    throw std::invalid_argument("sweep config line " + std::to_string(line) + ": " + msg);
}

} // namespace detail

// Key-value sweep configuration with one [thmN] section per theorem family.
// Grid values are absolute integers, "p", "p/k", or "p-k". Unknown keys and
// sections are rejected.
inline SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::string section;
    std::string line;
    size_t line_no = 0;
    bool have_primes = false, have_range = false;

    auto parse_specs = [&](const std::string& v) {
        std::vector<ParamSpec> out;
        for (const auto& tok : detail::split_ws(v)) out.push_back(ParamSpec::parse(tok));
        return out;
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') detail::config_fail(line_no, "malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "thm1" && section != "thm2" && section != "thm3" && section != "thm4" &&
                section != "thm5") {
                detail::config_fail(line_no, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) detail::config_fail(line_no, "expected key = value");
        const std::string key = detail::strip(line.substr(0, eq));
        const std::string value = detail::strip(line.substr(eq + 1));
        if (value.empty()) detail::config_fail(line_no, "empty value for '" + key + "'");

        try {
            if (section.empty()) {
                if (key == "primes") {
                    for (const auto& tok : detail::split_ws(value)) {
                        const uint64_t p = std::stoull(tok);
                        if (!is_prime(p)) detail::config_fail(line_no, tok + " is not prime");
                        cfg.primes.push_back(p);
                    }
                    have_primes = true;
                } else if (key == "prime_range") {
                    const auto toks = detail::split_ws(value);
                    if (toks.size() != 2) detail::config_fail(line_no, "prime_range wants two bounds");
                    cfg.primes = primes_in_range(std::stoull(toks[0]), std::stoull(toks[1]));
                    have_range = true;
                } else if (key == "seed") {
                    cfg.seed = std::stoull(value);
                } else if (key == "trials") {
                    cfg.trials = static_cast<uint32_t>(std::stoul(value));
                } else if (key == "workers") {
                    cfg.workers = static_cast<uint32_t>(std::stoul(value));
                } else if (key == "budget") {
                    cfg.budget = std::stoull(value);
                } else if (key == "brute_verify_cap") {
                    cfg.brute_verify_cap = std::stoull(value);
                } else if (key == "out") {
                    cfg.out = value;
                } else if (key == "format") {
                    if (value != "csv" && value != "json") detail::config_fail(line_no, "format must be csv|json");
                    cfg.format = value;
                } else {
                    detail::config_fail(line_no, "unknown key '" + key + "'");
                }
            } else if (section == "thm1") {
                if (key == "K") cfg.thm1_K = parse_specs(value);
                else if (key == "N") cfg.thm1_N = parse_specs(value);
                else detail::config_fail(line_no, "unknown key '" + key + "' in [thm1]");
            } else if (section == "thm2") {
                if (key == "N") cfg.thm2_N = parse_specs(value);
                else detail::config_fail(line_no, "unknown key '" + key + "' in [thm2]");
            } else if (section == "thm3") {
                if (key == "u") cfg.thm3_u = parse_specs(value);
                else if (key == "v") cfg.thm3_v = parse_specs(value);
                else if (key == "T") cfg.thm3_T = parse_specs(value);
                else detail::config_fail(line_no, "unknown key '" + key + "' in [thm3]");
            } else if (section == "thm4") {
                if (key == "size") cfg.thm4_size = parse_specs(value);
                else if (key == "T") cfg.thm4_T = parse_specs(value);
                else detail::config_fail(line_no, "unknown key '" + key + "' in [thm4]");
            } else if (section == "thm5") {
                if (key == "N") cfg.thm5_N = parse_specs(value);
                else detail::config_fail(line_no, "unknown key '" + key + "' in [thm5]");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            detail::config_fail(line_no, std::string("bad value: ") + e.what());
        }
    }
    if (have_primes && have_range)
        throw std::invalid_argument("sweep config: give primes or prime_range, not both");
    if (cfg.primes.empty()) throw std::invalid_argument("sweep config: no primes configured");
    if (cfg.trials < 1) throw std::invalid_argument("sweep config: trials must be >= 1");
    return cfg;
}

inline SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open sweep config", path);
    return parse_sweep_config(in);
}

} // namespace congcount
