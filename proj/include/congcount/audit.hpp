#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "congcount/expsums.hpp"
#include "congcount/sweep.hpp"

namespace congcount {

// ---------------------------------------------------------------------------
// Bilinear-sum certificate audit: seeded random complex weights, assert
// |value| <= sqrt(mXY) every time, report the worst observed ratio.
// ---------------------------------------------------------------------------

struct LemmaAuditConfig {
    uint64_t trials = 500;
    uint64_t m_min = 31;
    uint64_t m_max = 257;
    uint64_t seed = 0;
};

struct LemmaAuditReport {
    uint64_t trials = 0;
    uint64_t violations = 0;
    double max_ratio = 0.0;
    uint64_t seed = 0;
};

inline LemmaAuditReport audit_lemma(const LemmaAuditConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("audit_lemma: need at least one trial");
    if (cfg.m_min < 2 || cfg.m_max < cfg.m_min) throw std::invalid_argument("audit_lemma: bad modulus range");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<uint64_t> m_dist(cfg.m_min, cfg.m_max);
    std::uniform_real_distribution<double> w_dist(-1.0, 1.0);
    LemmaAuditReport rep;
    rep.trials = cfg.trials;
    rep.seed = cfg.seed;
    for (uint64_t i = 0; i < cfg.trials; ++i) {
        const uint64_t m = m_dist(rng);
        std::vector<ComplexValue> nu(m), rho(m);
        for (auto& z : nu) z = {w_dist(rng), w_dist(rng)};
        for (auto& z : rho) z = {w_dist(rng), w_dist(rng)};
        std::uniform_int_distribution<uint64_t> a_dist(1, m - 1);
        uint64_t a = 1;
        do {
            a = a_dist(rng);
        } while (std::gcd(a, m) != 1);
        try {
            const auto [value, certificate] = vinogradov_double_sum(BilinearWeights(m, nu, rho), a);
            rep.max_ratio = std::max(rep.max_ratio, std::abs(value) / certificate);
        } catch (const std::logic_error&) {
            ++rep.violations;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Weil certificate audit: exhaustive (a, b) for primes up to the cap, sampled
// pairs beyond it; also pins the a = 0, b != 0 complete-sum value at -1.
// ---------------------------------------------------------------------------

struct WeilAuditConfig {
    std::vector<uint64_t> primes;
    uint64_t exhaustive_cap = 199;
    uint64_t samples_per_large_prime = 2000;
    uint64_t h = 1;
    uint64_t seed = 0;
};

struct WeilAuditReport {
    uint64_t sums_checked = 0;
    uint64_t violations = 0;
    double max_ratio = 0.0; // |value| / (2 sqrt p) over a != 0
    bool minus_one_ok = true;
    uint64_t seed = 0;
};

inline WeilAuditReport audit_weil(const WeilAuditConfig& cfg) {
    WeilAuditReport rep;
    rep.seed = cfg.seed;
    std::mt19937_64 rng(cfg.seed);
    for (uint64_t p : cfg.primes) {
        if (p < 3) throw std::invalid_argument("audit_weil: need p >= 3");
        const PrimeField field(p);
        const UnityRoots roots(p);
        const auto inv = inverse_table(field);
        const uint64_t h = cfg.h % p == 0 ? 1 : cfg.h % p;
        auto check = [&](uint64_t a, uint64_t b) {
            try {
                const auto [value, bound] = kloosterman(a, b, h, field, roots, inv);
                if (a != 0) rep.max_ratio = std::max(rep.max_ratio, std::abs(value) / bound);
                if (a == 0 && b != 0 && std::abs(value - ComplexValue{-1.0, 0.0}) > 1e-9 * static_cast<double>(p)) {
                    rep.minus_one_ok = false;
                }
            } catch (const std::logic_error&) {
                ++rep.violations;
            }
            ++rep.sums_checked;
        };
        if (p <= cfg.exhaustive_cap) {
            for (uint64_t b = 1; b < p; ++b) check(0, b);
            for (uint64_t a = 1; a < p; ++a) {
                for (uint64_t b = 0; b < p; ++b) check(a, b);
            }
        } else {
            std::uniform_int_distribution<uint64_t> dist(0, p - 1);
            for (uint64_t b = 1; b < std::min<uint64_t>(p, 32); ++b) check(0, b);
            for (uint64_t i = 0; i < cfg.samples_per_large_prime; ++i) {
                const uint64_t a = 1 + dist(rng) % (p - 1);
                check(a, dist(rng));
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// L1 audit for the quoted interval-sum inequality. Computes the exact L1 norm
// and reports it against both candidate bounds; deliberately asserts neither.
// ---------------------------------------------------------------------------

struct L1AuditConfig {
    std::vector<uint64_t> primes;
    std::vector<ParamSpec> T = {ParamSpec{ParamSpec::Kind::Absolute, 1}};
    std::vector<int64_t> S = {0};
};

struct L1AuditRow {
    uint64_t p;
    int64_t S;
    uint64_t T;
    double value;
    double ratio_sqrt_p_log_p; // value / (sqrt(p) log p)
    double ratio_p_log_p;      // value / (p log p)
};

inline std::vector<L1AuditRow> audit_l1_claim(const L1AuditConfig& cfg) {
    std::vector<L1AuditRow> rows;
    for (uint64_t p : cfg.primes) {
        const PrimeField field(p);
        const double log_p = std::log(static_cast<double>(p));
        for (int64_t S : cfg.S) {
            for (const auto& spec : cfg.T) {
                const uint64_t T = spec.resolve(p);
                if (T < 1 || T > p) continue;
                const double value = interval_sum_l1(S, T, field);
                rows.push_back({p, S, T, value, value / (std::sqrt(static_cast<double>(p)) * log_p),
                                value / (static_cast<double>(p) * log_p)});
            }
        }
    }
    return rows;
}

} // namespace congcount
