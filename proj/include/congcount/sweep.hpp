#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "congcount/counters.hpp"
#include "congcount/envelope.hpp"
#include "congcount/expsums.hpp"
#include "congcount/rational.hpp"

namespace congcount {

// A grid value: absolute, a unit fraction of p, or p minus an offset.
struct ParamSpec {
    enum class Kind { Absolute, FractionOfP, PMinus };
    Kind kind = Kind::Absolute;
    uint64_t value = 1;

    uint64_t resolve(uint64_t p) const {
        switch (kind) {
            case Kind::Absolute: return value;
            case Kind::FractionOfP: return p / value;
            case Kind::PMinus: return p >= value ? p - value : 0;
        }
        return 0;
    }

    static ParamSpec parse(const std::string& token) {
        auto parse_u64 = [&](const std::string& s) {
            if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("ParamSpec: bad token '" + token + "'");
            return static_cast<uint64_t>(std::stoull(s));
        };
        if (token == "p") return {Kind::FractionOfP, 1};
        if (token.rfind("p/", 0) == 0) {
            uint64_t d = parse_u64(token.substr(2));
            if (d < 1) throw std::invalid_argument("ParamSpec: zero divisor in '" + token + "'");
            return {Kind::FractionOfP, d};
        }
        if (token.rfind("p-", 0) == 0) return {Kind::PMinus, parse_u64(token.substr(2))};
        return {Kind::Absolute, parse_u64(token)};
    }

    std::string str() const {
        switch (kind) {
            case Kind::Absolute: return std::to_string(value);
            case Kind::FractionOfP: return value == 1 ? "p" : "p/" + std::to_string(value);
            case Kind::PMinus: return "p-" + std::to_string(value);
        }
        return "?";
    }
};

struct SweepConfig {
    std::vector<uint64_t> primes;
    uint64_t seed = 0;
    uint32_t trials = 1;
    uint32_t workers = 0; // 0 = hardware concurrency
    std::string out;
    std::string format = "csv";
    uint64_t budget = 20000000000ULL;  // elementary-operation budget
    uint64_t brute_verify_cap = 0;     // per-cell oracle cross-check volume; 0 disables
    std::vector<ParamSpec> thm1_K, thm1_N;
    std::vector<ParamSpec> thm2_N;
    std::vector<ParamSpec> thm3_u, thm3_v, thm3_T;
    std::vector<ParamSpec> thm4_size, thm4_T;
    std::vector<ParamSpec> thm5_N;
};

// One row of the harness: exact count, exact main term and error, and both
// envelopes with their ratios. Optional columns are per-theorem.
struct SweepRecord {
    EnvelopeKind theorem;
    uint64_t p;
    std::optional<int64_t> H, K, M, N, h, u, v, S, T, set_size;
    std::optional<double> delta;
    int64_t exact_count = 0;
    Rational main_term;
    Rational abs_error;
    double envelope_new = 0, envelope_old = 0;
    double ratio_new = 0, ratio_old = 0;
    uint64_t seed = 0;
};

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

// |count - num/den| as an exact rational.
inline Rational exact_abs_error(int64_t count, const Rational& main) {
    return (Rational::from_int(count) - main).abs();
}

} // namespace detail

namespace internal_sweep {

struct Cell {
    EnvelopeKind theorem;
    uint64_t p;
    uint64_t a = 0, b = 0, c = 0; // resolved grid values, meaning per theorem
    uint32_t trial = 0;
    uint64_t index = 0; // position within (theorem, p)
    uint64_t cell_seed = 0;
};

struct FieldCache {
    GeneratorCtx ctx;
    std::vector<uint64_t> inv;
};

inline uint64_t cost_estimate(const Cell& c) {
    switch (c.theorem) {
        case EnvelopeKind::THM1: return c.a + 64;            // a=K
        case EnvelopeKind::THM2: return c.p + c.a;           // a=N
        case EnvelopeKind::THM3: return c.a * c.b + c.p;     // a=u, b=v
        case EnvelopeKind::THM4: return c.p * c.a + c.p;     // a=|X| (spectrum)
        case EnvelopeKind::THM5: return c.p + c.a;           // a=N
        default: return 0;
    }
}

inline unsigned __int128 brute_volume(const Cell& c) {
    const auto a = static_cast<unsigned __int128>(c.a);
    switch (c.theorem) {
        case EnvelopeKind::THM1: return a * c.b;  // K*N
        case EnvelopeKind::THM2: return a * c.a;  // N^2
        case EnvelopeKind::THM3: return a * c.b * c.c;
        case EnvelopeKind::THM4: return a * c.b;  // |X|*T
        case EnvelopeKind::THM5: return a * c.a;  // N^2
        default: return 0;
    }
}

inline int64_t draw_offset(std::mt19937_64& rng, uint64_t p) {
    std::uniform_int_distribution<int64_t> dist(-static_cast<int64_t>(p), static_cast<int64_t>(p));
    return dist(rng);
}

inline uint64_t draw_nonzero(std::mt19937_64& rng, uint64_t p) {
    std::uniform_int_distribution<uint64_t> dist(1, p - 1);
    return dist(rng);
}

inline SweepRecord compute_cell(const Cell& cell, const FieldCache& fc, uint64_t brute_cap) {
    const uint64_t p = cell.p;
    const PrimeField& field = fc.ctx.field;
    std::mt19937_64 rng(cell.cell_seed);
    SweepRecord rec;
    rec.theorem = cell.theorem;
    rec.p = p;
    rec.seed = cell.cell_seed;
    EnvelopeParams ep;
    ep.p = static_cast<double>(p);
    const auto ip = static_cast<int64_t>(p);
    switch (cell.theorem) {
        case EnvelopeKind::THM1: {
            const uint64_t K = cell.a, N = cell.b;
            const int64_t H = draw_offset(rng, p), M = draw_offset(rng, p);
            PowerBoxQuery q(fc.ctx, H, K, M, N);
            const auto count = static_cast<int64_t>(count_J(q));
            if (brute_cap > 0 && brute_volume(cell) <= brute_cap &&
                count != static_cast<int64_t>(brute_count(q))) {
                throw std::logic_error("sweep: THM1 fast count disagrees with brute oracle");
            }
            rec.H = H;
            rec.K = static_cast<int64_t>(K);
            rec.M = M;
            rec.N = static_cast<int64_t>(N);
            rec.exact_count = count;
            rec.main_term = Rational(static_cast<__int128>(K) * N, ip);
            ep.K = static_cast<double>(K);
            ep.N = static_cast<double>(N);
            break;
        }
        case EnvelopeKind::THM2: {
            const uint64_t N = cell.a;
            const uint64_t h = draw_nonzero(rng, p);
            PowerDiffQuery q(fc.ctx, h, N);
            const auto count = static_cast<int64_t>(count_J1(q));
            if (brute_cap > 0 && brute_volume(cell) <= brute_cap &&
                count != static_cast<int64_t>(brute_count(q))) {
                throw std::logic_error("sweep: THM2 fast count disagrees with brute oracle");
            }
            rec.h = static_cast<int64_t>(h);
            rec.N = static_cast<int64_t>(N);
            rec.exact_count = count;
            rec.main_term = Rational(static_cast<__int128>(N) * N, ip);
            ep.N = static_cast<double>(N);
            break;
        }
        case EnvelopeKind::THM3: {
            const uint64_t u = cell.a, v = cell.b, T = cell.c;
            ResidueSet U = random_residue_set(u, p, rng);
            ResidueSet V = random_residue_set(v, p, rng);
            const int64_t S = draw_offset(rng, p);
            ProductIntervalQuery q(field, std::move(U), std::move(V), {S, T});
            const auto count = static_cast<int64_t>(count_J2(q));
            if (brute_cap > 0 && brute_volume(cell) <= brute_cap &&
                count != static_cast<int64_t>(brute_count(q))) {
                throw std::logic_error("sweep: THM3 fast count disagrees with brute oracle");
            }
            rec.u = static_cast<int64_t>(u);
            rec.v = static_cast<int64_t>(v);
            rec.S = S;
            rec.T = static_cast<int64_t>(T);
            rec.exact_count = count;
            rec.main_term = Rational(static_cast<__int128>(u) * v * T, ip);
            ep.u = static_cast<double>(u);
            ep.v = static_cast<double>(v);
            ep.T = static_cast<double>(T);
            break;
        }
        case EnvelopeKind::THM4: {
            const uint64_t size = cell.a, T = cell.b;
            ResidueSet X = random_residue_set(size, p, rng);
            const int64_t S = draw_offset(rng, p);
            const auto summary = max_nontrivial_spectrum(X, field);
            SetIntervalQuery q(field, std::move(X), {S, T});
            const auto count = static_cast<int64_t>(count_J3(q));
            if (brute_cap > 0 && brute_volume(cell) <= brute_cap &&
                count != static_cast<int64_t>(brute_count(q))) {
                throw std::logic_error("sweep: THM4 fast count disagrees with brute oracle");
            }
            rec.set_size = static_cast<int64_t>(size);
            rec.delta = summary.delta;
            rec.S = S;
            rec.T = static_cast<int64_t>(T);
            rec.exact_count = count;
            rec.main_term = Rational(static_cast<__int128>(size) * T, ip);
            ep.set_size = static_cast<double>(size);
            ep.T = static_cast<double>(T);
            ep.delta = summary.delta;
            break;
        }
        case EnvelopeKind::THM5: {
            const uint64_t N = cell.a;
            const uint64_t h = draw_nonzero(rng, p);
            HyperbolaBoxQuery q(field, h, {0, N}, {0, N});
            const auto count = static_cast<int64_t>(count_J4(q, &fc.inv));
            if (brute_cap > 0 && brute_volume(cell) <= brute_cap &&
                count != static_cast<int64_t>(brute_count(q))) {
                throw std::logic_error("sweep: THM5 fast count disagrees with brute oracle");
            }
            rec.h = static_cast<int64_t>(h);
            rec.N = static_cast<int64_t>(N);
            rec.exact_count = count;
            rec.main_term = Rational(static_cast<__int128>(N) * N, ip);
            ep.N = static_cast<double>(N);
            break;
        }
        default:
            throw std::logic_error("sweep: reference envelopes have no cells");
    }
    rec.abs_error = detail::exact_abs_error(rec.exact_count, rec.main_term);
    rec.envelope_new = envelope(cell.theorem, ep);
    rec.envelope_old = reference_envelope(cell.theorem, ep);
    rec.ratio_new = rec.abs_error.to_double() / rec.envelope_new;
    rec.ratio_old = rec.abs_error.to_double() / rec.envelope_old;
    return rec;
}

} // namespace internal_sweep

// Deterministic parameter sweep: every grid cell computes its exact count,
// exact main term and error, and both envelopes. Records come back sorted by
// (theorem, p, cell index) regardless of the worker schedule.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
    using internal_sweep::Cell;
    if (config.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
    std::vector<Cell> cells;

    auto add_cells = [&](EnvelopeKind kind, uint64_t p, auto&& legal, auto&& combos) {
        uint64_t index = 0;
        for (const auto& combo : combos) {
            if (!legal(combo)) continue;
            for (uint32_t trial = 0; trial < config.trials; ++trial) {
                Cell c;
                c.theorem = kind;
                c.p = p;
                c.a = combo[0];
                c.b = combo[1];
                c.c = combo[2];
                c.trial = trial;
                c.index = index++;
                uint64_t s = detail::mix_seed(config.seed, static_cast<uint64_t>(kind));
                s = detail::mix_seed(s, p);
                s = detail::mix_seed(s, c.a);
                s = detail::mix_seed(s, c.b);
                s = detail::mix_seed(s, c.c);
                s = detail::mix_seed(s, trial);
                c.cell_seed = s;
                cells.push_back(c);
            }
        }
    };

    using Combo = std::array<uint64_t, 3>;
    auto product2 = [](const std::vector<ParamSpec>& A, const std::vector<ParamSpec>& B, uint64_t p) {
        std::vector<Combo> out;
        for (const auto& a : A)
            for (const auto& b : B) out.push_back({a.resolve(p), b.resolve(p), 0});
        return out;
    };
    auto product1 = [](const std::vector<ParamSpec>& A, uint64_t p) {
        std::vector<Combo> out;
        for (const auto& a : A) out.push_back({a.resolve(p), 0, 0});
        return out;
    };
    auto product3 = [](const std::vector<ParamSpec>& A, const std::vector<ParamSpec>& B,
                       const std::vector<ParamSpec>& C, uint64_t p) {
        std::vector<Combo> out;
        for (const auto& a : A)
            for (const auto& b : B)
                for (const auto& c : C) out.push_back({a.resolve(p), b.resolve(p), c.resolve(p)});
        return out;
    };

    for (uint64_t p : config.primes) {
        if (!config.thm1_K.empty() && !config.thm1_N.empty()) {
            add_cells(EnvelopeKind::THM1, p,
                      [p](const Combo& c) { return c[0] >= 1 && c[0] < p && c[1] >= 1 && c[1] < p; },
                      product2(config.thm1_K, config.thm1_N, p));
        }
        if (!config.thm2_N.empty()) {
            add_cells(EnvelopeKind::THM2, p, [p](const Combo& c) { return c[0] >= 1 && c[0] < p; },
                      product1(config.thm2_N, p));
        }
        if (!config.thm3_u.empty() && !config.thm3_v.empty() && !config.thm3_T.empty()) {
            add_cells(EnvelopeKind::THM3, p,
                      [p](const Combo& c) {
                          return c[0] >= 1 && c[0] <= p && c[1] >= 1 && c[1] <= p && c[2] >= 1 && c[2] <= p;
                      },
                      product3(config.thm3_u, config.thm3_v, config.thm3_T, p));
        }
        if (!config.thm4_size.empty() && !config.thm4_T.empty()) {
            add_cells(EnvelopeKind::THM4, p,
                      [p](const Combo& c) { return c[0] >= 1 && c[0] <= p && c[1] >= 1 && c[1] <= p; },
                      product2(config.thm4_size, config.thm4_T, p));
        }
        if (!config.thm5_N.empty()) {
            add_cells(EnvelopeKind::THM5, p, [p](const Combo& c) { return c[0] >= 1 && c[0] < p; },
                      product1(config.thm5_N, p));
        }
    }

    // order by (theorem, p-as-configured, cell index): rebuild in tag order
    std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.theorem != b.theorem) return static_cast<int>(a.theorem) < static_cast<int>(b.theorem);
        if (a.p != b.p) return a.p < b.p;
        if (a.index != b.index) return a.index < b.index;
        return a.trial < b.trial;
    });

    unsigned __int128 total_cost = 0;
    for (const auto& c : cells) {
        total_cost += internal_sweep::cost_estimate(c);
        if (config.brute_verify_cap > 0) {
            const auto bv = internal_sweep::brute_volume(c);
            if (bv <= config.brute_verify_cap) total_cost += bv;
        }
    }
    if (total_cost > config.budget) {
        std::ostringstream msg;
        msg << "run_sweep: estimated work " << static_cast<uint64_t>(total_cost) << " exceeds budget "
            << config.budget << "; largest cells:";
        std::vector<const Cell*> worst;
        for (const auto& c : cells) worst.push_back(&c);
        std::partial_sort(worst.begin(), worst.begin() + std::min<size_t>(5, worst.size()), worst.end(),
                          [](const Cell* a, const Cell* b) {
                              return internal_sweep::cost_estimate(*a) > internal_sweep::cost_estimate(*b);
                          });
        for (size_t i = 0; i < std::min<size_t>(5, worst.size()); ++i) {
            msg << " [" << to_string(worst[i]->theorem) << " p=" << worst[i]->p << " cost="
                << internal_sweep::cost_estimate(*worst[i]) << "]";
        }
        throw capacity_error(msg.str());
    }

    // per-prime contexts built once, before the parallel phase
    std::map<uint64_t, internal_sweep::FieldCache> fields;
    for (uint64_t p : config.primes) {
        if (fields.count(p)) continue;
        PrimeField field(p);
        auto ctx = find_primitive_root(field);
        auto inv = inverse_table(field);
        fields.emplace(p, internal_sweep::FieldCache{std::move(ctx), std::move(inv)});
    }

    std::vector<SweepRecord> records(cells.size());
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    unsigned workers = config.workers != 0 ? config.workers : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, cells.size() == 0 ? 1 : static_cast<unsigned>(cells.size()));

    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cells.size() || failed.load()) return;
            try {
                records[i] =
                    internal_sweep::compute_cell(cells[i], fields.at(cells[i].p), config.brute_verify_cap);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                try {
                    throw;
                } catch (const std::exception& e) {
                    failure = e.what();
                }
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw std::runtime_error("run_sweep: " + failure);
    return records;
}

// Smallest constant C with |error| <= C * envelope over the given records of
// one envelope kind, i.e. the max observed ratio.
inline double estimate_implied_constant(const std::vector<SweepRecord>& records, EnvelopeKind kind) {
    double best = -1.0;
    for (const auto& r : records) {
        if (r.theorem != kind) continue;
        best = std::max(best, r.ratio_new);
    }
    if (best < 0) throw std::domain_error("estimate_implied_constant: no records of requested kind");
    return best;
}

// THM1 cells in the regime KN <= p^{3/2} (exact integer test) where the new
// envelope fails to beat the classical one. Expected empty for p >= 101.
inline std::vector<size_t> crossover_violations(const std::vector<SweepRecord>& records) {
    std::vector<size_t> out;
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.theorem != EnvelopeKind::THM1 || r.p < 101) continue;
        const auto kn = static_cast<unsigned __int128>(*r.K) * static_cast<uint64_t>(*r.N);
        const unsigned __int128 p3 = static_cast<unsigned __int128>(r.p) * r.p * r.p;
        if (kn * kn <= p3 && !(r.envelope_new < r.envelope_old)) out.push_back(i);
    }
    return out;
}

} // namespace congcount
