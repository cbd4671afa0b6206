#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "congcount/modarith.hpp"
#include "congcount/residues.hpp"

namespace congcount {

// --------------------------------------------------------------------------
// Query records. Each holds the full parameter set of one counted quantity.
// --------------------------------------------------------------------------

// J: integers x in [H+1, H+K] with g^x in [M+1, M+N] (mod p).
struct PowerBoxQuery {
    const GeneratorCtx& ctx;
    int64_t H;
    uint64_t K;
    int64_t M;
    uint64_t N;

    PowerBoxQuery(const GeneratorCtx& ctx, int64_t H, uint64_t K, int64_t M, uint64_t N)
        : ctx(ctx), H(H), K(K), M(M), N(N) {
        if (K < 1 || K >= ctx.field.p || N < 1 || N >= ctx.field.p)
            throw std::out_of_range("PowerBoxQuery: need 1 <= N, K < p");
    }
};

// J1: pairs (x, y) in [1, N]^2 with g^x - g^y = h (mod p), h != 0.
struct PowerDiffQuery {
    const GeneratorCtx& ctx;
    uint64_t h;
    uint64_t N;

    PowerDiffQuery(const GeneratorCtx& ctx, uint64_t h, uint64_t N) : ctx(ctx), h(h % ctx.field.p), N(N) {
        if (this->h == 0) throw std::invalid_argument("PowerDiffQuery: h must be nonzero mod p");
        if (N < 1 || N >= ctx.field.p) throw std::out_of_range("PowerDiffQuery: need 1 <= N < p");
    }
};

// J2: triples (x, y, z), x in U, y in V, z in the interval, with xy = z (mod p).
struct ProductIntervalQuery {
    const PrimeField& field;
    ResidueSet U;
    ResidueSet V;
    ResidueInterval interval;

    ProductIntervalQuery(const PrimeField& field, ResidueSet U, ResidueSet V, ResidueInterval interval)
        : field(field), U(std::move(U)), V(std::move(V)), interval(interval) {
        this->U.check_bounds(field.p);
        this->V.check_bounds(field.p);
        if (interval.T < 1 || interval.T > field.p)
            throw std::out_of_range("ProductIntervalQuery: need 1 <= T <= p");
    }
};

// J3: elements x of X lying in the interval (mod p).
struct SetIntervalQuery {
    const PrimeField& field;
    ResidueSet X;
    ResidueInterval interval;

    SetIntervalQuery(const PrimeField& field, ResidueSet X, ResidueInterval interval)
        : field(field), X(std::move(X)), interval(interval) {
        this->X.check_bounds(field.p);
        if (interval.T < 1 || interval.T > field.p)
            throw std::out_of_range("SetIntervalQuery: need 1 <= T <= p");
    }
};

// J4: pairs (x, y), x in x_range, y in y_range (mod p), with xy = h (mod p), h != 0.
struct HyperbolaBoxQuery {
    const PrimeField& field;
    uint64_t h;
    ResidueInterval x_range;
    ResidueInterval y_range;

    HyperbolaBoxQuery(const PrimeField& field, uint64_t h, ResidueInterval x_range, ResidueInterval y_range)
        : field(field), h(h % field.p), x_range(x_range), y_range(y_range) {
        if (this->h == 0) throw std::invalid_argument("HyperbolaBoxQuery: h must be nonzero mod p");
        for (const auto& r : {x_range, y_range}) {
            if (r.T < 1 || r.T > field.p) throw std::out_of_range("HyperbolaBoxQuery: need 1 <= T <= p");
        }
    }
};

// --------------------------------------------------------------------------
// Internal counts over raw integer ranges. x-ranges of exponents are
// (p-1)-periodic and y/z-ranges are p-periodic, so ranges longer than one
// period count residues with multiplicity. The smoothing module's enlarged
// windows rely on this; the public counters below are the one-period case.
// --------------------------------------------------------------------------
namespace internal {

// x in [H+1, H+Klen] (integers), y in [M+1, M+Nlen] (integers), g^x = y (mod p).
inline uint64_t power_box_count(const GeneratorCtx& ctx, int64_t H, uint64_t Klen, int64_t M, uint64_t Nlen) {
    const uint64_t p = ctx.field.p;
    const uint64_t q = p - 1;
    const IntervalMult ym(M, Nlen, p);
    uint64_t total = (Klen / q) * (Nlen - ym.mult(0));
    uint64_t rem = Klen % q;
    if (rem > 0) {
        uint64_t v = mod_pow(ctx.g, (H % static_cast<int64_t>(q)) + 1, ctx.field);
        for (uint64_t i = 0; i < rem; ++i) {
            total += ym.mult(v);
            v = mul_mod(v, ctx.g, p);
        }
    }
    return total;
}

// O(p) residue tables back the fast difference and product counters.
inline constexpr uint64_t kCountTableCap = uint64_t{1} << 28;

// W[r] = number of integers y in [Y0+1, Y0+Ylen] with g^y = r (mod p).
inline std::vector<uint64_t> power_range_multiplicity(const GeneratorCtx& ctx, int64_t Y0, uint64_t Ylen) {
    const uint64_t p = ctx.field.p;
    if (p > kCountTableCap)
        throw capacity_error("power_range_multiplicity: p exceeds the membership-table cap");
    const uint64_t q = p - 1;
    std::vector<uint64_t> W(p, 0);
    const uint64_t full = Ylen / q;
    if (full > 0) {
        for (uint64_t r = 1; r < p; ++r) W[r] = full;
    }
    uint64_t rem = Ylen % q;
    if (rem > 0) {
        uint64_t v = mod_pow(ctx.g, (Y0 % static_cast<int64_t>(q)) + 1, ctx.field);
        for (uint64_t i = 0; i < rem; ++i) {
            ++W[v];
            v = mul_mod(v, ctx.g, p);
        }
    }
    return W;
}

// Pairs (x, y): x in [X0+1, X0+Xlen], y weighted by W, with g^x - g^y = c (mod p).
// sumW must equal the total weight of W. Requires c != 0.
inline uint64_t power_diff_count(const GeneratorCtx& ctx, int64_t X0, uint64_t Xlen,
                                 const std::vector<uint64_t>& W, uint64_t sumW, uint64_t c) {
    const uint64_t p = ctx.field.p;
    const uint64_t q = p - 1;
    // one full exponent cycle: A = g^x runs over every nonzero residue once,
    // and A - c misses exactly the value -c
    uint64_t total = (Xlen / q) * (sumW - W[p - c]);
    uint64_t rem = Xlen % q;
    if (rem > 0) {
        uint64_t v = mod_pow(ctx.g, (X0 % static_cast<int64_t>(q)) + 1, ctx.field);
        for (uint64_t i = 0; i < rem; ++i) {
            uint64_t d = v >= c ? v - c : v + p - c;
            total += W[d];
            v = mul_mod(v, ctx.g, p);
        }
    }
    return total;
}

// hist[r] = number of pairs (x, y) in U x V with xy = r (mod p).
inline std::vector<uint64_t> product_histogram(const PrimeField& field, const ResidueSet& U, const ResidueSet& V) {
    if (field.p > kCountTableCap)
        throw capacity_error("product_histogram: p exceeds the membership-table cap");
    std::vector<uint64_t> hist(field.p, 0);
    for (uint64_t x : U.elements()) {
        for (uint64_t y : V.elements()) {
            ++hist[mul_mod(x, y, field.p)];
        }
    }
    return hist;
}

// Triples (x, y, z): x in U, y in V, z an integer in [S+1, S+Tlen], xy = z (mod p).
inline uint64_t product_interval_count(const PrimeField& field, const ResidueSet& U, const ResidueSet& V,
                                       int64_t S, uint64_t Tlen) {
    const IntervalMult zm(S, Tlen, field.p);
    uint64_t total = 0;
    for (uint64_t x : U.elements()) {
        for (uint64_t y : V.elements()) {
            total += zm.mult(mul_mod(x, y, field.p));
        }
    }
    return total;
}

// Pairs (x-member, y-integer): x in X, y in [S+1, S+Tlen], x = y (mod p).
inline uint64_t set_interval_count(const PrimeField& field, const ResidueSet& X, int64_t S, uint64_t Tlen) {
    const IntervalMult ym(S, Tlen, field.p);
    uint64_t total = 0;
    for (uint64_t x : X.elements()) total += ym.mult(x);
    return total;
}

// Pairs (x, y): x in [X0+1, X0+Xlen], y in [Y0+1, Y0+Ylen] (integers, reduced
// mod p), xy = h (mod p). `inv` may point at an inverse table; when null,
// inverses are computed per element.
inline uint64_t hyperbola_count(const PrimeField& field, uint64_t h, int64_t X0, uint64_t Xlen,
                                int64_t Y0, uint64_t Ylen, const std::vector<uint64_t>* inv = nullptr) {
    const uint64_t p = field.p;
    const IntervalMult ym(Y0, Ylen, p);
    // full x-cycle: every nonzero x once; y = h x^{-1} then covers every
    // nonzero residue once
    uint64_t total = (Xlen / p) * (Ylen - ym.mult(0));
    uint64_t rem = Xlen % p;
    uint64_t x = mod_i64(X0 + 1, p);
    for (uint64_t i = 0; i < rem; ++i) {
        if (x != 0) {
            uint64_t xi = inv ? (*inv)[x] : mod_inv(x, field);
            total += ym.mult(mul_mod(h, xi, p));
        }
        if (++x == p) x = 0;
    }
    return total;
}

} // namespace internal

// --------------------------------------------------------------------------
// Fast exact counters.
// --------------------------------------------------------------------------

// One multiplicative sweep over the K exponents.
inline uint64_t count_J(const PowerBoxQuery& q) {
    const uint64_t p = q.ctx.field.p;
    const uint64_t start = mod_i64(q.M + 1, p);
    uint64_t v = mod_pow(q.ctx.g, (q.H % static_cast<int64_t>(p - 1)) + 1, q.ctx.field);
    uint64_t count = 0;
    for (uint64_t i = 0; i < q.K; ++i) {
        uint64_t d = v >= start ? v - start : v + p - start;
        if (d < q.N) ++count;
        v = mul_mod(v, q.ctx.g, p);
    }
    return count;
}

// Membership table of {g^y : y <= N}, then one sweep over x testing g^x - h.
inline uint64_t count_J1(const PowerDiffQuery& q) {
    auto W = internal::power_range_multiplicity(q.ctx, 0, q.N);
    return internal::power_diff_count(q.ctx, 0, q.N, W, q.N, q.h);
}

// O(|U| |V|) sweep with O(1) membership per reduced product.
inline uint64_t count_J2(const ProductIntervalQuery& q) {
    return internal::product_interval_count(q.field, q.U, q.V, q.interval.S, q.interval.T);
}

inline uint64_t count_J3(const SetIntervalQuery& q) {
    return internal::set_interval_count(q.field, q.X, q.interval.S, q.interval.T);
}

// For each x in x_range, test h x^{-1} for y_range membership. An inverse
// table may be supplied to amortize the inversions.
inline uint64_t count_J4(const HyperbolaBoxQuery& q, const std::vector<uint64_t>* inv = nullptr) {
    return internal::hyperbola_count(q.field, q.h, q.x_range.S, q.x_range.T, q.y_range.S, q.y_range.T, inv);
}

// --------------------------------------------------------------------------
// Brute-force oracles: the defining congruences evaluated by exhaustive
// nested loops. Used in tests and fixture generation only.
// --------------------------------------------------------------------------

inline constexpr uint64_t kDefaultBruteGuard = 1000000000;

namespace detail {

inline void check_volume(unsigned __int128 volume, uint64_t guard) {
    if (volume > guard) throw capacity_error("brute_count: loop volume exceeds guard");
}

} // namespace detail

inline uint64_t brute_count(const PowerBoxQuery& q, uint64_t guard = kDefaultBruteGuard) {
    detail::check_volume(static_cast<unsigned __int128>(q.K) * q.N, guard);
    const uint64_t p = q.ctx.field.p;
    uint64_t count = 0;
    for (uint64_t i = 1; i <= q.K; ++i) {
        const uint64_t r = mod_pow(q.ctx.g, q.H + static_cast<int64_t>(i), q.ctx.field);
        for (uint64_t j = 1; j <= q.N; ++j) {
            if (mod_i64(q.M + static_cast<int64_t>(j), p) == r) {
                ++count;
                break;
            }
        }
    }
    return count;
}

inline uint64_t brute_count(const PowerDiffQuery& q, uint64_t guard = kDefaultBruteGuard) {
    detail::check_volume(static_cast<unsigned __int128>(q.N) * q.N, guard);
    const uint64_t p = q.ctx.field.p;
    std::vector<uint64_t> pw(q.N + 1);
    for (uint64_t x = 1; x <= q.N; ++x) pw[x] = mod_pow(q.ctx.g, static_cast<int64_t>(x), q.ctx.field);
    uint64_t count = 0;
    for (uint64_t x = 1; x <= q.N; ++x) {
        for (uint64_t y = 1; y <= q.N; ++y) {
            uint64_t d = pw[x] >= pw[y] ? pw[x] - pw[y] : pw[x] + p - pw[y];
            if (d == q.h) ++count;
        }
    }
    return count;
}

inline uint64_t brute_count(const ProductIntervalQuery& q, uint64_t guard = kDefaultBruteGuard) {
    detail::check_volume(static_cast<unsigned __int128>(q.U.size()) * q.V.size() * q.interval.T, guard);
    const uint64_t p = q.field.p;
    uint64_t count = 0;
    for (uint64_t x : q.U.elements()) {
        for (uint64_t y : q.V.elements()) {
            const uint64_t r = mul_mod(x, y, p);
            for (uint64_t j = 1; j <= q.interval.T; ++j) {
                if (mod_i64(q.interval.S + static_cast<int64_t>(j), p) == r) ++count;
            }
        }
    }
    return count;
}

inline uint64_t brute_count(const SetIntervalQuery& q, uint64_t guard = kDefaultBruteGuard) {
    detail::check_volume(static_cast<unsigned __int128>(q.X.size()) * q.interval.T, guard);
    const uint64_t p = q.field.p;
    uint64_t count = 0;
    for (uint64_t x : q.X.elements()) {
        for (uint64_t j = 1; j <= q.interval.T; ++j) {
            if (mod_i64(q.interval.S + static_cast<int64_t>(j), p) == x) ++count;
        }
    }
    return count;
}

inline uint64_t brute_count(const HyperbolaBoxQuery& q, uint64_t guard = kDefaultBruteGuard) {
    detail::check_volume(static_cast<unsigned __int128>(q.x_range.T) * q.y_range.T, guard);
    const uint64_t p = q.field.p;
    uint64_t count = 0;
    for (uint64_t i = 1; i <= q.x_range.T; ++i) {
        const uint64_t x = mod_i64(q.x_range.S + static_cast<int64_t>(i), p);
        for (uint64_t j = 1; j <= q.y_range.T; ++j) {
            const uint64_t y = mod_i64(q.y_range.S + static_cast<int64_t>(j), p);
            if (mul_mod(x, y, p) == q.h) ++count;
        }
    }
    return count;
}

} // namespace congcount
