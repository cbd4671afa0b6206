#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "congcount/counters.hpp"
#include "congcount/rational.hpp"

namespace congcount {

enum class Branch { SMALL, LARGE };

// Auxiliary window lengths per theorem family; unused fields simply do not
// exist on the family's record.
struct Thm1Params {
    Branch branch;
    std::optional<double> epsilon; // set on the LARGE branch only
    uint64_t n1;
    uint64_t k1;
};

struct Thm2Params {
    Branch branch;
    uint64_t n1;
};

struct Thm3Params { // shared by the Theorem 3 and Theorem 4 sandwiches
    Branch branch;
    uint64_t t1;
};

struct Thm5Params {
    Branch branch;
    uint64_t k;
};

// The bracket J' <= J * divisor <= J''. The rational bounds carry exact
// integer pairs; nothing here is compared through floats.
struct SandwichCounts {
    uint64_t j_prime;
    uint64_t j_dprime;
    uint64_t divisor;
    Rational lower;
    Rational upper;

    SandwichCounts(uint64_t jp, uint64_t jd, uint64_t div)
        : j_prime(jp), j_dprime(jd), divisor(div), lower(jp, div), upper(jd, div) {
        if (jd < jp) throw std::logic_error("SandwichCounts: lower bound exceeds upper bound");
    }
};

namespace detail {

inline uint64_t isqrt_u128(unsigned __int128 n) {
    if (n == 0) return 0;
    auto x = static_cast<uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (static_cast<unsigned __int128>(x) * x > n) --x;
    while (static_cast<unsigned __int128>(x + 1) * (x + 1) <= n) ++x;
    return x;
}

// floor(p^{3/4}) exactly, via floor(sqrt(floor(sqrt(p^3)))).
inline uint64_t floor_p_3_4(uint64_t p) {
    if (p >= (uint64_t{1} << 42)) throw std::out_of_range("floor_p_3_4: p too large for exact arithmetic");
    unsigned __int128 p3 = static_cast<unsigned __int128>(p) * p * p;
    return isqrt_u128(isqrt_u128(p3));
}

inline unsigned __int128 u128_sq(unsigned __int128 x) { return x * x; }

// The branch predicates square products of values below p, which stays
// within 128 bits only for p < 2^32.
inline void check_choose_range(uint64_t p) {
    if (p >= (uint64_t{1} << 32))
        throw std::out_of_range("choose_params: p >= 2^32 breaks the exact branch arithmetic");
}

} // namespace detail

// --------------------------------------------------------------------------
// Parameter selection rules. Branch predicates are decided in exact integer
// arithmetic; ties (impossible for a prime modulus) fall to the first branch.
// Floor parameters are clamped to >= 1 so degenerate inputs stay defined.
// --------------------------------------------------------------------------

// Theorem 1: SMALL (N1 = [N/2], K1 = [K/2]) when NK < 9 p^{3/2}; otherwise
// epsilon = p^{3/4} / (NK)^{1/2} and N1, K1 are the smallest integers with
// eps*N <= N1, eps*K <= K1.
inline Thm1Params choose_params_thm1(uint64_t p, uint64_t N, uint64_t K) {
    detail::check_choose_range(p);
    if (N < 1 || N >= p || K < 1 || K >= p) throw std::out_of_range("choose_params_thm1: need 1 <= N, K < p");
    const unsigned __int128 nk = static_cast<unsigned __int128>(N) * K;
    const bool large = detail::u128_sq(nk) > 81 * static_cast<unsigned __int128>(p) * p * p;
    if (!large) {
        return {Branch::SMALL, std::nullopt, std::max<uint64_t>(1, N / 2), std::max<uint64_t>(1, K / 2)};
    }
    const long double eps = std::pow(static_cast<long double>(p), 0.75L) /
                            std::sqrt(static_cast<long double>(N) * static_cast<long double>(K));
    const auto n1 = static_cast<uint64_t>(std::ceil(eps * static_cast<long double>(N)));
    const auto k1 = static_cast<uint64_t>(std::ceil(eps * static_cast<long double>(K)));
    return {Branch::LARGE, static_cast<double>(eps), std::max<uint64_t>(1, n1), std::max<uint64_t>(1, k1)};
}

// Theorem 2: N1 = [N/4] when N < 10 p^{3/4} (boundary included), otherwise
// N1 = [p^{3/4}].
inline Thm2Params choose_params_thm2(uint64_t p, uint64_t N) {
    detail::check_choose_range(p);
    if (N < 1 || N >= p) throw std::out_of_range("choose_params_thm2: need 1 <= N < p");
    const unsigned __int128 n2 = static_cast<unsigned __int128>(N) * N;
    const bool small = detail::u128_sq(n2) <= 10000 * static_cast<unsigned __int128>(p) * p * p;
    if (small) return {Branch::SMALL, std::max<uint64_t>(1, N / 4)};
    return {Branch::LARGE, std::max<uint64_t>(1, detail::floor_p_3_4(p))};
}

// Theorem 3: T1 = [T/2] when uvT/p < 9 (puv)^{1/2} (boundary included),
// otherwise the smallest integer T1 >= p (T/uv)^{1/3}; the assumed inequality
// then forces T1 < T/2, which is checked.
inline Thm3Params choose_params_thm3(uint64_t p, uint64_t u, uint64_t v, uint64_t T) {
    detail::check_choose_range(p);
    if (u < 1 || v < 1) throw std::out_of_range("choose_params_thm3: need u, v >= 1");
    if (T < 1 || T > p) throw std::out_of_range("choose_params_thm3: need 1 <= T <= p");
    // uvT/p < 9 (puv)^{1/2}  <=>  u v T^2 < 81 p^3
    const unsigned __int128 lhs = static_cast<unsigned __int128>(u) * v * T * T;
    const unsigned __int128 rhs = 81 * static_cast<unsigned __int128>(p) * p * p;
    if (lhs <= rhs) return {Branch::SMALL, std::max<uint64_t>(1, T / 2)};
    const long double ratio = static_cast<long double>(T) / (static_cast<long double>(u) * v);
    const auto t1 = static_cast<uint64_t>(
        std::ceil(static_cast<long double>(p) * std::pow(ratio, 1.0L / 3.0L)));
    if (2 * t1 >= T) throw std::logic_error("choose_params_thm3: admissible T1 < T/2 violated");
    return {Branch::LARGE, std::max<uint64_t>(1, t1)};
}

// Theorem 5: K = [p^{3/4}] when N > p^{3/4}, else K = N - 1 (boundary,
// impossible for a prime p, falls to K = N - 1).
inline Thm5Params choose_params_thm5(uint64_t p, uint64_t N) {
    detail::check_choose_range(p);
    if (N < 2 || N >= p) throw std::out_of_range("choose_params_thm5: need 2 <= N < p");
    const unsigned __int128 n2 = static_cast<unsigned __int128>(N) * N;
    const bool large = detail::u128_sq(n2) > static_cast<unsigned __int128>(p) * p * p;
    if (!large) return {Branch::SMALL, N - 1};
    return {Branch::LARGE, std::max<uint64_t>(1, detail::floor_p_3_4(p))};
}

// --------------------------------------------------------------------------
// Smoothed counts. Each J' / J'' is the sum of shifted window counts over the
// auxiliary variables, evaluated by the multiplicity-exact internal counters,
// so enlarged windows that spill past one period stay exact.
// --------------------------------------------------------------------------

// J' = sum over z <= K1, t <= N1 of the (H+z, K-K1, M+t, N-N1) power-box
// count; J'' mirrors it with (H-z, K+K1, M-t, N+N1).
inline SandwichCounts smoothed_counts_thm1(const PowerBoxQuery& q, const Thm1Params& params) {
    const uint64_t k1 = params.k1, n1 = params.n1;
    if (k1 >= q.K || n1 >= q.N) throw std::invalid_argument("smoothed_counts_thm1: need K1 < K and N1 < N");
    uint64_t jp = 0, jd = 0;
    for (uint64_t z = 1; z <= k1; ++z) {
        for (uint64_t t = 1; t <= n1; ++t) {
            jp += internal::power_box_count(q.ctx, q.H + static_cast<int64_t>(z), q.K - k1,
                                            q.M + static_cast<int64_t>(t), q.N - n1);
            jd += internal::power_box_count(q.ctx, q.H - static_cast<int64_t>(z), q.K + k1,
                                            q.M - static_cast<int64_t>(t), q.N + n1);
        }
    }
    return SandwichCounts(jp, jd, k1 * n1);
}

// J1' counts g^{x+z} - g^y = h g^{-t}; J1'' counts g^{x-z} - g^y = h g^{t}
// over the enlarged ranges; divisor N1^2.
inline SandwichCounts smoothed_counts_thm2(const PowerDiffQuery& q, const Thm2Params& params) {
    const uint64_t n1 = params.n1;
    if (n1 < 1 || 4 * n1 > q.N) throw std::invalid_argument("smoothed_counts_thm2: need N1 <= N/4");
    const auto& ctx = q.ctx;
    uint64_t jp = 0, jd = 0;
    {
        const auto W = internal::power_range_multiplicity(ctx, 0, q.N - n1);
        for (uint64_t t = 1; t <= n1; ++t) {
            const uint64_t c = mul_mod(q.h, mod_pow(ctx.g, -static_cast<int64_t>(t), ctx.field), ctx.field.p);
            for (uint64_t z = 1; z <= n1; ++z) {
                jp += internal::power_diff_count(ctx, static_cast<int64_t>(z), q.N - 2 * n1, W, q.N - n1, c);
            }
        }
    }
    {
        const auto W = internal::power_range_multiplicity(ctx, 0, q.N + n1);
        for (uint64_t t = 1; t <= n1; ++t) {
            const uint64_t c = mul_mod(q.h, mod_pow(ctx.g, static_cast<int64_t>(t), ctx.field), ctx.field.p);
            for (uint64_t z = 1; z <= n1; ++z) {
                jd += internal::power_diff_count(ctx, -static_cast<int64_t>(z), q.N + 2 * n1, W, q.N + n1, c);
            }
        }
    }
    return SandwichCounts(jp, jd, n1 * n1);
}

// J2' = sum over t <= T1 of the product-interval count on (S+t, T-T1); J2''
// uses (S-t, T+T1). Both are read off one product histogram.
inline SandwichCounts smoothed_counts_thm3(const ProductIntervalQuery& q, const Thm3Params& params) {
    const uint64_t t1 = params.t1;
    const uint64_t T = q.interval.T;
    if (t1 < 1 || 2 * t1 > T) throw std::invalid_argument("smoothed_counts_thm3: need T1 <= T/2");
    const uint64_t p = q.field.p;
    const auto hist = internal::product_histogram(q.field, q.U, q.V);
    uint64_t jp = 0, jd = 0;
    for (uint64_t t = 1; t <= t1; ++t) {
        const IntervalMult shrunk(q.interval.S + static_cast<int64_t>(t), T - t1, p);
        const IntervalMult grown(q.interval.S - static_cast<int64_t>(t), T + t1, p);
        for (uint64_t r = 0; r < p; ++r) {
            if (hist[r] == 0) continue;
            jp += hist[r] * shrunk.mult(r);
            jd += hist[r] * grown.mult(r);
        }
    }
    return SandwichCounts(jp, jd, t1);
}

// J3' = sum over z <= T1 of the set-interval count on (S+z, T-T1); J3'' uses
// (S-z, T+T1); divisor T1.
inline SandwichCounts smoothed_counts_thm4(const SetIntervalQuery& q, const Thm3Params& params) {
    const uint64_t t1 = params.t1;
    const uint64_t T = q.interval.T;
    if (t1 < 1 || 2 * t1 > T) throw std::invalid_argument("smoothed_counts_thm4: need T1 <= T/2");
    uint64_t jp = 0, jd = 0;
    for (uint64_t z = 1; z <= t1; ++z) {
        jp += internal::set_interval_count(q.field, q.X, q.interval.S + static_cast<int64_t>(z), T - t1);
        jd += internal::set_interval_count(q.field, q.X, q.interval.S - static_cast<int64_t>(z), T + t1);
    }
    return SandwichCounts(jp, jd, t1);
}

// J4' = sum over u, v <= K of the hyperbola count on the shifted shrunken
// rectangles; J4'' on the shifted enlarged ones; divisor K^2.
inline SandwichCounts smoothed_counts_thm5(const HyperbolaBoxQuery& q, const Thm5Params& params) {
    const uint64_t k = params.k;
    const uint64_t tx = q.x_range.T, ty = q.y_range.T;
    if (k < 1 || k >= tx || k >= ty)
        throw std::invalid_argument("smoothed_counts_thm5: need 1 <= K < side lengths");
    const auto inv = inverse_table(q.field);
    uint64_t jp = 0, jd = 0;
    for (uint64_t u = 1; u <= k; ++u) {
        for (uint64_t v = 1; v <= k; ++v) {
            jp += internal::hyperbola_count(q.field, q.h, q.x_range.S + static_cast<int64_t>(u), tx - k,
                                            q.y_range.S + static_cast<int64_t>(v), ty - k, &inv);
            jd += internal::hyperbola_count(q.field, q.h, q.x_range.S - static_cast<int64_t>(u), tx + k,
                                            q.y_range.S - static_cast<int64_t>(v), ty + k, &inv);
        }
    }
    return SandwichCounts(jp, jd, k * k);
}

// --------------------------------------------------------------------------
// Convenience brackets: interval normalization (the "consider N < p/2" step)
// followed by branch-rule parameters and the sandwich. Complemented queries
// invert the bracket against the total count, clamping the lower bound at 0.
// --------------------------------------------------------------------------

namespace detail {

inline SandwichCounts complement_sandwich(const SandwichCounts& sw, uint64_t total) {
    const unsigned __int128 td = static_cast<unsigned __int128>(total) * sw.divisor;
    const uint64_t jp = td > sw.j_dprime ? static_cast<uint64_t>(td - sw.j_dprime) : 0;
    const auto jd = static_cast<uint64_t>(td - sw.j_prime);
    return SandwichCounts(jp, jd, sw.divisor);
}

} // namespace detail

inline SandwichCounts bracket_J(const PowerBoxQuery& q) {
    const uint64_t p = q.ctx.field.p;
    // the complement needs room to smooth; otherwise the direct sandwich is
    // still sound (enlarged windows are counted with multiplicity)
    if (2 * q.N > p && p - q.N >= 2) {
        const PowerBoxQuery comp(q.ctx, q.H, q.K, q.M + static_cast<int64_t>(q.N), p - q.N);
        const auto params = choose_params_thm1(p, comp.N, comp.K);
        return detail::complement_sandwich(smoothed_counts_thm1(comp, params), q.K);
    }
    return smoothed_counts_thm1(q, choose_params_thm1(p, q.N, q.K));
}

inline SandwichCounts bracket_J1(const PowerDiffQuery& q) {
    return smoothed_counts_thm2(q, choose_params_thm2(q.ctx.field.p, q.N));
}

inline SandwichCounts bracket_J2(const ProductIntervalQuery& q) {
    const uint64_t p = q.field.p;
    const uint64_t u = q.U.size(), v = q.V.size();
    if (2 * q.interval.T > p && p - q.interval.T >= 2) {
        const ProductIntervalQuery comp(q.field, q.U, q.V,
                                        {q.interval.S + static_cast<int64_t>(q.interval.T), p - q.interval.T});
        const auto params = choose_params_thm3(p, u, v, comp.interval.T);
        return detail::complement_sandwich(smoothed_counts_thm3(comp, params), u * v);
    }
    return smoothed_counts_thm3(q, choose_params_thm3(p, u, v, q.interval.T));
}

inline SandwichCounts bracket_J3(const SetIntervalQuery& q) {
    const uint64_t p = q.field.p;
    if (2 * q.interval.T > p && p - q.interval.T >= 2) {
        const SetIntervalQuery comp(q.field, q.X,
                                    {q.interval.S + static_cast<int64_t>(q.interval.T), p - q.interval.T});
        const Thm3Params params{Branch::SMALL, std::max<uint64_t>(1, comp.interval.T / 2)};
        return detail::complement_sandwich(smoothed_counts_thm4(comp, params), q.X.size());
    }
    const Thm3Params params{Branch::SMALL, std::max<uint64_t>(1, q.interval.T / 2)};
    return smoothed_counts_thm4(q, params);
}

inline SandwichCounts bracket_J4(const HyperbolaBoxQuery& q) {
    const uint64_t side = std::min(q.x_range.T, q.y_range.T);
    return smoothed_counts_thm5(q, choose_params_thm5(q.field.p, side));
}

} // namespace congcount
