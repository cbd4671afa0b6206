#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "congcount/errors.hpp"

namespace congcount {

inline constexpr uint64_t kModulusLimit = uint64_t{1} << 62;
inline constexpr uint64_t kDefaultTableCap = uint64_t{1} << 24;

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = m == 1 ? 0 : 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

namespace detail {

inline bool miller_rabin_witness(uint64_t n, uint64_t a, uint64_t d, int s) {
    uint64_t x = pow_mod(a % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return false;
    }
    return true; // definitely composite
}

} // namespace detail

// Deterministic Miller-Rabin. The witness set {2,...,37} is exact for all
// n < 3.3e24, far past the 2^62 modulus limit.
inline bool is_prime(uint64_t n) {
    if (n < 1 || n >= kModulusLimit)
        throw std::out_of_range("is_prime: n must be in [1, 2^62)");
    if (n < 4) return n >= 2;
    if (n % 2 == 0) return false;
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (a % n == 0) continue;
        if (detail::miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

namespace detail {

// Brent's cycle variant of Pollard rho with deterministic parameters
// (x0 = 2, increment c = 1, 2, 3, ...). Precondition: n odd composite.
inline uint64_t pollard_brent(uint64_t n) {
    auto step = [n](uint64_t x, uint64_t c) {
        uint64_t y = mul_mod(x, x, n) + c;
        return y >= n ? y - n : y;
    };
    for (uint64_t c = 1;; ++c) {
        uint64_t x = 2, y = 2, ys = 2, d = 1;
        constexpr uint64_t batch = 128;
        for (uint64_t r = 1; d == 1; r <<= 1) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = step(y, c);
            for (uint64_t k = 0; k < r && d == 1; k += batch) {
                ys = y;
                uint64_t q = 1;
                const uint64_t lim = std::min(batch, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = step(y, c);
                    uint64_t diff = x > y ? x - y : y - x;
                    q = mul_mod(q, diff == 0 ? 1 : diff, n);
                }
                d = std::gcd(q, n);
            }
        }
        if (d == n) {
            // batched gcd collapsed to n; replay singly from the last save
            d = 1;
            uint64_t z = ys;
            while (d == 1) {
                z = step(z, c);
                uint64_t diff = x > z ? x - z : z - x;
                d = std::gcd(diff == 0 ? n : diff, n);
            }
        }
        if (d != n) return d;
    }
}

inline void factor_recurse(uint64_t n, std::vector<uint64_t>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    uint64_t d = pollard_brent(n);
    factor_recurse(d, out);
    factor_recurse(n / d, out);
}

} // namespace detail

// Prime factorization: trial division below 10^6, then rho on the cofactor.
// Returns (prime, exponent) pairs with strictly increasing primes.
inline std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
    if (n < 1 || n >= kModulusLimit)
        throw std::out_of_range("factorize: n must be in [1, 2^62)");
    std::vector<uint64_t> primes;
    for (uint64_t d : {2, 3, 5}) {
        while (n % d == 0) {
            primes.push_back(d);
            n /= d;
        }
    }
    static constexpr uint64_t wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    uint64_t d = 7;
    for (int w = 0; d < 1000000 && d * d <= n; d += wheel[w], w = (w + 1) & 7) {
        while (n % d == 0) {
            primes.push_back(d);
            n /= d;
        }
    }
    if (n > 1) {
        if (d * d > n) {
            primes.push_back(n);
        } else {
            detail::factor_recurse(n, primes);
        }
    }
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<uint64_t, int>> out;
    for (uint64_t q : primes) {
        if (!out.empty() && out.back().first == q) {
            ++out.back().second;
        } else {
            out.emplace_back(q, 1);
        }
    }
    return out;
}

// A prime modulus together with the factorization of p-1 (needed to certify
// primitive roots). Immutable after construction.
struct PrimeField {
    uint64_t p;
    std::vector<std::pair<uint64_t, int>> factors_p_minus_1;

    explicit PrimeField(uint64_t modulus) : p(modulus) {
        if (!is_prime(p)) throw std::domain_error("PrimeField: modulus is not prime");
        if (p > 1) factors_p_minus_1 = factorize(p - 1);
    }
};

// Least nonnegative residue of a signed integer.
inline uint64_t mod_i64(int64_t x, uint64_t p) {
    int64_t r = x % static_cast<int64_t>(p);
    if (r < 0) r += static_cast<int64_t>(p);
    return static_cast<uint64_t>(r);
}

// base^exp mod p for arbitrary signed exponents. For base coprime to p the
// exponent is reduced mod p-1 (g has order dividing p-1), so negative and
// oversized exponents are well-defined.
inline uint64_t mod_pow(uint64_t base, int64_t exp, const PrimeField& field) {
    const uint64_t p = field.p;
    base %= p;
    if (base == 0) {
        if (exp < 0) throw std::domain_error("mod_pow: negative exponent of 0");
        return exp == 0 ? 1 % p : 0;
    }
    const uint64_t order = p - 1;
    uint64_t e = order == 0 ? 0 : mod_i64(exp % static_cast<int64_t>(order), order);
    return pow_mod(base, e, p);
}

// Inverse mod p via extended Euclid.
inline uint64_t mod_inv(uint64_t x, const PrimeField& field) {
    const uint64_t p = field.p;
    x %= p;
    if (x == 0) throw std::domain_error("mod_inv: 0 has no inverse");
    int64_t t = 0, new_t = 1;
    int64_t r = static_cast<int64_t>(p), new_r = static_cast<int64_t>(x);
    while (new_r != 0) {
        int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (t < 0) t += static_cast<int64_t>(p);
    return static_cast<uint64_t>(t);
}

// A primitive root g mod p, optionally carrying the full discrete-log table
// (dlog_table[g^x mod p] = x for x in [1, p-1]; index 0 unused).
struct GeneratorCtx {
    PrimeField field;
    uint64_t g;
    std::vector<uint32_t> dlog_table;

    bool has_dlog() const { return !dlog_table.empty(); }

    uint64_t dlog(uint64_t r) const { return dlog_table[r]; }
};

namespace detail {

inline bool is_primitive_root(uint64_t g, const PrimeField& field) {
    for (const auto& [q, e] : field.factors_p_minus_1) {
        (void)e;
        if (pow_mod(g, (field.p - 1) / q, field.p) == 1) return false;
    }
    return true;
}

} // namespace detail

// Smallest primitive root >= 2, certified against every prime factor of p-1.
inline GeneratorCtx find_primitive_root(const PrimeField& field) {
    if (field.p == 2) throw std::domain_error("find_primitive_root: modulus 2 is degenerate");
    for (uint64_t g = 2; g < field.p; ++g) {
        if (detail::is_primitive_root(g, field)) return GeneratorCtx{field, g, {}};
    }
    throw std::logic_error("find_primitive_root: no generator found"); // unreachable for prime p
}

// Fills the discrete-log table in one multiplicative pass over [1, p-1].
inline GeneratorCtx build_dlog_table(GeneratorCtx ctx, uint64_t cap = kDefaultTableCap) {
    const uint64_t p = ctx.field.p;
    if (p > cap) throw capacity_error("build_dlog_table: p exceeds table cap");
    ctx.dlog_table.assign(p, 0);
    uint64_t v = 1;
    for (uint64_t x = 1; x < p; ++x) {
        v = mul_mod(v, ctx.g, p);
        ctx.dlog_table[v] = static_cast<uint32_t>(x);
    }
    return ctx;
}

// inv[z] for all z in [1, p-1] in one O(p) pass (inv[0] unused).
inline std::vector<uint64_t> inverse_table(const PrimeField& field, uint64_t cap = kDefaultTableCap) {
    const uint64_t p = field.p;
    if (p > cap) throw capacity_error("inverse_table: p exceeds table cap");
    std::vector<uint64_t> inv(p, 0);
    if (p > 1) inv[1] = 1;
    for (uint64_t z = 2; z < p; ++z) {
        inv[z] = p - mul_mod(p / z, inv[p % z], p);
    }
    return inv;
}

inline std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi) {
    std::vector<uint64_t> out;
    for (uint64_t n = std::max<uint64_t>(lo, 2); n <= hi; ++n) {
        if (is_prime(n)) out.push_back(n);
    }
    return out;
}

} // namespace congcount
