#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "congcount/modarith.hpp"

namespace congcount {

// The residues {S+1, ..., S+T} reduced mod p. Wrap-around is allowed and the
// endpoints are arbitrary integers; for T <= p the reduced member set has
// exactly T elements.
struct ResidueInterval {
    int64_t S = 0;
    uint64_t T = 1;

    bool contains(uint64_t r, uint64_t p) const {
        uint64_t start = mod_i64(S + 1, p);
        uint64_t d = r >= start ? r - start : r + p - start;
        return d < T;
    }
};

// Multiplicity of each residue class in the integer interval [S+1, S+len]
// taken mod `modulus`. Works for any length, including len >= modulus, which
// is what the smoothing module's enlarged windows need.
struct IntervalMult {
    uint64_t modulus;
    uint64_t base;  // full periods: len / modulus
    uint64_t start; // (S+1) mod modulus
    uint64_t rem;   // len % modulus

    IntervalMult(int64_t S, uint64_t len, uint64_t modulus)
        : modulus(modulus),
          base(len / modulus),
          start(mod_i64(S + 1, modulus)),
          rem(len % modulus) {}

    uint64_t mult(uint64_t r) const {
        uint64_t d = r >= start ? r - start : r + modulus - start;
        return base + (d < rem ? 1 : 0);
    }
};

// Strictly increasing residues. Duplicates are rejected at construction;
// bounds against a modulus are checked where the set meets a field.
class ResidueSet {
public:
    ResidueSet() = default;

    explicit ResidueSet(std::vector<uint64_t> elements) : elems_(std::move(elements)) {
        std::sort(elems_.begin(), elems_.end());
        if (std::adjacent_find(elems_.begin(), elems_.end()) != elems_.end())
            throw std::invalid_argument("ResidueSet: duplicate elements");
    }

    const std::vector<uint64_t>& elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }

    void check_bounds(uint64_t p) const {
        if (!elems_.empty() && elems_.back() >= p)
            throw std::out_of_range("ResidueSet: element >= modulus");
    }

private:
    std::vector<uint64_t> elems_;
};

// Uniform random subset of [0, p-1] of the given size (partial Fisher-Yates
// over an O(p) pool).
inline ResidueSet random_residue_set(uint64_t size, uint64_t p, std::mt19937_64& rng) {
    if (size > p) throw std::out_of_range("random_residue_set: size > p");
    if (p > (uint64_t{1} << 26)) throw capacity_error("random_residue_set: p exceeds the pool cap");
    std::vector<uint64_t> pool(p);
    for (uint64_t i = 0; i < p; ++i) pool[i] = i;
    std::vector<uint64_t> picked;
    picked.reserve(size);
    for (uint64_t i = 0; i < size; ++i) {
        std::uniform_int_distribution<uint64_t> dist(i, p - 1);
        std::swap(pool[i], pool[dist(rng)]);
        picked.push_back(pool[i]);
    }
    return ResidueSet(std::move(picked));
}

} // namespace congcount
