#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "congcount/errors.hpp"
#include "congcount/modarith.hpp"
#include "congcount/residues.hpp"
#include "congcount/summation.hpp"

namespace congcount {

using ComplexValue = std::complex<double>;

inline constexpr uint64_t kDefaultSpectrumCap = uint64_t{1} << 16;

// e^{2 pi i k/m} for k in [0, m). One table per modulus keeps rounding
// consistent across every sum that shares it.
class UnityRoots {
public:
    explicit UnityRoots(uint64_t m, uint64_t cap = kDefaultTableCap) : m_(m) {
        if (m < 1) throw std::out_of_range("UnityRoots: modulus must be positive");
        if (m > cap) throw capacity_error("UnityRoots: modulus exceeds table cap");
        w_.resize(m);
        for (uint64_t k = 0; k < m; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
            w_[k] = {std::cos(angle), std::sin(angle)};
        }
    }

    uint64_t modulus() const { return m_; }
    const ComplexValue& operator[](uint64_t k) const { return w_[k]; }

private:
    uint64_t m_;
    std::vector<ComplexValue> w_;
};

namespace detail {

// e^{i pi k / p} with k reduced mod 2p before any float touches it, so huge
// offsets S lose no precision.
inline ComplexValue half_turn(__int128 k, uint64_t p) {
    const __int128 two_p = static_cast<__int128>(2) * p;
    __int128 r = k % two_p;
    if (r < 0) r += two_p;
    const double angle = std::numbers::pi * static_cast<double>(static_cast<uint64_t>(r)) / static_cast<double>(p);
    return {std::cos(angle), std::sin(angle)};
}

inline double sin_half_turn(__int128 k, uint64_t p) {
    const __int128 two_p = static_cast<__int128>(2) * p;
    __int128 r = k % two_p;
    if (r < 0) r += two_p;
    return std::sin(std::numbers::pi * static_cast<double>(static_cast<uint64_t>(r)) / static_cast<double>(p));
}

} // namespace detail

// Incomplete geometric sum over n in [S+1, S+T] of e^{2 pi i a n / p}, via
// the closed form e^{i pi a (2S+T+1)/p} sin(pi a T / p) / sin(pi a / p).
inline ComplexValue interval_sum(uint64_t a, int64_t S, uint64_t T, const PrimeField& field) {
    const uint64_t p = field.p;
    if (T < 1 || T > p) throw std::out_of_range("interval_sum: need 1 <= T <= p");
    a %= p;
    if (a == 0) return {static_cast<double>(T), 0.0};
    const double num = detail::sin_half_turn(static_cast<__int128>(a) * T, p);
    const double den = std::sin(std::numbers::pi * static_cast<double>(a) / static_cast<double>(p));
    const __int128 phase = static_cast<__int128>(a) * (static_cast<__int128>(2) * S + T + 1);
    return (num / den) * detail::half_turn(phase, p);
}

// L1 norm over the nontrivial frequencies: sum over a in [1, p-1] of
// |interval_sum(a, S, T)|.
inline double interval_sum_l1(int64_t S, uint64_t T, const PrimeField& field) {
    if (T < 1 || T > field.p) throw std::out_of_range("interval_sum_l1: need 1 <= T <= p");
    CompensatedSum acc;
    for (uint64_t a = 1; a < field.p; ++a) {
        acc.add(std::abs(interval_sum(a, S, T, field)));
    }
    return acc.value();
}

// Full indicator spectrum of a residue set: entry a holds
// sum over x in X of e^{2 pi i a x / p}. Direct O(p |X|) evaluation.
inline std::vector<ComplexValue> set_spectrum(const ResidueSet& X, const PrimeField& field,
                                              uint64_t cap = kDefaultSpectrumCap) {
    const uint64_t p = field.p;
    if (p > cap) throw capacity_error("set_spectrum: p exceeds spectrum cap");
    X.check_bounds(p);
    const UnityRoots roots(p);
    // Per-frequency Neumaier accumulators; the inner index steps by x, which
    // keeps the hot loop free of multiplications.
    std::vector<double> re(p, 0.0), rec(p, 0.0), im(p, 0.0), imc(p, 0.0);
    auto accumulate = [](double& s, double& c, double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v)) {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    };
    for (uint64_t x : X.elements()) {
        uint64_t idx = 0;
        for (uint64_t a = 0; a < p; ++a) {
            accumulate(re[a], rec[a], roots[idx].real());
            accumulate(im[a], imc[a], roots[idx].imag());
            idx += x;
            if (idx >= p) idx -= p;
        }
    }
    std::vector<ComplexValue> spec(p);
    for (uint64_t a = 0; a < p; ++a) spec[a] = {re[a] + rec[a], im[a] + imc[a]};
    return spec;
}

// The spectral-flatness statistic: Delta = max over a != 0 of |spectrum(a)| / |X|.
struct SpectrumSummary {
    uint64_t set_size;
    double delta;
    uint64_t argmax_a;
};

inline SpectrumSummary max_nontrivial_spectrum(const ResidueSet& X, const PrimeField& field,
                                               uint64_t cap = kDefaultSpectrumCap) {
    if (X.empty()) throw std::domain_error("max_nontrivial_spectrum: empty set");
    const auto spec = set_spectrum(X, field, cap);
    uint64_t best_a = 1;
    double best = -1.0;
    for (uint64_t a = 1; a < field.p; ++a) {
        const double m = std::abs(spec[a]);
        if (m > best) {
            best = m;
            best_a = a;
        }
    }
    return {X.size(), best / static_cast<double>(X.size()), best_a};
}

// Weight vectors of the bilinear (Vinogradov) sum, with their power sums.
struct BilinearWeights {
    uint64_t m;
    std::vector<ComplexValue> nu;
    std::vector<ComplexValue> rho;
    double nu_power;  // sum |nu(x)|^2
    double rho_power; // sum |rho(y)|^2

    BilinearWeights(uint64_t m, std::vector<ComplexValue> nu_in, std::vector<ComplexValue> rho_in)
        : m(m), nu(std::move(nu_in)), rho(std::move(rho_in)) {
        if (m < 2) throw std::out_of_range("BilinearWeights: need m > 1");
        if (nu.size() != m || rho.size() != m)
            throw std::invalid_argument("BilinearWeights: weight arrays must have length m");
        nu_power = power_sum(nu);
        rho_power = power_sum(rho);
    }

    static double power_sum(const std::vector<ComplexValue>& w) {
        CompensatedSum acc;
        for (const auto& z : w) acc.add(std::norm(z));
        return acc.value();
    }
};

// Double sum over x, y of nu(x) rho(y) e^{2 pi i a x y / m}, together with
// the sqrt(m X Y) certificate that must dominate it.
inline std::pair<ComplexValue, double> vinogradov_double_sum(const BilinearWeights& w, uint64_t a) {
    if (std::gcd(a % w.m, w.m) != 1)
        throw std::invalid_argument("vinogradov_double_sum: need gcd(a, m) = 1");
    const uint64_t m = w.m;
    const UnityRoots roots(m);
    ComplexSum outer;
    for (uint64_t x = 0; x < m; ++x) {
        if (w.nu[x] == ComplexValue{}) continue;
        const uint64_t step = mul_mod(a % m, x, m);
        ComplexSum inner;
        uint64_t idx = 0;
        for (uint64_t y = 0; y < m; ++y) {
            inner.add(w.rho[y] * roots[idx]);
            idx += step;
            if (idx >= m) idx -= m;
        }
        outer.add(w.nu[x] * inner.value());
    }
    const ComplexValue value = outer.value();
    const double certificate = std::sqrt(static_cast<double>(m) * w.nu_power * w.rho_power);
    if (std::abs(value) > certificate * (1.0 + 1e-9))
        throw std::logic_error("vinogradov_double_sum: certificate violated");
    return {value, certificate};
}

// Kloosterman-type sum over z in [1, p-1] of e^{2 pi i (b z - a h z^{-1}) / p}
// and its Weil bound 2 sqrt(p). For a = 0, b != 0 the value is exactly -1.
inline std::pair<ComplexValue, double> kloosterman(uint64_t a, uint64_t b, uint64_t h, const PrimeField& field,
                                                   const UnityRoots& roots, const std::vector<uint64_t>& inv) {
    const uint64_t p = field.p;
    if (p < 3) throw std::out_of_range("kloosterman: need p >= 3");
    a %= p;
    b %= p;
    h %= p;
    if (h == 0) throw std::invalid_argument("kloosterman: h must be nonzero mod p");
    const uint64_t c = mul_mod(a, h, p);
    ComplexSum acc;
    uint64_t bz = 0;
    for (uint64_t z = 1; z < p; ++z) {
        bz += b;
        if (bz >= p) bz -= p;
        const uint64_t t = mul_mod(c, inv[z], p);
        acc.add(roots[bz >= t ? bz - t : bz + p - t]);
    }
    const ComplexValue value = acc.value();
    const double weil_bound = 2.0 * std::sqrt(static_cast<double>(p));
    if (a != 0) {
        if (std::abs(value) > weil_bound + 1e-6)
            throw std::logic_error("kloosterman: Weil certificate violated");
    } else if (b != 0) {
        if (std::abs(value - ComplexValue{-1.0, 0.0}) > 1e-9 * static_cast<double>(p))
            throw std::logic_error("kloosterman: complete sum should equal -1");
    }
    return {value, weil_bound};
}

inline std::pair<ComplexValue, double> kloosterman(uint64_t a, uint64_t b, uint64_t h, const PrimeField& field) {
    const UnityRoots roots(field.p);
    const auto inv = inverse_table(field);
    return kloosterman(a, b, h, field, roots, inv);
}

} // namespace congcount
