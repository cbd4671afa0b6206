#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace congcount {

// One tag per bound the harness evaluates: the five new envelopes and the
// three classical reference envelopes they are compared against.
enum class EnvelopeKind {
    THM1,
    THM2,
    THM3,
    THM4,
    THM5,
    MONTGOMERY_EQ1,
    RUZSA_EQ3,
    SARKOZY_EQ4,
};

inline const char* to_string(EnvelopeKind k) {
    switch (k) {
        case EnvelopeKind::THM1: return "THM1";
        case EnvelopeKind::THM2: return "THM2";
        case EnvelopeKind::THM3: return "THM3";
        case EnvelopeKind::THM4: return "THM4";
        case EnvelopeKind::THM5: return "THM5";
        case EnvelopeKind::MONTGOMERY_EQ1: return "MONTGOMERY_EQ1";
        case EnvelopeKind::RUZSA_EQ3: return "RUZSA_EQ3";
        case EnvelopeKind::SARKOZY_EQ4: return "SARKOZY_EQ4";
    }
    return "?";
}

inline std::optional<EnvelopeKind> envelope_kind_from(const std::string& s) {
    for (EnvelopeKind k : {EnvelopeKind::THM1, EnvelopeKind::THM2, EnvelopeKind::THM3, EnvelopeKind::THM4,
                           EnvelopeKind::THM5, EnvelopeKind::MONTGOMERY_EQ1, EnvelopeKind::RUZSA_EQ3,
                           EnvelopeKind::SARKOZY_EQ4}) {
        if (s == to_string(k)) return k;
    }
    return std::nullopt;
}

// Whatever a given envelope needs; unused fields stay at 0 and are never read.
struct EnvelopeParams {
    double p = 0;
    double K = 0;
    double N = 0;
    double u = 0;
    double v = 0;
    double T = 0;
    double set_size = 0;
    double delta = 0;
};

namespace detail {

inline void need_positive(double x, const char* name) {
    if (!(x > 0)) throw std::out_of_range(std::string("envelope: parameter ") + name + " must be positive");
}

} // namespace detail

// Evaluates the bracketed error expression with implied constant 1 (the
// stated constant 2 for the Sarkozy-type reference bound). Logs are natural.
inline double envelope(EnvelopeKind kind, const EnvelopeParams& q) {
    detail::need_positive(q.p, "p");
    const double sqrt_p = std::sqrt(q.p);
    const double log_p = std::log(q.p);
    switch (kind) {
        case EnvelopeKind::THM1:
            detail::need_positive(q.K, "K");
            detail::need_positive(q.N, "N");
            return std::sqrt(q.K) * std::sqrt(q.N) / std::pow(q.p, 0.25) + sqrt_p;
        case EnvelopeKind::THM2:
        case EnvelopeKind::THM5:
            detail::need_positive(q.N, "N");
            return q.N / std::pow(q.p, 0.25) + sqrt_p;
        case EnvelopeKind::THM3:
            detail::need_positive(q.u, "u");
            detail::need_positive(q.v, "v");
            detail::need_positive(q.T, "T");
            return std::cbrt(q.u * q.u * q.v * q.v * q.T) + std::sqrt(q.p * q.u * q.v);
        case EnvelopeKind::THM4:
            detail::need_positive(q.set_size, "set_size");
            detail::need_positive(q.T, "T");
            detail::need_positive(q.delta, "delta");
            return q.set_size * std::cbrt(q.T) * std::pow(q.delta, 2.0 / 3.0) / std::cbrt(q.p) +
                   q.set_size * q.delta;
        case EnvelopeKind::MONTGOMERY_EQ1:
        case EnvelopeKind::RUZSA_EQ3:
            return sqrt_p * log_p * log_p;
        case EnvelopeKind::SARKOZY_EQ4:
            detail::need_positive(q.u, "u");
            detail::need_positive(q.v, "v");
            return 2.0 * std::sqrt(q.p * q.u * q.v) * log_p;
    }
    throw std::out_of_range("envelope: unknown kind");
}

// The classical comparison envelope paired with each theorem. Theorem 4 has
// no named classical counterpart in scope; the completion bound
// |X| Delta log p (the L1-of-interval-sums route with the safe p log p
// estimate) serves as its comparison column.
inline double reference_envelope(EnvelopeKind thm, const EnvelopeParams& q) {
    switch (thm) {
        case EnvelopeKind::THM1:
            return envelope(EnvelopeKind::MONTGOMERY_EQ1, q);
        case EnvelopeKind::THM2:
        case EnvelopeKind::THM5:
            return envelope(EnvelopeKind::RUZSA_EQ3, q);
        case EnvelopeKind::THM3:
            return envelope(EnvelopeKind::SARKOZY_EQ4, q);
        case EnvelopeKind::THM4:
            detail::need_positive(q.set_size, "set_size");
            detail::need_positive(q.delta, "delta");
            return q.set_size * q.delta * std::log(q.p);
        default:
            throw std::out_of_range("reference_envelope: not a theorem tag");
    }
}

} // namespace congcount
