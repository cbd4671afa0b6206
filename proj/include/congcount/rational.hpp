#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace congcount {

namespace detail {

inline unsigned __int128 u128_abs(__int128 v) {
    return v < 0 ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
}

inline unsigned __int128 u128_gcd(unsigned __int128 a, unsigned __int128 b) {
    while (b != 0) {
        const unsigned __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::string i128_str(__int128 v) {
    if (v == 0) return "0";
    unsigned __int128 u = u128_abs(v);
    char buf[48];
    int i = 48;
    while (u != 0) {
        buf[--i] = static_cast<char>('0' + static_cast<int>(u % 10));
        u /= 10;
    }
    std::string out(v < 0 ? "-" : "");
    out.append(buf + i, buf + 48);
    return out;
}

inline __int128 i128_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("i128_parse: empty string");
    size_t i = 0;
    const bool neg = s[0] == '-';
    if (neg || s[0] == '+') i = 1;
    if (i == s.size()) throw std::invalid_argument("i128_parse: no digits");
    unsigned __int128 u = 0;
    constexpr unsigned __int128 lim = ~static_cast<unsigned __int128>(0);
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("i128_parse: bad digit in '" + s + "'");
        const auto d = static_cast<unsigned>(s[i] - '0');
        if (u > (lim - d) / 10) throw std::out_of_range("i128_parse: overflow");
        u = u * 10 + d;
    }
    const auto max_mag = static_cast<unsigned __int128>(1) << 127;
    if (u > max_mag - (neg ? 0 : 1)) throw std::out_of_range("i128_parse: overflow");
    return neg ? -static_cast<__int128>(max_mag - (max_mag - u)) : static_cast<__int128>(u);
}

} // namespace detail

// Exact rational on 128-bit integers: wide enough that any count times any
// modulus below 2^62 stays representable. Comparisons never touch floats.
struct Rational {
    __int128 num = 0;
    __int128 den = 1; // > 0, gcd(|num|, den) == 1

    Rational() = default;

    Rational(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const auto g = detail::u128_gcd(detail::u128_abs(n), static_cast<unsigned __int128>(d));
        if (g > 1) {
            n /= static_cast<__int128>(g);
            d /= static_cast<__int128>(g);
        }
        num = n;
        den = d;
    }

    static Rational from_int(__int128 n) { return Rational(n, 1); }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const { return detail::i128_str(num) + "/" + detail::i128_str(den); }

    Rational operator+(const Rational& o) const {
        return Rational(checked_add(checked_mul(num, o.den), checked_mul(o.num, den)),
                        checked_mul(den, o.den));
    }

    Rational operator-(const Rational& o) const {
        return Rational(checked_add(checked_mul(num, o.den), -checked_mul(o.num, den)),
                        checked_mul(den, o.den));
    }

    Rational operator*(const Rational& o) const {
        return Rational(checked_mul(num, o.num), checked_mul(den, o.den));
    }

    Rational abs() const { return Rational(num < 0 ? -num : num, den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

    friend bool operator<(const Rational& a, const Rational& b) {
        return checked_mul(a.num, b.den) < checked_mul(b.num, a.den);
    }

    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    // cross products are kept below 2^126 so that one addition still fits
    static constexpr unsigned __int128 kMulLimit = static_cast<unsigned __int128>(1) << 126;

    static __int128 checked_mul(__int128 a, __int128 b) {
        if (a == 0 || b == 0) return 0;
        const auto ua = detail::u128_abs(a), ub = detail::u128_abs(b);
        if (ua > kMulLimit / ub) throw std::overflow_error("Rational: product exceeds 128 bits");
        return a * b;
    }

    static __int128 checked_add(__int128 a, __int128 b) {
        // |a|, |b| <= 2^126 by construction, so the sum cannot wrap
        return a + b;
    }
};

} // namespace congcount
