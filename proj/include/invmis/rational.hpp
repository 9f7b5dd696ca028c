#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace invmis {

// Exact rational on 64-bit words. Intermediates go through 128-bit so the
// usual bound arithmetic (numerators around k*N with N ~ 1e15) cannot wrap.
// Always kept normalized: den > 0, gcd(|num|, den) == 1.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    static Rational from_i128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        constexpr __int128 lim = __int128(INT64_MAX);
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("Rational: value out of 64-bit range");
        Rational r;
        r.num = static_cast<std::int64_t>(n);
        r.den = static_cast<std::int64_t>(d);
        return r;
    }

    friend Rational operator+(const Rational& x, const Rational& y) {
        return from_i128(__int128(x.num) * y.den + __int128(y.num) * x.den,
                         __int128(x.den) * y.den);
    }
    friend Rational operator-(const Rational& x, const Rational& y) {
        return from_i128(__int128(x.num) * y.den - __int128(y.num) * x.den,
                         __int128(x.den) * y.den);
    }
    friend Rational operator*(const Rational& x, const Rational& y) {
        return from_i128(__int128(x.num) * y.num, __int128(x.den) * y.den);
    }
    friend Rational operator/(const Rational& x, const Rational& y) {
        if (y.num == 0) throw std::domain_error("Rational: division by zero");
        return from_i128(__int128(x.num) * y.den, __int128(x.den) * y.num);
    }
    Rational operator-() const { Rational r; r.num = -num; r.den = den; return r; }

    friend bool operator==(const Rational& x, const Rational& y) {
        return x.num == y.num && x.den == y.den;
    }
    friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }
    friend bool operator<(const Rational& x, const Rational& y) {
        return __int128(x.num) * y.den < __int128(y.num) * x.den;
    }
    friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
    friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
    friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

    // floor(num/den) also for negative values
    std::int64_t floor() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }
    std::int64_t ceil() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num > 0) ++q;
        return q;
    }

    double to_double() const { return double(num) / double(den); }

    // Parses "3", "-3", "1/4" and decimal strings like "0.1" exactly.
    static Rational parse(const std::string& s);

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

inline Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t n = std::stoll(s.substr(0, slash));
        std::int64_t d = std::stoll(s.substr(slash + 1));
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    bool neg = s[0] == '-';
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (neg) digits = digits.substr(1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("Rational::parse: bad decimal literal '" + s + "'");
    std::size_t frac_digits = s.size() - dot - 1;
    if (frac_digits > 18) throw std::invalid_argument("Rational::parse: too many decimal places");
    __int128 n = 0;
    for (char c : digits) n = n * 10 + (c - '0');
    __int128 d = 1;
    for (std::size_t i = 0; i < frac_digits; ++i) d *= 10;
    return from_i128(neg ? -n : n, d);
}

} // namespace invmis
