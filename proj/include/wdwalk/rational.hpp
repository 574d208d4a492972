#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>

#include "wdwalk/errors.hpp"

namespace wdwalk {

using Integer = mpz_class;
using Rational = mpq_class;

/** Canonical serialization: "n" for integers, "n/d" otherwise, d > 0. */
inline std::string rational_to_string(const Rational& r) {
    Rational c(r);
    c.canonicalize();
    std::string out = c.get_num().get_str();
    if (c.get_den() != 1) {
        out += "/" + c.get_den().get_str();
    }
    return out;
}

/** Parse "n" or "n/d" (optional leading '-'); rejects anything else. */
inline Rational parse_rational(const std::string& s) {
    auto is_int_token = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        }
        return true;
    };
    const auto slash = s.find('/');
    const std::string num = s.substr(0, slash);
    if (!is_int_token(num)) throw ParseError("malformed rational: '" + s + "'");
    Integer n(num), d(1);
    if (slash != std::string::npos) {
        const std::string den = s.substr(slash + 1);
        if (!is_int_token(den)) throw ParseError("malformed rational: '" + s + "'");
        d = Integer(den);
        if (d == 0) throw ParseError("zero denominator: '" + s + "'");
    }
    Rational r(n, d);
    r.canonicalize();
    return r;
}

inline bool rational_is_integer(const Rational& r) { return r.get_den() == 1; }

/** The value as a machine integer; throws unless integral and in range. */
inline long rational_to_long(const Rational& r) {
    if (!rational_is_integer(r)) throw Error("not an integer: " + rational_to_string(r));
    if (!r.get_num().fits_slong_p()) throw Error("integer out of range: " + rational_to_string(r));
    return r.get_num().get_si();
}

inline Rational rational_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (base == 0 && e < 0) throw DivisionByZero("0 raised to a negative power");
    Rational b = e < 0 ? Rational(base.get_den(), base.get_num()) : base;
    b.canonicalize();
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    Rational acc(1);
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    acc.canonicalize();
    return acc;
}

/** Euler's totient, by trial division (arguments stay desk-scale). */
inline long euler_phi(long m) {
    long result = m, n = m;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

}  // namespace wdwalk
