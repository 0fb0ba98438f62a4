#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "ev/util.hpp"

namespace ev {

using Int = mpz_class;
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "-p", "p/q"; canonicalizes sign and gcd.
inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw SpecError("invalid rational literal: '" + s + "'");
    if (r.get_den() == 0)
        throw SpecError("zero denominator in rational literal: '" + s + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Rational pow_rat(const Rational& base, unsigned e) {
    Rational acc(1), b = base;
    while (e) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

inline Rational binomial(long n, long k) {
    if (k < 0 || k > n) return Rational(0);
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(b);
}

} // namespace ev
