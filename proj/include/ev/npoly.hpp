#pragma once

#include "ev/poly.hpp"

namespace ev {

// Polynomial in the row index n. Same representation as Poly; kept as a
// separate name so signatures distinguish the two variables.
using NPoly = Poly;

inline Rational npoly_at(const NPoly& p, long n) { return poly_eval(p, Rational(n)); }

// p(n + c), expanded by the binomial theorem.
inline NPoly npoly_shift(const NPoly& p, long c) {
    if (c == 0) return p;
    std::vector<Rational> out(p.coeffs.size(), Rational(0));
    for (size_t i = 0; i < p.coeffs.size(); ++i) {
        Rational cp(1);
        for (long j = static_cast<long>(i); j >= 0; --j) {
            out[j] += p.coeffs[i] * binomial(static_cast<long>(i), j) * cp;
            cp *= c;
        }
    }
    return NPoly(std::move(out));
}

} // namespace ev
