#pragma once

#include <map>
#include <utility>

#include "ev/npoly.hpp"
#include "ev/poly.hpp"

namespace ev {

// Bivariate polynomial in (n, v) over Q, stored as a sparse term map keyed by
// (deg_n, deg_v). Zero coefficients are never stored.
struct BiPoly {
    std::map<std::pair<long, long>, Rational> terms;

    BiPoly() = default;
    explicit BiPoly(const Rational& c) {
        if (c != 0) terms[{0, 0}] = c;
    }

    bool is_zero() const { return terms.empty(); }
    bool operator==(const BiPoly& o) const { return terms == o.terms; }

    void add_term(long dn, long dv, const Rational& c) {
        if (c == 0) return;
        auto it = terms.find({dn, dv});
        if (it == terms.end()) {
            terms[{dn, dv}] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    long deg_n() const {
        long d = 0;
        for (auto& [k, c] : terms) d = std::max(d, k.first);
        return d;
    }
    long deg_v() const {
        long d = 0;
        for (auto& [k, c] : terms) d = std::max(d, k.second);
        return d;
    }
    bool n_free() const {
        for (auto& [k, c] : terms)
            if (k.first != 0) return false;
        return true;
    }
};

inline BiPoly bipoly_n() {
    BiPoly p;
    p.add_term(1, 0, Rational(1));
    return p;
}
inline BiPoly bipoly_v() {
    BiPoly p;
    p.add_term(0, 1, Rational(1));
    return p;
}

inline BiPoly bipoly_add(const BiPoly& a, const BiPoly& b) {
    BiPoly r = a;
    for (auto& [k, c] : b.terms) r.add_term(k.first, k.second, c);
    return r;
}

inline BiPoly bipoly_neg(const BiPoly& a) {
    BiPoly r = a;
    for (auto& [k, c] : r.terms) c = -c;
    return r;
}

inline BiPoly bipoly_sub(const BiPoly& a, const BiPoly& b) { return bipoly_add(a, bipoly_neg(b)); }

inline BiPoly bipoly_mul(const BiPoly& a, const BiPoly& b) {
    BiPoly r;
    for (auto& [ka, ca] : a.terms)
        for (auto& [kb, cb] : b.terms)
            r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return r;
}

inline BiPoly bipoly_scale(const BiPoly& a, const Rational& s) {
    BiPoly r;
    if (s == 0) return r;
    for (auto& [k, c] : a.terms) r.terms[k] = c * s;
    return r;
}

inline BiPoly bipoly_pow(const BiPoly& a, unsigned e) {
    BiPoly acc(Rational(1)), b = a;
    while (e) {
        if (e & 1) acc = bipoly_mul(acc, b);
        b = bipoly_mul(b, b);
        e >>= 1;
    }
    return acc;
}

// Substitute a fixed rational n, leaving a polynomial in v.
inline Poly bipoly_at_n(const BiPoly& a, const Rational& n) {
    std::vector<Rational> c(static_cast<size_t>(a.deg_v()) + 1, Rational(0));
    for (auto& [k, coef] : a.terms) c[k.second] += coef * pow_rat(n, static_cast<unsigned>(k.first));
    Poly p(std::move(c));
    return p;
}

// Coefficient of n^i as a polynomial in v.
inline Poly bipoly_n_coeff(const BiPoly& a, long i) {
    std::vector<Rational> c(static_cast<size_t>(a.deg_v()) + 1, Rational(0));
    for (auto& [k, coef] : a.terms)
        if (k.first == i) c[k.second] = coef;
    return Poly(std::move(c));
}

// Coefficient of v^j as a polynomial in n.
inline NPoly bipoly_v_coeff(const BiPoly& a, long j) {
    std::vector<Rational> c(static_cast<size_t>(a.deg_n()) + 1, Rational(0));
    for (auto& [k, coef] : a.terms)
        if (k.second == j) c[k.first] = coef;
    return NPoly(std::move(c));
}

// n -> n + c
inline BiPoly bipoly_shift_n(const BiPoly& a, long c) {
    if (c == 0) return a;
    BiPoly r;
    for (long j = 0; j <= a.deg_v(); ++j) {
        NPoly col = npoly_shift(bipoly_v_coeff(a, j), c);
        for (size_t i = 0; i < col.coeffs.size(); ++i)
            r.add_term(static_cast<long>(i), j, col.coeffs[i]);
    }
    return r;
}

// v -> v / s
inline BiPoly bipoly_scale_v(const BiPoly& a, const Rational& s) {
    BiPoly r;
    for (auto& [k, c] : a.terms)
        r.add_term(k.first, k.second, c / pow_rat(s, static_cast<unsigned>(k.second)));
    return r;
}

// v -> 1/v times v^m, i.e. the coefficient-reversal companion: sum c * n^i * v^{m - j}.
// Caller must pick m >= deg_v(a) so the result is polynomial.
inline BiPoly bipoly_reverse_v(const BiPoly& a, long m) {
    BiPoly r;
    for (auto& [k, c] : a.terms) {
        if (m - k.second < 0) throw GenError("reversal shift too small");
        r.add_term(k.first, m - k.second, c);
    }
    return r;
}

inline BiPoly bipoly_from_poly_v(const Poly& p) {
    BiPoly r;
    for (size_t j = 0; j < p.coeffs.size(); ++j) r.add_term(0, static_cast<long>(j), p.coeffs[j]);
    return r;
}

inline BiPoly bipoly_from_npoly(const NPoly& p) {
    BiPoly r;
    for (size_t i = 0; i < p.coeffs.size(); ++i) r.add_term(static_cast<long>(i), 0, p.coeffs[i]);
    return r;
}

} // namespace ev
