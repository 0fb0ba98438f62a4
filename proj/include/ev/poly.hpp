#pragma once

#include <utility>
#include <vector>

#include "ev/rational.hpp"

namespace ev {

// Dense univariate polynomial over Q. coeffs[i] is the coefficient of x^i;
// the zero polynomial is the empty vector, and the top coefficient is nonzero.
struct Poly {
    std::vector<Rational> coeffs;

    Poly() = default;
    explicit Poly(Rational c) {
        if (c != 0) coeffs.push_back(std::move(c));
    }
    explicit Poly(std::vector<Rational> cs) : coeffs(std::move(cs)) { trim(); }

    void trim() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }
    bool is_zero() const { return coeffs.empty(); }
    long deg() const { return static_cast<long>(coeffs.size()) - 1; }
    Rational coeff(long i) const {
        if (i < 0 || i >= static_cast<long>(coeffs.size())) return Rational(0);
        return coeffs[i];
    }
    bool operator==(const Poly& o) const { return coeffs == o.coeffs; }
};

inline Poly poly_x() { return Poly(std::vector<Rational>{Rational(0), Rational(1)}); }

inline Poly poly_add(const Poly& a, const Poly& b) {
    std::vector<Rational> c(std::max(a.coeffs.size(), b.coeffs.size()), Rational(0));
    for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
    return Poly(std::move(c));
}

inline Poly poly_neg(const Poly& a) {
    Poly r = a;
    for (auto& c : r.coeffs) c = -c;
    return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> c(a.coeffs.size() + b.coeffs.size() - 1, Rational(0));
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j)
            c[i + j] += a.coeffs[i] * b.coeffs[j];
    return Poly(std::move(c));
}

inline Poly poly_scale(const Poly& a, const Rational& s) {
    if (s == 0) return Poly();
    Poly r = a;
    for (auto& c : r.coeffs) c *= s;
    return r;
}

inline std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& d) {
    if (d.is_zero()) throw GenError("polynomial division by zero");
    Poly r = a, q;
    q.coeffs.assign(a.coeffs.size(), Rational(0));
    while (!r.is_zero() && r.deg() >= d.deg()) {
        long shift = r.deg() - d.deg();
        Rational f = r.coeffs.back() / d.coeffs.back();
        q.coeffs[shift] = f;
        for (long i = 0; i <= d.deg(); ++i) r.coeffs[i + shift] -= f * d.coeffs[i];
        r.trim();
    }
    q.trim();
    return {q, r};
}

// Exact quotient; second member reports whether the division was exact.
inline std::pair<Poly, bool> poly_div_exact(const Poly& a, const Poly& d) {
    auto [q, r] = poly_divmod(a, d);
    return {q, r.is_zero()};
}

inline Poly poly_derivative(const Poly& a) {
    if (a.coeffs.size() <= 1) return Poly();
    std::vector<Rational> c(a.coeffs.size() - 1);
    for (size_t i = 1; i < a.coeffs.size(); ++i) c[i - 1] = a.coeffs[i] * Rational(static_cast<long>(i));
    return Poly(std::move(c));
}

inline Rational poly_eval(const Poly& a, const Rational& x) {
    Rational acc(0);
    for (size_t i = a.coeffs.size(); i-- > 0;) acc = acc * x + a.coeffs[i];
    return acc;
}

// v^{deg(p)+m} * p(1/v): reverses the coefficient order, then shifts by m >= 0.
inline Poly poly_reciprocal(const Poly& p, long m = 0) {
    if (p.is_zero()) return Poly();
    std::vector<Rational> c(p.coeffs.size() + m, Rational(0));
    for (size_t i = 0; i < p.coeffs.size(); ++i)
        c[m + p.coeffs.size() - 1 - i] = p.coeffs[i];
    return Poly(std::move(c));
}

// p(s*x)
inline Poly poly_substitute_scaled(const Poly& p, const Rational& s) {
    Poly r = p;
    Rational f(1);
    for (size_t i = 1; i < r.coeffs.size(); ++i) {
        f *= s;
        r.coeffs[i] *= f;
    }
    r.trim();
    return r;
}

inline Poly poly_monic(const Poly& a) {
    if (a.is_zero()) return a;
    return poly_scale(a, Rational(1) / a.coeffs.back());
}

inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = poly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(a);
}

} // namespace ev
