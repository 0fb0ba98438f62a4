#pragma once

#include <ostream>
#include <vector>

#include "ev/poly.hpp"
#include "ev/recurrence.hpp"
#include "ev/util.hpp"

namespace ev {

// Moments of the distribution P(X=k) = [v^k] f / f(1) for one row f.
Rational row_total(const Poly& f);
Rational row_mean(const Poly& f);
Rational row_variance(const Poly& f);
Rational row_factorial_moment(const Poly& f, int m); // E[X(X-1)...(X-m+1)]
Rational row_central_moment(const Poly& f, int m);

Rational stirling2(int m, int j);

// E[X^m] from factorial moments q[0..m] (q[0] = 1).
Rational raw_from_factorial(const std::vector<Rational>& q, int m);

// Scalar data of an EulerianLinear-view form, everything evaluated at v=1.
struct ElScalars {
    Rational alpha, beta, gamma, alphap, gammap;
};

ElScalars el_scalars(const CanonicalForm& cf);

// mu_n = (1 - beta/(alpha n + gamma)) mu_{n-1} + (alpha' n + gamma')/(alpha n + gamma),
// indices relative to the canonical start row 0.
std::vector<Rational> mean_series(const ElScalars& s, const Rational& mu0, long n_max);

// Exact closed form; exists when alpha beta (alpha + beta) != 0, and in the
// constant-denominator case alpha = 0, beta gamma != 0.
bool mean_exact_form_exists(const ElScalars& s);
Rational mean_closed_exact(const ElScalars& s, const Rational& mu0, long n);

// All parameter regimes; the beta = 0 and alpha + beta = 0 regimes go through
// digamma values.
double mean_closed_double(const ElScalars& s, double mu0, long n);

template <class F> F from_rational(const Rational& r);
template <> inline Rational from_rational<Rational>(const Rational& r) { return r; }
template <> inline double from_rational<double>(const Rational& r) { return r.get_d(); }

template <class F> struct MomentSeries {
    std::vector<F> mean;                 // mean[n], canonical row index
    std::vector<std::vector<F>> central; // central[n][m], 0 <= m <= order
};

namespace detail {

template <class F> F fpow(const F& x, int e) {
    F r = from_rational<F>(Rational(1));
    for (int i = 0; i < e; ++i) r = r * x;
    return r;
}

// sum_k c_k (k - delta)^j over the coefficients of c(v).
template <class F> F shifted_power_sum(const Poly& c, const F& delta, int j) {
    F acc = from_rational<F>(Rational(0));
    for (size_t k = 0; k < c.coeffs.size(); ++k) {
        if (c.coeffs[k] == 0) continue;
        F base = from_rational<F>(Rational(static_cast<long>(k))) - delta;
        acc = acc + from_rational<F>(c.coeffs[k]) * fpow(base, j);
    }
    return acc;
}

} // namespace detail

// Central moments M_{n,m} through the twisted-recurrence update; exact over
// Rational, stable over double for large n.
template <class F>
MomentSeries<F> central_moment_series(const CanonicalForm& cf, int order, long n_max) {
    if (cf.shape == Shape::General)
        throw GenError("central moment recurrence requires a canonical form");
    if (order < 2) order = 2;
    MomentSeries<F> out;
    Rational a1 = poly_eval(cf.alpha, Rational(1));
    Rational b1 = poly_eval(cf.beta, Rational(1));
    Rational g1 = poly_eval(cf.gamma, Rational(1));
    Rational ap = poly_eval(poly_derivative(cf.alpha), Rational(1));
    Rational gp = poly_eval(poly_derivative(cf.gamma), Rational(1));

    std::vector<F> m(static_cast<size_t>(order) + 1);
    for (int j = 0; j <= order; ++j)
        m[static_cast<size_t>(j)] = from_rational<F>(row_central_moment(cf.initial, j));
    F mu = from_rational<F>(row_mean(cf.initial));
    out.mean.push_back(mu);
    out.central.push_back(m);

    for (long n = 1; n <= n_max; ++n) {
        Rational dr = a1 * n + g1;
        if (dr == 0) throw GenError("moment recurrence denominator vanishes at row " + std::to_string(n));
        F d = from_rational<F>(dr);
        F drive = from_rational<F>(ap * n + gp);
        F mu_next = mu + (drive - from_rational<F>(b1) * mu) / d;
        F delta = mu_next - mu;

        std::vector<F> aj(static_cast<size_t>(order) + 1), gj(aj.size()), bj(aj.size());
        F deltap1 = delta + from_rational<F>(Rational(1));
        for (int j = 0; j <= order; ++j) {
            aj[static_cast<size_t>(j)] = detail::shifted_power_sum<F>(cf.alpha, delta, j);
            gj[static_cast<size_t>(j)] = detail::shifted_power_sum<F>(cf.gamma, delta, j);
            bj[static_cast<size_t>(j)] = detail::shifted_power_sum<F>(cf.beta, delta, j) -
                                         detail::shifted_power_sum<F>(cf.beta, deltap1, j);
        }
        std::vector<F> next(static_cast<size_t>(order) + 1);
        next[0] = from_rational<F>(Rational(1));
        if (order >= 1) next[1] = from_rational<F>(Rational(0));
        F nf = from_rational<F>(Rational(n));
        for (int mm = 2; mm <= order; ++mm) {
            F acc = (from_rational<F>(Rational(1)) - from_rational<F>(Rational(mm) * b1) / d) *
                    m[static_cast<size_t>(mm)];
            F corr = from_rational<F>(Rational(0));
            for (int j = 2; j <= mm; ++j) {
                F binom = from_rational<F>(Rational(binomial(mm, j)));
                F coef = aj[static_cast<size_t>(j)] * nf + gj[static_cast<size_t>(j)] -
                         bj[static_cast<size_t>(j)] * mu;
                corr = corr + binom * coef * m[static_cast<size_t>(mm - j)];
                if (j <= mm - 1)
                    corr = corr - binom * bj[static_cast<size_t>(j)] * m[static_cast<size_t>(mm + 1 - j)];
            }
            next[static_cast<size_t>(mm)] = acc + corr / d;
        }
        m = std::move(next);
        mu = mu_next;
        out.mean.push_back(mu);
        out.central.push_back(m);
    }
    return out;
}

// Factorial moments Q_{n,m} for NnForm data:
// Q_{n,m} = (1 - m beta/(alpha n + gamma)) Q_{n-1,m}
//           + m (gamma' - (m-1) beta')/(alpha n + gamma) Q_{n-1,m-1}.
template <class F>
std::vector<std::vector<F>> factorial_moment_series(const CanonicalForm& cf, int order, long n_max) {
    if (!cf.has_nn) throw GenError("factorial moment recurrence requires the constant-alpha form");
    std::vector<std::vector<F>> out;
    std::vector<F> q(static_cast<size_t>(order) + 1);
    for (int j = 0; j <= order; ++j)
        q[static_cast<size_t>(j)] = from_rational<F>(row_factorial_moment(cf.initial, j));
    out.push_back(q);
    for (long n = 1; n <= n_max; ++n) {
        Rational dr = cf.nn_alpha * n + cf.nn_gamma;
        if (dr == 0) throw GenError("moment recurrence denominator vanishes at row " + std::to_string(n));
        F d = from_rational<F>(dr);
        std::vector<F> next(q.size());
        next[0] = from_rational<F>(Rational(1));
        for (int mm = 1; mm <= order; ++mm) {
            F keep = (from_rational<F>(Rational(1)) - from_rational<F>(Rational(mm) * cf.nn_beta) / d) *
                     q[static_cast<size_t>(mm)];
            F gain = from_rational<F>(Rational(mm) * (cf.nn_gammap - Rational(mm - 1) * cf.nn_betap)) /
                     d * q[static_cast<size_t>(mm - 1)];
            next[static_cast<size_t>(mm)] = keep + gain;
        }
        q = std::move(next);
        out.push_back(q);
    }
    return out;
}

template <class F> struct MeanVar {
    F mean;
    F variance;
};

// Mean and variance directly from the stored recurrence data (any number of
// residue classes); requires first-order homogeneous with (1-v) | b per class.
// Index 0 corresponds to row spec.start.
template <class F>
std::vector<MeanVar<F>> general_mv_series(const RecurrenceSpec& spec, long n_max) {
    if (!spec.first_order_homogeneous())
        throw GenError("mean/variance recurrence requires a first-order homogeneous spec");
    for (auto& ce : spec.classes) {
        BiPoly b_at_1;
        for (long j = 0; j <= ce.b.deg_v(); ++j) {
            NPoly col = bipoly_v_coeff(ce.b, j);
            b_at_1 = bipoly_add(b_at_1, bipoly_from_npoly(col));
        }
        if (!b_at_1.is_zero())
            throw GenError("mean/variance recurrence requires b to vanish at v=1");
    }
    if (n_max < spec.start)
        throw GenError("requested last row " + std::to_string(n_max) + " precedes start " +
                       std::to_string(spec.start));
    std::vector<MeanVar<F>> out;
    F mu = from_rational<F>(row_mean(spec.initial));
    F q2 = from_rational<F>(row_factorial_moment(spec.initial, 2));
    out.push_back({mu, q2 + mu - mu * mu});
    for (long n = spec.start + 1; n <= n_max; ++n) {
        const ClassEntry& ce = spec.cls(n);
        Poly av = bipoly_at_n(ce.a, Rational(n));
        Poly bv = bipoly_at_n(ce.b, Rational(n));
        Rational a0 = poly_eval(av, Rational(1));
        if (a0 == 0) throw GenError("a(n,1) vanishes at row " + std::to_string(n));
        Rational a1 = poly_eval(poly_derivative(av), Rational(1));
        Rational a2 = poly_eval(poly_derivative(poly_derivative(av)), Rational(1));
        Rational bp = poly_eval(poly_derivative(bv), Rational(1));
        Rational bpp = poly_eval(poly_derivative(poly_derivative(bv)), Rational(1));
        // b = (1-v) B  =>  B(1) = -b'(1), B'(1) = -b''(1)/2
        F B0 = from_rational<F>(-bp);
        F B1 = from_rational<F>(-bpp / 2);
        F fa0 = from_rational<F>(a0);
        F mu_next = (from_rational<F>(a1) + (fa0 - B0) * mu) / fa0;
        F q2_next = (from_rational<F>(a2) + (from_rational<F>(2 * a1) - 2 * B1) * mu +
                     (fa0 - 2 * B0) * q2) /
                    fa0;
        mu = mu_next;
        q2 = q2_next;
        out.push_back({mu, q2 + mu - mu * mu});
    }
    return out;
}

// CSV with header n,total,mean,variance,central2..M,factorial1..M; exact values.
void write_moments_csv(std::ostream& os, const RecurrenceSpec& spec, long n_max, int order,
                       const GenOptions& opts = {});

} // namespace ev
