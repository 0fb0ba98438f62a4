#include "ev/analytic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ev {

namespace {

double integrate01(const std::function<double(double)>& f) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-12);
}

double neville(const std::array<double, 5>& xs, const std::array<double, 5>& ys, double x) {
    std::array<double, 5> p = ys;
    for (int lev = 1; lev < 5; ++lev)
        for (int i = 0; i + lev < 5; ++i)
            p[static_cast<size_t>(i)] =
                ((x - xs[static_cast<size_t>(i + lev)]) * p[static_cast<size_t>(i)] +
                 (xs[static_cast<size_t>(i)] - x) * p[static_cast<size_t>(i + 1)]) /
                (xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(i + lev)]);
    return p[0];
}

// Raw formulas may be written piecewise around v = 1; inside a small window the
// value is interpolated through nodes straddling 1 (with the exact value at 1),
// which keeps the profile smooth where the pieces meet.
std::function<double(double)> smooth_near_one(std::function<double(double)> raw, double rho1) {
    return [raw = std::move(raw), rho1](double v) -> double {
        constexpr double W = 1e-4, H = 2e-4;
        if (std::fabs(v - 1) >= W) return raw(v);
        std::array<double, 5> xs = {1 - 2 * H, 1 - H, 1.0, 1 + H, 1 + 2 * H};
        std::array<double, 5> ys = {raw(xs[0]), raw(xs[1]), rho1, raw(xs[3]), raw(xs[4])};
        return neville(xs, ys, v);
    };
}

Poly pv(std::initializer_list<Rational> cs) { return Poly(std::vector<Rational>(cs)); }

RhoEntry make_entry(std::string id, std::string note, Poly alpha, Poly beta, double rho1,
                    std::function<double(double)> raw) {
    RhoEntry e;
    e.id = std::move(id);
    e.note = std::move(note);
    e.alpha = std::move(alpha);
    e.beta = std::move(beta);
    e.rho1 = rho1;
    e.rho = smooth_near_one(std::move(raw), rho1);
    return e;
}

RhoEntry a_entry(const Rational& q) {
    double qd = q.get_d();
    return make_entry("a(q=" + to_string(q) + ")", "log v / (q(v-1))", pv({0, q}), pv({0, q}),
                      1.0 / qd, [qd](double v) { return std::log(v) / (qd * (v - 1)); });
}

RhoEntry barbero_entry(const Rational& q) {
    double qd = q.get_d();
    return make_entry("t(q=" + to_string(q) + ")", "int_0^1 u^{q-1}/(1-(1-v)u) du", pv({0, q}),
                      pv({0, 1}), 1.0 / qd, [qd](double v) {
                          return integrate01(
                              [qd, v](double u) { return std::pow(u, qd - 1) / (1 - (1 - v) * u); });
                      });
}

RhoEntry ru_entry(const Rational& p, const Rational& q) {
    double pd = p.get_d(), qd = q.get_d();
    return make_entry("ru(p=" + to_string(p) + ",q=" + to_string(q) + ")",
                      "v^p int_0^1 u^{p+q-1}(1-(1-v)u)^{-p-1} du", pv({p, q}), pv({0, 1}),
                      1.0 / (pd + qd), [pd, qd](double v) {
                          return std::pow(v, pd) * integrate01([pd, qd, v](double u) {
                                     return std::pow(u, pd + qd - 1) *
                                            std::pow(1 - (1 - v) * u, -pd - 1);
                                 });
                      });
}

RhoEntry qv1v_entry() {
    return make_entry("qv1v", "arccos v / sqrt(1-v^2)", pv({0, 1}), pv({1, 1}), 1.0, [](double v) {
        return v < 1 ? std::acos(v) / std::sqrt(1 - v * v)
                     : std::acosh(v) / std::sqrt(v * v - 1);
    });
}

RhoEntry ck_entry(const Rational& q) {
    double qd = q.get_d();
    return make_entry("ck(q=" + to_string(q) + ")", "(v^{-1/q}-1)/(1-v)", pv({-1, q + 1}),
                      pv({0, q}), 1.0 / qd,
                      [qd](double v) { return (std::pow(v, -1.0 / qd) - 1) / (1 - v); });
}

} // namespace

std::vector<RhoEntry> rho_catalog() {
    std::vector<RhoEntry> cat;
    cat.push_back(a_entry(Rational(1)));
    cat.push_back(a_entry(Rational(2)));
    cat.push_back(barbero_entry(Rational(2)));
    cat.push_back(barbero_entry(Rational(3)));
    cat.push_back(ru_entry(Rational(1), Rational(1)));
    cat.push_back(ru_entry(Rational(2), Rational(1)));
    cat.push_back(make_entry("v2v", "artanh(sqrt(1-v))/sqrt(1-v)", pv({0, 1}), pv({0, 2}), 1.0,
                             [](double v) {
                                 if (v < 1) {
                                     double x = std::sqrt(1 - v);
                                     return std::atanh(x) / x;
                                 }
                                 double y = std::sqrt(v - 1);
                                 return std::atan(y) / y;
                             }));
    cat.push_back(make_entry("oneplusv", "2 arccos((1+v)/2)/sqrt((1-v)(3+v))",
                             pv({Rational(1, 2), Rational(1, 2)}),
                             pv({Rational(3, 2), Rational(1, 2)}), 1.0, [](double v) {
                                 double m = (1 + v) / 2;
                                 return v < 1 ? 2 * std::acos(m) / std::sqrt((1 - v) * (3 + v))
                                              : 2 * std::acosh(m) / std::sqrt((v - 1) * (3 + v));
                             }));
    cat.push_back(qv1v_entry());
    cat.push_back(make_entry("qv2", "arccosh(1/v)/sqrt(1-v^2)", pv({0, 0, 1}), pv({0, 1, 1}), 1.0,
                             [](double v) {
                                 return v < 1 ? std::acosh(1 / v) / std::sqrt(1 - v * v)
                                              : std::acos(1 / v) / std::sqrt(v * v - 1);
                             }));
    cat.push_back(make_entry("chebikin", "2 arctan((1-v)/(1+v))/(1-v)",
                             pv({Rational(1, 2), 0, Rational(1, 2)}),
                             pv({Rational(1, 2), 0, Rational(1, 2)}), 1.0, [](double v) {
                                 return 2 * std::atan((1 - v) / (1 + v)) / (1 - v);
                             }));
    cat.push_back(make_entry("v1pv", "log(2/(1+v))/(1-v); pairs with the reversed form (1+v,1+v)",
                             pv({1, 1}), pv({1, 1}), 0.5,
                             [](double v) { return std::log(2 / (1 + v)) / (1 - v); }));
    cat.push_back(make_entry("twov2", "-log v/(1-v^2)", pv({0, 0, 2}), pv({0, 1, 1}), 0.5,
                             [](double v) { return -std::log(v) / (1 - v * v); }));
    cat.push_back(ck_entry(Rational(2)));
    cat.push_back(ck_entry(Rational(3)));
    return cat;
}

RhoEntry rho_catalog_entry(const std::string& family, const std::vector<Rational>& params) {
    std::string f;
    for (char c : family) f.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (f == "a") {
        if (params.size() != 3) throw SpecError("family a takes parameters p, q, r");
        if (!(params[1] > 0)) throw SpecError("family a requires q > 0");
        return a_entry(params[1]);
    }
    if (f == "t") {
        if (params.size() != 3) throw SpecError("family t takes parameters p, q, r");
        if (!(params[1] > 0)) throw SpecError("family t requires q > 0");
        return barbero_entry(params[1]);
    }
    if (f == "q") {
        if (params.size() != 2) throw SpecError("family q takes parameters p, q");
        return qv1v_entry();
    }
    if (f == "m") {
        if (params.size() != 3) throw SpecError("family m takes parameters p, q, r");
        if (!(params[1] > 0)) throw SpecError("family m requires q > 0");
        return ck_entry(params[1]);
    }
    throw SpecError("no growth profile for family '" + family + "'");
}

namespace {

struct DerivEstimate {
    double value = 0, err = 0;
    bool converged = false;
};

template <class Stencil>
DerivEstimate sweep(const Stencil& stencil) {
    std::vector<double> d;
    for (int k = 6; k <= 12; ++k) d.push_back(stencil(std::ldexp(1.0, -k)));
    std::vector<double> r;
    for (size_t i = 0; i + 1 < d.size(); ++i) r.push_back((64 * d[i + 1] - d[i]) / 63);
    std::vector<double> errs;
    for (size_t i = 0; i + 1 < r.size(); ++i) errs.push_back(std::fabs(r[i + 1] - r[i]));
    size_t best = 0;
    while (best + 1 < errs.size() && errs[best + 1] < errs[best]) ++best;
    DerivEstimate est;
    est.value = r[best + 1];
    est.err = errs[best];
    est.converged = std::isfinite(est.value) && est.err < 1e-6;
    return est;
}

} // namespace

QuasiPowerResult quasi_power_params(const RhoEntry& entry) {
    auto g = [&entry](double s) { return std::log(entry.rho(std::exp(s))); };
    auto d1 = [&g](double h) {
        return (-g(-3 * h) + 9 * g(-2 * h) - 45 * g(-h) + 45 * g(h) - 9 * g(2 * h) + g(3 * h)) /
               (60 * h);
    };
    auto d2 = [&g](double h) {
        return (2 * g(-3 * h) - 27 * g(-2 * h) + 270 * g(-h) - 490 * g(0) + 270 * g(h) -
                27 * g(2 * h) + 2 * g(3 * h)) /
               (180 * h * h);
    };
    DerivEstimate e1 = sweep(d1);
    DerivEstimate e2 = sweep(d2);
    QuasiPowerResult res;
    res.mu = -e1.value;
    res.sigma_sq = -e2.value;
    res.mu_err = e1.err;
    res.var_err = e2.err;
    res.converged = e1.converged && e2.converged;
    res.degenerate = std::fabs(res.sigma_sq) < 1e-9;
    return res;
}

} // namespace ev
