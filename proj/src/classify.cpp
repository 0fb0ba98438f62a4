#include "ev/classify.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace ev {

namespace {

Rational eval1(const Poly& p) { return poly_eval(p, Rational(1)); }
Rational d1(const Poly& p) { return poly_eval(poly_derivative(p), Rational(1)); }
Rational d2(const Poly& p) { return poly_eval(poly_derivative(poly_derivative(p)), Rational(1)); }

// Nearest rational with denominator <= maxden (continued fractions).
Rational snap_rational(double x, long maxden = 1000000) {
    double v = x;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int i = 0; i < 64; ++i) {
        double fl = std::floor(v);
        long a = static_cast<long>(fl);
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > maxden || q2 < 0) break;
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        double frac = v - fl;
        if (frac < 1e-15) break;
        v = 1.0 / frac;
    }
    if (q1 == 0) return Rational(static_cast<long>(std::llround(x)));
    Rational r(p1, q1);
    r.canonicalize();
    return r;
}

std::string scale_name(Scale s) { return s == Scale::N ? "n" : "log n"; }

nlohmann::json rat_json(const Rational& r) {
    return {{"rational", to_string(r)}, {"decimal", r.get_d()}};
}

} // namespace

std::string law_kind_name(LawKind k) {
    switch (k) {
        case LawKind::Normal: return "Normal";
        case LawKind::Poisson: return "Poisson";
        case LawKind::NegBinomial: return "NegBinomial";
        case LawKind::BernoulliSum: return "BernoulliSum";
        case LawKind::Beta: return "Beta";
        case LawKind::BetaMixture: return "BetaMixture";
        case LawKind::Rayleigh: return "Rayleigh";
        case LawKind::HalfNormal: return "HalfNormal";
        case LawKind::MittagLeffler: return "MittagLeffler";
        case LawKind::Uniform: return "Uniform";
        case LawKind::Degenerate: return "Degenerate";
        case LawKind::MomentSequence: return "MomentSequence";
        case LawKind::Unknown: return "Unknown";
    }
    return "?";
}

std::string LimitLaw::json() const {
    nlohmann::json j;
    j["kind"] = law_kind_name(kind);
    j["shape"] = shape_name(shape);
    if (!reason.empty()) j["reason"] = reason;
    switch (kind) {
        case LawKind::Normal:
            j["mean"] = rat_json(mean_coeff);
            j["mean"]["scale"] = scale_name(mean_scale);
            j["variance"] = rat_json(var_coeff);
            j["variance"]["scale"] = scale_name(var_scale);
            break;
        case LawKind::Poisson:
            j["lambda"] = rat_json(lambda);
            break;
        case LawKind::NegBinomial:
            j["r"] = rat_json(nb_r);
            j["p"] = rat_json(nb_p);
            break;
        case LawKind::BernoulliSum:
            j["count"] = bern_count;
            j["p"] = rat_json(bern_p);
            break;
        case LawKind::Beta:
            j["a"] = rat_json(components.at(0).a);
            j["b"] = rat_json(components.at(0).b);
            break;
        case LawKind::BetaMixture: {
            nlohmann::json comps = nlohmann::json::array();
            for (auto& c : components)
                comps.push_back({{"weight", rat_json(c.weight)},
                                 {"a", rat_json(c.a)},
                                 {"b", rat_json(c.b)}});
            j["components"] = comps;
            break;
        }
        case LawKind::Rayleigh:
        case LawKind::HalfNormal:
            j["sigma"] = sigma;
            j["sigma_sq"] = rat_json(sigma_sq);
            break;
        case LawKind::MittagLeffler:
            j["p"] = ml_p;
            j["q"] = ml_q;
            j["scale"] = ml_scale;
            j["scale_exponent"] = rat_json(tau1);
            break;
        case LawKind::Uniform:
            j["lo"] = lo;
            j["hi"] = hi;
            break;
        case LawKind::Degenerate:
            j["rate"] = rat_json(degen_rate);
            break;
        case LawKind::MomentSequence:
            j["tau1"] = rat_json(tau1);
            j["tau2"] = rat_json(tau2);
            j["moments"] = km;
            break;
        case LawKind::Unknown:
            break;
    }
    if (!km.empty() && kind != LawKind::MomentSequence) j["limit_moments"] = km;
    return j.dump(2);
}

NormalParams normal_params(const Poly& alpha, const Poly& beta) {
    Rational a1 = eval1(alpha), b1 = eval1(beta);
    if (a1 + b1 == 0) throw GenError("normal_params: alpha(1)+beta(1) vanishes");
    if (a1 + 2 * b1 == 0) throw GenError("normal_params: alpha(1)+2beta(1) vanishes");
    NormalParams np;
    np.mu = d1(alpha) / (a1 + b1);
    np.sigma_sq = np.mu + (d2(alpha) - 2 * np.mu * d1(beta) - a1 * np.mu * np.mu) / (a1 + 2 * b1);
    return np;
}

BetaZeroParams beta_zero_params(const Poly& alpha, const Poly& gamma) {
    BetaZeroParams p;
    p.alpha_zero = alpha.is_zero();
    Rational a1 = eval1(alpha), g1 = eval1(gamma);
    if (p.alpha_zero && g1 <= 0) throw GenError("beta_zero_params: alpha is zero and gamma(1) <= 0");
    if (!p.alpha_zero && a1 != 0) {
        p.mu_alpha = d1(alpha) / a1;
        p.var_alpha = p.mu_alpha + d2(alpha) / a1 - p.mu_alpha * p.mu_alpha;
        p.nu = (a1 * d1(gamma) - d1(alpha) * g1) / (a1 * a1);
        p.sigma_log = (d1(gamma) + d2(gamma)) / a1 - 2 * d1(alpha) * d1(gamma) / (a1 * a1) +
                      g1 * d1(alpha) * d1(alpha) / (a1 * a1 * a1);
    }
    if (g1 != 0) {
        p.mu_gamma = d1(gamma) / g1;
        p.var_gamma = p.mu_gamma + d2(gamma) / g1 - p.mu_gamma * p.mu_gamma;
    }
    return p;
}

KmResult km_moments(const CanonicalForm& cf, int order) {
    KmResult res;
    if (!cf.has_nn) {
        res.reason = "requires the constant-alpha form";
        return res;
    }
    if (!(cf.nn_alpha > 0)) {
        res.reason = "alpha must be positive";
        return res;
    }
    if (cf.nn_beta == 0) {
        res.reason = "beta(1) vanishes";
        return res;
    }
    if (cf.nn_beta > 0) {
        res.discrete = true;
        double b = cf.nn_beta.get_d(), bp = cf.nn_betap.get_d(), gp = cf.nn_gammap.get_d();
        for (int m = 1; m <= order; ++m) {
            double val;
            if (cf.nn_betap == 0) {
                val = std::pow(gp / b, m);
            } else {
                double s = gp / bp, prod = 1;
                for (int i = 0; i < m; ++i) prod *= (s - i);
                val = prod * std::pow(bp / b, m);
            }
            res.values.push_back(val);
        }
        res.ok = true;
        return res;
    }
    Rational tau1 = -cf.nn_beta / cf.nn_alpha;
    Rational tau2 = cf.nn_gamma / cf.nn_alpha;
    auto gamma_pole = [](const Rational& x) { return x <= 0 && is_integer(x); };
    if (gamma_pole(1 + tau2)) {
        res.reason = "Gamma pole at 1+tau2";
        return res;
    }
    if (cf.nn_c0 == 0) {
        res.reason = "initial row sums to zero";
        return res;
    }
    double g_num = std::tgamma(Rational(1 + tau2).get_d());
    double c_ratio = Rational(cf.nn_c1 / cf.nn_c0).get_d();
    double b = cf.nn_beta.get_d(), bp = cf.nn_betap.get_d(), gp = cf.nn_gammap.get_d();
    for (int m = 1; m <= order; ++m) {
        Rational arg = 1 + tau2 + Rational(m) * tau1;
        if (gamma_pole(arg)) {
            // reciprocal-Gamma convention: the Gamma-ratio factor vanishes
            res.values.push_back(0.0);
            continue;
        }
        double gr = g_num / std::tgamma(arg.get_d());
        double val;
        if (cf.nn_betap != 0) {
            double s = bp / b, rho2 = -gp / bp, rho1 = c_ratio / s;
            double prod = 1;
            for (int j = 1; j <= m - 1; ++j) prod *= (j + rho2);
            val = prod * (m * rho1 + rho2) * std::pow(s, m) * gr;
        } else {
            val = std::pow(-gp / b, m - 1) * (m * c_ratio - gp / b) * gr;
        }
        res.values.push_back(val);
    }
    res.ok = true;
    return res;
}

namespace {

LimitLaw unknown_law(const CanonicalForm& cf, const std::string& reason) {
    LimitLaw law;
    law.kind = LawKind::Unknown;
    law.shape = cf.shape;
    law.reason = reason;
    return law;
}

LimitLaw classify_beta_zero(const RecurrenceSpec& spec, const CanonicalForm& cf,
                            const ClassifyOptions& opts, ClassifyContext& ctx) {
    LimitLaw law;
    law.shape = cf.shape;
    Rational a1 = eval1(cf.alpha), g1 = eval1(cf.gamma);
    if (cf.alpha.is_zero() && g1 <= 0)
        return unknown_law(cf, "gamma(1) nonpositive");
    if (!cf.alpha.is_zero() && a1 == 0)
        return unknown_law(cf, "alpha vanishes at v=1");
    BetaZeroParams p = beta_zero_params(cf.alpha, cf.gamma);
    if (cf.alpha.is_zero()) {
        if (g1 > 0 && p.var_gamma > 0) {
            law.kind = LawKind::Normal;
            law.mean_coeff = p.mu_gamma;
            law.var_coeff = p.var_gamma;
            return law;
        }
    } else if (a1 > 0) {
        if (p.var_alpha > 0) {
            law.kind = LawKind::Normal;
            law.mean_coeff = p.mu_alpha;
            law.var_coeff = p.var_alpha;
            return law;
        }
        if (p.sigma_log > 0) {
            law.kind = LawKind::Normal;
            law.var_coeff = p.sigma_log;
            law.var_scale = Scale::LogN;
            if (p.mu_alpha > 0) {
                law.mean_coeff = p.mu_alpha;
                law.mean_scale = Scale::N;
            } else {
                law.mean_coeff = d1(cf.gamma) / a1;
                law.mean_scale = Scale::LogN;
            }
            return law;
        }
    } else {
        return unknown_law(cf, "alpha(1) negative");
    }
    // bounded-variance fallback: sample the distribution numerically
    long n1 = spec.start + 64, n2 = spec.start + 128;
    std::vector<Poly> snaps;
    try {
        snaps = generate_snapshots(spec, {n1, n2}, opts.gen);
    } catch (const GenError& e) {
        return unknown_law(cf, std::string("row generation failed: ") + e.what());
    }
    Rational m1 = row_mean(snaps[0]), m2 = row_mean(snaps[1]);
    Rational v2 = row_variance(snaps[1]);
    if (v2.get_d() < 1e-9) {
        law.kind = LawKind::Degenerate;
        law.degen_rate = (m2 - m1) / (n2 - n1);
        return law;
    }
    law.kind = LawKind::MomentSequence;
    law.tau1 = p.mu_alpha > 0 ? Rational(1) : Rational(0);
    double scale = std::pow(static_cast<double>(n2), law.tau1.get_d());
    for (int m = 1; m <= opts.moment_order; ++m) {
        std::vector<Rational> q(static_cast<size_t>(m) + 1);
        for (int j = 0; j <= m; ++j) q[static_cast<size_t>(j)] = row_factorial_moment(snaps[1], j);
        law.km.push_back(raw_from_factorial(q, m).get_d() / std::pow(scale, m));
    }
    ctx.warnings.push_back("bounded-variance regime evaluated numerically at n=" + std::to_string(n2));
    law.reason = "bounded variance";
    return law;
}

LimitLaw classify_discrete(const CanonicalForm& cf) {
    LimitLaw law;
    law.shape = cf.shape;
    law.tau1 = -cf.nn_beta / cf.nn_alpha;
    law.tau2 = cf.nn_gamma / cf.nn_alpha;
    Rational beta = cf.nn_beta, betap = cf.nn_betap, gammap = cf.nn_gammap;
    if (betap == 0) {
        Rational lam = gammap / beta;
        if (lam > 0) {
            law.kind = LawKind::Poisson;
            law.lambda = lam;
            return law;
        }
        if (lam == 0) {
            law.kind = LawKind::Degenerate;
            law.degen_rate = Rational(0);
            return law;
        }
        return unknown_law(cf, "negative Poisson rate");
    }
    if (betap < 0) {
        Rational r = -gammap / betap;
        Rational p = -betap / (beta - betap);
        if (r > 0 && p > 0 && p < 1) {
            law.kind = LawKind::NegBinomial;
            law.nb_r = r;
            law.nb_p = p;
            return law;
        }
        return unknown_law(cf, "negative binomial parameters out of range");
    }
    // betap > 0: finite sum of Bernoullis
    Rational ell = gammap / betap;
    Rational p = betap / beta;
    if (is_integer(ell) && ell > 0 && beta != betap && p > 0 && p < 1) {
        law.kind = LawKind::BernoulliSum;
        law.bern_count = static_cast<long>(ell.get_num().get_si());
        law.bern_p = p;
        return law;
    }
    return unknown_law(cf, "discrete regime with non-integer Bernoulli count");
}

bool fit_residual_ok(double predicted, double actual) {
    double denom = std::max(std::fabs(actual), 1e-30);
    return std::fabs(predicted - actual) / denom < 1e-6;
}

LimitLaw classify_continuous(const CanonicalForm& cf, const ClassifyOptions& opts) {
    LimitLaw law;
    law.shape = cf.shape;
    Rational alpha = cf.nn_alpha, beta = cf.nn_beta, betap = cf.nn_betap;
    Rational t1 = -beta / alpha, t2 = cf.nn_gamma / alpha;
    law.tau1 = t1;
    law.tau2 = t2;

    if (cf.has_rr) {
        // two-component Beta mixture with exact weights and parameters
        Rational p = cf.rr_p, q = cf.rr_q, a = cf.rr_alpha;
        Rational h0 = cf.rr_h0, h1 = cf.rr_h1;
        Rational w1 = h1 / (h0 + h1), w0 = h0 / (h0 + h1);
        std::vector<BetaComponent> comps;
        bool valid = true;
        if (w1 > 0) {
            if (p / a + 1 > 0 && q / a > 0)
                comps.push_back({w1, p / a + 1, q / a});
            else
                valid = false;
        }
        if (w0 > 0) {
            if (p / a > 0 && q / a + 1 > 0)
                comps.push_back({w0, p / a, q / a + 1});
            else
                valid = false;
        }
        if (valid && !comps.empty()) {
            if (comps.size() == 1 && comps[0].a == 1 && comps[0].b == 1) {
                law.kind = LawKind::Uniform;
                law.lo = 0;
                law.hi = 1;
                return law;
            }
            law.kind = comps.size() == 1 ? LawKind::Beta : LawKind::BetaMixture;
            law.components = std::move(comps);
            return law;
        }
    }

    if (t1 == Rational(1, 2) && betap != 0 && cf.nn_c0 != 0) {
        Rational r1 = -cf.nn_c1 * alpha / (2 * cf.nn_c0 * betap);
        Rational r2 = -cf.nn_gammap / betap;
        bool half = t2 == Rational(-1, 2) || t2 == Rational(1, 2);
        bool ray = (r1 == 0 && r2 == t2 + Rational(3, 2) && half) ||
                   (r1 == 1 && t2 - r2 == Rational(-1, 2) && half) ||
                   (r1 == Rational(2, 3) && t2 - r2 == Rational(-1, 2) && t2 == Rational(3, 2));
        bool hn = (r1 == 0 && r2 == 1 + t2 && t2 == 0) ||
                  (((r1 == 1 && t2 == 0) || (r1 == Rational(1, 2) && t2 == 1)) && r2 == t2);
        if (ray || hn) {
            law.kind = ray ? LawKind::Rayleigh : LawKind::HalfNormal;
            law.sigma_sq = 8 * betap * betap / (alpha * alpha);
            law.sigma = Rational(-2 * betap / alpha).get_d() * std::sqrt(2.0);
            KmResult km = km_moments(cf, opts.moment_order);
            if (km.ok) law.km = km.values;
            return law;
        }
    }

    KmResult km = km_moments(cf, std::max(6, opts.moment_order));
    if (!km.ok) return unknown_law(cf, km.reason);
    law.km = km.values;
    int fit_m = std::min<int>(6, static_cast<int>(km.values.size()));
    double k1 = km.values[0], k2 = km.values[1];

    // Uniform[lo,hi]
    double width_sq = 12 * (k2 - k1 * k1);
    if (width_sq > 1e-18) {
        double w = std::sqrt(width_sq);
        double lo = k1 - w / 2, hi = k1 + w / 2;
        if (lo > -1e-9) {
            lo = std::max(lo, 0.0);
            if (lo < 1e-9) lo = 0;
            bool ok = true;
            for (int m = 1; m <= fit_m && ok; ++m) {
                double pred = (std::pow(hi, m + 1) - std::pow(lo, m + 1)) / ((m + 1) * (hi - lo));
                ok = fit_residual_ok(pred, km.values[static_cast<size_t>(m - 1)]);
            }
            if (ok) {
                law.kind = LawKind::Uniform;
                law.lo = lo;
                law.hi = hi;
                return law;
            }
        }
    }

    // Beta(a,b) by the first two moments
    double denom = k2 - k1 * k1;
    if (denom > 1e-18) {
        double a = k1 * (k1 - k2) / denom;
        double b = a * (1 - k1) / k1;
        if (a > 1e-9 && b > 1e-9) {
            bool ok = true;
            for (int m = 1; m <= fit_m && ok; ++m) {
                double pred = 1;
                for (int i = 0; i < m; ++i) pred *= (a + i) / (a + b + i);
                ok = fit_residual_ok(pred, km.values[static_cast<size_t>(m - 1)]);
            }
            if (ok) {
                law.kind = LawKind::Beta;
                law.components = {{Rational(1), snap_rational(a), snap_rational(b)}};
                return law;
            }
        }
    }

    // Mittag-Leffler with p = tau1, q in {tau2, 1+tau2}, scale from K_1
    for (const Rational& qr : {t2, Rational(1 + t2)}) {
        if (!(qr > 0)) continue;
        double p = t1.get_d(), q = qr.get_d();
        double e1 = std::tgamma(q) / std::tgamma(p + q);
        if (!std::isfinite(e1) || e1 == 0) continue;
        double scale = k1 / e1;
        if (!(scale > 0)) continue;
        bool ok = true;
        double factm = 1;
        for (int m = 1; m <= fit_m && ok; ++m) {
            factm *= m;
            double em = std::tgamma(q) * factm / std::tgamma(p * m + q);
            ok = fit_residual_ok(std::pow(scale, m) * em, km.values[static_cast<size_t>(m - 1)]);
        }
        if (ok) {
            law.kind = LawKind::MittagLeffler;
            law.ml_p = p;
            law.ml_q = q;
            law.ml_scale = scale;
            return law;
        }
    }

    law.kind = LawKind::MomentSequence;
    return law;
}

} // namespace

LimitLaw classify(const RecurrenceSpec& spec, ClassifyContext& ctx, const ClassifyOptions& opts) {
    ctx.canonical = canonicalize(spec);
    const CanonicalForm& cf = ctx.canonical;

    long horizon = spec.start + std::max<long>(opts.horizon, 1);
    try {
        long bad_n = -1, bad_k = -1;
        bool neg = false, zero_total = false;
        iterate_rows(spec, horizon, [&](long n, const Poly& row) {
            for (size_t k = 0; k < row.coeffs.size(); ++k) {
                if (row.coeffs[k] < 0) {
                    neg = true;
                    bad_n = n;
                    bad_k = static_cast<long>(k);
                    return false;
                }
            }
            if (poly_eval(row, Rational(1)) <= 0) {
                zero_total = true;
                bad_n = n;
                return false;
            }
            return true;
        }, opts.gen);
        ctx.nonneg_checked_upto = horizon;
        if (neg) {
            ctx.warnings.push_back("negative coefficient at n=" + std::to_string(bad_n) +
                                   ", k=" + std::to_string(bad_k));
            return unknown_law(cf, "negative coefficients");
        }
        if (zero_total) {
            ctx.warnings.push_back("nonpositive row sum at n=" + std::to_string(bad_n));
            return unknown_law(cf, "nonpositive row sum");
        }
    } catch (const GenError& e) {
        ctx.warnings.push_back(e.what());
        return unknown_law(cf, std::string("row generation failed: ") + e.what());
    }

    switch (cf.shape) {
        case Shape::General:
            return unknown_law(cf, cf.reason);
        case Shape::BetaZero:
            return classify_beta_zero(spec, cf, opts, ctx);
        case Shape::EulerianLinear: {
            ElScalars s = el_scalars(cf);
            if (!(s.alpha > 0) || !(s.alpha + 2 * s.beta > 0) || s.alpha + s.beta == 0)
                return unknown_law(cf, "CLT hypotheses fail: need alpha(1) > 0 and alpha(1)+2beta(1) > 0");
            NormalParams np = normal_params(cf.alpha, cf.beta);
            LimitLaw law;
            law.shape = cf.shape;
            if (np.sigma_sq > 0) {
                law.kind = LawKind::Normal;
                law.mean_coeff = np.mu;
                law.var_coeff = np.sigma_sq;
                return law;
            }
            if (np.sigma_sq == 0) {
                law.kind = LawKind::Degenerate;
                law.degen_rate = np.mu;
                return law;
            }
            return unknown_law(cf, "negative variance coefficient");
        }
        case Shape::NnForm:
        case Shape::BetaRR: {
            if (!(cf.nn_alpha > 0)) return unknown_law(cf, "alpha nonpositive");
            if (cf.nn_beta > 0) return classify_discrete(cf);
            if (cf.nn_beta == 0) return unknown_law(cf, "beta(1) vanishes");
            return classify_continuous(cf, opts);
        }
    }
    return unknown_law(cf, "unreachable");
}

LimitLaw classify(const RecurrenceSpec& spec, const ClassifyOptions& opts) {
    ClassifyContext ctx;
    return classify(spec, ctx, opts);
}

} // namespace ev
