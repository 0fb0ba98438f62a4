#include "ev/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <boost/math/special_functions/erf.hpp>

#include "json.hpp"

namespace ev {

namespace {

double phi_cdf(double z) { return 0.5 * boost::math::erfc(-z / std::sqrt(2.0)); }

double effective_moment_tol(LawKind kind, const ToleranceSet& tol) {
    switch (kind) {
        case LawKind::MittagLeffler: return std::max(tol.moment_rel, 0.10);
        case LawKind::Rayleigh:
        case LawKind::HalfNormal: return std::max(tol.moment_rel, 0.03);
        default: return tol.moment_rel;
    }
}

bool is_discrete_kind(LawKind k) {
    return k == LawKind::Poisson || k == LawKind::NegBinomial || k == LawKind::BernoulliSum;
}

bool is_continuous_kind(LawKind k) {
    return k == LawKind::Beta || k == LawKind::BetaMixture || k == LawKind::Uniform ||
           k == LawKind::Rayleigh || k == LawKind::HalfNormal || k == LawKind::MittagLeffler;
}

// Raw moments E[Y^m], m = 1..order, of the scaled limit.
std::vector<double> law_raw_moments(const LimitLaw& law, int order) {
    std::vector<double> out;
    for (int m = 1; m <= order; ++m) {
        double val = 0;
        switch (law.kind) {
            case LawKind::Beta:
            case LawKind::BetaMixture:
                for (const auto& c : law.components) {
                    double a = c.a.get_d(), b = c.b.get_d();
                    double prod = 1;
                    for (int i = 0; i < m; ++i) prod *= (a + i) / (a + b + i);
                    val += c.weight.get_d() * prod;
                }
                break;
            case LawKind::Uniform:
                val = (std::pow(law.hi, m + 1) - std::pow(law.lo, m + 1)) /
                      ((m + 1) * (law.hi - law.lo));
                break;
            case LawKind::Rayleigh:
                val = std::pow(law.sigma, m) * std::pow(2.0, m / 2.0) * std::tgamma(1 + m / 2.0);
                break;
            case LawKind::HalfNormal:
                val = std::pow(law.sigma, m) * std::pow(2.0, m / 2.0) *
                      std::tgamma((m + 1) / 2.0) / std::sqrt(M_PI);
                break;
            case LawKind::MittagLeffler: {
                double fact = 1;
                for (int i = 2; i <= m; ++i) fact *= i;
                val = std::pow(law.ml_scale, m) * std::tgamma(law.ml_q) * fact /
                      std::tgamma(law.ml_p * m + law.ml_q);
                break;
            }
            default:
                break;
        }
        out.push_back(val);
    }
    return out;
}

// Factorial moments E[(Y)_m], m = 1..order, of the discrete limit.
std::vector<double> law_factorial_moments(const LimitLaw& law, int order) {
    std::vector<double> out;
    for (int m = 1; m <= order; ++m) {
        double val = 0;
        switch (law.kind) {
            case LawKind::Poisson:
                val = std::pow(law.lambda.get_d(), m);
                break;
            case LawKind::NegBinomial: {
                double r = law.nb_r.get_d(), p = law.nb_p.get_d();
                double prod = 1;
                for (int i = 0; i < m; ++i) prod *= (r + i);
                val = prod * std::pow(p / (1 - p), m);
                break;
            }
            case LawKind::BernoulliSum: {
                double p = law.bern_p.get_d();
                double prod = 1;
                for (int i = 0; i < m; ++i) prod *= static_cast<double>(law.bern_count - i);
                val = prod > 0 ? prod * std::pow(p, m) : 0;
                break;
            }
            default:
                break;
        }
        out.push_back(val);
    }
    return out;
}

double law_pmf(const LimitLaw& law, long k) {
    switch (law.kind) {
        case LawKind::Poisson: {
            double lam = law.lambda.get_d();
            double lp = -lam + k * std::log(lam) - std::lgamma(k + 1.0);
            return std::exp(lp);
        }
        case LawKind::NegBinomial: {
            double r = law.nb_r.get_d(), p = law.nb_p.get_d();
            double lp = std::lgamma(k + r) - std::lgamma(r) - std::lgamma(k + 1.0) +
                        r * std::log(1 - p) + k * std::log(p);
            return std::exp(lp);
        }
        case LawKind::BernoulliSum: {
            if (k > law.bern_count) return 0;
            double p = law.bern_p.get_d();
            double lp = std::lgamma(law.bern_count + 1.0) - std::lgamma(k + 1.0) -
                        std::lgamma(law.bern_count - k + 1.0) + k * std::log(p) +
                        (law.bern_count - k) * std::log(1 - p);
            return std::exp(lp);
        }
        default:
            return 0;
    }
}

// Density of the scaled continuous limit, where one exists in closed form.
bool law_pdf(const LimitLaw& law, double x, double& out) {
    switch (law.kind) {
        case LawKind::Uniform:
            out = (x >= law.lo && x <= law.hi) ? 1.0 / (law.hi - law.lo) : 0.0;
            return true;
        case LawKind::Beta:
        case LawKind::BetaMixture: {
            if (x <= 0 || x >= 1) {
                out = 0;
                return true;
            }
            double s = 0;
            for (const auto& c : law.components) {
                double a = c.a.get_d(), b = c.b.get_d();
                double lb = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
                s += c.weight.get_d() *
                     std::exp(lb + (a - 1) * std::log(x) + (b - 1) * std::log1p(-x));
            }
            out = s;
            return true;
        }
        case LawKind::Rayleigh: {
            double s2 = law.sigma * law.sigma;
            out = x <= 0 ? 0 : x / s2 * std::exp(-x * x / (2 * s2));
            return true;
        }
        case LawKind::HalfNormal: {
            double s2 = law.sigma * law.sigma;
            out = x < 0 ? 0 : std::sqrt(2 / M_PI) / law.sigma * std::exp(-x * x / (2 * s2));
            return true;
        }
        default:
            return false;
    }
}

// Scaled raw moments E[(X_n / n^tau1)^m] for m = 1..order at each requested n.
// Uses the factorial-moment recurrence in doubles when available, otherwise
// exact rows.
std::vector<std::vector<double>> scaled_raw_moments(const RecurrenceSpec& spec,
                                                    const std::vector<long>& ns, double tau1,
                                                    int order, const GenOptions& opts) {
    std::vector<std::vector<double>> out;
    CanonicalForm cf = canonicalize(spec);
    if (cf.has_nn) {
        long steps_max = ns.back() - spec.start;
        auto fact = factorial_moment_series<double>(cf, order, steps_max);
        for (long n : ns) {
            const auto& q = fact[static_cast<size_t>(n - spec.start)];
            std::vector<double> raw;
            for (int m = 1; m <= order; ++m) {
                double rm = 0;
                for (int j = 1; j <= m; ++j) rm += stirling2(m, j).get_d() * q[static_cast<size_t>(j)];
                raw.push_back(rm / std::pow(static_cast<double>(n), m * tau1));
            }
            out.push_back(std::move(raw));
        }
        return out;
    }
    auto rows = generate_snapshots(spec, ns, opts);
    for (size_t i = 0; i < ns.size(); ++i) {
        std::vector<Rational> q(static_cast<size_t>(order) + 1);
        for (int j = 0; j <= order; ++j) q[static_cast<size_t>(j)] = row_factorial_moment(rows[i], j);
        std::vector<double> raw;
        for (int m = 1; m <= order; ++m)
            raw.push_back(raw_from_factorial(q, m).get_d() /
                          std::pow(static_cast<double>(ns[i]), m * tau1));
        out.push_back(std::move(raw));
    }
    return out;
}

} // namespace

double rate_fit(const std::vector<std::pair<long, double>>& points) {
    if (points.size() < 4) throw VerifyError("rate fit needs at least 4 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = static_cast<double>(points.size());
    for (const auto& [nn, d] : points) {
        if (!(d > 0)) throw VerifyError("rate fit needs positive distances");
        double x = std::log(static_cast<double>(nn)), y = std::log(d);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw VerifyError("rate fit needs distinct sample sizes");
    return (n * sxy - sx * sy) / denom;
}

VerificationReport verify_law(const RecurrenceSpec& spec, const LimitLaw& law,
                              const std::vector<long>& ns, const ToleranceSet& tol,
                              const GenOptions& opts) {
    if (law.kind == LawKind::Unknown)
        throw VerifyError("cannot verify an unclassified recurrence");
    std::vector<long> sorted(ns);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.empty()) throw VerifyError("no sample sizes given");
    if (sorted.front() <= spec.start)
        throw VerifyError("sample sizes must exceed the start index " + std::to_string(spec.start));

    VerificationReport rep;
    rep.spec_name = spec.name;
    rep.law_kind = law.kind;
    double mtol = effective_moment_tol(law.kind, tol);
    bool all_pass = true;

    if (law.kind == LawKind::Normal) {
        auto rows = generate_snapshots(spec, sorted, opts);
        std::vector<std::pair<long, double>> ks_pts;
        for (size_t i = 0; i < sorted.size(); ++i) {
            PerN rec;
            rec.n = sorted[i];
            Rational var = row_variance(rows[i]);
            if (var <= 0) {
                rec.note = "nonpositive variance";
                all_pass = false;
                rep.records.push_back(rec);
                continue;
            }
            Rational mu = row_mean(rows[i]);
            Rational m3 = row_central_moment(rows[i], 3);
            Rational m4 = row_central_moment(rows[i], 4);
            double sd = std::sqrt(var.get_d());
            double skew = std::fabs(m3.get_d()) / (sd * sd * sd);
            double kurt = std::fabs(m4.get_d() / Rational(var * var).get_d() - 3.0) / 3.0;
            rec.moment_err = std::max(skew, kurt);
            Rational total = row_total(rows[i]);
            double cum = 0, prev = 0, d = 0;
            double mud = mu.get_d();
            for (long k = 0; k <= rows[i].deg(); ++k) {
                cum += Rational(rows[i].coeff(static_cast<size_t>(k)) / total).get_d();
                double z = (static_cast<double>(k) - mud) / sd;
                double target = phi_cdf(z);
                d = std::max({d, std::fabs(cum - target), std::fabs(prev - target)});
                prev = cum;
            }
            rec.ks = d;
            rec.pass = rec.moment_err <= mtol;
            all_pass = all_pass && rec.pass;
            if (d > 0) ks_pts.push_back({sorted[i], d});
            rep.records.push_back(rec);
        }
        bool standard_scales = law.mean_scale == Scale::N && law.var_scale == Scale::N;
        if (standard_scales && ks_pts.size() >= 4 && ks_pts.size() == sorted.size()) {
            rep.rate_slope = rate_fit(ks_pts);
            rep.rate_checked = true;
            if (rep.rate_slope < tol.ks_slope_lo || rep.rate_slope > tol.ks_slope_hi) {
                all_pass = false;
                rep.notes.push_back("KS decay slope outside the expected window");
            }
        } else if (!standard_scales) {
            rep.notes.push_back("logarithmic scaling: KS decay rate not checked");
        }
    } else if (is_discrete_kind(law.kind)) {
        auto rows = generate_snapshots(spec, sorted, opts);
        auto lf = law_factorial_moments(law, 4);
        for (size_t i = 0; i < sorted.size(); ++i) {
            PerN rec;
            rec.n = sorted[i];
            Rational total = row_total(rows[i]);
            double sum_abs = 0, law_mass = 0;
            for (long k = 0; k <= rows[i].deg(); ++k) {
                double pk = law_pmf(law, k);
                law_mass += pk;
                sum_abs += std::fabs(Rational(rows[i].coeff(static_cast<size_t>(k)) / total).get_d() - pk);
            }
            rec.tv = 0.5 * (sum_abs + std::max(0.0, 1.0 - law_mass));
            double merr = 0;
            for (int m = 1; m <= 4; ++m) {
                double emp = row_factorial_moment(rows[i], m).get_d();
                double lm = lf[static_cast<size_t>(m - 1)];
                merr = std::max(merr, lm != 0 ? std::fabs(emp / lm - 1) : std::fabs(emp));
            }
            rec.moment_err = merr;
            rec.pass = rec.tv <= tol.tv && rec.moment_err <= mtol;
            all_pass = all_pass && rec.pass;
            rep.records.push_back(rec);
        }
    } else if (is_continuous_kind(law.kind)) {
        auto lm = law_raw_moments(law, 4);
        auto emp = scaled_raw_moments(spec, sorted, law.tau1.get_d(), 4, opts);
        for (size_t i = 0; i < sorted.size(); ++i) {
            PerN rec;
            rec.n = sorted[i];
            double merr = 0;
            for (int m = 1; m <= 4; ++m) {
                double l = lm[static_cast<size_t>(m - 1)];
                double e = emp[i][static_cast<size_t>(m - 1)];
                merr = std::max(merr, l != 0 ? std::fabs(e / l - 1) : std::fabs(e));
            }
            rec.moment_err = merr;
            rec.pass = rec.moment_err <= mtol;
            all_pass = all_pass && rec.pass;
            rep.records.push_back(rec);
        }
    } else if (law.kind == LawKind::Degenerate) {
        auto rows = generate_snapshots(spec, sorted, opts);
        for (size_t i = 0; i < sorted.size(); ++i) {
            PerN rec;
            rec.n = sorted[i];
            rec.moment_err = row_variance(rows[i]).get_d() / static_cast<double>(sorted[i]);
            rec.pass = rec.moment_err < 0.05;
            all_pass = all_pass && rec.pass;
            rep.records.push_back(rec);
        }
    } else { // MomentSequence
        if (law.km.empty()) throw VerifyError("no stored moments to verify against");
        int order = std::min<int>(4, static_cast<int>(law.km.size()));
        auto emp = scaled_raw_moments(spec, sorted, law.tau1.get_d(), order, opts);
        for (size_t i = 0; i < sorted.size(); ++i) {
            PerN rec;
            rec.n = sorted[i];
            double merr = 0;
            for (int m = 1; m <= order; ++m) {
                double l = law.km[static_cast<size_t>(m - 1)];
                double e = emp[i][static_cast<size_t>(m - 1)];
                merr = std::max(merr, std::fabs(l) > 1e-9 ? std::fabs(e / l - 1) : std::fabs(e - l));
            }
            rec.moment_err = merr;
            rec.pass = rec.moment_err <= 0.05;
            all_pass = all_pass && rec.pass;
            rep.records.push_back(rec);
        }
    }

    rep.pass = all_pass;
    return rep;
}

std::string VerificationReport::json() const {
    nlohmann::json j;
    j["spec"] = spec_name;
    j["law"] = law_kind_name(law_kind);
    j["pass"] = pass;
    if (rate_checked) j["rate_slope"] = rate_slope;
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json jr;
        jr["n"] = r.n;
        jr["moment_err"] = r.moment_err;
        if (r.ks >= 0) jr["ks"] = r.ks;
        if (r.tv >= 0) jr["tv"] = r.tv;
        jr["pass"] = r.pass;
        if (!r.note.empty()) jr["note"] = r.note;
        recs.push_back(jr);
    }
    j["records"] = recs;
    if (!notes.empty()) j["notes"] = notes;
    return j.dump(2);
}

void write_distribution_csv(std::ostream& os, const Poly& row, const LimitLaw& law, long n) {
    os << "k,empirical,limit\n";
    Rational total = poly_eval(row, Rational(1));
    double tau1 = law.tau1.get_d();
    double scale = std::pow(static_cast<double>(n), tau1);
    double mud = 0, sd = 0;
    if (law.kind == LawKind::Normal) {
        mud = row_mean(row).get_d();
        sd = std::sqrt(row_variance(row).get_d());
    }
    for (long k = 0; k <= row.deg(); ++k) {
        double f = Rational(row.coeff(static_cast<size_t>(k)) / total).get_d();
        os << k << ',' << f << ',';
        if (is_discrete_kind(law.kind)) {
            os << law_pmf(law, k);
        } else if (law.kind == LawKind::Normal) {
            double zl = (k - 0.5 - mud) / sd, zr = (k + 0.5 - mud) / sd;
            os << (phi_cdf(zr) - phi_cdf(zl));
        } else {
            double dens;
            if (law_pdf(law, static_cast<double>(k) / scale, dens)) os << dens / scale;
        }
        os << '\n';
    }
}

} // namespace ev
