#include "ev/moments.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <map>

namespace ev {

Rational row_total(const Poly& f) { return poly_eval(f, Rational(1)); }

Rational row_mean(const Poly& f) {
    Rational t = row_total(f);
    if (t == 0) throw GenError("row sums to zero");
    return poly_eval(poly_derivative(f), Rational(1)) / t;
}

Rational row_factorial_moment(const Poly& f, int m) {
    if (m < 0) throw GenError("negative moment order");
    Rational t = row_total(f);
    if (t == 0) throw GenError("row sums to zero");
    Poly d = f;
    for (int i = 0; i < m; ++i) d = poly_derivative(d);
    return poly_eval(d, Rational(1)) / t;
}

Rational stirling2(int m, int j) {
    if (j < 0 || j > m) return Rational(0);
    if (m == 0) return Rational(1);
    static std::map<std::pair<int, int>, Rational> cache;
    auto key = std::make_pair(m, j);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Rational v = j == 0 ? Rational(0) : Rational(j) * stirling2(m - 1, j) + stirling2(m - 1, j - 1);
    cache[key] = v;
    return v;
}

Rational raw_from_factorial(const std::vector<Rational>& q, int m) {
    Rational acc(0);
    for (int j = 0; j <= m && j < static_cast<int>(q.size()); ++j)
        acc += stirling2(m, j) * q[static_cast<size_t>(j)];
    return acc;
}

Rational row_central_moment(const Poly& f, int m) {
    if (m == 0) return Rational(1);
    Rational mu = row_mean(f);
    std::vector<Rational> q(static_cast<size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) q[static_cast<size_t>(j)] = row_factorial_moment(f, j);
    Rational acc(0);
    for (int j = 0; j <= m; ++j) {
        Rational raw = raw_from_factorial(q, j);
        acc += Rational(binomial(m, j)) * raw * pow_rat(-mu, static_cast<unsigned>(m - j));
    }
    return acc;
}

Rational row_variance(const Poly& f) { return row_central_moment(f, 2); }

ElScalars el_scalars(const CanonicalForm& cf) {
    if (cf.shape == Shape::General) throw GenError("no scalar view for a General form");
    ElScalars s;
    s.alpha = poly_eval(cf.alpha, Rational(1));
    s.beta = poly_eval(cf.beta, Rational(1));
    s.gamma = poly_eval(cf.gamma, Rational(1));
    s.alphap = poly_eval(poly_derivative(cf.alpha), Rational(1));
    s.gammap = poly_eval(poly_derivative(cf.gamma), Rational(1));
    return s;
}

std::vector<Rational> mean_series(const ElScalars& s, const Rational& mu0, long n_max) {
    std::vector<Rational> out{mu0};
    Rational mu = mu0;
    for (long n = 1; n <= n_max; ++n) {
        Rational d = s.alpha * n + s.gamma;
        if (d == 0) throw GenError("mean recurrence denominator vanishes at row " + std::to_string(n));
        mu = (1 - s.beta / d) * mu + (s.alphap * n + s.gammap) / d;
        out.push_back(mu);
    }
    return out;
}

bool mean_exact_form_exists(const ElScalars& s) {
    if (s.alpha != 0) return s.beta != 0 && s.alpha + s.beta != 0;
    return s.beta != 0 && s.gamma != 0;
}

Rational mean_closed_exact(const ElScalars& s, const Rational& mu0, long n) {
    if (!mean_exact_form_exists(s)) throw GenError("no exact mean closed form for these scalars");
    if (s.alpha == 0) {
        // constant denominator: mu_n = g'/b + (1 - b/g)^n (mu0 - g'/b)
        Rational fix = s.gammap / s.beta;
        Rational ratio = 1 - s.beta / s.gamma;
        Rational acc = fix;
        Rational dev = mu0 - fix;
        for (long j = 0; j < n; ++j) dev *= ratio;
        return acc + dev;
    }
    Rational slope = s.alphap / (s.alpha + s.beta);
    Rational level = s.gammap / s.beta + s.alphap * (s.beta - s.gamma) / (s.beta * (s.alpha + s.beta));
    Rational x1 = (s.gamma - s.beta) / s.alpha;
    Rational x2 = s.gamma / s.alpha;
    Rational r(1);
    for (long j = 1; j <= n; ++j) {
        if (j + x2 == 0) throw GenError("mean recurrence denominator vanishes at row " + std::to_string(j));
        if (r != 0) r *= (j + x1) / (j + x2);
    }
    return slope * n + level + r * (mu0 - level);
}

double mean_closed_double(const ElScalars& s, double mu0, long n) {
    double a = s.alpha.get_d(), b = s.beta.get_d(), g = s.gamma.get_d();
    double ap = s.alphap.get_d(), gp = s.gammap.get_d();
    if (mean_exact_form_exists(s)) {
        if (s.alpha == 0) {
            double fix = gp / b;
            return fix + std::pow(1 - b / g, static_cast<double>(n)) * (mu0 - fix);
        }
        double slope = ap / (a + b);
        double level = gp / b + ap * (b - g) / (b * (a + b));
        double x1 = Rational((s.gamma - s.beta) / s.alpha).get_d();
        double x2 = Rational(s.gamma / s.alpha).get_d();
        double lr = 0;
        int sign = 1;
        for (long j = 1; j <= n; ++j) {
            double f = (j + x1) / (j + x2);
            if (f == 0) {
                sign = 0;
                break;
            }
            if (f < 0) sign = -sign;
            lr += std::log(std::fabs(f));
        }
        double r = sign == 0 ? 0.0 : sign * std::exp(lr);
        return slope * n + level + r * (mu0 - level);
    }
    if (s.alpha == 0) throw GenError("mean closed form undefined: alpha = beta = 0");
    double psi_hi = boost::math::digamma(n + 1 + g / a);
    double psi_lo = boost::math::digamma(1 + g / a);
    if (s.beta == 0) return ap / a * n + (a * gp - ap * g) / (a * a) * (psi_hi - psi_lo) + mu0;
    // beta = -alpha
    double core = ap / (a * a) * (psi_hi - psi_lo) + mu0 / (a + g);
    return (a * (n + 1) + g) * core + (gp / (a + g) - ap / a) * n;
}

void write_moments_csv(std::ostream& os, const RecurrenceSpec& spec, long n_max, int order,
                       const GenOptions& opts) {
    if (order < 2) order = 2;
    os << "n,total,mean,variance";
    for (int m = 2; m <= order; ++m) os << ",central" << m;
    for (int m = 1; m <= order; ++m) os << ",factorial" << m;
    os << "\n";
    iterate_rows(spec, n_max, [&](long n, const Poly& row) {
        os << n << "," << to_string(row_total(row)) << "," << to_string(row_mean(row)) << ","
           << to_string(row_variance(row));
        for (int m = 2; m <= order; ++m) os << "," << to_string(row_central_moment(row, m));
        for (int m = 1; m <= order; ++m) os << "," << to_string(row_factorial_moment(row, m));
        os << "\n";
        return true;
    }, opts);
}

} // namespace ev
