#pragma once

#include <string>
#include <vector>

#include "ev/moments.hpp"
#include "ev/recurrence.hpp"

namespace ev {

enum class LawKind {
    Normal,
    Poisson,
    NegBinomial,
    BernoulliSum,
    Beta,
    BetaMixture,
    Rayleigh,
    HalfNormal,
    MittagLeffler,
    Uniform,
    Degenerate,
    MomentSequence,
    Unknown
};

std::string law_kind_name(LawKind k);

enum class Scale { N, LogN };

struct BetaComponent {
    Rational weight;
    Rational a;
    Rational b;
};

struct LimitLaw {
    LawKind kind = LawKind::Unknown;
    std::string reason;
    Shape shape = Shape::General;

    // Normal: mean ~ mean_coeff * scale(n), variance ~ var_coeff * scale(n).
    Rational mean_coeff{0}, var_coeff{0};
    Scale mean_scale = Scale::N, var_scale = Scale::N;

    Rational lambda{0};     // Poisson
    Rational nb_r{0}, nb_p{0};
    long bern_count = 0;
    Rational bern_p{0};

    std::vector<BetaComponent> components; // Beta (one entry) / BetaMixture

    Rational sigma_sq{0};   // Rayleigh / HalfNormal, exact
    double sigma = 0;

    double ml_p = 0, ml_q = 0, ml_scale = 0;

    double lo = 0, hi = 0;  // Uniform

    Rational degen_rate{0}; // Degenerate: X_n/n -> this constant

    Rational tau1{0}, tau2{0};
    std::vector<double> km; // K_1..K_M diagnostics where computed

    std::string json() const;
};

// (mu, sigma^2) per the CLT constants: mu = alpha'(1)/(alpha(1)+beta(1)),
// sigma^2 = mu + (alpha''(1) - 2 mu beta'(1) - alpha(1) mu^2)/(alpha(1)+2 beta(1)).
struct NormalParams {
    Rational mu;
    Rational sigma_sq;
};
NormalParams normal_params(const Poly& alpha, const Poly& beta);

// Derivative-free scalars: mu(f) = f'(1)/f(1), var(f) = mu + f''(1)/f(1) - mu^2,
// plus the log-scale drift nu and variance coefficient sigma_log.
struct BetaZeroParams {
    bool alpha_zero = false;
    Rational mu_alpha{0}, var_alpha{0};
    Rational mu_gamma{0}, var_gamma{0};
    Rational nu{0}, sigma_log{0};
};
BetaZeroParams beta_zero_params(const Poly& alpha, const Poly& gamma);

// Limiting moments: for beta(1) < 0 the continuous K_m of the scaled variable
// X_n/n^{tau1}; for beta(1) > 0 the limiting factorial moments from the
// discrete limit PGF.
struct KmResult {
    bool ok = false;
    bool discrete = false;
    std::string reason;
    std::vector<double> values; // index m-1 holds the m-th value
};
KmResult km_moments(const CanonicalForm& cf, int order);

struct ClassifyOptions {
    long horizon = 40;     // nonnegativity check depth (rows past start)
    int moment_order = 6;
    GenOptions gen;
};

struct ClassifyContext {
    CanonicalForm canonical;
    long nonneg_checked_upto = 0;
    std::vector<std::string> warnings;
};

LimitLaw classify(const RecurrenceSpec& spec, ClassifyContext& ctx, const ClassifyOptions& opts = {});
LimitLaw classify(const RecurrenceSpec& spec, const ClassifyOptions& opts = {});

} // namespace ev
