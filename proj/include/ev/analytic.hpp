#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ev/poly.hpp"
#include "ev/rational.hpp"
#include "ev/util.hpp"

namespace ev {

// One generating-function growth profile rho(v), smooth across v = 1, paired
// with the (alpha, beta) data of the recurrence whose normalized rows it
// describes. The pairing lets numeric differentiation of rho be checked
// against the exact CLT constants.
struct RhoEntry {
    std::string id;
    std::string note;
    std::function<double(double)> rho; // defined for v > 0
    double rho1 = 1;                   // exact value at v = 1
    Poly alpha, beta;
};

struct QuasiPowerResult {
    double mu = 0, sigma_sq = 0;
    double mu_err = 0, var_err = 0;
    bool converged = false;
    bool degenerate = false;
};

// mu = -g'(0) and sigma^2 = -g''(0) for g(s) = log rho(e^s), via sixth-order
// central stencils with Richardson extrapolation over shrinking steps.
QuasiPowerResult quasi_power_params(const RhoEntry& entry);

std::vector<RhoEntry> rho_catalog();

// Profile for a named family ("a", "t", "q", "m") at the given parameters
// (the same parameter vectors catalog_spec accepts).
RhoEntry rho_catalog_entry(const std::string& family, const std::vector<Rational>& params);

} // namespace ev
