#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ev/classify.hpp"

namespace ev {

struct ToleranceSet {
    double moment_rel = 0.02;
    double tv = 1e-3;
    double ks_slope_lo = -0.65; // expected log-log decay window for the KS distance
    double ks_slope_hi = -0.35;
};

struct PerN {
    long n = 0;
    double moment_err = 0;
    double ks = -1; // -1 when not applicable
    double tv = -1;
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    std::string spec_name;
    LawKind law_kind = LawKind::Unknown;
    bool pass = false;
    double rate_slope = 0;
    bool rate_checked = false;
    std::vector<PerN> records;
    std::vector<std::string> notes;
    std::string json() const;
};

// Least-squares slope of log(distance) against log(n).
double rate_fit(const std::vector<std::pair<long, double>>& points);

// Compare exact finite-n statistics at the given row indices against the
// claimed limit law. Throws VerifyError for an Unknown law or unusable inputs.
VerificationReport verify_law(const RecurrenceSpec& spec, const LimitLaw& law,
                              const std::vector<long>& ns, const ToleranceSet& tol = {},
                              const GenOptions& opts = {});

// Columns k,empirical,limit for one row; the limit column is a per-k mass
// (discrete laws) or a bin-width density approximation (continuous laws),
// blank where no closed density is available.
void write_distribution_csv(std::ostream& os, const Poly& row, const LimitLaw& law, long n);

} // namespace ev
