#include "doctest.h"

#include "ev/classify.hpp"
#include "ev/recurrence.hpp"
#include "ev/verify.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

using namespace ev;

namespace {

std::string specs_dir() {
    const char* dir = std::getenv("EV_SPECS_DIR");
    REQUIRE(dir != nullptr);
    return dir;
}

RecurrenceSpec spec_named(const std::string& stem) {
    return load_spec_file(specs_dir() + "/" + stem + ".spec");
}

VerificationReport verified(const std::string& stem, std::vector<long> ns) {
    RecurrenceSpec spec = spec_named(stem);
    return verify_law(spec, classify(spec), ns);
}

} // namespace

TEST_CASE("log-log slope fitting") {
    std::vector<std::pair<long, double>> pts;
    for (long n : {100L, 200L, 400L, 800L, 1600L}) pts.push_back({n, 3.7 / std::sqrt(n)});
    CHECK(rate_fit(pts) == doctest::Approx(-0.5).epsilon(1e-9));

    std::vector<std::pair<long, double>> flat = {{100, 2.0}, {200, 2.0}, {400, 2.0}, {800, 2.0}};
    CHECK(rate_fit(flat) == doctest::Approx(0.0).epsilon(1e-12));

    std::vector<std::pair<long, double>> few = {{100, 1.0}, {200, 0.5}, {400, 0.25}};
    CHECK_THROWS_AS(rate_fit(few), VerifyError);
    std::vector<std::pair<long, double>> zero = {{100, 1.0}, {200, 0.5}, {400, 0.0}, {800, 0.1}};
    CHECK_THROWS_AS(rate_fit(zero), VerifyError);
    std::vector<std::pair<long, double>> dup = {{100, 1.0}, {100, 1.0}, {100, 1.0}, {100, 1.0}};
    CHECK_THROWS_AS(rate_fit(dup), VerifyError);
}

TEST_CASE("unusable inputs are rejected") {
    RecurrenceSpec spec = spec_named("a156920");
    LimitLaw law = classify(spec);
    REQUIRE(law.kind == LawKind::Unknown);
    CHECK_THROWS_AS(verify_law(spec, law, {100, 200}), VerifyError);

    RecurrenceSpec ok = spec_named("eulerian");
    LimitLaw nl = classify(ok);
    CHECK_THROWS_AS(verify_law(ok, nl, {}), VerifyError);
    CHECK_THROWS_AS(verify_law(ok, nl, {0}), VerifyError);

    LimitLaw empty_ms;
    empty_ms.kind = LawKind::MomentSequence;
    CHECK_THROWS_AS(verify_law(ok, empty_ms, {50}), VerifyError);
}

TEST_CASE("every classified spec in the fixture suite verifies against its law") {
    struct Entry {
        const char* stem;
        std::vector<long> ns;
    };
    const Entry suite[] = {
        {"eulerian", {100, 200, 400}},
        {"a060187", {100, 200, 400}},
        {"a008517", {200, 400}},
        {"a244312", {100, 200}},
        {"a008290", {200}},
        {"a065600", {500}},
        {"a091441", {200, 400}},
        {"a039598", {8000}},
        {"a193229", {16000}},
        {"a202550", {160000}},
    };
    for (const Entry& e : suite) {
        CAPTURE(e.stem);
        VerificationReport rep = verified(e.stem, e.ns);
        CHECK(rep.pass);
        CHECK(rep.records.size() == e.ns.size());
        for (const PerN& r : rep.records) {
            CAPTURE(r.n);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("moment errors shrink as n grows") {
    VerificationReport rep = verified("a008517", {200, 400});
    REQUIRE(rep.records.size() == 2);
    CHECK(rep.records[0].moment_err > rep.records[1].moment_err);
    CHECK(rep.records[1].moment_err <= 0.02);
}

TEST_CASE("KS decay rate is fitted once four sample sizes are available") {
    VerificationReport rep = verified("eulerian", {100, 200, 400, 800});
    CHECK(rep.pass);
    REQUIRE(rep.rate_checked);
    CHECK(rep.rate_slope > -0.65);
    CHECK(rep.rate_slope < -0.35);
    // KS distances themselves are recorded per n.
    for (const PerN& r : rep.records) CHECK(r.ks > 0);

    // Three sizes are not enough for the fit.
    VerificationReport rep3 = verified("eulerian", {100, 200, 400});
    CHECK(!rep3.rate_checked);
}

TEST_CASE("degenerate and moment-sequence laws verify directly") {
    VerificationReport deg = verified("constant", {64});
    CHECK(deg.pass);
    CHECK(deg.law_kind == LawKind::Degenerate);

    VerificationReport ms = verified("a103451", {200});
    CHECK(ms.pass);
    CHECK(ms.law_kind == LawKind::MomentSequence);
}

TEST_CASE("verification report renders as json") {
    VerificationReport rep = verified("a091441", {200, 400});
    std::string j = rep.json();
    CHECK(j.find("\"spec\"") != std::string::npos);
    CHECK(j.find("a091441") != std::string::npos);
    CHECK(j.find("\"pass\": true") != std::string::npos);
    CHECK(j.find("\"records\"") != std::string::npos);
}

TEST_CASE("distribution table for a discrete law") {
    RecurrenceSpec spec = spec_named("a008290");
    LimitLaw law = classify(spec);
    Poly row = generate_rows(spec, 40).row(40);
    std::ostringstream out;
    write_distribution_csv(out, row, law, 40);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,empirical,limit");
    double emp_mass = 0, law_mass = 0;
    while (std::getline(in, line)) {
        auto c1 = line.find(','), c2 = line.rfind(',');
        REQUIRE(c1 != std::string::npos);
        REQUIRE(c2 > c1);
        emp_mass += std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        law_mass += std::stod(line.substr(c2 + 1));
    }
    // Columns are printed with limited precision.
    CHECK(emp_mass == doctest::Approx(1.0).epsilon(1e-4));
    // Poisson(1) mass on 0..40 is 1 up to a negligible tail.
    CHECK(law_mass == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("distribution table for a continuous law") {
    RecurrenceSpec spec = spec_named("a091441");
    LimitLaw law = classify(spec);
    Poly row = generate_rows(spec, 60).row(60);
    std::ostringstream out;
    write_distribution_csv(out, row, law, 60);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,empirical,limit");
    // The limit column integrates to about 1 over the support.
    double emp = 0, lim = 0;
    while (std::getline(in, line)) {
        auto c1 = line.find(','), c2 = line.rfind(',');
        emp += std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        if (c2 + 1 < line.size()) lim += std::stod(line.substr(c2 + 1));
    }
    CHECK(emp == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(lim == doctest::Approx(1.0).epsilon(0.05));
}
