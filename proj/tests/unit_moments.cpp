#include "doctest.h"

#include "ev/moments.hpp"
#include "ev/recurrence.hpp"

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

} // namespace

TEST_CASE("single-row statistics on a known row") {
    Poly row(std::vector<Rational>{Rational(1), Rational(11), Rational(11), Rational(1)});
    CHECK(row_total(row) == 24);
    CHECK(row_mean(row) == Rational(3, 2));
    CHECK(row_variance(row) == Rational(5, 12));
    CHECK(row_factorial_moment(row, 0) == 1);
    CHECK(row_factorial_moment(row, 1) == Rational(3, 2));
    // E[X(X-1)] = (2*11 + 6*1)/24
    CHECK(row_factorial_moment(row, 2) == Rational(7, 6));
    CHECK(row_central_moment(row, 1) == 0);
    CHECK(row_central_moment(row, 2) == Rational(5, 12));
}

TEST_CASE("raw moments reconstructed from factorial moments") {
    Poly row(std::vector<Rational>{Rational(2), Rational(5), Rational(3), Rational(7)});
    std::vector<Rational> fact(5);
    for (int m = 0; m <= 4; ++m) fact[m] = row_factorial_moment(row, m);
    Rational total = row_total(row);
    for (int m = 0; m <= 4; ++m) {
        Rational want(0);
        for (long k = 0; k < static_cast<long>(row.coeffs.size()); ++k)
            want += row.coeffs[k] * pow_rat(Rational(k), static_cast<unsigned>(m));
        CHECK(raw_from_factorial(fact, m) == want / total);
    }
}

TEST_CASE("Stirling numbers of the second kind") {
    CHECK(stirling2(0, 0) == 1);
    CHECK(stirling2(4, 2) == 7);
    CHECK(stirling2(5, 3) == 25);
    CHECK(stirling2(3, 0) == 0);
    CHECK(stirling2(6, 6) == 1);
}

TEST_CASE("mean recurrence matches closed form on the classical triangle") {
    RecurrenceSpec spec = spec_named("eulerian");
    CanonicalForm cf = canonicalize(spec);
    std::vector<Rational> mean = mean_series(el_scalars(cf), row_mean(spec.initial), 200);
    REQUIRE(mean_exact_form_exists(el_scalars(cf)));
    for (long n = 1; n <= 200; ++n) {
        CHECK(mean[n] == Rational(n - 1) / 2);
        CHECK(mean_closed_exact(el_scalars(cf), row_mean(spec.initial), n) == Rational(n - 1) / 2);
    }
}

TEST_CASE("double-precision closed form tracks the exact one") {
    RecurrenceSpec spec = spec_named("a008517");
    CanonicalForm cf = canonicalize(spec);
    ElScalars s = el_scalars(cf);
    Rational mu0 = row_mean(spec.initial);
    REQUIRE(mean_exact_form_exists(s));
    for (long n : {10L, 50L, 200L}) {
        double exact = mean_closed_exact(s, mu0, n).get_d();
        double approx = mean_closed_double(s, mu0.get_d(), n);
        CHECK(std::fabs(exact - approx) <= 1e-12 * (1.0 + std::fabs(exact)));
    }
}

TEST_CASE("digamma-based mean for the harmonic-mean triangle") {
    // a = n-1+v gives mean H_n; the closed form needs the digamma branch.
    RecurrenceSpec spec = spec_named("stirling-cycle");
    CanonicalForm cf = canonicalize(spec);
    ElScalars s = el_scalars(cf);
    CHECK(!mean_exact_form_exists(s));
    std::vector<Rational> mean = mean_series(s, row_mean(spec.initial), 200);
    Rational h(0);
    for (long n = 1; n <= 200; ++n) {
        h += Rational(1, n);
        CHECK(mean[n] == h);
    }
    double got = mean_closed_double(s, row_mean(spec.initial).get_d(), 200);
    CHECK(std::fabs(got - mean[200].get_d()) <= 1e-10);
}

TEST_CASE("central moment recurrences agree with the rows exactly") {
    for (const char* stem : {"eulerian", "a008517", "a008971", "a091441",
                             "a039598", "pascal", "trinomial"}) {
        CAPTURE(stem);
        RecurrenceSpec spec = spec_named(stem);
        CanonicalForm cf = canonicalize(spec);
        REQUIRE(cf.shape != Shape::General);
        Triangle tri = generate_rows(spec, spec.start + 60);
        MomentSeries<Rational> ms = central_moment_series<Rational>(cf, 4, spec.start + 60);
        for (long n = spec.start; n <= spec.start + 60; ++n) {
            const Poly& row = tri.row(n);
            size_t i = static_cast<size_t>(n - spec.start);
            CHECK(ms.mean[i] == row_mean(row));
            for (int m = 2; m <= 4; ++m) CHECK(ms.central[i][m] == row_central_moment(row, m));
        }
    }
}

TEST_CASE("factorial moment recurrences agree with the rows exactly") {
    for (const char* stem : {"a008290", "a065600", "a039598", "a202550"}) {
        CAPTURE(stem);
        RecurrenceSpec spec = spec_named(stem);
        CanonicalForm cf = canonicalize(spec);
        REQUIRE(cf.has_nn);
        Triangle tri = generate_rows(spec, spec.start + 60);
        auto fm = factorial_moment_series<Rational>(cf, 3, 60);
        for (long n = spec.start; n <= spec.start + 60; ++n) {
            const Poly& row = tri.row(n);
            size_t i = static_cast<size_t>(n - spec.start);
            for (int m = 0; m <= 3; ++m) CHECK(fm[i][m] == row_factorial_moment(row, m));
        }
    }
}

TEST_CASE("derangement-position factorial moments are asymptotically 1") {
    RecurrenceSpec spec = spec_named("a008290");
    CanonicalForm cf = canonicalize(spec);
    auto fm = factorial_moment_series<Rational>(cf, 4, 500);
    for (int m = 1; m <= 4; ++m) {
        Rational q = fm.back()[m];
        CHECK(abs(q - 1) <= Rational(1, 100));
    }
}

TEST_CASE("class-split mean and variance match the rows") {
    RecurrenceSpec spec = spec_named("a244312");
    Triangle tri = generate_rows(spec, 40);
    auto mv = general_mv_series<Rational>(spec, 40);
    for (long n = spec.start; n <= 40; ++n) {
        const Poly& row = tri.row(n);
        size_t i = static_cast<size_t>(n - spec.start);
        CHECK(mv[i].mean == row_mean(row));
        CHECK(mv[i].variance == row_variance(row));
    }

    RecurrenceSpec spec2 = spec_named("a059427");
    Triangle tri2 = generate_rows(spec2, 50);
    auto mv2 = general_mv_series<Rational>(spec2, 50);
    for (long n = spec2.start; n <= 50; ++n) {
        const Poly& row = tri2.row(n);
        size_t i = static_cast<size_t>(n - spec2.start);
        CHECK(mv2[i].mean == row_mean(row));
        CHECK(mv2[i].variance == row_variance(row));
    }
}

TEST_CASE("floating-point moment series scales to large n") {
    RecurrenceSpec spec = spec_named("eulerian");
    CanonicalForm cf = canonicalize(spec);
    MomentSeries<double> ms = central_moment_series<double>(cf, 2, 4000);
    double v = ms.central.back()[2] / 4000.0;
    CHECK(std::fabs(v - 1.0 / 12.0) <= 1e-4);
}

TEST_CASE("moment series rejects shapes without a moment recurrence") {
    RecurrenceSpec spec = spec_named("a065826");
    CanonicalForm cf = canonicalize(spec);
    CHECK_THROWS_AS(central_moment_series<Rational>(cf, 2, 10), GenError);
}

TEST_CASE("moments CSV layout") {
    RecurrenceSpec spec = spec_named("eulerian");
    std::ostringstream out;
    write_moments_csv(out, spec, 4, 2);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,total,mean,variance,central2,factorial1,factorial2");
    std::getline(in, line);
    CHECK(line.substr(0, 4) == "0,1,");
    int rows = 1;
    while (std::getline(in, line)) {
        ++rows;
        if (rows == 5) CHECK(line.substr(0, 5) == "4,24,");
    }
    CHECK(rows == 5);
}
