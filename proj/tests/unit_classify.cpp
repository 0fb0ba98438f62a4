#include "doctest.h"

#include "ev/classify.hpp"
#include "ev/recurrence.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

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

LimitLaw law_of(const std::string& stem) {
    ClassifyOptions opts;
    opts.gen.resolver = default_resolver(specs_dir());
    return classify(spec_named(stem), opts);
}

void check_normal(const LimitLaw& law, const Rational& mean, const Rational& var,
                  Scale scale = Scale::N) {
    CHECK(law.kind == LawKind::Normal);
    CHECK(law.mean_coeff == mean);
    CHECK(law.var_coeff == var);
    CHECK(law.mean_scale == scale);
    CHECK(law.var_scale == scale);
}

} // namespace

TEST_CASE("normal limits across the shipped triangles") {
    check_normal(law_of("eulerian"), Rational(1, 2), Rational(1, 12));
    check_normal(law_of("a008292"), Rational(1, 2), Rational(1, 12));
    check_normal(law_of("a060187"), Rational(1, 2), Rational(1, 12));
    check_normal(law_of("a244312"), Rational(1, 2), Rational(1, 12));
    check_normal(law_of("a008517"), Rational(2, 3), Rational(1, 9));
    check_normal(law_of("a008971"), Rational(1, 3), Rational(2, 45));
    check_normal(law_of("a162976"), Rational(1, 6), Rational(23, 180));
    check_normal(law_of("sec543"), Rational(3, 4), Rational(7, 48));
    check_normal(law_of("a256978"), Rational(1), Rational(1, 3));
    check_normal(law_of("a059427"), Rational(2, 3), Rational(8, 45));
}

TEST_CASE("normal limits in the derivative-free regime") {
    check_normal(law_of("pascal"), Rational(1, 2), Rational(1, 4));
    check_normal(law_of("trinomial"), Rational(1), Rational(2, 3));
    // Mean H_n and variance H_n - H_n^(2) both grow like log n.
    check_normal(law_of("stirling-cycle"), Rational(1), Rational(1), Scale::LogN);
}

TEST_CASE("discrete limits") {
    LimitLaw pois = law_of("a008290");
    CHECK(pois.kind == LawKind::Poisson);
    CHECK(pois.lambda == 1);

    LimitLaw nb = law_of("a065600");
    CHECK(nb.kind == LawKind::NegBinomial);
    CHECK(nb.nb_r == 2);
    CHECK(nb.nb_p == Rational(1, 3));

    // Rows n * P_{n-1} carry a fixed two-trial profile forward unchanged.
    RecurrenceSpec bs =
        parse_spec("name = bsum\ninitial = \"1\"\na = \"n+2*v\"\nb = \"2-v-v^2\"\n");
    LimitLaw law = classify(bs);
    CHECK(law.kind == LawKind::BernoulliSum);
    CHECK(law.bern_count == 2);
    CHECK(law.bern_p == Rational(1, 3));
}

TEST_CASE("square-root and fractional scalings") {
    LimitLaw ray = law_of("a039598");
    CHECK(ray.kind == LawKind::Rayleigh);
    CHECK(ray.sigma_sq == Rational(1, 2));
    CHECK(ray.tau1 == Rational(1, 2));

    LimitLaw ray2 = law_of("a102625");
    CHECK(ray2.kind == LawKind::Rayleigh);
    CHECK(ray2.sigma_sq == 2);

    LimitLaw hn = law_of("a193229");
    CHECK(hn.kind == LawKind::HalfNormal);
    CHECK(hn.sigma_sq == 2);
    CHECK(std::fabs(hn.sigma - std::sqrt(2.0)) <= 1e-12);

    LimitLaw ml = law_of("a202550");
    CHECK(ml.kind == LawKind::MittagLeffler);
    CHECK(ml.ml_p == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ml.ml_q == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ml.ml_scale == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ml.tau1 == Rational(1, 4));
}

TEST_CASE("linear-scale continuous limits") {
    LimitLaw beta = law_of("a091441");
    CHECK(beta.kind == LawKind::Beta);
    REQUIRE(beta.components.size() == 1);
    CHECK(beta.components[0].a == 2);
    CHECK(beta.components[0].b == 2);

    LimitLaw mix = law_of("betamix");
    CHECK(mix.kind == LawKind::BetaMixture);
    REQUIRE(mix.components.size() == 2);
    CHECK(mix.components[0].weight == Rational(1, 2));
    CHECK(mix.components[0].a == 3);
    CHECK(mix.components[0].b == 1);
    CHECK(mix.components[1].weight == Rational(1, 2));
    CHECK(mix.components[1].a == 2);
    CHECK(mix.components[1].b == 2);

    LimitLaw uni = law_of("a104709");
    CHECK(uni.kind == LawKind::Uniform);
    CHECK(uni.lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(uni.hi == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degenerate and unresolved cases") {
    LimitLaw deg = law_of("constant");
    CHECK(deg.kind == LawKind::Degenerate);
    CHECK(deg.degen_rate == 0);

    LimitLaw ms = law_of("a103451");
    CHECK(ms.kind == LawKind::MomentSequence);
    CHECK(ms.tau1 == 1);
    CHECK(ms.tau2 == 0);
    CHECK(!ms.km.empty());

    LimitLaw u1 = law_of("a156920");
    CHECK(u1.kind == LawKind::Unknown);
    CHECK(u1.reason == "derivative multiplier lacks a (1-v) factor");

    LimitLaw u2 = law_of("a065826");
    CHECK(u2.kind == LawKind::Unknown);
    CHECK(u2.reason == "not a first-order homogeneous recurrence");
}

TEST_CASE("normal constants from the two defining polynomials") {
    // alpha = v, beta = v: the classical triangle.
    Poly v(std::vector<Rational>{Rational(0), Rational(1)});
    NormalParams np = normal_params(v, v);
    CHECK(np.mu == Rational(1, 2));
    CHECK(np.sigma_sq == Rational(1, 12));
    // Degenerate denominators are rejected.
    Poly negv(std::vector<Rational>{Rational(0), Rational(-1)});
    CHECK_THROWS_AS(normal_params(v, negv), GenError);
}

TEST_CASE("classification ignores presentation of the recurrence") {
    LimitLaw base = law_of("eulerian");

    // Common polynomial factor on a, b, e.
    RecurrenceSpec scaled = spec_named("eulerian");
    BiPoly mult;
    mult.add_term(1, 0, Rational(3));
    mult.add_term(0, 0, Rational(6));
    scaled.classes[0].a = bipoly_mul(mult, scaled.classes[0].a);
    scaled.classes[0].b = bipoly_mul(mult, scaled.classes[0].b);
    scaled.classes[0].e = poly_mul(Poly(Rational(3)), poly_add(poly_x(), Poly(Rational(2))));
    LimitLaw law1 = classify(scaled);
    CHECK(law1.kind == LawKind::Normal);
    CHECK(law1.mean_coeff == base.mean_coeff);
    CHECK(law1.var_coeff == base.var_coeff);

    // The initial row does not move the limit constants: rescaled start row
    // for the derivative-bearing spec, reshaped start row where rows stay
    // nonnegative without one.
    RecurrenceSpec shifted = spec_named("eulerian");
    shifted.initial = Poly(Rational(3));
    LimitLaw law2 = classify(shifted);
    CHECK(law2.kind == LawKind::Normal);
    CHECK(law2.mean_coeff == base.mean_coeff);
    CHECK(law2.var_coeff == base.var_coeff);

    LimitLaw pas = law_of("pascal");
    RecurrenceSpec pshift = spec_named("pascal");
    pshift.initial = Poly(std::vector<Rational>{Rational(1), Rational(1)});
    LimitLaw law2b = classify(pshift);
    CHECK(law2b.kind == LawKind::Normal);
    CHECK(law2b.mean_coeff == pas.mean_coeff);
    CHECK(law2b.var_coeff == pas.var_coeff);

    // Adding c(1-v) to the n-free part of a changes gamma but not the law.
    RecurrenceSpec bumped = spec_named("eulerian");
    bumped.classes[0].a.add_term(0, 0, Rational(-1));
    bumped.classes[0].a.add_term(0, 1, Rational(1));
    LimitLaw law3 = classify(bumped);
    CHECK(law3.kind == LawKind::Normal);
    CHECK(law3.mean_coeff == base.mean_coeff);
    CHECK(law3.var_coeff == base.var_coeff);
}

TEST_CASE("rows that go negative are refused with a warning") {
    RecurrenceSpec spec = spec_named("eulerian");
    spec.classes[0].a.add_term(0, 0, Rational(1));
    spec.classes[0].a.add_term(0, 1, Rational(-1));
    ClassifyContext ctx;
    LimitLaw law = classify(spec, ctx);
    CHECK(law.kind == LawKind::Unknown);
    CHECK(law.reason == "negative coefficients");
    REQUIRE(ctx.warnings.size() == 1);
    CHECK(ctx.warnings[0].find("negative coefficient at n=1") != std::string::npos);
}

TEST_CASE("limiting moments of the scaled statistic") {
    KmResult pois = km_moments(canonicalize(spec_named("a008290")), 4);
    REQUIRE(pois.ok);
    CHECK(pois.discrete);
    REQUIRE(pois.values.size() == 4);
    for (double q : pois.values) CHECK(q == doctest::Approx(1.0).epsilon(1e-9));

    KmResult nb = km_moments(canonicalize(spec_named("a065600")), 4);
    REQUIRE(nb.ok);
    CHECK(nb.discrete);
    // Factorial moments (m+1)!/2^m.
    CHECK(nb.values[1] == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(nb.values[3] == doctest::Approx(7.5).epsilon(1e-9));

    KmResult ray = km_moments(canonicalize(spec_named("a039598")), 4);
    REQUIRE(ray.ok);
    CHECK(!ray.discrete);
    CHECK(ray.values[0] == doctest::Approx(std::tgamma(1.5)).epsilon(1e-9));
    CHECK(ray.values[3] == doctest::Approx(2.0).epsilon(1e-9));

    KmResult beta = km_moments(canonicalize(spec_named("a091441")), 4);
    REQUIRE(beta.ok);
    CHECK(!beta.discrete);
    for (int m = 1; m <= 4; ++m)
        CHECK(beta.values[m - 1] == doctest::Approx(6.0 / ((m + 2) * (m + 3))).epsilon(1e-9));

    KmResult el = km_moments(canonicalize(spec_named("eulerian")), 4);
    CHECK(!el.ok);
    CHECK(el.reason == "requires the constant-alpha form");
}

TEST_CASE("json rendering of the law") {
    auto parsed = [](const LimitLaw& law) { return nlohmann::json::parse(law.json()); };

    nlohmann::json jn = parsed(law_of("eulerian"));
    CHECK(jn["kind"] == "Normal");
    CHECK(jn["shape"] == "EulerianLinear");
    CHECK(jn["mean"]["rational"] == "1/2");
    CHECK(jn["mean"]["decimal"] == doctest::Approx(0.5));
    CHECK(jn["mean"]["scale"] == "n");
    CHECK(jn["variance"]["rational"] == "1/12");
    CHECK(jn["variance"]["scale"] == "n");

    nlohmann::json jlog = parsed(law_of("stirling-cycle"));
    CHECK(jlog["mean"]["scale"] == "log n");

    nlohmann::json jp = parsed(law_of("a008290"));
    CHECK(jp["kind"] == "Poisson");
    CHECK(jp["lambda"]["rational"] == "1");

    nlohmann::json jr = parsed(law_of("a039598"));
    CHECK(jr["sigma_sq"]["rational"] == "1/2");
    CHECK(jr["limit_moments"].is_array());

    nlohmann::json jm = parsed(law_of("betamix"));
    REQUIRE(jm["components"].size() == 2);
    CHECK(jm["components"][0]["weight"]["rational"] == "1/2");
    CHECK(jm["components"][1]["a"]["rational"] == "2");

    nlohmann::json jml = parsed(law_of("a202550"));
    CHECK(jml["scale_exponent"]["rational"] == "1/4");

    nlohmann::json ju = parsed(law_of("a156920"));
    CHECK(ju["kind"] == "Unknown");
    CHECK(ju["reason"] == "derivative multiplier lacks a (1-v) factor");
}

TEST_CASE("classification context reports the checked horizon") {
    ClassifyContext ctx;
    ClassifyOptions opts;
    opts.horizon = 25;
    LimitLaw law = classify(spec_named("eulerian"), ctx, opts);
    CHECK(law.kind == LawKind::Normal);
    CHECK(ctx.canonical.shape == Shape::EulerianLinear);
    CHECK(ctx.nonneg_checked_upto >= 25);
}
