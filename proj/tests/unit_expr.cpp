#include "doctest.h"

#include "ev/expr.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace ev;

namespace {

Rational eval(const BiPoly& p, const Rational& n, const Rational& v) {
    Rational acc(0);
    for (auto& [k, c] : p.terms)
        acc += c * pow_rat(n, static_cast<unsigned>(k.first)) *
               pow_rat(v, static_cast<unsigned>(k.second));
    return acc;
}

std::string error_of(const std::string& text) {
    try {
        parse_expr(text);
    } catch (const SpecError& e) {
        return e.what();
    }
    return "";
}

BiPoly random_bipoly(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nterms(1, 6), dn(0, 3), dv(0, 4), num(-9, 9);
    std::uniform_int_distribution<int> den(1, 5);
    BiPoly p;
    int t = nterms(rng);
    for (int i = 0; i < t; ++i) p.add_term(dn(rng), dv(rng), rat(num(rng), den(rng)));
    return p;
}

} // namespace

TEST_CASE("literals, variables and precedence") {
    BiPoly p = parse_expr("v*n+1-v");
    CHECK(eval(p, Rational(4), Rational(3)) == 4 * 3 + 1 - 3);
    // '^' binds tighter than '*', '*' tighter than '+'.
    CHECK(parse_expr("2*v^2+n") == parse_expr("n + 2*(v^2)"));
    CHECK(parse_expr("-v^2") == parse_expr("-(v^2)"));
    CHECK(parse_expr("3/2") == parse_expr("3/2 + 0"));
    CHECK(eval(parse_expr("3/2*v"), Rational(0), Rational(2)) == 3);
    CHECK(parse_expr("  v *\tn ") == parse_expr("v*n"));
}

TEST_CASE("rational literals own their slash") {
    // 'p/q' is one token; there is no division operator.
    CHECK(eval(parse_expr("1/4"), Rational(0), Rational(0)) == Rational(1, 4));
    CHECK(error_of("v/2") != "");
    CHECK(error_of("(1)/2") != "");
}

TEST_CASE("malformed expressions report a position") {
    CHECK(error_of("v v").find("position") != std::string::npos);
    CHECK(error_of("2v") != "");       // implicit multiplication
    CHECK(error_of("v^-1") != "");     // negative exponent
    CHECK(error_of("v^65") != "");     // exponent cap
    CHECK(error_of("v^999") != "");
    CHECK(parse_expr("v^64").deg_v() == 64);
    CHECK(error_of("(v+1") != "");
    CHECK(error_of("") != "");
    CHECK(error_of("x") != "");
    CHECK(error_of("1+").find("unexpected end") != std::string::npos);
}

TEST_CASE("printing then parsing is the identity") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        BiPoly p = random_bipoly(rng);
        CHECK(parse_expr(print_expr(p)) == p);
    }
    CHECK(print_expr(BiPoly()) == "0");
    CHECK(parse_expr(print_expr(BiPoly())) == BiPoly());
}

TEST_CASE("random expressions match an independent evaluation") {
    // Build expression text with explicit parentheses from a seeded recipe and
    // compare against direct arithmetic at several (n, v) points.
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> coef(-5, 5), en(0, 3), ev_(0, 3), nt(1, 5);
    for (int i = 0; i < 100; ++i) {
        std::ostringstream text;
        BiPoly want;
        int terms = nt(rng);
        for (int t = 0; t < terms; ++t) {
            int c = coef(rng), dn = en(rng), dv = ev_(rng);
            if (t > 0) text << " + ";
            text << "(" << c << ")";
            if (dn > 0) text << "*n^" << dn;
            if (dv > 0) text << "*v^" << dv;
            want.add_term(dn, dv, Rational(c));
        }
        BiPoly got = parse_expr(text.str());
        CHECK(got == want);
        CHECK(eval(got, Rational(2), Rational(-3)) == eval(want, Rational(2), Rational(-3)));
    }
}

TEST_CASE("every coefficient expression in the shipped spec files parses back") {
    const char* dir = std::getenv("EV_SPECS_DIR");
    REQUIRE(dir != nullptr);
    int seen = 0;
    for (auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".spec") continue;
        std::ifstream in(entry.path());
        std::string line;
        while (std::getline(in, line)) {
            if (line.find("inhomog_ref") != std::string::npos) continue; // a name, not an expression
            auto q1 = line.find('"');
            if (q1 == std::string::npos) continue;
            auto q2 = line.find('"', q1 + 1);
            if (q2 == std::string::npos) continue;
            std::string body = line.substr(q1 + 1, q2 - q1 - 1);
            BiPoly p = parse_expr(body);
            CHECK(parse_expr(print_expr(p)) == p);
            ++seen;
        }
    }
    CHECK(seen > 40);
}
