#include "doctest.h"

#include "ev/poly.hpp"

#include <random>

using namespace ev;

namespace {

Poly random_poly(std::mt19937_64& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg), num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    std::vector<Rational> c(static_cast<size_t>(deg(rng)) + 1);
    for (auto& x : c) x = rat(num(rng), den(rng));
    return Poly(std::move(c));
}

} // namespace

TEST_CASE("polynomial ring identities on random inputs") {
    std::mt19937_64 rng(7);
    Poly zero, one(Rational(1));
    for (int i = 0; i < 60; ++i) {
        Poly a = random_poly(rng, 6), b = random_poly(rng, 6), c = random_poly(rng, 4);
        CHECK(poly_add(a, b) == poly_add(b, a));
        CHECK(poly_mul(a, b) == poly_mul(b, a));
        CHECK(poly_add(poly_add(a, b), c) == poly_add(a, poly_add(b, c)));
        CHECK(poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c)));
        CHECK(poly_mul(a, poly_add(b, c)) == poly_add(poly_mul(a, b), poly_mul(a, c)));
        CHECK(poly_sub(a, a) == zero);
        CHECK(poly_mul(a, one) == a);
        CHECK(poly_mul(a, zero) == zero);
    }
}

TEST_CASE("division with remainder reassembles the dividend") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 60; ++i) {
        Poly a = random_poly(rng, 8), d = random_poly(rng, 4);
        if (d.is_zero()) continue;
        auto [q, r] = poly_divmod(a, d);
        CHECK(poly_add(poly_mul(q, d), r) == a);
        CHECK((r.is_zero() || r.deg() < d.deg()));
    }
    CHECK_THROWS_AS(poly_divmod(poly_x(), Poly()), GenError);
}

TEST_CASE("exact division flags the remainder") {
    Poly p = poly_mul(poly_add(poly_x(), Poly(Rational(1))), poly_add(poly_x(), Poly(Rational(2))));
    auto [q, exact] = poly_div_exact(p, poly_add(poly_x(), Poly(Rational(1))));
    CHECK(exact);
    CHECK(q == poly_add(poly_x(), Poly(Rational(2))));
    auto [q2, exact2] = poly_div_exact(p, poly_add(poly_x(), Poly(Rational(3))));
    CHECK_FALSE(exact2);
    (void)q2;
}

TEST_CASE("derivative and evaluation agree with finite differences over Q") {
    // d/dx (x^3 - 2x + 5) = 3x^2 - 2, checked at a few rationals.
    Poly p(std::vector<Rational>{Rational(5), Rational(-2), Rational(0), Rational(1)});
    Poly dp = poly_derivative(p);
    CHECK(dp == Poly(std::vector<Rational>{Rational(-2), Rational(0), Rational(3)}));
    for (long k = -3; k <= 3; ++k) {
        Rational x = rat(k, 2);
        CHECK(poly_eval(dp, x) == 3 * x * x - 2);
    }
    CHECK(poly_eval(Poly(), Rational(9)) == 0);
}

TEST_CASE("coefficient reversal is an involution and shifts compose") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 40; ++i) {
        Poly p = random_poly(rng, 7);
        if (p.is_zero()) continue;
        if (p.coeff(0) == 0) p = poly_add(p, Poly(Rational(1)));
        CHECK(poly_reciprocal(poly_reciprocal(p)) == p);
        // A shift by m multiplies the reversed polynomial by v^m.
        Poly shifted = poly_reciprocal(p, 3);
        Poly vm(std::vector<Rational>{Rational(0), Rational(0), Rational(0), Rational(1)});
        CHECK(shifted == poly_mul(vm, poly_reciprocal(p)));
    }
}

TEST_CASE("argument scaling substitutes x -> s x") {
    Poly p(std::vector<Rational>{Rational(1), Rational(2), Rational(3)});
    Poly q = poly_substitute_scaled(p, Rational(1, 2));
    for (long k = -2; k <= 2; ++k)
        CHECK(poly_eval(q, Rational(k)) == poly_eval(p, rat(k, 2)));
}

TEST_CASE("gcd is monic and divides both inputs") {
    Poly f = poly_mul(poly_add(poly_x(), Poly(Rational(1))),
                      poly_add(poly_x(), Poly(Rational(-2))));
    Poly g = poly_mul(poly_add(poly_x(), Poly(Rational(1))),
                      poly_add(poly_x(), Poly(Rational(4))));
    Poly d = poly_gcd(f, g);
    CHECK(d == poly_add(poly_x(), Poly(Rational(1))));
    CHECK(poly_div_exact(f, d).second);
    CHECK(poly_div_exact(g, d).second);
}
