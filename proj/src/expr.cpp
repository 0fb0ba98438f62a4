#include "ev/expr.hpp"

#include <cctype>

#include "ev/util.hpp"

namespace ev {

namespace {

constexpr unsigned kMaxExponent = 64;

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw SpecError("expression error at position " + std::to_string(pos) + ": " + msg +
                        " in '" + s + "'");
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }

    bool eat(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string read_digits() {
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected digits");
        return s.substr(start, pos - start);
    }

    Rational read_rational() {
        std::string num = read_digits();
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            std::string den = read_digits();
            if (parse_rational(den) == 0) fail("zero denominator");
            return parse_rational(num + "/" + den);
        }
        return parse_rational(num);
    }

    BiPoly parse_expr_rule() {
        BiPoly acc = parse_term();
        for (;;) {
            if (eat('+'))
                acc = bipoly_add(acc, parse_term());
            else if (eat('-'))
                acc = bipoly_sub(acc, parse_term());
            else
                return acc;
        }
    }

    BiPoly parse_term() {
        BiPoly acc = parse_unary();
        while (eat('*')) acc = bipoly_mul(acc, parse_unary());
        return acc;
    }

    BiPoly parse_unary() {
        if (eat('-')) return bipoly_neg(parse_unary());
        return parse_primary();
    }

    BiPoly parse_primary() {
        BiPoly base = parse_atom();
        if (eat('^')) {
            skip_ws();
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                fail("exponent must be a nonnegative integer");
            std::string digits = read_digits();
            if (digits.size() > 2) fail("exponent exceeds 64");
            unsigned e = static_cast<unsigned>(std::stoul(digits));
            if (e > kMaxExponent) fail("exponent exceeds 64");
            return bipoly_pow(base, e);
        }
        return base;
    }

    BiPoly parse_atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of expression");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            BiPoly inner = parse_expr_rule();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (c == 'n') {
            ++pos;
            return bipoly_n();
        }
        if (c == 'v') {
            ++pos;
            return bipoly_v();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return BiPoly(read_rational());
        fail(std::string("unexpected character '") + c + "'");
    }

    BiPoly run() {
        BiPoly p = parse_expr_rule();
        skip_ws();
        if (pos != s.size()) fail("trailing input");
        return p;
    }
};

void append_monomial(std::string& out, long dn, long dv, const Rational& c, bool first) {
    Rational a = c < 0 ? Rational(-c) : c;
    if (first) {
        if (c < 0) out += "-";
    } else {
        out += c < 0 ? "-" : "+";
    }
    bool has_var = dn > 0 || dv > 0;
    if (a != 1 || !has_var) {
        out += a.get_str();
        if (has_var) out += "*";
    }
    if (dn > 0) {
        out += "n";
        if (dn > 1) out += "^" + std::to_string(dn);
        if (dv > 0) out += "*";
    }
    if (dv > 0) {
        out += "v";
        if (dv > 1) out += "^" + std::to_string(dv);
    }
}

} // namespace

BiPoly parse_expr(const std::string& text) { return Parser(text).run(); }

std::string print_expr(const BiPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto& [k, c] : p.terms) {
        append_monomial(out, k.first, k.second, c, first);
        first = false;
    }
    return out;
}

} // namespace ev
