#include "ev/recurrence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "ev/util.hpp"

namespace ev {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Strips a trailing comment, respecting double-quoted values.
std::string strip_comment(const std::string& line) {
    bool in_quotes = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_quotes = !in_quotes;
        if (line[i] == '#' && !in_quotes) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& raw, int line_no) {
    std::string v = trim(raw);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    if (!v.empty() && (v.front() == '"' || v.back() == '"'))
        throw SpecError("line " + std::to_string(line_no) + ": unbalanced quotes");
    return v;
}

long parse_long(const std::string& s, int line_no, const char* what) {
    try {
        size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SpecError("line " + std::to_string(line_no) + ": invalid integer for " +
                        std::string(what) + ": '" + s + "'");
    }
}

Poly poly_in_v(const BiPoly& p, int line_no, const char* what) {
    if (!p.n_free())
        throw SpecError("line " + std::to_string(line_no) + ": " + std::string(what) +
                        " must not involve n");
    return bipoly_at_n(p, Rational(0));
}

NPoly npoly_in_n(const BiPoly& p, int line_no, const char* what) {
    if (p.deg_v() != 0)
        throw SpecError("line " + std::to_string(line_no) + ": " + std::string(what) +
                        " must not involve v");
    return bipoly_v_coeff(p, 0);
}

// Integer roots of e are bounded by the Cauchy bound; if the bound is small
// enough the absence of roots at admissible indices is proved at parse time,
// otherwise generation re-checks every index it divides by.
void validate_e_nonzero(const NPoly& e, long start, const std::string& name) {
    if (e.is_zero()) throw SpecError("spec '" + name + "': e is identically zero");
    if (e.deg() == 0) return;
    Rational lead = e.coeffs.back();
    Rational maxratio(0);
    for (size_t i = 0; i + 1 < e.coeffs.size(); ++i) {
        Rational r = abs(e.coeffs[i] / lead);
        if (r > maxratio) maxratio = r;
    }
    Rational bound = 1 + maxratio;
    if (bound > 100000) return; // deferred to generation-time checks
    long hi = static_cast<long>(std::ceil(bound.get_d()));
    for (long k = start + 1; k <= hi; ++k)
        if (npoly_at(e, k) == 0)
            throw SpecError("spec '" + name + "': e vanishes at n=" + std::to_string(k));
}

struct RawSection {
    std::map<std::string, std::pair<std::string, int>> kv; // key -> (value, line)
};

const ClassEntry& only_class(const RecurrenceSpec& spec) { return spec.classes[0]; }

// Streaming row generator; holds at most the two (three for second-order)
// most recent rows plus a lock-stepped stream for an inhomogeneous reference.
class RowStream {
  public:
    RowStream(const RecurrenceSpec& spec, const GenOptions& opts, int depth = 0)
        : spec_(spec), opts_(opts) {
        if (depth > 1) throw GenError("nested inhomogeneous references are not supported");
        for (auto& c : spec_.classes) {
            if (c.inhomog) {
                if (!opts_.resolver)
                    throw GenError("spec '" + spec_.name + "' references sequence '" +
                                   c.inhomog->name + "' but no resolver is available");
                RecurrenceSpec ref = opts_.resolver(c.inhomog->name);
                if (!ref.first_order_homogeneous())
                    throw GenError("referenced sequence '" + c.inhomog->name +
                                   "' must be first-order homogeneous");
                ref_ = std::make_unique<RowStream>(ref, opts_, depth + 1);
            }
        }
        n_ = spec_.start;
        cur_ = spec_.initial;
        check_row(cur_, n_);
        if (spec_.second_order() && !spec_.initial2)
            throw GenError("spec '" + spec_.name + "' has a second-order term but one initial row");
    }

    long current_n() const { return n_; }
    const Poly& current() const { return cur_; }

    void advance() {
        long n = n_ + 1;
        if (spec_.second_order() && n == spec_.start + 1) {
            prev_ = cur_;
            cur_ = *spec_.initial2;
            check_row(cur_, n);
            n_ = n;
            return;
        }
        const ClassEntry& ce = spec_.cls(n);
        Rational en = npoly_at(ce.e, n);
        if (en == 0) throw GenError("spec '" + spec_.name + "': e vanishes at n=" + std::to_string(n));
        Poly acc = poly_mul(bipoly_at_n(ce.a, Rational(n)), cur_);
        if (!ce.b.is_zero())
            acc = poly_add(acc, poly_mul(bipoly_at_n(ce.b, Rational(n)), poly_derivative(cur_)));
        if (!ce.b2.is_zero())
            acc = poly_add(acc, poly_mul(bipoly_at_n(ce.b2, Rational(n)),
                                         poly_derivative(poly_derivative(cur_))));
        if (!ce.c2.is_zero())
            acc = poly_add(acc, poly_mul(bipoly_at_n(ce.c2, Rational(n)), prev_));
        if (ce.inhomog) {
            while (ref_->current_n() < n) ref_->advance();
            if (ref_->current_n() != n)
                throw GenError("reference row " + std::to_string(n) + " unavailable from '" +
                               ce.inhomog->name + "'");
            acc = poly_add(acc, poly_mul(bipoly_at_n(ce.inhomog->mult, Rational(n)),
                                         ref_->current()));
        }
        Poly row = poly_scale(acc, Rational(1) / en);
        check_row(row, n);
        prev_ = std::move(cur_);
        cur_ = std::move(row);
        n_ = n;
    }

  private:
    void check_row(const Poly& row, long n) const {
        if (!spec_.require_integer) return;
        for (auto& c : row.coeffs)
            if (!is_integer(c))
                throw GenError("spec '" + spec_.name + "': non-integer coefficient " +
                               to_string(c) + " in row " + std::to_string(n));
    }

    RecurrenceSpec spec_;
    GenOptions opts_;
    std::unique_ptr<RowStream> ref_;
    long n_ = 0;
    Poly cur_, prev_;
};

} // namespace

RecurrenceSpec parse_spec(const std::string& text) {
    RawSection top;
    std::map<long, RawSection> classes;
    RawSection* target = &top;
    long max_class = -1;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw SpecError("line " + std::to_string(line_no) + ": malformed section header");
            std::string inner = trim(body.substr(1, body.size() - 2));
            if (inner.rfind("class", 0) != 0)
                throw SpecError("line " + std::to_string(line_no) + ": unknown section '" + inner + "'");
            long k = parse_long(trim(inner.substr(5)), line_no, "class index");
            if (k < 0) throw SpecError("line " + std::to_string(line_no) + ": negative class index");
            if (classes.count(k))
                throw SpecError("line " + std::to_string(line_no) + ": duplicate [class " +
                                std::to_string(k) + "]");
            target = &classes[k];
            max_class = std::max(max_class, k);
            continue;
        }
        size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw SpecError("line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(body.substr(0, eq));
        std::string value = unquote(body.substr(eq + 1), line_no);
        if (key.empty())
            throw SpecError("line " + std::to_string(line_no) + ": empty key");
        if (target->kv.count(key))
            throw SpecError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        target->kv[key] = {value, line_no};
    }

    static const std::vector<std::string> kTopOnly = {"name",     "start",
                                                      "modulus",  "initial",
                                                      "initial2", "require_integer"};
    static const std::vector<std::string> kClassKeys = {"a",  "b",           "b2",
                                                        "c2", "e",           "inhomog_ref",
                                                        "inhomog_mult"};

    RecurrenceSpec spec;
    auto take = [&](RawSection& sec, const std::string& key) -> std::optional<std::pair<std::string, int>> {
        auto it = sec.kv.find(key);
        if (it == sec.kv.end()) return std::nullopt;
        auto v = it->second;
        sec.kv.erase(it);
        return v;
    };

    if (auto v = take(top, "name")) spec.name = v->first;
    if (auto v = take(top, "start")) spec.start = parse_long(v->first, v->second, "start");
    if (auto v = take(top, "modulus")) {
        spec.modulus = parse_long(v->first, v->second, "modulus");
        if (spec.modulus < 1)
            throw SpecError("line " + std::to_string(v->second) + ": modulus must be >= 1");
    }
    if (auto v = take(top, "require_integer")) {
        if (v->first == "true")
            spec.require_integer = true;
        else if (v->first == "false")
            spec.require_integer = false;
        else
            throw SpecError("line " + std::to_string(v->second) +
                            ": require_integer must be true or false");
    }
    spec.initial = Poly(Rational(1));
    if (auto v = take(top, "initial"))
        spec.initial = poly_in_v(parse_expr(v->first), v->second, "initial");
    std::optional<std::pair<std::string, int>> initial2 = take(top, "initial2");

    bool top_sugar = false;
    for (auto& k : kClassKeys) top_sugar = top_sugar || top.kv.count(k);
    if (top_sugar && !classes.empty())
        throw SpecError("top-level recurrence keys conflict with [class] sections");
    if (top_sugar && spec.modulus != 1)
        throw SpecError("top-level recurrence keys require modulus = 1");
    if (top_sugar) classes[0] = std::move(top), top = RawSection{};

    for (auto& [key, v] : top.kv)
        throw SpecError("line " + std::to_string(v.second) + ": unknown key '" + key + "'");

    if (classes.empty()) throw SpecError("spec has no recurrence definition");
    if (max_class >= spec.modulus || static_cast<long>(classes.size()) != spec.modulus)
        throw SpecError("spec declares modulus " + std::to_string(spec.modulus) + " but defines " +
                        std::to_string(classes.size()) + " class section(s) up to index " +
                        std::to_string(max_class));

    spec.classes.resize(static_cast<size_t>(spec.modulus));
    for (long k = 0; k < spec.modulus; ++k) {
        if (!classes.count(k)) throw SpecError("missing [class " + std::to_string(k) + "]");
        RawSection& sec = classes[k];
        ClassEntry ce;
        auto va = take(sec, "a");
        if (!va) throw SpecError("class " + std::to_string(k) + " is missing 'a'");
        ce.a = parse_expr(va->first);
        if (auto v = take(sec, "b")) ce.b = parse_expr(v->first);
        if (auto v = take(sec, "b2")) ce.b2 = parse_expr(v->first);
        if (auto v = take(sec, "c2")) ce.c2 = parse_expr(v->first);
        if (auto v = take(sec, "e")) {
            ce.e = npoly_in_n(parse_expr(v->first), v->second, "e");
            validate_e_nonzero(ce.e, spec.start, spec.name);
        }
        auto ref = take(sec, "inhomog_ref");
        auto mult = take(sec, "inhomog_mult");
        if (ref.has_value() != mult.has_value())
            throw SpecError("inhomog_ref and inhomog_mult must be given together");
        if (ref) {
            SequenceRef sr;
            sr.name = ref->first;
            sr.mult = parse_expr(mult->first);
            if (sr.name.empty()) throw SpecError("empty inhomog_ref");
            ce.inhomog = std::move(sr);
        }
        for (auto& [key, v] : sec.kv)
            throw SpecError("line " + std::to_string(v.second) + ": unknown key '" + key + "'");
        spec.classes[static_cast<size_t>(k)] = std::move(ce);
    }

    if (spec.second_order()) {
        if (!initial2)
            throw SpecError("spec has a second-order term (c2) but only one initial row");
        spec.initial2 = poly_in_v(parse_expr(initial2->first), initial2->second, "initial2");
    } else if (initial2) {
        throw SpecError("initial2 given but the spec has no second-order term");
    }
    return spec;
}

RecurrenceSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spec file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    RecurrenceSpec spec = parse_spec(ss.str());
    if (spec.name.empty())
        spec.name = std::filesystem::path(path).stem().string();
    return spec;
}

std::string serialize_spec(const RecurrenceSpec& spec) {
    std::ostringstream out;
    out << "name = " << spec.name << "\n";
    out << "start = " << spec.start << "\n";
    if (spec.modulus != 1) out << "modulus = " << spec.modulus << "\n";
    out << "initial = \"" << print_expr(bipoly_from_poly_v(spec.initial)) << "\"\n";
    if (spec.initial2)
        out << "initial2 = \"" << print_expr(bipoly_from_poly_v(*spec.initial2)) << "\"\n";
    if (spec.require_integer) out << "require_integer = true\n";
    for (long k = 0; k < spec.modulus; ++k) {
        const ClassEntry& ce = spec.classes[static_cast<size_t>(k)];
        out << "[class " << k << "]\n";
        out << "a = \"" << print_expr(ce.a) << "\"\n";
        if (!ce.b.is_zero()) out << "b = \"" << print_expr(ce.b) << "\"\n";
        if (!ce.b2.is_zero()) out << "b2 = \"" << print_expr(ce.b2) << "\"\n";
        if (!ce.c2.is_zero()) out << "c2 = \"" << print_expr(ce.c2) << "\"\n";
        if (!(ce.e.deg() == 0 && ce.e.coeff(0) == 1))
            out << "e = \"" << print_expr(bipoly_from_npoly(ce.e)) << "\"\n";
        if (ce.inhomog) {
            out << "inhomog_ref = \"" << ce.inhomog->name << "\"\n";
            out << "inhomog_mult = \"" << print_expr(ce.inhomog->mult) << "\"\n";
        }
    }
    return out.str();
}

void iterate_rows(const RecurrenceSpec& spec, long n_max,
                  const std::function<bool(long, const Poly&)>& fn, const GenOptions& opts) {
    if (n_max < spec.start)
        throw GenError("requested last row " + std::to_string(n_max) + " precedes start " +
                       std::to_string(spec.start));
    RowStream rs(spec, opts);
    if (!fn(rs.current_n(), rs.current())) return;
    while (rs.current_n() < n_max) {
        rs.advance();
        if (!fn(rs.current_n(), rs.current())) return;
    }
}

Triangle generate_rows(const RecurrenceSpec& spec, long n_max, const GenOptions& opts) {
    Triangle t;
    t.start = spec.start;
    t.rows.reserve(static_cast<size_t>(n_max - spec.start + 1));
    iterate_rows(spec, n_max, [&](long, const Poly& row) {
        t.rows.push_back(row);
        return true;
    }, opts);
    return t;
}

std::vector<Poly> generate_snapshots(const RecurrenceSpec& spec, const std::vector<long>& ns,
                                     const GenOptions& opts) {
    if (ns.empty()) return {};
    for (size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1]) throw GenError("snapshot indices must be strictly increasing");
    std::vector<Poly> out;
    size_t next = 0;
    iterate_rows(spec, ns.back(), [&](long n, const Poly& row) {
        if (next < ns.size() && n == ns[next]) {
            out.push_back(row);
            ++next;
        }
        return next < ns.size();
    }, opts);
    if (out.size() != ns.size()) throw GenError("snapshot before spec start");
    return out;
}

std::string shape_name(Shape s) {
    switch (s) {
        case Shape::General: return "General";
        case Shape::BetaZero: return "BetaZero";
        case Shape::EulerianLinear: return "EulerianLinear";
        case Shape::NnForm: return "NnForm";
        case Shape::BetaRR: return "BetaRR";
    }
    return "?";
}

namespace {

struct ReducedClass {
    BiPoly a, b;
    NPoly e;
};

// Removes the common Q[n] content of a, b and e, then normalizes e monic.
ReducedClass reduce_class(const ClassEntry& ce, long shift) {
    ReducedClass rc;
    rc.a = bipoly_shift_n(ce.a, shift);
    rc.b = bipoly_shift_n(ce.b, shift);
    rc.e = npoly_shift(ce.e, shift);

    NPoly g = rc.e;
    auto fold_content = [&g](const BiPoly& p) {
        for (long j = 0; j <= p.deg_v(); ++j) {
            NPoly col = bipoly_v_coeff(p, j);
            if (!col.is_zero()) g = poly_gcd(g, col);
        }
    };
    fold_content(rc.a);
    fold_content(rc.b);

    auto divide_out = [&g](const BiPoly& p) {
        BiPoly out;
        for (long j = 0; j <= p.deg_v(); ++j) {
            NPoly col = bipoly_v_coeff(p, j);
            if (col.is_zero()) continue;
            auto [q, exact] = poly_div_exact(col, g);
            if (!exact) throw GenError("content division failed");
            for (size_t i = 0; i < q.coeffs.size(); ++i)
                out.add_term(static_cast<long>(i), j, q.coeffs[i]);
        }
        return out;
    };
    if (g.deg() > 0) {
        rc.a = divide_out(rc.a);
        rc.b = divide_out(rc.b);
        rc.e = poly_div_exact(rc.e, g).first;
    }
    Rational lead = rc.e.coeffs.back();
    if (lead != 1) {
        rc.a = bipoly_scale(rc.a, Rational(1) / lead);
        rc.b = bipoly_scale(rc.b, Rational(1) / lead);
        rc.e = poly_scale(rc.e, Rational(1) / lead);
    }
    return rc;
}

struct ElDecomp {
    Poly alpha, beta, gamma;
};

// a/e = alpha(v) n + gamma(v); b/e n-free and divisible by (1-v).
std::optional<ElDecomp> el_decompose(const ReducedClass& rc, std::string& reason) {
    BiPoly ahat, bhat;
    if (rc.e.deg() == 0) {
        ahat = rc.a;
        bhat = rc.b;
    } else {
        auto divide = [&](const BiPoly& p, BiPoly& out) {
            for (long j = 0; j <= p.deg_v(); ++j) {
                NPoly col = bipoly_v_coeff(p, j);
                if (col.is_zero()) continue;
                auto [q, exact] = poly_div_exact(col, rc.e);
                if (!exact) return false;
                for (size_t i = 0; i < q.coeffs.size(); ++i)
                    out.add_term(static_cast<long>(i), j, q.coeffs[i]);
            }
            return true;
        };
        if (!divide(rc.a, ahat)) {
            reason = "e does not divide a";
            return std::nullopt;
        }
        if (!divide(rc.b, bhat)) {
            reason = "e does not divide b";
            return std::nullopt;
        }
    }
    if (ahat.deg_n() > 1) {
        reason = "a has degree >= 2 in n";
        return std::nullopt;
    }
    if (!bhat.n_free()) {
        reason = "derivative multiplier depends on n";
        return std::nullopt;
    }
    ElDecomp d;
    d.alpha = bipoly_n_coeff(ahat, 1);
    d.gamma = bipoly_n_coeff(ahat, 0);
    Poly bv = bipoly_at_n(bhat, Rational(0));
    if (!bv.is_zero()) {
        Poly one_minus_v(std::vector<Rational>{Rational(1), Rational(-1)});
        auto [q, exact] = poly_div_exact(bv, one_minus_v);
        if (!exact) {
            reason = "derivative multiplier lacks a (1-v) factor";
            return std::nullopt;
        }
        d.beta = q;
    }
    return d;
}

CanonicalForm canonicalize_impl(const RecurrenceSpec& spec, bool shift_start) {
    CanonicalForm cf;
    cf.initial = spec.initial;
    if (!spec.first_order_homogeneous()) {
        cf.reason = "not a first-order homogeneous recurrence";
        return cf;
    }
    long shift = shift_start ? spec.start : 0;
    std::vector<ReducedClass> reduced;
    for (auto& ce : spec.classes) reduced.push_back(reduce_class(ce, shift));

    if (spec.modulus > 1) {
        // Identical alpha and beta across classes collapse to one form whose
        // gamma is taken from class 0.
        std::vector<ElDecomp> ds;
        for (auto& rc : reduced) {
            std::string why;
            auto d = el_decompose(rc, why);
            if (!d) {
                cf.reason = "class decomposition failed: " + why;
                return cf;
            }
            ds.push_back(std::move(*d));
        }
        for (size_t i = 1; i < ds.size(); ++i) {
            if (!(ds[i].alpha == ds[0].alpha) || !(ds[i].beta == ds[0].beta)) {
                cf.reason = "classes differ in alpha or beta";
                return cf;
            }
        }
        cf.shape = Shape::EulerianLinear;
        cf.alpha = ds[0].alpha;
        cf.beta = ds[0].beta;
        cf.gamma = ds[0].gamma;
        return cf;
    }

    const ReducedClass& rc = reduced[0];

    if (rc.b.is_zero()) {
        if (rc.a.deg_n() > 1) {
            cf.reason = "a has degree >= 2 in n";
            return cf;
        }
        cf.shape = Shape::BetaZero;
        cf.alpha = bipoly_n_coeff(rc.a, 1);
        cf.gamma = bipoly_n_coeff(rc.a, 0);
        return cf;
    }

    // NnForm pattern on the stored numerators (e cancels in the coefficient
    // distribution, so it is not required to divide a here).
    {
        Poly a1 = bipoly_n_coeff(rc.a, 1);
        Poly g = bipoly_n_coeff(rc.a, 0);
        Poly one_minus_v(std::vector<Rational>{Rational(1), Rational(-1)});
        bool ok = rc.a.deg_n() <= 1 && a1.deg() == 0 && !a1.is_zero() && g.deg() <= 1 &&
                  rc.b.n_free() && spec.initial.deg() <= 1;
        if (ok) {
            Poly bv = bipoly_at_n(rc.b, Rational(0));
            auto [B, exact] = poly_div_exact(bv, one_minus_v);
            if (exact && B.deg() <= 1) {
                cf.has_nn = true;
                cf.nn_alpha = a1.coeff(0);
                cf.nn_gamma = poly_eval(g, Rational(1));
                cf.nn_gammap = g.coeff(1);
                cf.nn_beta = poly_eval(B, Rational(1));
                cf.nn_betap = B.coeff(1);
                cf.nn_c0 = poly_eval(spec.initial, Rational(1));
                cf.nn_c1 = poly_eval(poly_derivative(spec.initial), Rational(1));
                cf.alpha = a1;
                cf.beta = B;
                cf.gamma = g;
                cf.shape = Shape::NnForm;
                Poly neg_av = poly_scale(poly_x(), -a1.coeff(0));
                if (B == neg_av && a1.coeff(0) > 0 && spec.initial.coeff(0) >= 0 &&
                    spec.initial.coeff(1) >= 0) {
                    cf.has_rr = true;
                    cf.shape = Shape::BetaRR;
                    cf.rr_alpha = a1.coeff(0);
                    cf.rr_p = g.coeff(1);
                    cf.rr_q = g.coeff(0);
                    cf.rr_h0 = spec.initial.coeff(0);
                    cf.rr_h1 = spec.initial.coeff(1);
                }
                return cf;
            }
        }
    }

    std::string why;
    auto d = el_decompose(rc, why);
    if (!d) {
        cf.reason = why;
        return cf;
    }
    cf.shape = Shape::EulerianLinear;
    cf.alpha = d->alpha;
    cf.beta = d->beta;
    cf.gamma = d->gamma;
    return cf;
}

// v^k f(1/v) as a BiPoly in v only; fails if k < deg f.
Poly rev_poly(const Poly& f, long k) {
    if (f.is_zero()) return Poly();
    if (k < f.deg()) throw SpecError("reciprocal transform does not stay polynomial");
    std::vector<Rational> c(static_cast<size_t>(k) + 1, Rational(0));
    for (size_t i = 0; i < f.coeffs.size(); ++i) c[static_cast<size_t>(k) - i] = f.coeffs[i];
    return Poly(std::move(c));
}

// Divides f by v^k exactly.
Poly shift_down(const Poly& f, long k, const char* what) {
    for (long i = 0; i < k && i < static_cast<long>(f.coeffs.size()); ++i)
        if (f.coeffs[static_cast<size_t>(i)] != 0)
            throw SpecError(std::string(what) + ": reciprocal transform does not stay polynomial");
    if (f.is_zero()) return f;
    if (static_cast<long>(f.coeffs.size()) <= k) return Poly();
    return Poly(std::vector<Rational>(f.coeffs.begin() + k, f.coeffs.end()));
}

} // namespace

CanonicalForm canonicalize(const RecurrenceSpec& spec) { return canonicalize_impl(spec, true); }

RecurrenceSpec reciprocal_spec(const RecurrenceSpec& spec, long m) {
    if (spec.modulus != 1 || !spec.first_order_homogeneous())
        throw SpecError("reciprocal transform requires a single-class first-order spec");
    CanonicalForm cf = canonicalize_impl(spec, false);
    if (cf.shape == Shape::General)
        throw SpecError("reciprocal transform requires an (alpha n + gamma, beta (1-v)) form: " +
                        cf.reason);
    const Poly& al = cf.alpha;
    const Poly& be = cf.beta;
    const Poly& ga = cf.gamma;

    // Work at a common reversal degree K, then shift back down by K-1 or K-2:
    // v^{K-1} a_Q|n-coeff = rev(alpha,K) - (1-v) rev(beta,K), and
    // v^{K-2} b_Q = (1-v) rev(beta,K).
    long K = std::max({al.deg(), ga.deg(), be.deg() + 2, 2L});
    Poly one_minus_v(std::vector<Rational>{Rational(1), Rational(-1)});
    Poly om_beta = be.is_zero() ? Poly() : poly_mul(one_minus_v, rev_poly(be, K));
    Poly alpha_q = shift_down(poly_sub(rev_poly(al, K), om_beta), K - 1, "alpha");
    Poly gamma_q = shift_down(
        poly_sub(rev_poly(ga, K), poly_scale(om_beta, Rational(m - 1))), K - 1, "gamma");
    Poly beta_full_q = be.is_zero() ? Poly() : shift_down(om_beta, K - 2, "beta");

    RecurrenceSpec out;
    out.name = spec.name + "_reciprocal";
    out.start = spec.start;
    out.modulus = 1;
    out.classes.resize(1);
    BiPoly a;
    for (size_t j = 0; j < alpha_q.coeffs.size(); ++j) a.add_term(1, static_cast<long>(j), alpha_q.coeffs[j]);
    for (size_t j = 0; j < gamma_q.coeffs.size(); ++j) a.add_term(0, static_cast<long>(j), gamma_q.coeffs[j]);
    out.classes[0].a = a;
    out.classes[0].b = bipoly_from_poly_v(beta_full_q);
    long shift = spec.start + m - spec.initial.deg();
    if (shift < 0) throw SpecError("reciprocal shift m too small for the initial row");
    out.initial = poly_reciprocal(spec.initial, shift);
    return out;
}

RecurrenceSpec scale_spec(const RecurrenceSpec& spec, const Rational& s) {
    if (s == 0) throw SpecError("scale factor must be nonzero");
    RecurrenceSpec out = spec;
    out.name = spec.name + "_scaled";
    out.require_integer = false;
    for (auto& ce : out.classes) {
        if (ce.inhomog) throw SpecError("cannot scale a spec with an inhomogeneous term");
        ce.a = bipoly_scale_v(ce.a, s);
        ce.b = bipoly_scale(bipoly_scale_v(ce.b, s), s);
        ce.b2 = bipoly_scale(bipoly_scale_v(ce.b2, s), s * s);
        ce.c2 = bipoly_scale_v(ce.c2, s);
    }
    out.initial = poly_substitute_scaled(spec.initial, Rational(1) / s);
    if (spec.initial2) out.initial2 = poly_substitute_scaled(*spec.initial2, Rational(1) / s);
    return out;
}

namespace {

Rational need_param(const std::vector<Rational>& params, size_t i, const char* family) {
    if (i >= params.size())
        throw SpecError(std::string(family) + ": missing parameter " + std::to_string(i + 1));
    return params[i];
}

long need_nonneg_int(const Rational& r, const char* what) {
    if (!is_integer(r) || r < 0) throw SpecError(std::string(what) + " must be a nonnegative integer");
    return static_cast<long>(r.get_num().get_si());
}

BiPoly linear_a(const Rational& alpha_scale, const Poly& alpha_v, const Poly& gamma_v) {
    BiPoly a;
    for (size_t j = 0; j < alpha_v.coeffs.size(); ++j)
        a.add_term(1, static_cast<long>(j), alpha_v.coeffs[j] * alpha_scale);
    for (size_t j = 0; j < gamma_v.coeffs.size(); ++j)
        a.add_term(0, static_cast<long>(j), gamma_v.coeffs[j]);
    return a;
}

Poly pv(std::vector<Rational> cs) { return Poly(std::move(cs)); }

} // namespace

RecurrenceSpec catalog_spec(const std::string& family, const std::vector<Rational>& params) {
    std::string f = family;
    std::transform(f.begin(), f.end(), f.begin(), [](unsigned char c) { return std::tolower(c); });
    RecurrenceSpec spec;
    spec.modulus = 1;
    spec.classes.resize(1);
    spec.initial = Poly(Rational(1));

    if (f == "a") {
        Rational p = need_param(params, 0, "A"), q = need_param(params, 1, "A"),
                 r = need_param(params, 2, "A");
        if (!(q > 0 && r > 0 && p >= 0 && p <= q * r))
            throw SpecError("A(p,q,r) requires q,r > 0 and 0 <= p <= qr");
        spec.name = "A(" + to_string(p) + "," + to_string(q) + "," + to_string(r) + ")";
        spec.classes[0].a = linear_a(q, pv({Rational(0), Rational(1)}), pv({p, q * r - q - p}));
        spec.classes[0].b = bipoly_from_poly_v(pv({Rational(0), q, -q}));
        return spec;
    }
    if (f == "t") {
        Rational p = need_param(params, 0, "T"), q = need_param(params, 1, "T"),
                 r = need_param(params, 2, "T");
        if (!(q >= 1 && r >= p && p >= 0 && r + p > 0))
            throw SpecError("T(p,q,r) requires q >= 1 and r >= p >= 0 with r+p > 0");
        spec.name = "T(" + to_string(p) + "," + to_string(q) + "," + to_string(r) + ")";
        spec.classes[0].a = linear_a(q, pv({Rational(0), Rational(1)}), pv({p, r - p - q}));
        spec.classes[0].b = bipoly_from_poly_v(pv({Rational(0), Rational(1), Rational(-1)}));
        return spec;
    }
    if (f == "q") {
        Rational p = need_param(params, 0, "Q"), q = need_param(params, 1, "Q");
        if (!(p >= 0 && q >= p + 1)) throw SpecError("Q(p,q) requires p >= 0 and q >= p+1");
        spec.name = "Q(" + to_string(p) + "," + to_string(q) + ")";
        spec.classes[0].a = linear_a(Rational(1), pv({Rational(0), Rational(1)}), pv({p, q - p - 1}));
        spec.classes[0].b = bipoly_from_poly_v(pv({Rational(1), Rational(0), Rational(-1)}));
        return spec;
    }
    if (f == "m") {
        Rational p = need_param(params, 0, "M"), q = need_param(params, 1, "M"),
                 r = need_param(params, 2, "M");
        if (!(q >= 1 && p >= 0 && r >= 0)) throw SpecError("M(p,q,r) requires q >= 1, p,r >= 0");
        spec.name = "M(" + to_string(p) + "," + to_string(q) + "," + to_string(r) + ")";
        spec.classes[0].a =
            linear_a(Rational(1), pv({Rational(-1), q + 1}), pv({p + 1, q * r - p - q - 1}));
        spec.classes[0].b = bipoly_from_poly_v(pv({Rational(0), q, -q}));
        spec.classes[0].e = poly_x();
        spec.start = 1;
        spec.initial = pv({Rational(0), Rational(1)});
        return spec;
    }
    if (f == "polya") {
        long a = need_nonneg_int(need_param(params, 0, "polya"), "polya a");
        long b = need_nonneg_int(need_param(params, 1, "polya"), "polya b");
        long c = need_nonneg_int(need_param(params, 2, "polya"), "polya c");
        long d = need_nonneg_int(need_param(params, 3, "polya"), "polya d");
        Rational s0 = need_param(params, 4, "polya");
        long x0 = need_nonneg_int(need_param(params, 5, "polya"), "polya x0");
        long qa = a + b, qc = c + d;
        if (qa != qc || qa < 1) throw SpecError("polya requires a+b = c+d >= 1");
        if (!(s0 > 0)) throw SpecError("polya requires s0 > 0");
        spec.name = "polya(" + std::to_string(a) + "," + std::to_string(b) + "," +
                    std::to_string(c) + "," + std::to_string(d) + "," + to_string(s0) + "," +
                    std::to_string(x0) + ")";
        std::vector<Rational> alpha_v(static_cast<size_t>(c) + 1, Rational(0));
        alpha_v.back() = Rational(1);
        std::vector<Rational> gamma_v(static_cast<size_t>(c) + 1, Rational(0));
        gamma_v.back() = s0 - Rational(qa);
        spec.classes[0].a = linear_a(Rational(qa), pv(std::move(alpha_v)), pv(std::move(gamma_v)));
        BiPoly bb;
        bb.add_term(0, a + 1, Rational(1));
        bb.add_term(0, c + 1, Rational(-1));
        spec.classes[0].b = bb;
        std::vector<Rational> init(static_cast<size_t>(x0) + 1, Rational(0));
        init.back() = Rational(1);
        spec.initial = pv(std::move(init));
        return spec;
    }
    throw SpecError("unknown catalog family '" + family + "'");
}

SpecResolver default_resolver(const std::string& search_dir) {
    return [search_dir](const std::string& name) -> RecurrenceSpec {
        if (!search_dir.empty()) {
            std::filesystem::path p = std::filesystem::path(search_dir) / (name + ".spec");
            if (std::filesystem::exists(p)) return load_spec_file(p.string());
        }
        if (name == "eulerian") {
            RecurrenceSpec s = catalog_spec("A", {Rational(1), Rational(1), Rational(1)});
            s.name = "eulerian";
            return s;
        }
        throw GenError("unknown sequence reference '" + name + "'");
    };
}

} // namespace ev
