#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ev/bipoly.hpp"
#include "ev/expr.hpp"
#include "ev/npoly.hpp"
#include "ev/poly.hpp"

namespace ev {

// Reference to another named triangle T, contributing mult(n,v) * T_n(v).
struct SequenceRef {
    std::string name;
    BiPoly mult;
};

// Per-class data of the recurrence
//   e(n) P_n = a P_{n-1} + b P'_{n-1} + b2 P''_{n-1} + c2 P_{n-2} + mult T_n .
// b is the full derivative multiplier (any (1-v) factor included).
struct ClassEntry {
    BiPoly a;
    BiPoly b;
    BiPoly b2;
    BiPoly c2;
    NPoly e{Rational(1)};
    std::optional<SequenceRef> inhomog;
};

struct RecurrenceSpec {
    std::string name;
    long start = 0;
    long modulus = 1;
    std::vector<ClassEntry> classes; // size == modulus; index = n mod modulus
    Poly initial;                    // P_start
    std::optional<Poly> initial2;    // P_{start+1}, required iff any c2 != 0
    bool require_integer = false;

    const ClassEntry& cls(long n) const {
        long m = n % modulus;
        if (m < 0) m += modulus;
        return classes[static_cast<size_t>(m)];
    }
    bool second_order() const {
        for (auto& c : classes)
            if (!c.c2.is_zero()) return true;
        return false;
    }
    bool first_order_homogeneous() const {
        for (auto& c : classes)
            if (!c.b2.is_zero() || !c.c2.is_zero() || c.inhomog) return false;
        return true;
    }
};

RecurrenceSpec parse_spec(const std::string& text);
RecurrenceSpec load_spec_file(const std::string& path);
std::string serialize_spec(const RecurrenceSpec& spec);

struct Triangle {
    long start = 0;
    std::vector<Poly> rows; // rows[i] = P_{start+i}

    const Poly& row(long n) const { return rows.at(static_cast<size_t>(n - start)); }
    long last_n() const { return start + static_cast<long>(rows.size()) - 1; }
};

// Maps an inhomogeneous reference name to its defining spec.
using SpecResolver = std::function<RecurrenceSpec(const std::string&)>;

struct GenOptions {
    SpecResolver resolver;
};

Triangle generate_rows(const RecurrenceSpec& spec, long n_max, const GenOptions& opts = {});

// Streams rows P_start..P_{n_max} through fn keeping only a sliding window in
// memory; fn may return false to stop early.
void iterate_rows(const RecurrenceSpec& spec, long n_max,
                  const std::function<bool(long, const Poly&)>& fn, const GenOptions& opts = {});

// Rows at the requested indices only (ns ascending).
std::vector<Poly> generate_snapshots(const RecurrenceSpec& spec, const std::vector<long>& ns,
                                     const GenOptions& opts = {});

enum class Shape { General, BetaZero, EulerianLinear, NnForm, BetaRR };

std::string shape_name(Shape s);

// Normalized view of a spec after the start shift (row index relabeled so the
// initial row sits at 0) and removal of common NPoly content from a, b, e.
//
// EulerianLinear: a/e = alpha(v) n + gamma(v), b/e = beta(v)(1-v), n-free.
// NnForm: a = nn_alpha n + gamma(v) with nn_alpha constant, deg gamma <= 1,
//   b/(1-v) = B(v) of degree <= 1; scalars are B(1), B'(1) etc.
// BetaRR: NnForm with gamma = p v + q, B = -alpha v, initial h0 + h1 v.
// BetaZero: b == 0 and a = alpha(v) n + gamma(v).
struct CanonicalForm {
    Shape shape = Shape::General;
    std::string reason; // why the form stayed General

    Poly alpha, beta, gamma; // EulerianLinear view (valid for all shapes but General;
                             // for BetaZero beta is zero)

    bool has_nn = false;
    Rational nn_alpha, nn_beta, nn_betap, nn_gamma, nn_gammap, nn_c0, nn_c1;

    bool has_rr = false;
    Rational rr_alpha, rr_p, rr_q, rr_h0, rr_h1;

    Poly initial;
};

CanonicalForm canonicalize(const RecurrenceSpec& spec);

// Spec whose rows are v^{n+m} P_n(1/v); defined for first-order homogeneous
// single-class specs in EulerianLinear form.
RecurrenceSpec reciprocal_spec(const RecurrenceSpec& spec, long m);

// Spec whose rows are P_n(v/s).
RecurrenceSpec scale_spec(const RecurrenceSpec& spec, const Rational& s);

// Built-in families: A(p,q,r), T(p,q,r), Q(p,q), M(p,q,r), polya(a,b,c,d,s0,x0).
RecurrenceSpec catalog_spec(const std::string& family, const std::vector<Rational>& params);

// Resolver covering the built-in family names plus .spec files in search_dir.
SpecResolver default_resolver(const std::string& search_dir = "");

} // namespace ev
