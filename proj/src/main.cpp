#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ev/analytic.hpp"
#include "ev/classify.hpp"
#include "ev/moments.hpp"
#include "ev/oeis.hpp"
#include "ev/recurrence.hpp"
#include "ev/verify.hpp"

namespace {

// exit codes: 0 ok, 2 bad spec or usage, 3 generation failure,
// 4 unclassified under --strict, 5 verification mismatch, 6 I/O failure

struct SpecSource {
    std::string spec_path;
    std::string family;
    std::vector<std::string> params;
};

void add_spec_options(CLI::App* cmd, SpecSource& src) {
    auto* sp = cmd->add_option("--spec", src.spec_path, "recurrence spec file");
    auto* fam = cmd->add_option("--family", src.family, "catalog family: a, t, q, m, polya");
    cmd->add_option("--params", src.params, "family parameters (rationals)")->needs(fam);
    sp->excludes(fam);
    fam->excludes(sp);
}

std::vector<ev::Rational> parse_params(const std::vector<std::string>& raw) {
    std::vector<ev::Rational> out;
    for (const auto& s : raw) out.push_back(ev::parse_rational(s));
    return out;
}

ev::RecurrenceSpec resolve_spec(const SpecSource& src, std::string& search_dir) {
    if (!src.spec_path.empty()) {
        search_dir = std::filesystem::path(src.spec_path).parent_path().string();
        return ev::load_spec_file(src.spec_path);
    }
    if (!src.family.empty()) {
        search_dir = ".";
        return ev::catalog_spec(src.family, parse_params(src.params));
    }
    throw ev::SpecError("one of --spec or --family is required");
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::trunc);
    if (!file) throw ev::IoError("cannot open " + path + " for writing");
    return file;
}

std::vector<long> parse_ns(const std::string& csv) {
    std::vector<long> ns;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        size_t used = 0;
        long v;
        try {
            v = std::stol(tok, &used);
        } catch (const std::exception&) {
            throw ev::SpecError("bad sample size '" + tok + "'");
        }
        if (used != tok.size() || v <= 0) throw ev::SpecError("bad sample size '" + tok + "'");
        ns.push_back(v);
    }
    if (ns.empty()) throw ev::SpecError("--ns needs at least one row index");
    return ns;
}

struct GenerateArgs {
    SpecSource src;
    long rows = 10;
    std::string format = "csv";
    std::string out;
};

int run_generate(const GenerateArgs& a) {
    std::string dir;
    ev::RecurrenceSpec spec = resolve_spec(a.src, dir);
    ev::GenOptions g{ev::default_resolver(dir)};
    ev::Triangle tri = ev::generate_rows(spec, spec.start + a.rows, g);
    std::ofstream file;
    std::ostream& os = open_out(a.out, file);
    if (a.format == "csv") {
        os << "n,k,value\n";
        for (long n = tri.start; n <= tri.last_n(); ++n) {
            const ev::Poly& row = tri.row(n);
            long hi = std::max<long>(row.deg(), 0);
            for (long k = 0; k <= hi; ++k)
                os << n << ',' << k << ',' << ev::to_string(row.coeff(static_cast<size_t>(k)))
                   << '\n';
        }
    } else {
        nlohmann::json j;
        j["name"] = spec.name;
        j["start"] = tri.start;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : tri.rows) {
            nlohmann::json jr = nlohmann::json::array();
            long hi = std::max<long>(row.deg(), 0);
            for (long k = 0; k <= hi; ++k)
                jr.push_back(ev::to_string(row.coeff(static_cast<size_t>(k))));
            rows.push_back(jr);
        }
        j["rows"] = rows;
        os << j.dump(2) << '\n';
    }
    if (!a.out.empty() && !os) throw ev::IoError("short write to " + a.out);
    return 0;
}

struct ClassifyArgs {
    SpecSource src;
    long horizon = 40;
    int order = 6;
    bool strict = false;
};

int run_classify(const ClassifyArgs& a) {
    std::string dir;
    ev::RecurrenceSpec spec = resolve_spec(a.src, dir);
    ev::ClassifyOptions opts;
    opts.horizon = a.horizon;
    opts.moment_order = a.order;
    opts.gen.resolver = ev::default_resolver(dir);
    ev::ClassifyContext ctx;
    ev::LimitLaw law = ev::classify(spec, ctx, opts);
    nlohmann::json out = nlohmann::json::parse(law.json());
    out["spec"] = spec.name;
    if (!ctx.warnings.empty()) out["warnings"] = ctx.warnings;
    if (!a.src.family.empty()) {
        try {
            ev::RhoEntry entry = ev::rho_catalog_entry(a.src.family, parse_params(a.src.params));
            ev::QuasiPowerResult qp = ev::quasi_power_params(entry);
            nlohmann::json cc;
            cc["id"] = entry.id;
            cc["mu"] = qp.mu;
            cc["sigma_sq"] = qp.sigma_sq;
            cc["mu_err"] = qp.mu_err;
            cc["var_err"] = qp.var_err;
            cc["converged"] = qp.converged;
            if (qp.degenerate) cc["degenerate"] = true;
            if (law.kind == ev::LawKind::Normal && law.mean_scale == ev::Scale::N &&
                law.var_scale == ev::Scale::N) {
                bool mu_ok = std::fabs(qp.mu - law.mean_coeff.get_d()) <=
                             std::max(1e-6, 10 * qp.mu_err);
                bool var_ok = std::fabs(qp.sigma_sq - law.var_coeff.get_d()) <=
                              std::max(1e-6, 10 * qp.var_err);
                cc["consistent"] = mu_ok && var_ok;
            }
            out["analytic_cross_check"] = cc;
        } catch (const ev::SpecError&) {
            // no growth profile for this family/parameters
        }
    }
    std::cout << out.dump(2) << '\n';
    if (a.strict && law.kind == ev::LawKind::Unknown) return 4;
    return 0;
}

struct MomentsArgs {
    SpecSource src;
    long rows = 20;
    int order = 4;
    std::string out;
};

int run_moments(const MomentsArgs& a) {
    std::string dir;
    ev::RecurrenceSpec spec = resolve_spec(a.src, dir);
    ev::GenOptions g{ev::default_resolver(dir)};
    std::ofstream file;
    std::ostream& os = open_out(a.out, file);
    ev::write_moments_csv(os, spec, spec.start + a.rows, a.order, g);
    if (!a.out.empty() && !os) throw ev::IoError("short write to " + a.out);
    return 0;
}

struct VerifyArgs {
    SpecSource src;
    std::string ns = "100,200,400";
    std::string law = "auto";
    std::string dist_csv;
    double moment_tol = -1;
    double tv_tol = -1;
};

int run_verify(const VerifyArgs& a) {
    if (a.law != "auto") throw ev::SpecError("only --law auto is supported");
    std::string dir;
    ev::RecurrenceSpec spec = resolve_spec(a.src, dir);
    ev::ClassifyOptions copts;
    copts.gen.resolver = ev::default_resolver(dir);
    ev::ClassifyContext ctx;
    ev::LimitLaw law = ev::classify(spec, ctx, copts);
    std::vector<long> ns = parse_ns(a.ns);
    ev::ToleranceSet tol;
    if (a.moment_tol > 0) tol.moment_rel = a.moment_tol;
    if (a.tv_tol > 0) tol.tv = a.tv_tol;
    ev::VerificationReport rep = ev::verify_law(spec, law, ns, tol, copts.gen);
    if (!a.dist_csv.empty()) {
        long n = *std::max_element(ns.begin(), ns.end());
        auto rows = ev::generate_snapshots(spec, {n}, copts.gen);
        std::ofstream file;
        std::ostream& os = open_out(a.dist_csv, file);
        ev::write_distribution_csv(os, rows[0], law, n);
        if (!os) throw ev::IoError("short write to " + a.dist_csv);
    }
    std::cout << rep.json() << '\n';
    return rep.pass ? 0 : 5;
}

struct OeisArgs {
    SpecSource src;
    std::string id;
    std::string fixtures;
    std::string cache = "cache";
    std::string endpoint;
    bool offline = false;
};

int run_oeis(const OeisArgs& a) {
    ev::FetchOptions fo;
    fo.endpoint = a.endpoint;
    fo.cache_dir = a.cache;
    fo.fixtures_dir = a.fixtures;
    fo.offline = a.offline;
    std::string text = ev::fetch_bfile(a.id, fo);
    ev::BFile bf = ev::parse_bfile(text);

    std::string dir;
    ev::RecurrenceSpec spec = resolve_spec(a.src, dir);
    ev::GenOptions g{ev::default_resolver(dir)};

    ev::Layout layout{spec.start, 0, 0};
    if (!a.fixtures.empty()) {
        std::filesystem::path mp = std::filesystem::path(a.fixtures) / "manifest.json";
        std::ifstream in(mp);
        if (in) {
            nlohmann::json manifest;
            try {
                in >> manifest;
            } catch (const nlohmann::json::exception& e) {
                throw ev::IoError("bad manifest " + mp.string() + ": " + e.what());
            }
            if (manifest.contains(a.id) && manifest[a.id].contains("layout")) {
                const auto& jl = manifest[a.id]["layout"];
                layout.first_n = jl.value("first_n", layout.first_n);
                layout.k_min = jl.value("k_min", layout.k_min);
                layout.k_max_offset = jl.value("k_max_offset", layout.k_max_offset);
            }
        }
    }

    long need = static_cast<long>(bf.entries.size());
    long count = 0, n_last = layout.first_n;
    for (long n = layout.first_n; count < need; ++n) {
        long width = n + layout.k_max_offset - layout.k_min + 1;
        if (width > 0) count += width;
        n_last = n;
        if (n > layout.first_n + 1000000)
            throw ev::IoError("layout never covers the b-file length");
    }
    ev::Triangle tri = ev::generate_rows(spec, n_last, g);
    ev::TriangleMatch tm = ev::match_triangle(tri.rows, tri.start, bf, layout);
    tm.a_number = a.id;

    nlohmann::json j;
    j["id"] = tm.a_number;
    j["entries"] = bf.entries.size();
    j["rows_matched"] = tm.rows_matched;
    j["full_match"] = tm.full;
    if (tm.mismatch) {
        auto& [n, k, expected, got] = *tm.mismatch;
        j["mismatch"] = {{"n", n}, {"k", k}, {"expected", expected}, {"got", got}};
    }
    std::cout << j.dump(2) << '\n';
    return tm.full ? 0 : 5;
}

void print_error(const char* category, const std::exception& e) {
    nlohmann::json j{{"error", category}, {"message", e.what()}};
    std::cerr << j.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact triangles, moments, and limit laws of Eulerian-type recurrences"};
    app.require_subcommand(1);

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "print coefficient rows");
    add_spec_options(gen, ga.src);
    gen->add_option("--rows", ga.rows, "rows past the start index")->check(CLI::NonNegativeNumber);
    gen->add_option("--format", ga.format)->check(CLI::IsMember({"csv", "json"}));
    gen->add_option("--out", ga.out, "output file (default stdout)");

    ClassifyArgs ca;
    auto* cls = app.add_subcommand("classify", "identify the limiting distribution");
    add_spec_options(cls, ca.src);
    cls->add_option("--horizon", ca.horizon, "rows checked for nonnegativity")
        ->check(CLI::PositiveNumber);
    cls->add_option("--order", ca.order, "moments reported for moment-sequence results")
        ->check(CLI::Range(2, 12));
    cls->add_flag("--strict", ca.strict, "exit 4 when no law is identified");

    MomentsArgs ma;
    auto* mom = app.add_subcommand("moments", "exact moment table as CSV");
    add_spec_options(mom, ma.src);
    mom->add_option("--rows", ma.rows, "rows past the start index")->check(CLI::NonNegativeNumber);
    mom->add_option("--order", ma.order, "highest moment order")->check(CLI::Range(1, 12));
    mom->add_option("--out", ma.out, "output file (default stdout)");

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "test finite rows against the classified law");
    add_spec_options(ver, va.src);
    ver->add_option("--ns", va.ns, "comma-separated row indices");
    ver->add_option("--law", va.law, "law selection (only: auto)");
    ver->add_option("--moment-tol", va.moment_tol, "relative moment tolerance override");
    ver->add_option("--tv-tol", va.tv_tol, "total-variation tolerance override");
    ver->add_option("--dist-csv", va.dist_csv, "write k,empirical,limit at the largest n");

    OeisArgs oa;
    const char* env_ep = std::getenv("EV_OEIS_ENDPOINT");
    oa.endpoint = env_ep ? env_ep : "http://oeis.org";
    auto* oe = app.add_subcommand("oeis", "compare generated rows against a b-file");
    add_spec_options(oe, oa.src);
    oe->add_option("--id", oa.id, "sequence id, e.g. A008292")->required();
    oe->add_option("--fixtures", oa.fixtures, "directory of vendored b-files + manifest.json");
    oe->add_option("--cache", oa.cache, "download cache directory");
    oe->add_option("--endpoint", oa.endpoint, "plain-http b-file host");
    oe->add_flag("--offline", oa.offline, "never touch the network");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gen) return run_generate(ga);
        if (*cls) return run_classify(ca);
        if (*mom) return run_moments(ma);
        if (*ver) return run_verify(va);
        if (*oe) return run_oeis(oa);
    } catch (const ev::SpecError& e) {
        print_error("spec", e);
        return 2;
    } catch (const ev::GenError& e) {
        print_error("generation", e);
        return 3;
    } catch (const ev::VerifyError& e) {
        print_error("verification", e);
        return 5;
    } catch (const ev::IoError& e) {
        print_error("io", e);
        return 6;
    } catch (const std::exception& e) {
        print_error("internal", e);
        return 1;
    }
    return 0;
}
