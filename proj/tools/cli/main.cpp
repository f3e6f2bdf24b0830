#include <cstdio>
#include <iostream>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>
#include "json.hpp"
#include <omp.h>

#include "g2bsd/errors.hpp"
#include "g2bsd/pipeline.hpp"

using namespace g2bsd;
using ordered_json = nlohmann::ordered_json;

namespace {

struct RunConfig {
    std::string command;
    std::string label;
    bool all = false;
    double precision = 1e-10;
    u64 q_bound = 200;
    u64 coeffs = 0;
    int jobs = 1;
    std::string format = "table";
    std::string fixtures = G2BSD_DEFAULT_FIXTURES;
    int order = 0;
    i64 twist = 0;
    int count = 1;
    u64 prime_bound = 50;
    bool empirical = false;
    bool quiet = false;
};

std::mutex err_mu;

void progress(const std::string& s)
{
    std::lock_guard<std::mutex> lock(err_mu);
    std::cerr << s << std::endl;
}

void validate(const RunConfig& c)
{
    if (c.precision < 1e-12) throw PreconditionViolation("--precision below 1e-12 is not supported");
    if (c.q_bound < 50) throw PreconditionViolation("--qbound must be at least 50");
    if (c.jobs < 1) throw PreconditionViolation("--jobs must be positive");
}

std::vector<const CurveRecord*> select(const std::vector<CurveRecord>& rs, const RunConfig& c)
{
    std::vector<const CurveRecord*> out;
    if (c.all || c.label.empty()) {
        for (auto& r : rs) out.push_back(&r);
    } else {
        out.push_back(&find_record(rs, c.label));
    }
    return out;
}

PipelineOptions pipeline_options(const RunConfig& c, int threads)
{
    PipelineOptions o;
    o.precision = c.precision;
    o.q_bound = c.q_bound;
    o.coeffs = c.coeffs;
    o.threads = threads;
    o.heegner_count = c.count;
    if (!c.quiet) o.progress = progress;
    return o;
}

std::string join(const std::vector<std::string>& v, const char* sep = ",")
{
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

int cmd_verify(const RunConfig& c, const std::vector<CurveRecord>& rs)
{
    auto todo = select(rs, c);
    std::vector<CurveReport> reports(todo.size());
    std::vector<std::string> errors(todo.size());
    const int inner = c.jobs > 1 ? 1 : 0;
#pragma omp parallel for schedule(dynamic) num_threads(c.jobs)
    for (size_t i = 0; i < todo.size(); ++i) {
        try {
            reports[i] = verify_curve(*todo[i], pipeline_options(c, inner));
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    int failed = 0;
    if (c.format == "table")
        std::printf("%-12s %4s %14s %5s %6s %14s %8s %-20s %s\n", "label", "r", "Sha_an", "tors", "c", "Reg",
                    "D", "reducible", "status");
    for (size_t i = 0; i < todo.size(); ++i) {
        auto& R = reports[i];
        if (!errors[i].empty()) {
            ++failed;
            std::printf("%s: %s\n", todo[i]->label.c_str(), errors[i].c_str());
            continue;
        }
        if (!R.ok()) ++failed;
        if (c.format == "records") {
            std::printf("%s\n", report_json(R).c_str());
            continue;
        }
        std::string reg = R.mw ? format_value(R.mw->reg.value, 1e-8L) : "-";
        std::string D = R.heegner.empty() ? "-" : std::to_string(R.heegner.front().D);
        std::string red = R.galrep ? "{" + join(R.galrep->names) + "}" : "-";
        std::printf("%-12s %4d %14s %5ld %6ld %14s %8s %-20s %s\n", R.label.c_str(), R.rank.rank,
                    format_value(R.bsd.sha_real, 1e-6L).c_str(), R.torsion.order, R.bsd.in.tamagawa_product,
                    reg.c_str(), D.c_str(), red.c_str(), R.ok() ? "ok" : join(R.failures, "; ").c_str());
    }
    return failed ? 1 : 0;
}

int cmd_euler(const RunConfig& c, const std::vector<CurveRecord>& rs)
{
    auto& r = find_record(rs, c.label);
    auto model = r.model();
    auto bad = r.bad_factor_map();
    for (u64 p : primes_up_to(c.prime_bound)) {
        EulerFactor E = r.level % p ? euler_factor(model, p) : EulerFactor::bad_factor(p, bad.at(p));
        if (c.format == "records") {
            ordered_json j;
            j["p"] = p;
            j["good"] = E.good;
            j["poly"] = E.poly;
            std::printf("%s\n", j.dump().c_str());
        } else {
            std::ostringstream s;
            for (size_t i = 0; i < E.poly.size(); ++i) s << (i ? " " : "") << E.poly[i];
            std::printf("%5llu %s [%s]\n", static_cast<unsigned long long>(p), E.good ? "good" : "bad ",
                        s.str().c_str());
        }
    }
    return 0;
}

int cmd_lvalue(const RunConfig& c, const std::vector<CurveRecord>& rs)
{
    auto& r = find_record(rs, c.label);
    long double sq = static_cast<long double>(r.level);
    if (c.twist) sq *= static_cast<long double>(c.twist) * c.twist;
    u64 M = c.coeffs ? c.coeffs : required_terms(sq, c.order, c.precision);
    if (!c.quiet) progress(r.label + ": " + std::to_string(M) + " coefficients");
    LSeries ls = coefficients(r.model(), M, r.bad_factor_map(), c.jobs);
    if (c.twist) ls = twist_series(ls, c.twist);
    ls.sign = 1;
    LValue v = evaluate(ls, c.order, 1.0L);
    long double res = functional_equation_residual(ls, 1);
    if (c.format == "records") {
        ordered_json j;
        j["label"] = r.label;
        j["twist"] = c.twist;
        j["order"] = c.order;
        j["terms"] = M;
        j["value"] = format_value(v.value, v.error);
        j["error"] = format_value(v.error, 1e-15L);
        j["fe_residual"] = format_value(res, 1e-15L);
        std::printf("%s\n", j.dump().c_str());
    } else {
        std::printf("L^(%d)(A%s, 1) = %s  (error %.2Le, %llu terms, residual %.2Le)\n", c.order,
                    c.twist ? ("^" + std::to_string(c.twist)).c_str() : "", format_value(v.value, v.error).c_str(),
                    v.error, static_cast<unsigned long long>(M), res);
    }
    return 0;
}

int cmd_period(const RunConfig& c, const std::vector<CurveRecord>& rs)
{
    for (auto* r : select(rs, c)) {
        CurveModel model = c.twist ? quadratic_twist(r->model(), c.twist) : r->model();
        PeriodData P = real_volume(model, c.precision);
        if (c.format == "records") {
            ordered_json j;
            j["label"] = r->label;
            j["twist"] = c.twist;
            j["omega"] = format_value(P.omega, P.error);
            j["components"] = P.components;
            std::printf("%s\n", j.dump().c_str());
        } else {
            std::printf("%-12s Omega = %s  components %d  error %.2Le\n", r->label.c_str(),
                        format_value(P.omega, P.error).c_str(), P.components, P.error);
        }
    }
    return 0;
}

int cmd_galrep(const RunConfig& c, const std::vector<CurveRecord>& rs)
{
    int failed = 0;
    for (auto* r : select(rs, c)) {
        QuadOrder O{Int(r->rm_disc)};
        auto S = reducible_superset(r->model(), O, c.q_bound);
        bool ok = galrep_agrees(*r, S);
        failed += !ok;
        if (c.format == "records") {
            ordered_json j;
            j["label"] = r->label;
            j["reducible"] = S.names;
            j["ambiguous"] = S.ambiguous;
            j["fallback"] = S.fallback;
            j["matches_record"] = ok;
            std::printf("%s\n", j.dump().c_str());
        } else {
            std::printf("%-12s {%s}  ambiguous {%s}  unverified {%s}  %s\n", r->label.c_str(), join(S.names).c_str(),
                        join(S.ambiguous).c_str(), join(S.fallback).c_str(), ok ? "ok" : "MISMATCH");
        }
    }
    return failed ? 1 : 0;
}

int cmd_heegner(const RunConfig& c, const std::vector<CurveRecord>& rs)
{
    int failed = 0;
    for (auto* r : select(rs, c)) {
        TwistContext ctx(r->model(), r->bad_factor_map(), c.jobs);
        HeegnerOptions ho;
        ho.threads = c.jobs;
        if (!c.quiet) ho.progress = progress;
        auto H = find_heegner_discriminants(ctx, r->rank, c.count, ho);
        bool ok = !r->heegner.empty() && H.front().D == r->heegner.front().D;
        failed += !ok;
        if (c.format == "records") {
            ordered_json j;
            j["label"] = r->label;
            ordered_json a = ordered_json::array();
            for (auto& h : H) {
                ordered_json e;
                e["D"] = h.D;
                e["order"] = h.twist_order;
                e["value"] = format_value(h.twist_value, h.twist_error);
                e["terms"] = h.twist_terms;
                a.push_back(e);
            }
            j["discriminants"] = a;
            std::printf("%s\n", j.dump().c_str());
        } else {
            std::string Ds;
            for (auto& h : H) Ds += (Ds.empty() ? "" : " ") + std::to_string(h.D);
            std::printf("%-12s %s\n", r->label.c_str(), Ds.c_str());
        }
    }
    return failed ? 1 : 0;
}

int cmd_figure2(const RunConfig& c, const std::vector<CurveRecord>& rs)
{
    auto tws = load_twist_records(c.fixtures + "/figure2.jsonl");
    TwistOptions to;
    to.precision = std::max(c.precision, 1e-8);
    to.empirical = c.empirical;
    to.threads = c.jobs;
    if (!c.quiet) to.progress = progress;
    int failed = 0;
    for (auto& t : tws) {
        if (!c.all && !c.label.empty() && t.label != c.label) continue;
        auto row = figure2_row(t, find_record(rs, t.label), to);
        failed += !row.exact_match;
        if (c.format == "records") {
            std::printf("%s\n", report_json(row).c_str());
        } else {
            std::printf("%-12s %5lld  L = %s  Omega = %s  tors %ld  c %ld  Sha = %s (table %ld) %s\n",
                        row.label.c_str(), static_cast<long long>(row.D),
                        format_value(row.L_value, row.L_err).c_str(), format_value(row.omega, row.omega_err).c_str(),
                        row.torsion, row.tamagawa_product, format_value(row.sha_real, row.sha_err).c_str(),
                        row.expected, row.exact_match ? "ok" : "MISMATCH");
        }
    }
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv)
{
    RunConfig c;
    CLI::App app{"Numerical BSD verification for modular abelian surfaces"};
    app.require_subcommand(1);
    app.add_option("--precision", c.precision, "Target error for L-values and periods");
    app.add_option("--qbound", c.q_bound, "Largest prime used in the reducibility test");
    app.add_option("--coeffs", c.coeffs, "Number of Dirichlet coefficients (0: automatic)");
    app.add_option("--jobs", c.jobs, "Parallelism degree");
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"table", "records"}));
    app.add_option("--fixtures", c.fixtures, "Fixture directory");
    app.add_flag("-q,--quiet", c.quiet, "No progress on stderr");

    auto* verify = app.add_subcommand("verify", "Full pipeline for one curve or all");
    verify->add_option("label", c.label, "Curve label, e.g. X0_67plus");
    verify->add_flag("--all", c.all, "Every curve in the fixtures");
    verify->add_option("--heegner-count", c.count, "Heegner discriminants to find");
    auto* euler = app.add_subcommand("euler", "Euler factors");
    euler->add_option("label", c.label, "Curve label, e.g. X0_67plus")->required();
    euler->add_option("--bound", c.prime_bound, "Largest prime listed");
    auto* lvalue = app.add_subcommand("lvalue", "L^(k)(A, 1) or of a quadratic twist");
    lvalue->add_option("label", c.label, "Curve label, e.g. X0_67plus")->required();
    lvalue->add_option("--order", c.order, "Derivative order")->check(CLI::Range(0, 2));
    lvalue->add_option("--twist", c.twist, "Fundamental discriminant of the twist");
    auto* period = app.add_subcommand("period", "Real period");
    period->add_option("label", c.label, "Curve label, e.g. X0_67plus");
    period->add_flag("--all", c.all, "Every curve in the fixtures");
    period->add_option("--twist", c.twist, "Fundamental discriminant of the twist");
    auto* galrep = app.add_subcommand("galrep", "Reducible prime superset");
    galrep->add_option("label", c.label, "Curve label, e.g. X0_67plus");
    galrep->add_flag("--all", c.all, "Every curve in the fixtures");
    auto* heegner = app.add_subcommand("heegner-disc", "Heegner discriminants");
    heegner->add_option("label", c.label, "Curve label, e.g. X0_67plus");
    heegner->add_flag("--all", c.all, "Every curve in the fixtures");
    heegner->add_option("--count", c.count, "Discriminants to find");
    auto* fig2 = app.add_subcommand("figure2", "Rank-0 twist route");
    fig2->add_option("label", c.label, "Curve label, e.g. X0_67plus");
    fig2->add_flag("--all", c.all, "Every curve in the fixtures");
    fig2->add_flag("--empirical", c.empirical, "Estimate truncation by comparing cutoffs");

    CLI11_PARSE(app, argc, argv);
    try {
        validate(c);
        auto rs = load_records(c.fixtures + "/figure1.jsonl");
        if (*verify) return cmd_verify(c, rs);
        if (*euler) return cmd_euler(c, rs);
        if (*lvalue) return cmd_lvalue(c, rs);
        if (*period) return cmd_period(c, rs);
        if (*galrep) return cmd_galrep(c, rs);
        if (*heegner) return cmd_heegner(c, rs);
        if (*fig2) return cmd_figure2(c, rs);
    } catch (const std::exception& e) {
        std::cerr << e.what() << std::endl;
        return 2;
    }
    return 0;
}
