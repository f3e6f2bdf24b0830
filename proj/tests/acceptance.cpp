#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "g2bsd/errors.hpp"
#include "g2bsd/pipeline.hpp"
#include "support.hpp"

using namespace g2bsd;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Line {
    bool ok;
    std::string detail;
};

std::map<int, Line> results;
bool verbose = false;

void note(const std::string& s)
{
    if (verbose) std::cerr << s << std::endl;
}

PipelineOptions base_options()
{
    PipelineOptions o;
    o.run_heegner = false;
    o.run_galrep = false;
    if (verbose) o.progress = [](const std::string& s) { std::cerr << "  " << s << std::endl; };
    return o;
}

Line criterion1(const std::vector<CurveRecord>& rs)
{
    int pass = 0, total = 0;
    std::string bad;
    double worst = 0;
    for (auto& r : rs) {
        if (r.rank != 0) continue;
        ++total;
        auto R = verify_curve(r, base_options());
        worst = std::max(worst, R.seconds);
        bool ok = R.rank.rank == 0 && R.bsd.sha_rational && *R.bsd.sha_rational == 1 &&
                  std::fabs(R.bsd.sha_real - 1) <= 1e-4L && R.seconds <= 300;
        note(r.label + " sha " + format_value(R.bsd.sha_real, 1e-12L) + (ok ? " ok" : " FAIL"));
        pass += ok;
        if (!ok) bad += " " + r.label;
    }
    std::ostringstream s;
    s << pass << "/" << total << " rank-0 curves with Sha_an = 1, slowest " << static_cast<int>(std::ceil(worst))
      << " s" << (bad.empty() ? "" : ";" + bad);
    return {total == 6 && pass == 6, s.str()};
}

std::vector<GeneratorCheck> generator_checks;

Line criterion2(const std::vector<CurveRecord>& rs)
{
    std::vector<const CurveRecord*> r2;
    for (auto& r : rs)
        if (r.rank == 2) r2.push_back(&r);
    std::sort(r2.begin(), r2.end(), [](auto* a, auto* b) { return a->level < b->level; });
    int pass = 0;
    std::string bad;
    double worst = 0;
    for (auto* r : r2) {
        auto R = verify_curve(*r, base_options());
        worst = std::max(worst, R.seconds);
        for (auto& g : R.generator_checks) generator_checks.push_back(g);
        bool vanish = R.rank.rank == 2;
        bool ok = vanish && R.mw && R.bsd.sha_rational && *R.bsd.sha_rational == 1 &&
                  std::fabs(R.bsd.sha_real - 1) <= 1e-3L && R.seconds <= 1800;
        note(r->label + " sha " + format_value(R.bsd.sha_real, 1e-12L) + (ok ? " ok" : " FAIL"));
        pass += ok;
        if (!ok) bad += " " + r->label + "=" + format_value(R.bsd.sha_real, 1e-6L);
    }
    std::ostringstream s;
    s << pass << "/" << r2.size() << " rank-2 curves with Sha_an = 1 (generators from search), slowest "
      << static_cast<int>(std::ceil(worst)) << " s" << (bad.empty() ? "" : ";" + bad);
    return {pass >= 10, s.str()};
}

Line criterion3(const std::vector<CurveRecord>& rs, long double max_sqrt_conductor)
{
    auto ts = load_twist_records(testing::fixture_dir() + "/figure2.jsonl");
    int tried = 0, pass = 0;
    std::string bad;
    TwistOptions opt;
    opt.precision = 1e-8L;
    for (auto& t : ts) {
        auto& r = find_record(rs, t.label);
        long double sq = static_cast<long double>(r.level) * t.D * t.D;
        if (sq > max_sqrt_conductor || !is_fundamental_discriminant(t.D)) continue;
        ++tried;
        auto row = figure2_row(t, r, opt);
        note(t.label + " sha_twist " + format_value(row.sha_real, row.sha_err) + " table " + std::to_string(t.sha_twist));
        bool ok = row.exact_match && row.odd_part_matches;
        pass += ok;
        if (!ok) bad += " " + t.label;
    }
    std::ostringstream s;
    s << pass << "/" << tried << " rows reproduced exactly (rows with N|D|^2 <= "
      << static_cast<long>(max_sqrt_conductor) << ")" << (bad.empty() ? "" : ";" + bad);
    return {pass >= 8, s.str()};
}

Line criterion4(const std::vector<CurveRecord>& rs)
{
    int pass = 0;
    double worst = 0;
    std::string bad;
    for (auto& r : rs) {
        auto t0 = Clock::now();
        TwistContext ctx(r.model(), r.bad_factor_map(), 0);
        std::vector<HeegnerDatum> H;
        try {
            H = find_heegner_discriminants(ctx, r.rank, 1);
        } catch (const Error& e) {
            note(r.label + ": " + e.what());
        }
        double t = since(t0);
        worst = std::max(worst, t);
        bool ok = !H.empty() && H.front().D == r.heegner.front().D && t <= 120;
        note(r.label + " D " + (H.empty() ? std::string("-") : std::to_string(H.front().D)) + " in " +
             std::to_string(t) + " s");
        pass += ok;
        if (!ok) bad += " " + r.label;
    }
    std::ostringstream s;
    s << pass << "/" << rs.size() << " curves return the table's D first, slowest " << static_cast<int>(std::ceil(worst))
      << " s" << (bad.empty() ? "" : ";" + bad);
    return {pass == static_cast<int>(rs.size()), s.str()};
}

Line criterion5(const std::vector<CurveRecord>& rs)
{
    int sets = 0, divides = 0;
    std::string bad;
    for (auto& r : rs) {
        auto S = reducible_superset(r.model(), QuadOrder{Int(r.rm_disc)}, 200);
        std::vector<std::string> extra;
        bool ok = galrep_agrees(r, S, &extra);
        sets += ok;
        if (!ok) bad += " " + r.label;
        for (auto& h : r.heegner)
            if (h.index) {
                bool d = index_divisibility_check(r.tamagawa_odd, static_cast<long>(odd_part(*h.index))).divides;
                divides += d;
                if (!d) bad += " " + r.label + "(index)";
                break;
            }
    }
    std::ostringstream s;
    s << sets << "/" << rs.size() << " reducible sets exact, " << divides << "/" << rs.size()
      << " Tamagawa parts divide the index" << (bad.empty() ? "" : ";" + bad);
    return {sets == static_cast<int>(rs.size()) && divides == static_cast<int>(rs.size()), s.str()};
}

Line criterion6(const std::vector<CurveRecord>& rs)
{
    auto m = find_record(rs, "X0_23").model();
    std::ostringstream s;
    bool ok = true;
    for (u64 p : {3ull, 5ull}) {
        auto G = testing::jacobian_group_oracle(m, p);
        ok &= G.check.ok;
        s << "F_" << p << ": " << G.elements << " classes, P(1) = " << G.expected
          << (G.check.ok ? ", group axioms hold" : ", " + G.check.detail) << (p == 3 ? "; " : "");
    }
    return {ok, s.str()};
}

Line criterion7(const std::vector<CurveRecord>& rs)
{
    long double worst_fe = 0, worst_h = 0, worst_p = 0;
    for (auto& r : rs) {
        u64 M = required_terms(r.level * 1.25L, 0, 1e-12L);
        auto ls = coefficients(r.model(), M, r.bad_factor_map(), 0);
        worst_fe = std::max(worst_fe, functional_equation_residual(ls, 1));
    }
    for (auto& g : generator_checks)
        worst_h = std::max(worst_h, std::fabs(g.doubled_quarter - g.height) / std::max(1.0L, g.height));
    for (const char* label : {"X0_23", "X0_67plus", "X0_357star"})
        for (long u : {2, 3}) worst_p = std::max(worst_p, testing::period_scaling_error(find_record(rs, label).model(), u));
    auto quintic = testing::root_to_infinity(find_record(rs, "X0_35_w7").model(), -1);
    for (long u : {2, 3}) worst_p = std::max(worst_p, testing::period_scaling_error(quintic, u));
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "max FE residual %.1Le over %zu L-series; max |h(2P)/4 - h(P)| %.1Le over %zu generators; "
                  "max period scaling error %.1Le",
                  worst_fe, rs.size(), worst_h, generator_checks.size(), worst_p);
    return {worst_fe < 1e-6L && worst_h < 1e-8L && !generator_checks.empty() && worst_p < 1e-9L, buf};
}

Line criterion8()
{
    std::vector<std::pair<std::string, testing::Check>> checks;
    checks.emplace_back("kronecker", testing::kronecker_multiplicativity(2024, 50000));
    checks.emplace_back("coefficients", testing::coefficient_multiplicativity(testing::model_x23(), {{23, {1, -2, 1}}}, 20000));
    checks.emplace_back("coefficients67", testing::coefficient_multiplicativity(testing::model_x67(), {{67, {1, 2, 1}}}, 20000));
    for (auto m : {testing::model_x23(), testing::model_x67(), testing::model_generic()})
        checks.emplace_back("weil:" + m.label, testing::weil_bounds(m, 5000));
    {
        auto im = make_imaginary(testing::model_x67());
        KummerSurface S(im);
        auto cls = search_points(im, 12);
        auto T = torsion_subgroup(im, cls);
        auto R = mordell_weil_lattice(S, cls, T, 2);
        testing::Check c;
        long double e = testing::regulator_unimodular_error(S, R.generators);
        if (!(e < 1e-6L)) c.fail("relative change " + std::to_string(static_cast<double>(e)));
        checks.emplace_back("regulator", c);
    }
    int pass = 0;
    std::string bad;
    for (auto& [name, c] : checks) {
        pass += c.ok;
        if (!c.ok) bad += " " + name + ": " + c.detail;
    }
    std::ostringstream s;
    s << pass << "/" << checks.size() << " property checks" << (bad.empty() ? "" : ";" + bad);
    return {pass == static_cast<int>(checks.size()), s.str()};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    double fig2_bound = 330000;
    app.add_option("--only", only, "Criteria to run (default: all)");
    app.add_option("--figure2-bound", fig2_bound, "Largest N D^2 attempted for figure 2 rows");
    app.add_flag("-v,--verbose", verbose);
    CLI11_PARSE(app, argc, argv);
    auto want = [&](int n) { return only.empty() || std::find(only.begin(), only.end(), n) != only.end(); };

    std::vector<CurveRecord> rs;
    try {
        rs = load_records(testing::fixture_dir() + "/figure1.jsonl");
    } catch (const std::exception& e) {
        std::cerr << e.what() << std::endl;
        return 2;
    }
    auto run = [&](int n, auto&& f) {
        if (!want(n)) return;
        auto t0 = Clock::now();
        Line l;
        try {
            l = f();
        } catch (const std::exception& e) {
            l = {false, std::string("exception: ") + e.what()};
        }
        results[n] = l;
        std::printf("criterion %d: %s  %s  [%.0f s]\n", n, l.ok ? "PASS" : "FAIL", l.detail.c_str(), since(t0));
        std::fflush(stdout);
    };
    run(1, [&] { return criterion1(rs); });
    run(2, [&] { return criterion2(rs); });
    run(3, [&] { return criterion3(rs, fig2_bound); });
    run(4, [&] { return criterion4(rs); });
    run(5, [&] { return criterion5(rs); });
    run(6, [&] { return criterion6(rs); });
    if (want(7) && generator_checks.empty() && !want(2)) run(2, [&] { return criterion2(rs); });
    run(7, [&] { return criterion7(rs); });
    run(8, [&] { return criterion8(); });
    bool all = true;
    for (auto& [n, l] : results) all &= l.ok;
    return all ? 0 : 1;
}
