#include "g2bsd/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "json.hpp"

#include "g2bsd/errors.hpp"

namespace g2bsd {

namespace {

using ordered_json = nlohmann::ordered_json;

void say(const PipelineOptions& opt, const std::string& label, const std::string& msg)
{
    if (opt.progress) opt.progress(label + ": " + msg);
}

u64 characteristic(const std::string& name)
{
    std::string digits;
    for (char c : name) {
        if (c >= '0' && c <= '9') digits += c;
        else if (!digits.empty()) break;
    }
    return digits.empty() ? 0 : std::stoull(digits);
}

std::string rat_str(const std::optional<Rat>& q) { return q ? q->get_str() : std::string("null"); }

}  // namespace

std::string format_value(long double x, long double err)
{
    int decimals = 12;
    if (err > 0 && std::isfinite(err)) decimals = static_cast<int>(std::ceil(-std::log10(err)));
    decimals = std::clamp(decimals, 0, 15);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Lf", decimals, x);
    return buf;
}

bool galrep_agrees(const CurveRecord& r, const ReducibleSuperset& S, std::vector<std::string>* extra)
{
    std::set<std::string> found(S.names.begin(), S.names.end());
    std::set<std::string> table(r.reducible.begin(), r.reducible.end());
    bool ok = found == table;
    std::set<u64> table_chars;
    for (auto& n : table) table_chars.insert(characteristic(n));
    for (auto* list : {&S.names, &S.ambiguous, &S.fallback})
        for (auto& n : *list) {
            u64 p = characteristic(n);
            if (p == 2 || table_chars.count(p) || p <= 7 || r.level % p == 0) continue;
            ok = false;
            if (extra) extra->push_back(n);
        }
    return ok;
}

CurveReport verify_curve(const CurveRecord& r, const PipelineOptions& opt)
{
    auto t0 = std::chrono::steady_clock::now();
    CurveReport R;
    R.label = r.label;
    R.level = r.level;
    R.expected_rank = r.rank;
    R.record_diagnostics = crosscheck_record(r);
    for (auto& d : R.record_diagnostics) R.failures.push_back("record: " + d);
    const CurveModel model = r.model();
    BadFactorMap bad = r.bad_factor_map();

    if (opt.check_bad_factors) {
        say(opt, r.label, "selecting bad Euler factors");
        R.bad_choice = select_bad_factors(model, opt.threads);
        R.bad_factors_agree = R.bad_choice->factors == bad;
        if (!R.bad_factors_agree) R.failures.push_back("bad Euler factors disagree with the record");
    }

    // L-series
    const long double sqQ = static_cast<long double>(r.level);
    u64 M = opt.coeffs ? opt.coeffs : required_terms(sqQ * 1.25L, 2, opt.precision);
    say(opt, r.label, std::to_string(M) + " coefficients");
    LSeries ls = coefficients(model, M, bad, opt.threads);
    R.terms = M;
    R.fe_residual = functional_equation_residual(ls, 1);
    R.fe_residual_other = functional_equation_residual(ls, -1);
    ls.sign = 1;
    R.rank = analytic_rank(ls);
    if (R.rank.rank != r.rank)
        R.failures.push_back("analytic rank " + std::to_string(R.rank.rank) + " differs from " +
                             std::to_string(r.rank));

    // periods and torsion
    say(opt, r.label, "periods");
    R.periods = real_volume(model, opt.precision * 1e-3L);
    ImaginaryModel im = make_imaginary(model);
    say(opt, r.label, "point search");
    auto classes = search_points(im, opt.height_bound);
    R.torsion = torsion_subgroup(im, classes);
    if (!R.torsion.certified) R.failures.push_back("torsion order not certified");

    ShaInputs in;
    in.label = r.label;
    in.rank = R.rank.rank;
    in.omega = R.periods.omega;
    in.omega_err = R.periods.error;
    in.torsion = R.torsion.order;
    in.tamagawa_product = r.tamagawa_product();
    if (R.rank.rank >= 0) {
        const LValue& v = R.rank.values[R.rank.rank];
        long double fact = R.rank.rank == 2 ? 2 : 1;
        in.L_star = v.value / fact;
        in.L_err = v.error / fact;
    }

    if (R.rank.rank == 2) {
        say(opt, r.label, "Kummer surface");
        KummerSurface S(im);
        say(opt, r.label, "Mordell-Weil lattice from " + std::to_string(classes.size()) + " classes");
        try {
            R.mw = mordell_weil_lattice(S, classes, R.torsion, 2);
            R.generator_source = "search";
            in.reg = R.mw->reg.value;
            in.reg_err = R.mw->reg.error;
            in.reg_saturation_caveat = R.mw->saturation_heuristic;
            auto J = jacobian_q(im);
            for (auto& P : R.mw->generators) {
                GeneratorCheck g;
                auto h = S.canonical_height(P);
                g.height = h.value;
                g.height_err = h.error_bound;
                g.doubled_quarter = S.canonical_height(J.dbl(P)).value / 4;
                R.generator_checks.push_back(g);
            }
        } catch (const Error& e) {
            R.failures.push_back(std::string("generators: ") + e.what());
        }
    }

    if (R.rank.rank == 0 || R.mw) {
        try {
            R.bsd = sha_analytic(in);
            if (R.bsd.verdict != "consistent with 1") R.failures.push_back("Sha_an verdict: " + R.bsd.verdict);
        } catch (const Error& e) {
            R.failures.push_back(e.what());
        }
    }

    if (opt.run_galrep) {
        say(opt, r.label, "reducible superset");
        QuadOrder O{Int(r.rm_disc)};
        R.galrep = reducible_superset(model, O, opt.q_bound);
        R.galrep_matches = galrep_agrees(r, *R.galrep, &R.galrep_extra);
        if (!R.galrep_matches) R.failures.push_back("reducible superset differs from the record");
        try {
            R.checklist = theorem_checklist(r, *R.galrep, R.bsd.sha_rational);
        } catch (const Error& e) {
            R.failures.push_back(e.what());
        }
    }

    if (opt.run_heegner && (r.rank == 0 || r.rank == 2)) {
        say(opt, r.label, "Heegner discriminants");
        TwistContext ctx(model, bad, opt.threads);
        HeegnerOptions ho;
        ho.threads = opt.threads;
        ho.progress = opt.progress;
        try {
            R.heegner = find_heegner_discriminants(ctx, r.rank, opt.heegner_count, ho);
            if (!r.heegner.empty()) {
                bool listed = false;
                for (auto& h : R.heegner) listed |= h.D == r.heegner.front().D;
                if (!listed) R.failures.push_back("Heegner discriminant differs from the record");
            }
        } catch (const Error& e) {
            R.failures.push_back(e.what());
        }
        for (auto& h : r.heegner)
            if (h.index) {
                R.divisibility = index_divisibility_check(r.tamagawa_odd, static_cast<long>(odd_part(*h.index)));
                if (!R.divisibility->divides) R.failures.push_back("Tamagawa product does not divide the index");
                break;
            }
    }

    R.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return R;
}

Figure2Row figure2_row(const TwistRecord& t, const CurveRecord& base, const TwistOptions& opt)
{
    if (std::gcd(base.level, static_cast<u64>(std::llabs(t.D))) != 1)
        throw PreconditionViolation("D must be coprime to N");
    const CurveModel model = base.model();
    const long double sq = static_cast<long double>(base.level) * t.D * t.D;
    long double value = 0, err = 0;
    if (!opt.empirical) {
        u64 M = required_terms(sq, 0, opt.precision);
        if (opt.progress) opt.progress(t.label + ": " + std::to_string(M) + " twisted terms");
        auto L = twist_series(coefficients(model, M, base.bad_factor_map(), opt.threads), t.D);
        L.sign = 1;
        auto v = evaluate(L, 0, 1.0L);
        value = v.value;
        err = v.error;
    } else {
        TwistContext ctx(model, base.bad_factor_map(), opt.threads);
        const u64 M_rig = required_terms(sq, 0, opt.precision);
        for (u64 M = std::min<u64>(M_rig, static_cast<u64>(0.5L * sq) + 200);; M = std::min(M_rig, 2 * M)) {
            if (opt.progress) opt.progress(t.label + ": " + std::to_string(M) + " twisted terms");
            auto L = ctx.twist(t.D, M);
            L.sign = 1;
            auto v = evaluate(L, 0, 1.0L);
            auto w = evaluate(L, 0, 1.5L);
            value = v.value;
            err = std::fabs(v.value - w.value);
            if (M == M_rig) err = std::min(err, v.error);
            if (err < opt.precision * std::fabs(value) || M == M_rig) break;
        }
    }
    auto tw = quadratic_twist(model, t.D);
    auto P = real_volume(tw);
    auto T = torsion_subgroup(tw);
    return rank1_route(t.label, t.D, value, err, P.omega, P.error, T.order, t.tamagawa_product(), t.sha_twist);
}

std::string report_json(const CurveReport& R)
{
    ordered_json j;
    j["label"] = R.label;
    j["level"] = R.level;
    j["rank"] = R.rank.rank;
    j["terms"] = R.terms;
    j["fe_residual"] = format_value(R.fe_residual, 1e-15L);
    if (R.rank.rank >= 0) {
        const auto& v = R.rank.values[R.rank.rank];
        j["leading_value"] = format_value(v.value, v.error);
        j["leading_error"] = format_value(v.error, 1e-15L);
    }
    j["omega"] = format_value(R.periods.omega, R.periods.error);
    j["torsion"] = R.torsion.order;
    j["tamagawa_product"] = R.bsd.in.tamagawa_product;
    if (R.mw) {
        j["regulator"] = format_value(R.mw->reg.value, R.mw->reg.error);
        j["generators"] = R.generator_source;
    }
    j["sha_an_real"] = format_value(R.bsd.sha_real, R.bsd.sha_err);
    j["sha_an_rational"] = rat_str(R.bsd.sha_rational);
    j["verdict"] = R.bsd.verdict;
    if (R.galrep) {
        ordered_json g = ordered_json::array();
        for (auto& n : R.galrep->names) g.push_back(n);
        j["reducible"] = g;
        ordered_json f = ordered_json::array();
        for (auto& n : R.galrep->fallback) f.push_back(n);
        j["reducible_fallback"] = f;
    }
    if (!R.heegner.empty()) {
        ordered_json h = ordered_json::array();
        for (auto& d : R.heegner) h.push_back(d.D);
        j["heegner"] = h;
    }
    if (R.divisibility) j["tamagawa_divides_index"] = R.divisibility->divides;
    if (R.checklist) {
        ordered_json c;
        c["squarefree_N"] = R.checklist->squarefree_N;
        c["two_primary_trivial"] = R.checklist->two_primary_trivial;
        for (auto& [p, v] : R.checklist->verdict) c[std::to_string(p)] = v;
        c["other"] = R.checklist->other_primes;
        j["checklist"] = c;
    }
    ordered_json fl = ordered_json::array();
    for (auto& f : R.failures) fl.push_back(f);
    j["failures"] = fl;
    return j.dump();
}

std::string report_json(const Figure2Row& row)
{
    ordered_json j;
    j["label"] = row.label;
    j["D"] = row.D;
    j["L_value"] = format_value(row.L_value, row.L_err);
    j["omega"] = format_value(row.omega, row.omega_err);
    j["torsion"] = row.torsion;
    j["tamagawa_product"] = row.tamagawa_product;
    j["sha_twist_real"] = format_value(row.sha_real, row.sha_err);
    j["sha_twist_rational"] = rat_str(row.sha_rational);
    j["expected"] = row.expected;
    j["exact_match"] = row.exact_match;
    j["odd_part_matches"] = row.odd_part_matches;
    return j.dump();
}

}  // namespace g2bsd
