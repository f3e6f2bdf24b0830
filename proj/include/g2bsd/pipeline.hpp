#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "g2bsd/bsd.hpp"
#include "g2bsd/data.hpp"
#include "g2bsd/galrep.hpp"
#include "g2bsd/heegner.hpp"
#include "g2bsd/jacobian.hpp"
#include "g2bsd/kummer.hpp"
#include "g2bsd/lfunction.hpp"
#include "g2bsd/periods.hpp"

namespace g2bsd {

struct PipelineOptions {
    long double precision = 1e-10L;   // target for L-values and periods
    u64 q_bound = 200;
    u64 coeffs = 0;                   // 0: chosen from the precision
    int threads = 0;
    long height_bound = 20;
    int heegner_count = 1;
    bool run_heegner = true;
    bool run_galrep = true;
    bool check_bad_factors = false;   // re-derive the bad factors by residual search
    std::function<void(const std::string&)> progress;
};

struct GeneratorCheck {
    long double height = 0;
    long double height_err = 0;
    long double doubled_quarter = 0;  // h(2P) / 4
};

struct CurveReport {
    std::string label;
    u64 level = 0;
    int expected_rank = 0;
    std::vector<std::string> record_diagnostics;

    u64 terms = 0;
    long double fe_residual = 0;        // sign +1
    long double fe_residual_other = 0;  // sign -1
    std::optional<BadFactorChoice> bad_choice;
    bool bad_factors_agree = true;
    RankDecision rank;

    PeriodData periods;
    TorsionReport torsion;
    std::optional<MordellWeilReport> mw;
    std::vector<GeneratorCheck> generator_checks;
    std::string generator_source;       // "search" or "ingested"

    BSDReport bsd;

    std::optional<ReducibleSuperset> galrep;
    bool galrep_matches = false;
    std::vector<std::string> galrep_extra;   // characteristics outside the allowed set

    std::vector<HeegnerDatum> heegner;
    std::optional<DivisibilityVerdict> divisibility;
    std::optional<HypothesisChecklist> checklist;

    std::vector<std::string> failures;
    double seconds = 0;
    bool ok() const { return failures.empty(); }
};

CurveReport verify_curve(const CurveRecord& r, const PipelineOptions& opt);

// Galrep column comparison: table entries found exactly, extra characteristics limited
// to p <= 7 fallback or p | 2N.
bool galrep_agrees(const CurveRecord& r, const ReducibleSuperset& S, std::vector<std::string>* extra = nullptr);

struct TwistOptions {
    long double precision = 1e-8L;
    bool empirical = false;   // estimate the truncation error by comparing cutoffs
    int threads = 0;
    std::function<void(const std::string&)> progress;
};

Figure2Row figure2_row(const TwistRecord& t, const CurveRecord& base, const TwistOptions& opt);

// Report lines at a fixed number of digits.
std::string report_json(const CurveReport& R);
std::string report_json(const Figure2Row& row);
std::string format_value(long double x, long double err);

}  // namespace g2bsd
