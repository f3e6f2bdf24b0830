#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "g2bsd/data.hpp"
#include "g2bsd/galrep.hpp"

namespace g2bsd {

// Continued-fraction recognition; refuses when err exceeds half the gap to the next admissible rational.
std::optional<Rat> recognize_rational(long double x, long double err, long max_den = 1000);

struct ShaInputs {
    std::string label;
    int rank = 0;
    long double L_star = 0, L_err = 0;
    long double omega = 0, omega_err = 0;
    long double reg = 1, reg_err = 0;
    bool reg_saturation_caveat = false;
    long torsion = 1;
    long tamagawa_product = 1;
};

struct HypothesisChecklist {
    bool squarefree_N = false;
    int polarization_degree = 1;
    bool two_primary_trivial = false;
    std::map<u64, bool> irreducible;             // all ideals above p
    std::map<u64, bool> p_not_dividing_index;
    std::map<u64, bool> p_not_dividing_local_h1;
    std::map<u64, std::string> verdict;          // considered odd primes
    std::string other_primes;                    // verdict for every odd prime not listed
};

struct BSDReport {
    ShaInputs in;
    long torsion_dual = 1;
    long tamagawa_odd = 1;
    long double sha_real = 0, sha_err = 0;
    std::optional<Rat> sha_rational;
    HypothesisChecklist hypotheses;
    std::string verdict;
    std::vector<std::string> notes;
};

BSDReport sha_analytic(const ShaInputs& in);

// sha: the recognized analytic order if computed, else the ingested one is used.
HypothesisChecklist theorem_checklist(const CurveRecord& r, const ReducibleSuperset& S,
                                      std::optional<Rat> sha = std::nullopt);

struct Figure2Row {
    std::string label;
    i64 D = 0;
    long double L_value = 0, L_err = 0;
    long double omega = 0, omega_err = 0;
    long torsion = 1;
    long tamagawa_product = 1;
    long double sha_real = 0, sha_err = 0;
    std::optional<Rat> sha_rational;
    long expected = 0;
    bool odd_part_matches = false;
    bool exact_match = false;
};

// Assembles the rank-0 formula for A^D from computed pieces.
Figure2Row rank1_route(const std::string& label, i64 D, long double L_value, long double L_err,
                       long double omega, long double omega_err, long torsion, long tamagawa_product,
                       long expected);

}  // namespace g2bsd
