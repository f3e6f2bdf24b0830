#pragma once

#include <map>
#include <string>
#include <vector>

#include "g2bsd/curve.hpp"

namespace g2bsd {

struct ReducibleSuperset {
    std::vector<PrimeIdealO> ideals;
    std::vector<std::string> names;       // sorted by residue characteristic
    std::vector<std::string> ambiguous;   // split primes where the data cannot tell the ideals apart
    std::vector<std::string> fallback;    // ideals above p <= 7 that could not be certified irreducible
    std::vector<u64> test_primes;
    std::vector<i64> characters;          // fundamental discriminants, 1 = trivial
    std::map<i64, Int> gcds;              // per character, product of the surviving primes

    bool contains(const std::string& name) const;
};

// Quadratic characters of conductor dividing N, plus the trivial one.
std::vector<i64> characters_dividing(u64 N);

ReducibleSuperset reducible_superset(const CurveModel& model, const QuadOrder& O, u64 q_bound,
                                     const std::vector<i64>& characters);
ReducibleSuperset reducible_superset(const CurveModel& model, const QuadOrder& O, u64 q_bound = 200);

struct ImageWitness {
    u64 q;
    std::string kind;   // "exceptional", "dihedral:<d>" or "subfield"
};

struct ImageCertificate {
    PrimeIdealO ideal;
    bool maximal = false;
    std::vector<ImageWitness> witnesses;
    std::string note;
};

// Requires that P is not in `superset`.
ImageCertificate maximal_image_check(const CurveModel& model, const PrimeIdealO& P, u64 q_bound,
                                     const ReducibleSuperset* superset = nullptr);

// Frobenius data for good q <= bound: e1 = Tr a_q, n = Norm a_q.
struct FrobeniusDatum {
    u64 q;
    i64 e1, n;
};
std::vector<FrobeniusDatum> frobenius_data(const CurveModel& model, u64 bound);

}  // namespace g2bsd
