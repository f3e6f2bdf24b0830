#pragma once

#include <string>
#include <vector>

#include "g2bsd/jacobian.hpp"
#include "g2bsd/kummer.hpp"
#include "g2bsd/lfunction.hpp"

namespace g2bsd::testing {

struct Check {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why)
    {
        if (ok) detail = why;
        ok = false;
    }
};

std::string fixture_dir();

// Curves used when no fixture is wanted: X_0(23), X_0(67)^+ and a non-modular curve.
CurveModel model_x23();
CurveModel model_x67();
CurveModel model_generic();

// kronecker(D, mn) = kronecker(D, m) kronecker(D, n) and kronecker(D1 D2, n) for odd n.
Check kronecker_multiplicativity(unsigned seed, int trials);
Check coefficient_multiplicativity(const CurveModel& model, const BadFactorMap& bad, u64 M);
Check weil_bounds(const CurveModel& model, u64 bound);
Check frobenius_against_bruteforce(const CurveModel& model, u64 bound);

// Exhaustive Jacobian over F_p: count equals P(1) from brute-force point counts,
// and the addition table is an abelian group.
struct GroupOracle {
    Check check;
    u64 elements = 0;
    i64 expected = 0;
    u64 shift = 0;
};
GroupOracle jacobian_group_oracle(const CurveModel& model, u64 p);

// Model with r moved to infinity, for an integer root r of the sextic.
CurveModel root_to_infinity(const CurveModel& model, long r);

// Omega' / Omega for (x, y) -> (u^2 x, u^5 y), against u^-4; sextic models are
// additionally rescaled by y -> u y and compared against u^-6.
long double period_scaling_error(const CurveModel& model, long u);

// Regulators before and after unimodular changes of basis, relative error.
long double regulator_unimodular_error(const KummerSurface& S, const std::vector<DivQ>& gens);

}  // namespace g2bsd::testing
