#pragma once

#include <string>
#include <vector>

#include "g2bsd/numbers.hpp"

namespace g2bsd {

// y^2 + h(x) y = f(x) over Z, deg f <= 6, deg h <= 3.
struct CurveModel {
    std::vector<Int> f;
    std::vector<Int> h;
    std::string label;
    u64 level = 0;

    CurveModel() = default;
    CurveModel(std::vector<Int> f_, std::vector<Int> h_, std::string label_ = {}, u64 N = 0);
    static CurveModel from_ints(const std::vector<long>& f, const std::vector<long>& h,
                                std::string label = {}, u64 N = 0);

    // F = h^2 + 4 f, padded to 7 coefficients.
    std::vector<Int> sextic() const;
    // 2^-12 * disc of F as a binary sextic.
    Int discriminant() const;
};

Int poly_resultant(const std::vector<Int>& a, const std::vector<Int>& b);
// Discriminant of F regarded as a binary form of degree n.
Int binary_form_discriminant(const std::vector<Int>& F, int n);

struct CurveFp {
    u64 p;
    std::vector<u64> f, h;   // padded to 7 and 4 coefficients
    std::vector<u64> F;      // h^2 + 4f, padded to 7
};

CurveFp reduce_mod_p(const CurveModel& model, u64 p);

// #X(F_{p^k}), k = 1 or 2.
u64 count_points(const CurveFp& C, int k);

struct EulerFactor {
    u64 p = 0;
    i64 e1 = 0, e2 = 0;
    bool good = true;
    // P(T) coefficients, constant term first.
    std::vector<i64> poly;

    static EulerFactor good_factor(u64 p, i64 e1, i64 e2);
    static EulerFactor bad_factor(u64 p, std::vector<i64> poly);
    i64 at_one() const;
};

EulerFactor euler_factor(const CurveModel& model, u64 p);
// Euler factor from an F_p count only, e2 supplied (used by galrep/L-series paths).
EulerFactor euler_factor_from_counts(u64 p, u64 N1, u64 N2);

CurveModel quadratic_twist(const CurveModel& model, i64 D);

std::vector<std::vector<i64>> bad_euler_factor_candidates(const CurveModel& model, u64 p);

std::vector<u64> bad_primes(const CurveModel& model);

}  // namespace g2bsd
