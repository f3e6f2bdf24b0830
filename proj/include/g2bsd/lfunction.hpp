#pragma once

#include <map>
#include <string>
#include <vector>

#include "g2bsd/curve.hpp"

namespace g2bsd {

using BadFactorMap = std::map<u64, std::vector<i64>>;

struct LSeries {
    std::string label;
    std::vector<i64> a;       // a[0] unused, a[1] = 1
    long double sqrt_conductor = 0;
    int sign = 1;
    BadFactorMap bad;         // local factors at primes dividing the conductor
    i64 twist = 1;            // D for a quadratic twist
    u64 size() const { return a.empty() ? 0 : a.size() - 1; }
};

struct LValue {
    int order = 0;
    long double value = 0;
    long double error = 0;
    long double scale = 0;    // size of the partial sums
    u64 terms = 0;
};

// Frobenius data e1 for all good p <= M, and e2 for p^2 <= M.
struct LocalTraces {
    std::vector<u64> primes;
    std::vector<i64> e1;
    std::map<u64, i64> e2;
};

LocalTraces local_traces(const CurveModel& model, u64 M, int threads = 0);

// a_n for n <= M from the Euler product.
LSeries coefficients(const CurveModel& model, u64 M, const BadFactorMap& bad, int threads = 0);
LSeries coefficients_from_traces(const CurveModel& model, const LocalTraces& tr, u64 M, const BadFactorMap& bad);

// Twist of the L-series of A by the Kronecker character of D (gcd(D, N) = 1).
LSeries twist_series(const LSeries& base, i64 D);

// Terms needed so that the AFE tail for the order-k derivative is below target (relative to 1).
u64 required_terms(long double sqrt_conductor, int k, long double target);

// L^{(k)}(A, 1) via the smoothed functional equation split at T.
LValue evaluate(const LSeries& ls, int k, long double T = 1.0L);

// Completed function Lambda(s) for real s, split at T.
long double completed(const LSeries& ls, long double s, long double T, int sign);

long double functional_equation_residual(const LSeries& ls, int sign, long double T = 1.25L);
long double functional_equation_residual(const LSeries& ls);

struct RankDecision {
    int rank = -1;            // -1: >= 3, unsupported
    LValue values[3];
    long double scale = 0;
};

RankDecision analytic_rank(const LSeries& ls, long double threshold = 1e-3L);

// Picks the bad Euler factors by minimising the functional-equation residual.
struct BadFactorChoice {
    BadFactorMap factors;
    long double residual = 0;
    long double runner_up = 0;
};
BadFactorChoice select_bad_factors(const CurveModel& model, int threads = 0);

// Binary coefficient cache (directory from G2BSD_CACHE_DIR); returns false on miss.
bool cache_load(const std::string& key, u64 M, std::vector<i64>& a);
void cache_store(const std::string& key, const std::vector<i64>& a);

}  // namespace g2bsd
