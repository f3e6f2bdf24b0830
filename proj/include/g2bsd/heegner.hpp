#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "g2bsd/lfunction.hpp"

namespace g2bsd {

struct HeegnerDatum {
    i64 D = 0;
    bool split_ok = false;
    bool rank_condition_ok = false;
    int twist_order = 0;            // derivative order tested on the twist
    long double twist_value = 0;
    long double twist_error = 0;  // empirical: value at T = 1 minus value at T = 1.5
    u64 twist_terms = 0;
    std::optional<long> index_odd_part;  // ingested
};

struct HeegnerOptions {
    bool odd_only = true;           // D = 1 mod 4 and D < -3
    i64 max_abs_D = 1000;
    int threads = 0;
    long double threshold = 1e-3L;
    std::function<void(const std::string&)> progress;
};

bool split_condition(u64 N, i64 D);

// The base series is extended on demand; rank is the analytic rank of A (0 or 2).
class TwistContext {
public:
    TwistContext(CurveModel model, BadFactorMap bad, int threads = 0);
    const LSeries& base(u64 M);
    LSeries twist(i64 D, u64 M);
    const CurveModel& model() const { return model_; }

private:
    CurveModel model_;
    BadFactorMap bad_;
    int threads_;
    LSeries base_;
};

// Decides whether L^{(k)}(A^D, 1) is nonzero, raising the term count as needed.
HeegnerDatum test_twist(TwistContext& ctx, int rank, i64 D, const HeegnerOptions& opt);

std::vector<HeegnerDatum> find_heegner_discriminants(TwistContext& ctx, int rank, int how_many,
                                                     const HeegnerOptions& opt = {});

struct DivisibilityVerdict {
    bool divides = false;
    long quotient = 0;
};
DivisibilityVerdict index_divisibility_check(long c_odd, long I_odd);

}  // namespace g2bsd
