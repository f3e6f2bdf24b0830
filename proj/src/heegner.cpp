#include "g2bsd/heegner.hpp"

#include <cmath>
#include <numeric>

#include "g2bsd/errors.hpp"

namespace g2bsd {

bool split_condition(u64 N, i64 D)
{
    for (auto& [p, e] : factor(N))
        if (kronecker(D, p) != 1) return false;
    return true;
}

TwistContext::TwistContext(CurveModel model, BadFactorMap bad, int threads)
    : model_(std::move(model)), bad_(std::move(bad)), threads_(threads)
{
}

const LSeries& TwistContext::base(u64 M)
{
    if (base_.size() < M) {
        // grow geometrically so that repeated requests stay cheap
        u64 target = std::max<u64>(M, base_.size() + base_.size() / 2);
        base_ = coefficients(model_, target, bad_, threads_);
    }
    return base_;
}

LSeries TwistContext::twist(i64 D, u64 M)
{
    const LSeries& b = base(M);
    LSeries cut = b;
    cut.a.resize(M + 1);
    return twist_series(cut, D);
}

HeegnerDatum test_twist(TwistContext& ctx, int rank, i64 D, const HeegnerOptions& opt)
{
    HeegnerDatum H;
    H.D = D;
    H.split_ok = split_condition(ctx.model().level, D);
    if (!H.split_ok) return H;
    if (rank != 0 && rank != 2) throw PreconditionViolation("analytic rank of A must be 0 or 2");
    // with all p | N split, the twisted forms have sign opposite to those of A
    const int k = rank == 2 ? 0 : 2;
    H.twist_order = k;
    const long double sqrtQ = static_cast<long double>(ctx.model().level) * static_cast<long double>(D) * D;
    const long double f = 4 * std::acos(-1.0L) * std::acos(-1.0L) / sqrtQ;
    const u64 M_rig = required_terms(sqrtQ, k, opt.threshold);
    // Truncation error is estimated by comparing cutoffs T = 1 and T = 1.5; the bound only caps M.
    u64 M = std::min<u64>(M_rig, static_cast<u64>(0.3L * sqrtQ) + 200);
    for (;;) {
        if (opt.progress) opt.progress("D = " + std::to_string(D) + ": " + std::to_string(M) + " terms");
        LSeries t = ctx.twist(D, M);
        t.sign = 1;
        LValue v = evaluate(t, k, 1.0L);
        LValue w = evaluate(t, k, 1.5L);
        long double scale = std::max(v.scale, f);
        long double err = std::max(std::fabs(v.value - w.value), 1e-12L * scale);
        if (M == M_rig) err = std::min(err, v.error);
        H.twist_value = v.value;
        H.twist_error = err;
        H.twist_terms = M;
        if (std::fabs(v.value) > 10 * err) {
            H.rank_condition_ok = std::fabs(v.value) > opt.threshold * scale;
            return H;
        }
        if (err < opt.threshold * f || M == M_rig) return H;
        M = std::min<u64>(M_rig, 2 * M);
    }
}

std::vector<HeegnerDatum> find_heegner_discriminants(TwistContext& ctx, int rank, int how_many,
                                                     const HeegnerOptions& opt)
{
    std::vector<HeegnerDatum> out;
    const u64 N = ctx.model().level;
    for (i64 D = -3; D >= -opt.max_abs_D; --D) {
        if (!is_fundamental_discriminant(D)) continue;
        if (opt.odd_only && (D == -3 || D % 4 == 0)) continue;
        if (std::gcd(static_cast<u64>(-D), N) != 1 || !split_condition(N, D)) continue;
        auto H = test_twist(ctx, rank, D, opt);
        if (!H.rank_condition_ok) continue;
        out.push_back(H);
        if (static_cast<int>(out.size()) == how_many) return out;
    }
    throw SearchExhausted("fewer than " + std::to_string(how_many) + " Heegner discriminants with |D| <= " +
                          std::to_string(opt.max_abs_D));
}

DivisibilityVerdict index_divisibility_check(long c_odd, long I_odd)
{
    if (c_odd <= 0 || I_odd <= 0) throw PreconditionViolation("odd parts must be positive");
    DivisibilityVerdict v;
    v.divides = I_odd % c_odd == 0;
    v.quotient = v.divides ? I_odd / c_odd : 0;
    return v;
}

}  // namespace g2bsd
