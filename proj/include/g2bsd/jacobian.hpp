#pragma once

#include <functional>
#include <string>
#include <vector>

#include "g2bsd/curve.hpp"
#include "g2bsd/errors.hpp"
#include "g2bsd/field.hpp"

namespace g2bsd {

template <class K>
struct MumfordDivisor {
    Poly<K> a;  // monic, deg <= 2
    Poly<K> b;  // deg < deg a
};

// Genus-2 curve y^2 + h y = f over K in an imaginary model: deg f = 5 with
// deg h <= 2, or deg f = 6 with Y^2 + h_3 Y - f_6 irreducible over K.  Every class
// then has a unique reduced representative.
template <class K>
class Jacobian {
public:
    using D = MumfordDivisor<K>;
    K k;
    Poly<K> f, h;

    Jacobian(K field, Poly<K> f_, Poly<K> h_) : k(std::move(field)), f(std::move(f_)), h(std::move(h_))
    {
        trim(k, f);
        trim(k, h);
        if (deg<K>(f) != 5 && deg<K>(f) != 6) throw PreconditionViolation("genus-2 model needs deg f in {5, 6}");
        if (deg<K>(h) > 3 || (deg<K>(f) == 5 && deg<K>(h) > 2))
            throw PreconditionViolation("model is not imaginary");
    }

    D identity() const { return D{{k.one()}, {}}; }
    bool is_identity(const D& x) const { return x.a.size() == 1; }

    bool equal(const D& x, const D& y) const { return peq(k, x.a, y.a) && peq(k, x.b, y.b); }

    bool is_valid(const D& x) const
    {
        if (x.a.empty() || !k.eq(x.a.back(), k.one())) return false;
        if (deg<K>(x.b) >= deg<K>(x.a)) return false;
        if (deg<K>(x.a) > 2) return false;
        return pmod(k, rhs(x.b), x.a).empty();
    }

    D negate(const D& x) const
    {
        if (is_identity(x)) return x;
        return D{x.a, pmod(k, pneg(k, padd(k, h, x.b)), x.a)};
    }

    D add(const D& x, const D& y) const
    {
        if (is_identity(x)) return y;
        if (is_identity(y)) return x;
        Poly<K> e1, e2, c1, c2;
        Poly<K> d0 = pxgcd(k, x.a, y.a, e1, e2);
        Poly<K> d = d0, s1 = e1, s2 = e2, s3{};
        if (deg<K>(d0) > 0) {
            Poly<K> t = padd(k, padd(k, x.b, y.b), h);
            d = pxgcd(k, d0, t, c1, c2);
            s1 = pmul(k, c1, e1);
            s2 = pmul(k, c1, e2);
            s3 = c2;
        }
        Poly<K> a = pdiv_exact(k, pmul(k, x.a, y.a), pmul(k, d, d));
        Poly<K> num = padd(k, pmul(k, pmul(k, s1, x.a), y.b), pmul(k, pmul(k, s2, y.a), x.b));
        if (!s3.empty()) num = padd(k, num, pmul(k, s3, padd(k, pmul(k, x.b, y.b), f)));
        Poly<K> b = pmod(k, pdiv_exact(k, num, d), a);
        return reduce(D{pmonic(k, a), b});
    }

    D dbl(const D& x) const { return add(x, x); }

    D mul(Int n, const D& x) const
    {
        D base = n < 0 ? negate(x) : x;
        if (n < 0) n = -n;
        D r = identity();
        while (n > 0) {
            if (mpz_odd_p(n.get_mpz_t())) r = add(r, base);
            n >>= 1;
            if (n > 0) base = dbl(base);
        }
        return r;
    }

    D reduce(D x) const
    {
        x.b = pmod(k, x.b, x.a);
        while (deg<K>(x.a) > 2) {
            Poly<K> a2 = pdiv_exact(k, rhs_neg(x.b), x.a);
            a2 = pmonic(k, a2);
            Poly<K> b2 = pmod(k, pneg(k, padd(k, h, x.b)), a2);
            x = D{a2, b2};
        }
        return x;
    }

    // Divisor class of P + Q - D_inf for affine points (x1, y1), (x2, y2).
    D from_points(const typename K::E& x1, const typename K::E& y1,
                  const typename K::E& x2, const typename K::E& y2) const
    {
        D p1 = point_divisor(x1, y1), p2 = point_divisor(x2, y2);
        return add_weight_one(p1, p2);
    }

    // f - h b - b^2
    Poly<K> rhs_neg(const Poly<K>& b) const { return psub(k, psub(k, f, pmul(k, h, b)), pmul(k, b, b)); }
    // b^2 + h b - f
    Poly<K> rhs(const Poly<K>& b) const { return pneg(k, rhs_neg(b)); }

    bool on_curve(const typename K::E& x, const typename K::E& y) const
    {
        auto l = k.add(k.mul(y, y), k.mul(peval(k, h, x), y));
        return k.eq(l, peval(k, f, x));
    }

private:
    D point_divisor(const typename K::E& x0, const typename K::E& y0) const
    {
        if (!on_curve(x0, y0)) throw PreconditionViolation("point not on curve");
        return D{{k.neg(x0), k.one()}, {y0}};
    }

    // Sum of two weight-one semi-reduced divisors, as a weight-two divisor minus D_inf.
    D add_weight_one(const D& p, const D& q) const
    {
        const auto& x1 = p.a[0];
        const auto& x2 = q.a[0];
        if (!k.eq(x1, x2)) {
            // b is the line through both points
            auto y1 = p.b.empty() ? k.zero() : p.b[0];
            auto y2 = q.b.empty() ? k.zero() : q.b[0];
            auto X1 = k.neg(x1), X2 = k.neg(x2);
            auto slope = k.mul(k.sub(y2, y1), k.inv(k.sub(X2, X1)));
            Poly<K> b{k.sub(y1, k.mul(slope, X1)), slope};
            trim(k, b);
            Poly<K> a = pmul(k, p.a, q.a);
            return reduce(D{a, b});
        }
        auto y1 = p.b.empty() ? k.zero() : p.b[0];
        auto y2 = q.b.empty() ? k.zero() : q.b[0];
        auto X = k.neg(x1);
        auto hx = peval(k, h, X);
        if (!k.eq(y1, y2)) return identity();  // opposite points
        auto denom = k.add(k.add(y1, y1), hx);
        if (k.is_zero(denom)) return identity();  // Weierstrass point
        auto num = k.sub(peval(k, pderiv(k, f), X), k.mul(peval(k, pderiv(k, h), X), y1));
        auto slope = k.mul(num, k.inv(denom));
        Poly<K> b{k.sub(y1, k.mul(slope, X)), slope};
        trim(k, b);
        Poly<K> a = pmul(k, p.a, q.a);
        return reduce(D{a, b});
    }
};

// Transformed model via x = c + 1/t, y = Y / t^3.
struct ImaginaryModel {
    CurveModel original;
    Int c;
    std::vector<Int> f, h, F;  // in t; F = h^2 + 4 f
};

// Picks the smallest |c| making the model imaginary over Q (F(c) not a rational square).
ImaginaryModel make_imaginary(const CurveModel& model);
// Same with a fixed shift, for a prime field: returns false if not imaginary there.
bool imaginary_mod_p(const CurveModel& model, u64 p, u64& c_out);

Jacobian<QField> jacobian_q(const ImaginaryModel& M);
Jacobian<FpField> jacobian_fp(const ImaginaryModel& M, u64 p);
Jacobian<FpField> jacobian_fp_shift(const CurveModel& model, u64 p, u64 c);

using DivQ = MumfordDivisor<QField>;
using DivP = MumfordDivisor<FpField>;

DivP reduce_divisor(const DivQ& D, u64 p);

struct RationalPoint {
    Rat x;        // original model; ignored when at_infinity
    Rat y;
    bool at_infinity = false;
    Rat t, Y;     // coordinates on the imaginary model
};

std::vector<RationalPoint> search_rational_points(const ImaginaryModel& M, long height_bound);

// All classes P + Q - D_inf from pairs of searched points, plus
// two-torsion from rational quadratic factors; deterministic order, identity first.
std::vector<DivQ> search_points(const ImaginaryModel& M, long height_bound);
// Classes supported on a pair of conjugate quadratic points, a = l2 t^2 + l1 t + l0 with |l_i| <= bound.
std::vector<DivQ> search_quadratic_divisors(const ImaginaryModel& M, long coeff_bound);

struct TorsionReport {
    long order = 1;
    std::vector<long> structure;
    bool certified = false;
    Int bound = 0;                   // gcd of P_p(1)
    std::vector<u64> primes_used;
    std::vector<DivQ> elements;      // the exhibited subgroup
};

TorsionReport torsion_subgroup(const ImaginaryModel& M, const std::vector<DivQ>& candidates, int num_primes = 12);
TorsionReport torsion_subgroup(const CurveModel& model);

// Order of D in J(F_p) via the known group order n.
Int order_in_group(const Jacobian<FpField>& J, const DivP& D, const Int& n);
std::string divisor_key(const DivQ& D);

// All reduced divisors over F_p; requires an imaginary model over F_p.
std::vector<DivP> enumerate_jacobian(const Jacobian<FpField>& J);

}  // namespace g2bsd
