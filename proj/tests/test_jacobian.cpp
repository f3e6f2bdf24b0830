#include <doctest.h>

#include "g2bsd/jacobian.hpp"
#include "support.hpp"

using namespace g2bsd;

TEST_CASE("exhaustive Jacobian over F_3 and F_5")
{
    auto m = testing::model_x23();
    for (u64 p : {3ull, 5ull}) {
        auto G = testing::jacobian_group_oracle(m, p);
        CHECK_MESSAGE(G.check.ok, "p=" << p << ": " << G.check.detail);
        CHECK(static_cast<i64>(G.elements) == G.expected);
        // library enumeration agrees
        auto J = jacobian_fp_shift(m, p, G.shift);
        CHECK(static_cast<i64>(enumerate_jacobian(J).size()) == G.expected);
    }
}

TEST_CASE("group order annihilates random divisors over F_p")
{
    auto m = testing::model_x67();
    for (u64 p : {101ull, 257ull, 1009ull}) {
        u64 c = 0;
        REQUIRE(imaginary_mod_p(m, p, c));
        auto J = jacobian_fp_shift(m, p, c);
        auto E = euler_factor(m, p);
        Int n(static_cast<long>(E.at_one()));
        int tried = 0;
        for (u64 x1 = 1; x1 < p && tried < 20; ++x1) {
            u64 fx = peval(J.k, J.f, x1), hx = peval(J.k, J.h, x1);
            // y^2 + h y - f: discriminant h^2 + 4 f
            u64 disc = addmod(mulmod(hx, hx, p), mulmod(4, fx, p), p);
            if (legendre(disc, p) != 1) continue;
            u64 s = sqrt_mod(disc, p);
            u64 y = mulmod(submod(s, hx, p), invmod(2, p), p);
            auto D = J.from_points(x1, y, x1, y);
            CHECK(J.is_valid(D));
            CHECK(J.is_identity(J.mul(n, D)));
            ++tried;
        }
    }
}

TEST_CASE("rational torsion")
{
    auto im = make_imaginary(testing::model_x23());
    auto cls = search_points(im, 10);
    auto T = torsion_subgroup(im, cls);
    CHECK(T.order == 11);
    CHECK(T.certified);
    auto T67 = torsion_subgroup(testing::model_x67());
    CHECK(T67.order == 1);
}

TEST_CASE("group law over Q on searched classes")
{
    auto im = make_imaginary(testing::model_x67());
    auto J = jacobian_q(im);
    auto cls = search_points(im, 8);
    REQUIRE(cls.size() > 5);
    for (size_t i = 1; i < 6; ++i)
        for (size_t j = 1; j < 6; ++j) {
            auto s = J.add(cls[i], cls[j]);
            CHECK(J.is_valid(s));
            CHECK(J.equal(s, J.add(cls[j], cls[i])));
            CHECK(J.is_identity(J.add(s, J.negate(s))));
            CHECK(J.equal(J.add(J.add(cls[i], cls[j]), cls[1]), J.add(cls[i], J.add(cls[j], cls[1]))));
        }
}
