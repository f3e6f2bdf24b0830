#include <doctest.h>

#include "g2bsd/errors.hpp"
#include "g2bsd/numbers.hpp"
#include "support.hpp"

using namespace g2bsd;

TEST_CASE("kronecker is multiplicative in both arguments")
{
    auto c = testing::kronecker_multiplicativity(7, 20000);
    CHECK_MESSAGE(c.ok, c.detail);
}

TEST_CASE("legendre agrees with Euler's criterion")
{
    for (u64 p : primes_up_to(400)) {
        if (p == 2) continue;
        for (u64 a = 0; a < p; ++a) {
            u64 e = powmod(a, (p - 1) / 2, p);
            int expect = a == 0 ? 0 : (e == 1 ? 1 : -1);
            REQUIRE(legendre(a, p) == expect);
        }
    }
}

TEST_CASE("kronecker at 2 and at -1")
{
    CHECK(kronecker(-7, 2) == 1);
    CHECK(kronecker(5, 2) == -1);
    CHECK(kronecker(-4, 2) == 0);
    CHECK(kronecker(-1, 3) == -1);
    CHECK(kronecker(-3, 1) == 1);
}

TEST_CASE("sqrt_mod returns a root")
{
    for (u64 p : {3ull, 13ull, 17ull, 1000003ull, 2305843009213693951ull}) {
        for (u64 a = 1; a < 60; ++a) {
            if (legendre(a % p, p) != 1) continue;
            u64 r = sqrt_mod(a % p, p);
            CHECK(mulmod(r, r, p) == a % p);
        }
    }
}

TEST_CASE("factor and squarefree")
{
    auto f = factor(u64{357});
    REQUIRE(f.size() == 3);
    CHECK(f[0].first == 3);
    CHECK(f[2].first == 17);
    CHECK(is_squarefree(165));
    CHECK_FALSE(is_squarefree(147));
    CHECK(odd_part(96) == 3);
    CHECK(is_prime(2305843009213693951ull));
    CHECK_FALSE(is_prime(2305843009213693953ull));
}

TEST_CASE("fundamental discriminants")
{
    CHECK(is_fundamental_discriminant(-7));
    CHECK(is_fundamental_discriminant(-4));
    CHECK(is_fundamental_discriminant(-8));
    CHECK(is_fundamental_discriminant(-131));
    CHECK_FALSE(is_fundamental_discriminant(-12 * 4));
    CHECK_FALSE(is_fundamental_discriminant(-9));
    CHECK_FALSE(is_fundamental_discriminant(-5));
    auto v = fundamental_discriminants_below(20);
    std::vector<i64> expect{-3, -4, -7, -8, -11, -15, -19, -20};
    CHECK(v == expect);
    CHECK_THROWS_AS(FundamentalDiscriminant(-12 * 9), PreconditionViolation);
}

TEST_CASE("splitting in the maximal order")
{
    QuadOrder O5{Int(5)}, O8{Int(8)};
    auto s11 = splitting_type(O5, 11);
    REQUIRE(s11.size() == 2);
    CHECK(s11[0].type == Splitting::split);
    CHECK(ideal_name(s11[0]) == "11_1");
    auto s5 = splitting_type(O5, 5);
    REQUIRE(s5.size() == 1);
    CHECK(s5[0].type == Splitting::ramified);
    CHECK(ideal_name(s5[0]) == "sqrt(5)");
    auto s3 = splitting_type(O8, 3);
    REQUIRE(s3.size() == 1);
    CHECK(s3[0].type == Splitting::inert);
    CHECK(s3[0].residue_size == 9);
    // norm is multiplicative
    OElement a{Int(3), Int(-2)}, b{Int(-1), Int(7)};
    for (auto* O : {&O5, &O8}) CHECK(o_norm(*O, o_mul(*O, a, b)) == o_norm(*O, a) * o_norm(*O, b));
}
