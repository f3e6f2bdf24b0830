#include <doctest.h>

#include <cmath>

#include "g2bsd/bsd.hpp"
#include "g2bsd/errors.hpp"
#include "support.hpp"

using namespace g2bsd;

TEST_CASE("rational recognition")
{
    auto q = recognize_rational(1.0L / 3 + 1e-10L, 1e-9L);
    REQUIRE(q);
    CHECK(*q == Rat(1, 3));
    CHECK(*recognize_rational(16.0000001L, 1e-6L) == Rat(16));
    CHECK_FALSE(recognize_rational(0.5L, 0.1L));
    CHECK_FALSE(recognize_rational(std::sqrt(2.0L), 1e-12L));
    CHECK_FALSE(recognize_rational(NAN, 1e-3L));
}

namespace {

ShaInputs x23()
{
    ShaInputs in;
    in.label = "X0_23";
    in.L_star = 0.24843186659059968119L;
    in.L_err = 1e-12L;
    in.omega = 2.7327505324966L;
    in.omega_err = 1e-12L;
    in.torsion = 11;
    in.tamagawa_product = 11;
    return in;
}

}  // namespace

TEST_CASE("analytic order for X0(23)")
{
    auto R = sha_analytic(x23());
    CHECK(R.verdict == "consistent with 1");
    CHECK(std::fabs(R.sha_real - 1) < 1e-10L);
    CHECK(R.tamagawa_odd == 11);
}

TEST_CASE("assembly is invariant under rescaling period and L-value together")
{
    auto a = x23(), b = x23();
    b.omega *= 7.25L;
    b.L_star *= 7.25L;
    CHECK(sha_analytic(b).sha_real == doctest::Approx(static_cast<double>(sha_analytic(a).sha_real)).epsilon(1e-14));
}

TEST_CASE("square index artifact")
{
    ShaInputs in;
    in.rank = 2;
    in.L_star = 0.468199837025374L / 2;
    in.L_err = 1e-12L;
    in.omega = 20.4651129217235L;
    in.omega_err = 1e-12L;
    in.reg = 0.0114389751675766L / 16;
    in.reg_err = 1e-14L;
    auto R = sha_analytic(in);
    REQUIRE(R.sha_rational);
    CHECK(*R.sha_rational == 16);
    CHECK(R.verdict == "not 1");
    CHECK(R.notes.size() == 1);
}

TEST_CASE("unrecognizable value")
{
    auto in = x23();
    in.L_err = 0.05L;
    auto R = sha_analytic(in);
    CHECK(R.verdict == "unrecognized");
    in.omega = 0;
    CHECK_THROWS_AS(sha_analytic(in), PreconditionViolation);
}

TEST_CASE("twist route row for X0(67)+")
{
    auto row = rank1_route("X0_67plus", -7, 3.614657245L, 1e-8L, 0.9036643113L, 1e-10L, 1, 1, 4);
    REQUIRE(row.sha_rational);
    CHECK(*row.sha_rational == 4);
    CHECK(row.exact_match);
    CHECK(row.odd_part_matches);
}
