#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "g2bsd/heegner.hpp"
#include "g2bsd/lfunction.hpp"
#include "support.hpp"

using namespace g2bsd;

namespace {

// Independent values from PARI/GP lfungenus2 (30 digits).
constexpr long double kL23 = 0.24843186659059968119L;
constexpr long double kL67second = 0.468199837025374031818L;

const BadFactorMap bad23{{23, {1, -2, 1}}};
const BadFactorMap bad67{{67, {1, 2, 1}}};

}  // namespace

TEST_CASE("coefficients are multiplicative")
{
    auto c = testing::coefficient_multiplicativity(testing::model_x23(), bad23, 5000);
    CHECK_MESSAGE(c.ok, c.detail);
    auto d = testing::coefficient_multiplicativity(testing::model_x67(), bad67, 5000);
    CHECK_MESSAGE(d.ok, d.detail);
}

TEST_CASE("Ramanujan-type bound on a_p")
{
    auto ls = coefficients(testing::model_x67(), 20000, bad67, 1);
    for (u64 p : primes_up_to(20000)) CHECK(std::fabs(static_cast<long double>(ls.a[p])) <= 4 * std::sqrt((long double)p));
}

TEST_CASE("central value of X0(23)")
{
    u64 M = required_terms(23, 0, 1e-13L);
    auto ls = coefficients(testing::model_x23(), M, bad23, 1);
    auto v = evaluate(ls, 0, 1.0L);
    CHECK(std::fabs(v.value - kL23) < std::max(v.error, 1e-12L));
    CHECK(v.error < 1e-12L);
    auto R = analytic_rank(ls);
    CHECK(R.rank == 0);
}

TEST_CASE("second derivative of X0(67)+")
{
    u64 M = required_terms(67 * 1.25L, 2, 1e-13L);
    auto ls = coefficients(testing::model_x67(), M, bad67, 1);
    auto R = analytic_rank(ls);
    REQUIRE(R.rank == 2);
    CHECK(std::fabs(R.values[0].value) < 1e-9L);
    CHECK(std::fabs(R.values[1].value) < 1e-9L);
    CHECK(std::fabs(R.values[2].value - kL67second) < 1e-10L);
}

TEST_CASE("sign of the functional equation")
{
    for (auto [m, bad] : {std::pair{testing::model_x23(), bad23}, std::pair{testing::model_x67(), bad67}}) {
        u64 M = required_terms(m.level * 1.25L, 0, 1e-12L);
        auto ls = coefficients(m, M, bad, 1);
        long double good = functional_equation_residual(ls, 1), other = functional_equation_residual(ls, -1);
        CHECK(good < 1e-6L);
        CHECK(other > 1e3L * good);
    }
}

TEST_CASE("wrong bad factor breaks the functional equation")
{
    u64 M = required_terms(23 * 1.25L, 0, 1e-12L);
    auto good = coefficients(testing::model_x23(), M, bad23, 1);
    auto ls = coefficients(testing::model_x23(), M, {{23, {1, 2, 1}}}, 1);
    CHECK(functional_equation_residual(ls, 1) > 1e3L * functional_equation_residual(good, 1));
}

TEST_CASE("bad factor selection")
{
    auto choice = select_bad_factors(testing::model_x23(), 1);
    CHECK(choice.factors == bad23);
    CHECK(choice.runner_up > 1e3L * choice.residual);
}

TEST_CASE("twisted series")
{
    auto ls = coefficients(testing::model_x67(), 3000, bad67, 1);
    auto t = twist_series(ls, -7);
    CHECK(t.sqrt_conductor == doctest::Approx(67.0 * 49));
    for (u64 n = 1; n <= 3000; ++n) CHECK(t.a[n] == kronecker(-7, n) * ls.a[n]);
}

TEST_CASE("twist of X0(67)+ by -7 has nonvanishing central value")
{
    TwistContext ctx(testing::model_x67(), bad67, 1);
    auto H = test_twist(ctx, 2, -7, HeegnerOptions{});
    CHECK(H.split_ok);
    CHECK(H.rank_condition_ok);
    CHECK(H.twist_value == doctest::Approx(3.614657245).epsilon(1e-2));
}

TEST_CASE("required terms grow with the conductor and the precision")
{
    CHECK(required_terms(100, 0, 1e-6L) < required_terms(1000, 0, 1e-6L));
    CHECK(required_terms(100, 0, 1e-6L) < required_terms(100, 0, 1e-12L));
}

TEST_CASE("coefficient cache round trip")
{
    auto dir = std::filesystem::temp_directory_path() / "g2bsd-cache-test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    setenv("G2BSD_CACHE_DIR", dir.c_str(), 1);
    std::vector<i64> a{0, 1, -1, 3, 7}, b;
    cache_store("unit", a);
    CHECK(cache_load("unit", 4, b));
    CHECK(a == b);
    CHECK_FALSE(cache_load("unit", 9, b));
    CHECK_FALSE(cache_load("absent", 2, b));
    unsetenv("G2BSD_CACHE_DIR");
    std::filesystem::remove_all(dir);
}
