#include <doctest.h>

#include <cmath>

#include "g2bsd/data.hpp"
#include "g2bsd/periods.hpp"
#include "support.hpp"

using namespace g2bsd;

TEST_CASE("polynomial roots")
{
    // (x - 1)(x + 2)(x^2 + 1)
    auto r = polynomial_roots({-2, 1, -1, 1, 1});
    REQUIRE(r.size() == 4);
    for (auto z : r) {
        cld v = z * z * z * z + z * z * z - z * z + z - 2.0L;
        CHECK(std::abs(v) < 1e-15L);
    }
}

TEST_CASE("real locus components")
{
    // positive definite sextic: one component through both points at infinity
    CHECK(components_real_locus(std::vector<long double>{1, 0, 0, 0, 0, 0, 1}).components == 1);
    // negative leading term with four real roots: two bounded ovals
    CHECK(components_real_locus(std::vector<long double>{-24, 50, -35, 10, -1}).components == 2);
    // six real roots, positive leading term: two bounded, one through infinity
    std::vector<long double> F{-720, 1764, -1624, 735, -175, 21, -1};
    for (auto& c : F) c = -c;
    CHECK(components_real_locus(F).components == 3);
}

TEST_CASE("period of X0(23) matches 11 L(A, 1)")
{
    // L(A, 1) from PARI; Sha = 1, torsion 11 and c = 11 give Omega = 11 L(A, 1)
    const long double expect = 11 * 0.24843186659059968119L;
    auto P = real_volume(testing::model_x23());
    CHECK(std::fabs(P.omega - expect) < 1e-11L);
    CHECK(P.error < 1e-11L);
    CHECK(P.omega == doctest::Approx(P.covolume * P.components));
}

TEST_CASE("scaling (x, y) -> (u^2 x, u^5 y) multiplies Omega by u^-4")
{
    for (auto m : {testing::model_x23(), testing::model_x67()})
        for (long u : {2, 3}) CHECK(testing::period_scaling_error(m, u) < 1e-9L);
}

TEST_CASE("scaling law on a quintic model")
{
    auto rs = load_records(testing::fixture_dir() + "/figure1.jsonl");
    auto q = testing::root_to_infinity(find_record(rs, "X0_35_w7").model(), -1);
    REQUIRE(q.sextic()[6] == 0);
    for (long u : {2, 3}) CHECK(testing::period_scaling_error(q, u) < 1e-9L);
}
