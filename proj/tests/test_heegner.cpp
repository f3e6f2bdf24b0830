#include <doctest.h>

#include "g2bsd/data.hpp"
#include "g2bsd/errors.hpp"
#include "g2bsd/heegner.hpp"
#include "support.hpp"

using namespace g2bsd;

TEST_CASE("split condition")
{
    CHECK(split_condition(23, -7));
    CHECK_FALSE(split_condition(23, -3));
    CHECK(split_condition(73, -19));
    CHECK(split_condition(165, -131));
    CHECK_FALSE(split_condition(165, -11));
}

TEST_CASE("first Heegner discriminants")
{
    auto rs = load_records(testing::fixture_dir() + "/figure1.jsonl");
    for (const char* label : {"X0_23", "X0_73plus", "X0_93star", "X0_167plus"}) {
        auto& r = find_record(rs, label);
        TwistContext ctx(r.model(), r.bad_factor_map(), 1);
        auto H = find_heegner_discriminants(ctx, r.rank, 1);
        REQUIRE(H.size() == 1);
        CHECK_MESSAGE(H[0].D == r.heegner[0].D, label);
        CHECK(H[0].rank_condition_ok);
        CHECK(H[0].twist_order == (r.rank == 2 ? 0 : 2));
    }
}

TEST_CASE("search bound")
{
    TwistContext ctx(testing::model_x23(), {{23, {1, -2, 1}}}, 1);
    HeegnerOptions opt;
    opt.max_abs_D = 6;
    CHECK_THROWS_AS(find_heegner_discriminants(ctx, 0, 1, opt), SearchExhausted);
    CHECK_THROWS_AS(test_twist(ctx, 1, -7, opt), PreconditionViolation);
}

TEST_CASE("index divisibility")
{
    auto v = index_divisibility_check(11, 11);
    CHECK(v.divides);
    CHECK(v.quotient == 1);
    CHECK_FALSE(index_divisibility_check(3, 5).divides);
    CHECK_THROWS(index_divisibility_check(0, 5));
}
