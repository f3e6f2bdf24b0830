#include <doctest.h>

#include "g2bsd/data.hpp"
#include "g2bsd/galrep.hpp"
#include "g2bsd/pipeline.hpp"
#include "support.hpp"

using namespace g2bsd;

TEST_CASE("characters of conductor dividing N")
{
    auto c = characters_dividing(35);
    std::vector<i64> expect{1, -7, 5, -35};
    std::sort(c.begin(), c.end());
    std::sort(expect.begin(), expect.end());
    CHECK(c == expect);
}

TEST_CASE("superset for X0(23) and X0(31)")
{
    auto m23 = testing::model_x23();
    auto S = reducible_superset(m23, QuadOrder{Int(5)}, 200);
    CHECK(S.names == std::vector<std::string>{"11_1"});
    CHECK(S.contains("11_1"));
    CHECK_FALSE(S.contains("13"));
    auto rs = load_records(testing::fixture_dir() + "/figure1.jsonl");
    auto& r31 = find_record(rs, "X0_31");
    auto S31 = reducible_superset(r31.model(), QuadOrder{Int(r31.rm_disc)}, 200);
    CHECK(S31.names == std::vector<std::string>{"sqrt(5)"});
}

TEST_CASE("maximal image witnesses")
{
    auto m = testing::model_x23();
    QuadOrder O{Int(5)};
    auto S = reducible_superset(m, O, 200);
    for (u64 p : {13ull, 17ull, 19ull}) {
        for (auto& P : splitting_type(O, p)) {
            auto C = maximal_image_check(m, P, 200, &S);
            CHECK_MESSAGE(C.maximal, ideal_name(P) << ": " << C.note);
            CHECK_FALSE(C.witnesses.empty());
        }
    }
    auto P11 = splitting_type(O, 11);
    CHECK_THROWS(maximal_image_check(m, P11[0], 200, &S));
}

TEST_CASE("too few test primes")
{
    CHECK_THROWS_AS(reducible_superset(testing::model_x23(), QuadOrder{Int(5)}, 5), UnstableGcd);
}

TEST_CASE("reducible column of every fixture curve")
{
    auto rs = load_records(testing::fixture_dir() + "/figure1.jsonl");
    for (auto& r : rs) {
        auto S = reducible_superset(r.model(), QuadOrder{Int(r.rm_disc)}, 200);
        std::vector<std::string> extra;
        CHECK_MESSAGE(galrep_agrees(r, S, &extra), r.label);
        CHECK(extra.empty());
    }
}
