#include <doctest.h>

#include <cmath>

#include "g2bsd/curve.hpp"
#include "g2bsd/data.hpp"
#include "g2bsd/pointcount.hpp"
#include "support.hpp"

using namespace g2bsd;

TEST_CASE("Euler factors agree with exhaustive counting")
{
    for (auto m : {testing::model_x23(), testing::model_x67(), testing::model_generic()}) {
        auto c = testing::frobenius_against_bruteforce(m, 50);
        CHECK_MESSAGE(c.ok, m.label << ": " << c.detail);
    }
}

TEST_CASE("Weil bounds")
{
    for (auto m : {testing::model_x23(), testing::model_x67(), testing::model_generic()}) {
        auto c = testing::weil_bounds(m, 3000);
        CHECK_MESSAGE(c.ok, m.label << ": " << c.detail);
    }
}

TEST_CASE("character sums: fast path equals direct evaluation")
{
    std::vector<i64> F{3, -1, 4, 1, -5, 9, 2};
    for (u64 p : {3ull, 5ull, 101ull, 4099ull, 10007ull, 65537ull}) {
        std::vector<u64> Fp;
        for (i64 c : F) Fp.push_back(to_mod(c, p));
        std::vector<std::int8_t> scratch;
        CHECK(char_sum(Fp, p, scratch) == char_sum_reference(Fp, p));
    }
}

TEST_CASE("serial and parallel traces agree")
{
    auto F = testing::model_x67().sextic();
    std::vector<u64> ps;
    for (u64 p : primes_up_to(20000))
        if (p > 67) ps.push_back(p);
    CHECK(traces_serial(F, ps) == traces_omp(F, ps, 2));
}

TEST_CASE("Frobenius data match the fixture tables")
{
    auto rs = load_records(testing::fixture_dir() + "/figure1.jsonl");
    REQUIRE(rs.size() == 28);
    for (auto& r : rs) {
        auto m = r.model();
        for (auto& fr : r.frobenius) {
            auto E = euler_factor(m, fr.p);
            REQUIRE_MESSAGE(E.e1 == fr.trace, r.label << " p=" << fr.p);
            REQUIRE_MESSAGE(E.e2 == fr.norm + 2 * static_cast<i64>(fr.p), r.label << " p=" << fr.p);
        }
    }
}

TEST_CASE("sextic of X0(23)")
{
    auto F = testing::model_x23().sextic();
    std::vector<Int> expect{1, -8, 2, 2, -11, 10, -7};
    CHECK(F == expect);
    Int d = testing::model_x23().discriminant();
    CHECK(d != 0);
    CHECK(d % 23 == 0);
}

TEST_CASE("quadratic twists")
{
    auto m = testing::model_x67();
    auto good = [&](u64 p, i64 D) { return p > 2 && p != 67 && D % static_cast<i64>(p) != 0; };
    SUBCASE("trace changes by the character")
    {
        for (i64 D : {-7, -11, 5, -31}) {
            auto t = quadratic_twist(m, D);
            auto same = testing::frobenius_against_bruteforce(t, 40);
            CHECK_MESSAGE(same.ok, same.detail);
            for (u64 p : primes_up_to(200)) {
                if (!good(p, D)) continue;
                auto a = euler_factor(m, p), b = euler_factor(t, p);
                CHECK(b.e1 == kronecker(D, p) * a.e1);
                CHECK(b.e2 == a.e2);
            }
        }
    }
    SUBCASE("twisting twice returns the Euler factors")
    {
        for (i64 D : {-7, -19}) {
            auto tt = quadratic_twist(quadratic_twist(m, D), D);
            int n = 0;
            for (u64 p : primes_up_to(200)) {
                if (!good(p, D)) continue;
                auto a = euler_factor(m, p), b = euler_factor(tt, p);
                CHECK(a.poly == b.poly);
                if (++n == 20) break;
            }
        }
    }
    SUBCASE("D = 1")
    {
        auto t = quadratic_twist(m, 1);
        for (u64 p : {3ull, 5ull, 7ull, 11ull, 13ull}) CHECK(euler_factor(t, p).poly == euler_factor(m, p).poly);
    }
}

TEST_CASE("Euler factor shape")
{
    auto E = EulerFactor::good_factor(5, -2, -4 + 10);
    std::vector<i64> poly{1, 2, 6, 10, 25};
    CHECK(E.poly == poly);
    CHECK(E.at_one() == 1 + 2 + 6 + 10 + 25);
}
