#include <doctest.h>

#include <cmath>

#include "g2bsd/errors.hpp"
#include "g2bsd/kummer.hpp"
#include "support.hpp"

using namespace g2bsd;

namespace {

struct Fixture67 {
    ImaginaryModel im = make_imaginary(testing::model_x67());
    KummerSurface S{im};
    std::vector<DivQ> cls = search_points(im, 12);
    TorsionReport T = torsion_subgroup(im, cls);
};

Fixture67& fx()
{
    static Fixture67 f;
    return f;
}

}  // namespace

TEST_CASE("searched classes lie on the Kummer surface")
{
    auto& f = fx();
    for (auto& D : f.cls) CHECK(f.S.evaluate_equation(f.S.to_kummer(D)) == 0);
}

TEST_CASE("duplication commutes with the group law")
{
    auto& f = fx();
    auto J = jacobian_q(f.im);
    for (size_t i = 1; i < std::min<size_t>(f.cls.size(), 12); ++i)
        CHECK(f.S.duplicate(f.S.to_kummer(f.cls[i])) == f.S.to_kummer(J.dbl(f.cls[i])));
}

TEST_CASE("canonical height is quadratic")
{
    auto& f = fx();
    auto J = jacobian_q(f.im);
    int n = 0;
    for (size_t i = 1; i < f.cls.size() && n < 6; ++i, ++n) {
        auto h = f.S.canonical_height(f.cls[i]);
        auto h2 = f.S.canonical_height(J.dbl(f.cls[i]));
        CHECK(std::fabs(h2.value - 4 * h.value) < 1e-8L * std::max(1.0L, h2.value));
        auto h3 = f.S.canonical_height(J.mul(3, f.cls[i]));
        CHECK(std::fabs(h3.value - 9 * h.value) < 1e-8L * std::max(1.0L, h3.value));
    }
}

TEST_CASE("parallelogram law")
{
    auto& f = fx();
    auto J = jacobian_q(f.im);
    const auto& P = f.cls[1];
    const auto& Q = f.cls[2];
    long double a = f.S.canonical_height(J.add(P, Q)).value + f.S.canonical_height(J.add(P, J.negate(Q))).value;
    long double b = 2 * (f.S.canonical_height(P).value + f.S.canonical_height(Q).value);
    CHECK(std::fabs(a - b) < 1e-8L);
}

TEST_CASE("regulator of X0(67)+ and unimodular invariance")
{
    auto& f = fx();
    auto R = mordell_weil_lattice(f.S, f.cls, f.T, 2);
    REQUIRE(R.generators.size() == 2);
    CHECK(R.relations_verified);
    CHECK(R.reg.value == doctest::Approx(0.0114389751675766).epsilon(1e-9));
    CHECK(testing::regulator_unimodular_error(f.S, R.generators) < 1e-6L);
    auto J = jacobian_q(f.im);
    CHECK_THROWS_AS(regulator(f.S, {R.generators[0], J.dbl(R.generators[0])}), DependentGenerators);
    // doubling both generators scales the regulator by 16
    auto R2 = regulator(f.S, {J.dbl(R.generators[0]), J.dbl(R.generators[1])});
    CHECK(R2.value == doctest::Approx(16 * R.reg.value).epsilon(1e-9));
}

TEST_CASE("gram determinant")
{
    CHECK(gram_determinant({{2, 1}, {1, 2}}) == doctest::Approx(3));
    CHECK(gram_determinant({{4}}) == doctest::Approx(4));
}
