#include "support.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>

#include "g2bsd/periods.hpp"

namespace g2bsd::testing {

std::string fixture_dir()
{
    if (const char* d = std::getenv("G2BSD_FIXTURE_DIR")) return d;
    return G2BSD_DEFAULT_FIXTURES;
}

CurveModel model_x23() { return CurveModel::from_ints({0, -2, 0, 0, -3, 2, -2}, {1, 0, 1, 1}, "X0_23", 23); }
CurveModel model_x67() { return CurveModel::from_ints({0, -1, 1, -2, 2, -4, 2}, {1, 0, 1, 1}, "X0_67plus", 67); }
CurveModel model_generic() { return CurveModel::from_ints({1, 3, -2, 0, 5, 1, 1}, {0, 1}, "generic", 0); }

Check kronecker_multiplicativity(unsigned seed, int trials)
{
    Check c;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<i64> dd(-5000, 5000);
    std::uniform_int_distribution<u64> nn(1, 3000);
    for (int t = 0; t < trials && c.ok; ++t) {
        i64 D = dd(rng), D2 = dd(rng);
        u64 m = nn(rng), n = nn(rng);
        if (kronecker(D, m * n) != kronecker(D, m) * kronecker(D, n))
            c.fail("(" + std::to_string(D) + " | " + std::to_string(m) + "*" + std::to_string(n) + ")");
        u64 odd = n | 1;
        if (kronecker(D * D2, odd) != kronecker(D, odd) * kronecker(D2, odd))
            c.fail("(" + std::to_string(D) + "*" + std::to_string(D2) + " | " + std::to_string(odd) + ")");
    }
    return c;
}

Check coefficient_multiplicativity(const CurveModel& model, const BadFactorMap& bad, u64 M)
{
    Check c;
    LSeries ls = coefficients(model, M, bad, 1);
    if (ls.a.size() != M + 1 || ls.a[1] != 1) c.fail("a_1 != 1");
    for (u64 m = 2; m * m <= M && c.ok; ++m)
        for (u64 n = m + 1; m * n <= M; ++n)
            if (std::gcd(m, n) == 1 && ls.a[m * n] != ls.a[m] * ls.a[n]) {
                c.fail("a_" + std::to_string(m * n) + " != a_" + std::to_string(m) + " a_" + std::to_string(n));
                break;
            }
    return c;
}

Check weil_bounds(const CurveModel& model, u64 bound)
{
    Check c;
    Int disc = model.discriminant();
    for (u64 p : primes_up_to(bound)) {
        if (disc % Int(static_cast<unsigned long>(p)) == 0) continue;
        EulerFactor E = euler_factor(model, p);
        long double s = std::sqrt(static_cast<long double>(p));
        if (std::fabs(static_cast<long double>(E.e1)) > 4 * s) c.fail("e1 at " + std::to_string(p));
        if (std::fabs(static_cast<long double>(E.e2)) > 6 * static_cast<long double>(p))
            c.fail("e2 at " + std::to_string(p));
        // roots of x^2 - e1 x + (e2 - 2p) are real of size <= 2 sqrt p
        long double n = static_cast<long double>(E.e2) - 2 * static_cast<long double>(p);
        long double disc2 = static_cast<long double>(E.e1) * E.e1 - 4 * n;
        if (disc2 < -1e-9L) c.fail("complex trace pair at " + std::to_string(p));
        if (!c.ok) break;
    }
    return c;
}

namespace {

// F_q for q = p or p^2 with odd p, using t^2 = n.
struct SmallField {
    u64 p, nr;
    int k;
    struct E { u64 a, b; };
    SmallField(u64 prime, int deg) : p(prime), k(deg)
    {
        nr = 2;
        while (legendre(nr, p) != -1) ++nr;
    }
    std::vector<E> all() const
    {
        std::vector<E> v;
        for (u64 a = 0; a < p; ++a)
            for (u64 b = 0; b < (k == 2 ? p : 1); ++b) v.push_back({a, b});
        return v;
    }
    E add(E x, E y) const { return {(x.a + y.a) % p, (x.b + y.b) % p}; }
    E mul(E x, E y) const
    {
        return {(x.a * y.a + nr * (x.b * y.b % p)) % p, (x.a * y.b + x.b * y.a) % p};
    }
    E from(const Int& c) const { return {to_mod(c, p), 0}; }
    bool eq(E x, E y) const { return x.a == y.a && x.b == y.b; }
    E eval(const std::vector<Int>& poly, E x) const
    {
        E r{0, 0};
        for (size_t i = poly.size(); i-- > 0;) r = add(mul(r, x), from(poly[i]));
        return r;
    }
};

Int coeff(const std::vector<Int>& v, size_t i) { return i < v.size() ? v[i] : Int(0); }

// Points on the smooth model of y^2 + h y = f, including those at infinity.
u64 count_bruteforce(const CurveModel& m, u64 p, int k)
{
    SmallField K(p, k);
    auto elts = K.all();
    u64 n = 0;
    for (auto x : elts) {
        auto fx = K.eval(m.f, x), hx = K.eval(m.h, x);
        for (auto y : elts)
            if (K.eq(K.add(K.mul(y, y), K.mul(hx, y)), fx)) ++n;
    }
    // Y^2 + h3 Y - f6 = 0 at infinity
    Int f6 = coeff(m.f, 6), h3 = coeff(m.h, 3);
    if (f6 % Int(static_cast<unsigned long>(p)) == 0 && h3 % Int(static_cast<unsigned long>(p)) == 0) return n + 1;
    u64 inf = 0;
    for (auto y : elts)
        if (K.eq(K.add(K.mul(y, y), K.mul(K.from(h3), y)), K.from(f6))) ++inf;
    return n + inf;
}

}  // namespace

Check frobenius_against_bruteforce(const CurveModel& model, u64 bound)
{
    Check c;
    Int disc = model.discriminant();
    for (u64 p : primes_up_to(bound)) {
        if (p == 2 || disc % Int(static_cast<unsigned long>(p)) == 0) continue;
        EulerFactor E = euler_factor(model, p);
        i64 N1 = static_cast<i64>(count_bruteforce(model, p, 1));
        i64 N2 = static_cast<i64>(count_bruteforce(model, p, 2));
        i64 e1 = static_cast<i64>(p) + 1 - N1;
        i64 s2 = static_cast<i64>(p * p) + 1 - N2;   // sum of squares of the roots
        i64 e2 = (e1 * e1 - s2) / 2;
        if (E.e1 != e1 || E.e2 != e2) c.fail("Euler factor at " + std::to_string(p));
    }
    return c;
}

GroupOracle jacobian_group_oracle(const CurveModel& model, u64 p)
{
    GroupOracle G;
    i64 N1 = static_cast<i64>(count_bruteforce(model, p, 1));
    i64 N2 = static_cast<i64>(count_bruteforce(model, p, 2));
    G.expected = (N1 * N1 + N2) / 2 - static_cast<i64>(p);
    u64 c = 0;
    if (!imaginary_mod_p(model, p, c)) {
        G.check.fail("no imaginary model over F_" + std::to_string(p));
        return G;
    }
    G.shift = c;
    auto J = jacobian_fp_shift(model, p, c);
    // every monic a of degree <= 2 and b with deg b < deg a
    std::vector<DivP> elts;
    // with deg f = 6 the points at infinity are conjugate, so no class has deg a = 1
    const bool one_infinity = deg<FpField>(J.f) == 5;
    for (int d = 0; d <= 2; ++d) {
        if (d == 1 && !one_infinity) continue;
        u64 na = d == 0 ? 1 : (d == 1 ? p : p * p);
        u64 nb = d == 0 ? 1 : (d == 1 ? p : p * p);
        for (u64 ia = 0; ia < na; ++ia)
            for (u64 ib = 0; ib < nb; ++ib) {
                DivP D;
                D.a.assign(d + 1, 0);
                D.a[d] = 1;
                for (int i = 0; i < d; ++i) D.a[i] = (ia / (i ? p : 1)) % p;
                for (int i = 0; i < d; ++i) D.b.push_back((ib / (i ? p : 1)) % p);
                trim(J.k, D.b);
                if (J.is_valid(D)) elts.push_back(D);
            }
    }
    G.elements = elts.size();
    if (static_cast<i64>(elts.size()) != G.expected) {
        G.check.fail(std::to_string(elts.size()) + " divisors, P(1) = " + std::to_string(G.expected));
        return G;
    }
    const size_t n = elts.size();
    auto index = [&](const DivP& x) -> long {
        for (size_t i = 0; i < n; ++i)
            if (J.equal(elts[i], x)) return static_cast<long>(i);
        return -1;
    };
    std::vector<long> table(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            long r = index(J.add(elts[i], elts[j]));
            if (r < 0) {
                G.check.fail("sum outside the enumerated set");
                return G;
            }
            table[i * n + j] = r;
        }
    long e = index(J.identity());
    for (size_t i = 0; i < n; ++i) {
        if (table[i * n + e] != static_cast<long>(i)) G.check.fail("identity");
        bool has_inverse = false;
        for (size_t j = 0; j < n; ++j) {
            if (table[i * n + j] != table[j * n + i]) G.check.fail("commutativity");
            has_inverse |= table[i * n + j] == e;
        }
        if (!has_inverse) G.check.fail("inverse");
        if (table[i * n + index(J.negate(elts[i]))] != e) G.check.fail("negation");
    }
    for (size_t i = 0; i < n && G.check.ok; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k)
                if (table[table[i * n + j] * n + k] != table[i * n + table[j * n + k]]) {
                    G.check.fail("associativity");
                    break;
                }
    return G;
}

CurveModel root_to_infinity(const CurveModel& model, long r)
{
    // t^6 F(r + 1/t) = sum F_i (r t + 1)^i t^(6 - i)
    auto F = model.sextic();
    std::vector<Int> G(7, Int(0));
    for (int i = 0; i <= 6; ++i) {
        std::vector<Int> b{Int(1)};
        for (int j = 0; j < i; ++j) {
            std::vector<Int> nb(b.size() + 1, Int(0));
            for (size_t k = 0; k < b.size(); ++k) {
                nb[k] += b[k];
                nb[k + 1] += b[k] * r;
            }
            b = nb;
        }
        for (size_t k = 0; k < b.size(); ++k) G[k + 6 - i] += F[i] * b[k];
    }
    return CurveModel(G, {}, model.label + "_quintic", model.level);
}

long double period_scaling_error(const CurveModel& model, long u)
{
    auto F = model.sextic();
    const bool quintic = F.size() < 7 || F[6] == 0;
    // (x, y) -> (u^2 x, u^5 y); a sextic term also needs y -> u y to stay integral
    const int top = quintic ? 10 : 12;
    std::vector<Int> G(7, Int(0));
    Int U(u);
    for (size_t i = 0; i < F.size() && i <= 6; ++i) {
        if (F[i] == 0) continue;
        Int s;
        mpz_pow_ui(s.get_mpz_t(), U.get_mpz_t(), static_cast<unsigned long>(top - 2 * static_cast<int>(i)));
        G[i] = F[i] * s;
    }
    CurveModel a(F, {}, "", model.level), b(G, {}, "", model.level);
    long double w0 = real_volume(a, 1e-13L).omega, w1 = real_volume(b, 1e-13L).omega;
    long double expect = w0 / std::pow(static_cast<long double>(u), quintic ? 4 : 6);
    return std::fabs(w1 - expect) / expect;
}

long double regulator_unimodular_error(const KummerSurface& S, const std::vector<DivQ>& gens)
{
    auto J = jacobian_q(S.model());
    long double R0 = regulator(S, gens).value, err = 0;
    const int mats[3][4] = {{1, 1, 0, 1}, {2, 1, 1, 1}, {0, 1, -1, 0}};
    for (auto& m : mats) {
        DivQ g1 = J.add(J.mul(m[0], gens[0]), J.mul(m[1], gens[1]));
        DivQ g2 = J.add(J.mul(m[2], gens[0]), J.mul(m[3], gens[1]));
        long double R1 = regulator(S, {g1, g2}).value;
        err = std::max(err, std::fabs(R1 - R0) / R0);
    }
    return err;
}

}  // namespace g2bsd::testing
