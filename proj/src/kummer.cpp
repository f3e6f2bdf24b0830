#include "g2bsd/kummer.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "g2bsd/errors.hpp"

namespace g2bsd {

const std::array<std::array<int, 4>, 35>& quartic_monomials()
{
    static const auto mons = [] {
        std::array<std::array<int, 4>, 35> m{};
        int n = 0;
        for (int a = 4; a >= 0; --a)
            for (int b = 4 - a; b >= 0; --b)
                for (int c = 4 - a - b; c >= 0; --c) m[n++] = {a, b, c, 4 - a - b - c};
        return m;
    }();
    return mons;
}

namespace {

int monomial_index(int a, int b, int c, int d)
{
    const auto& m = quartic_monomials();
    for (int i = 0; i < 35; ++i)
        if (m[i] == std::array<int, 4>{a, b, c, d}) return i;
    return -1;
}

// k2^2 k4^2, where the Kummer quartic has coefficient 1
const int kNormMon = monomial_index(0, 2, 0, 2);

template <class T, class Mul, class Add>
T eval_quartic(const Quartic& q, const std::array<T, 4>& x, T zero, T one, Mul mul, Add add,
               const std::function<T(const Int&)>& lift)
{
    std::array<std::array<T, 5>, 4> pw;
    for (int i = 0; i < 4; ++i) {
        pw[i][0] = one;
        for (int e = 1; e <= 4; ++e) pw[i][e] = mul(pw[i][e - 1], x[i]);
    }
    const auto& m = quartic_monomials();
    T s = zero;
    for (int j = 0; j < 35; ++j) {
        if (q[j] == 0) continue;
        T t = mul(mul(pw[0][m[j][0]], pw[1][m[j][1]]), mul(pw[2][m[j][2]], pw[3][m[j][3]]));
        s = add(s, mul(lift(q[j]), t));
    }
    return s;
}

Int eval_int(const Quartic& q, const std::array<Int, 4>& x)
{
    return eval_quartic<Int>(
        q, x, Int(0), Int(1), [](const Int& a, const Int& b) { return Int(a * b); },
        [](const Int& a, const Int& b) { return Int(a + b); }, [](const Int& c) { return c; });
}

// Kummer coordinates of a reduced divisor (a monic of degree 2) on Y^2 = F.
template <class K>
std::array<typename K::E, 4> kummer_coords(const K& k, const Poly<K>& F, const Poly<K>& a, const Poly<K>& B)
{
    using E = typename K::E;
    if (a.size() <= 1) return {k.zero(), k.zero(), k.zero(), k.one()};
    if (a.size() != 3) throw PreconditionViolation("Kummer map needs a degree-2 divisor");
    E sigma = k.neg(a[1]), pi = a[0];
    Poly<K> c = pdiv_exact(k, psub(k, F, pmul(k, B, B)), a);
    c.resize(5, k.zero());
    E k4 = k.neg(k.add(k.add(c[0], k.mul(c[2], pi)), k.mul(c[4], k.mul(pi, pi))));
    return {k.one(), sigma, pi, k4};
}

// Kernel of an n x m matrix mod p, by row reduction.
std::vector<std::vector<u64>> nullspace_mod(std::vector<std::vector<u64>> A, u64 m, u64 p)
{
    std::vector<int> pivcol;
    size_t row = 0;
    for (u64 col = 0; col < m && row < A.size(); ++col) {
        size_t piv = row;
        while (piv < A.size() && A[piv][col] == 0) ++piv;
        if (piv == A.size()) continue;
        std::swap(A[row], A[piv]);
        u64 inv = invmod(A[row][col], p);
        for (u64 j = 0; j < m; ++j) A[row][j] = mulmod(A[row][j], inv, p);
        for (size_t r = 0; r < A.size(); ++r) {
            if (r == row || A[r][col] == 0) continue;
            u64 f = A[r][col];
            for (u64 j = col; j < m; ++j) A[r][j] = submod(A[r][j], mulmod(f, A[row][j], p), p);
        }
        pivcol.push_back(static_cast<int>(col));
        ++row;
    }
    std::vector<bool> is_piv(m, false);
    for (int c : pivcol) is_piv[c] = true;
    std::vector<std::vector<u64>> ker;
    for (u64 fcol = 0; fcol < m; ++fcol) {
        if (is_piv[fcol]) continue;
        std::vector<u64> v(m, 0);
        v[fcol] = 1;
        for (size_t r = 0; r < pivcol.size(); ++r) v[pivcol[r]] = (p - A[r][fcol]) % p;
        ker.push_back(v);
    }
    return ker;
}

bool rational_reconstruct(const Int& a0, const Int& m, Rat& out)
{
    Int a = ((a0 % m) + m) % m;
    Int bound = sqrt(m / 2);
    Int r0 = m, r1 = a, s0 = 0, s1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1, s2 = s0 - q * s1;
        r0 = r1; r1 = r2; s0 = s1; s1 = s2;
    }
    if (abs(s1) > bound || s1 == 0) return false;
    out = Rat(r1, s1);
    out.canonicalize();
    return true;
}

template <size_t N>
std::array<Int, N> make_primitive(const std::array<Rat, N>& v)
{
    Int l = 1;
    for (const auto& c : v) l = lcm(l, Int(c.get_den()));
    std::array<Int, N> r;
    Int g = 0;
    for (size_t i = 0; i < N; ++i) {
        Rat t = v[i] * l;
        r[i] = t.get_num();
        g = gcd(g, r[i]);
    }
    if (g != 0)
        for (auto& c : r) c /= g;
    for (const auto& c : r)
        if (c != 0) {
            if (c < 0)
                for (auto& d : r) d = -d;
            break;
        }
    return r;
}

std::array<Int, 4> primitive4(std::array<Int, 4> v)
{
    Int g = 0;
    for (auto& c : v) g = gcd(g, c);
    if (g == 0) throw PrecisionLoss("zero Kummer vector");
    for (auto& c : v) c /= g;
    for (const auto& c : v)
        if (c != 0) {
            if (c < 0)
                for (auto& d : v) d = -d;
            break;
        }
    return v;
}

long double log_abs(const Int& z)
{
    long e = 0;
    double d = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(std::fabs(d)) + e * std::log(2.0L);
}

long double log_abs(const mpf_class& z)
{
    long e = 0;
    double d = mpf_get_d_2exp(&e, z.get_mpf_t());
    return std::log(std::fabs(d)) + e * std::log(2.0L);
}

std::vector<u64> small_prime_factors(Int n)
{
    std::vector<u64> out;
    for (auto& [q, e] : factor(abs(n))) {
        if (!q.fits_ulong_p()) throw PrecisionLoss("large prime in height normalization");
        out.push_back(q.get_ui());
    }
    return out;
}

}  // namespace

KummerSurface::KummerSurface(const ImaginaryModel& M) : M_(M) { derive(); }

void KummerSurface::derive()
{
    const auto& F = M_.F;
    Int disc = binary_form_discriminant(F, 6);
    if (disc == 0) throw PreconditionViolation("singular model");
    std::mt19937_64 rng(0x6b756d6d6572ull);
    std::vector<Int> residK(35), residD(140);
    Int modulus = 1;
    Quartic prevK{};
    std::array<Quartic, 4> prevD{};
    bool have_prev = false;
    int stable = 0;
    u64 ell = (1ull << 61) - 1;
    for (int used = 0; used < 24;) {
        ell -= 2;
        if (!is_prime(ell)) continue;
        if (to_mod(disc, ell) == 0 || legendre(to_mod(F[6], ell), ell) != -1) continue;
        FpField k(ell);
        Poly<FpField> Fp = pfrom(k, F);
        u64 inv4 = invmod(4, ell);
        Jacobian<FpField> J(k, pscale(k, inv4, Fp), {});
        std::vector<std::array<u64, 4>> P, Q;
        while (P.size() < 80) {
            u64 x1 = rng() % ell, x2 = rng() % ell;
            if (x1 == x2) continue;
            u64 v1 = peval(k, Fp, x1), v2 = peval(k, Fp, x2);
            if (legendre(v1, ell) != 1 || legendre(v2, ell) != 1) continue;
            u64 Y1 = sqrt_mod(v1, ell), Y2 = sqrt_mod(v2, ell);
            if (rng() & 1) Y1 = k.neg(Y1);
            if (rng() & 1) Y2 = k.neg(Y2);
            u64 y1 = mulmod(Y1, invmod(2, ell), ell), y2 = mulmod(Y2, invmod(2, ell), ell);
            auto D = J.from_points(x1, y1, x2, y2);
            auto D2 = J.dbl(D);
            if (D2.a.size() != 3 || D.a.size() != 3) continue;
            P.push_back(kummer_coords(k, Fp, D.a, pscale(k, 2, D.b)));
            Q.push_back(kummer_coords(k, Fp, D2.a, pscale(k, 2, D2.b)));
        }
        auto mon = [&](const std::array<u64, 4>& x) {
            std::array<u64, 35> r;
            const auto& m = quartic_monomials();
            for (int j = 0; j < 35; ++j) {
                u64 t = 1;
                for (int i = 0; i < 4; ++i) t = mulmod(t, powmod(x[i], m[j][i], ell), ell);
                r[j] = t;
            }
            return r;
        };
        // the quartic
        std::vector<std::vector<u64>> AK;
        for (auto& x : P) {
            auto r = mon(x);
            AK.emplace_back(r.begin(), r.end());
        }
        auto kerK = nullspace_mod(AK, 35, ell);
        // duplication
        std::vector<std::vector<u64>> AD;
        for (size_t s = 0; s < P.size(); ++s) {
            auto r = mon(P[s]);
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) {
                    std::vector<u64> row(140, 0);
                    for (int t = 0; t < 35; ++t) {
                        row[i * 35 + t] = mulmod(r[t], Q[s][j], ell);
                        row[j * 35 + t] = k.neg(mulmod(r[t], Q[s][i], ell));
                    }
                    AD.push_back(row);
                }
        }
        for (int i = 0; i < 4; ++i) {
            std::vector<u64> row(140, 0);
            row[i * 35 + kNormMon] = 1;
            AD.push_back(row);
        }
        auto kerD = nullspace_mod(AD, 140, ell);
        if (kerK.size() != 1 || kerD.size() != 1 || kerK[0][kNormMon] == 0) continue;
        auto vK = kerK[0];
        u64 iK = invmod(vK[kNormMon], ell);
        for (auto& c : vK) c = mulmod(c, iK, ell);
        auto vD = kerD[0];
        // normalize delta so that the k4^4 coefficient of its last form is 1
        int piv = 3 * 35 + monomial_index(0, 0, 0, 4);
        if (vD[piv] == 0) continue;
        u64 iD = invmod(vD[piv], ell);
        for (auto& c : vD) c = mulmod(c, iD, ell);
        // CRT
        Int L(static_cast<unsigned long>(ell));
        auto crt = [&](Int& r, u64 v) {
            // r mod modulus, v mod ell
            Int diff = Int(static_cast<unsigned long>(v)) - r;
            Int inv;
            mpz_invert(inv.get_mpz_t(), Int(modulus % L).get_mpz_t(), L.get_mpz_t());
            Int t = ((diff % L) + L) % L * inv % L;
            r += modulus * t;
        };
        for (int j = 0; j < 35; ++j) crt(residK[j], vK[j]);
        for (int j = 0; j < 140; ++j) crt(residD[j], vD[j]);
        modulus *= L;
        ++used;
        primes_used_ = used;
        // reconstruct
        std::array<Rat, 35> qK;
        std::array<Rat, 140> qD;
        bool ok = true;
        for (int j = 0; j < 35 && ok; ++j) ok = rational_reconstruct(residK[j], modulus, qK[j]);
        for (int j = 0; j < 140 && ok; ++j) ok = rational_reconstruct(residD[j], modulus, qD[j]);
        if (!ok) continue;
        Quartic curK;
        auto pk = make_primitive(qK);
        for (int j = 0; j < 35; ++j) curK[j] = pk[j];
        auto pd = make_primitive(qD);
        std::array<Quartic, 4> curD;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 35; ++j) curD[i][j] = pd[i * 35 + j];
        if (have_prev && curK == prevK && curD == prevD) {
            if (++stable >= 1) {
                K_ = curK;
                delta_ = curD;
                break;
            }
        } else {
            stable = 0;
        }
        prevK = curK;
        prevD = curD;
        have_prev = true;
    }
    if (!have_prev || K_ != prevK) throw NonConvergent("Kummer duplication did not stabilise");
    // primes where the local correction can be nonzero
    std::set<u64> S{2};
    for (u64 p : small_prime_factors(disc)) S.insert(p);
    for (u64 p : small_prime_factors(F[6])) S.insert(p);
    std::array<Int, 4> O{0, 0, 0, 1};
    for (int i = 0; i < 4; ++i) {
        Int v = eval_int(delta_[i], O);
        if (v != 0)
            for (u64 p : small_prime_factors(v)) S.insert(p);
    }
    S_.assign(S.begin(), S.end());
}

KummerPoint KummerSurface::to_kummer(const DivQ& D) const
{
    QField Q;
    KummerPoint P;
    if (D.a.size() <= 1) {
        P.k = {0, 0, 0, 1};
        return P;
    }
    Poly<QField> F = pfrom(Q, M_.F), h = pfrom(Q, M_.h);
    Poly<QField> B = pmod(Q, padd(Q, pscale(Q, Rat(2), D.b), h), D.a);
    auto k = kummer_coords(Q, F, D.a, B);
    std::array<Rat, 4> r{k[0], k[1], k[2], k[3]};
    P.k = make_primitive(r);
    return P;
}

Int KummerSurface::evaluate_equation(const KummerPoint& P) const { return eval_int(K_, P.k); }

KummerPoint KummerSurface::duplicate(const KummerPoint& P) const
{
    std::array<Int, 4> r;
    for (int i = 0; i < 4; ++i) r[i] = eval_int(delta_[i], P.k);
    return KummerPoint{primitive4(r)};
}

long double KummerSurface::naive_height(const KummerPoint& P) const
{
    Int m = 0;
    for (const auto& c : P.k) m = std::max(m, Int(abs(c)));
    return m == 0 ? 0.0L : log_abs(m);
}

HeightValue KummerSurface::canonical_height(const DivQ& D, long double tol) const
{
    return canonical_height(to_kummer(D), tol);
}

HeightValue KummerSurface::canonical_height(const KummerPoint& P0, long double tol) const
{
    const std::array<Int, 4> O{0, 0, 0, 1};
    if (P0.k == O) return {0, 0};
    long double h = naive_height(P0);
    // a few exact steps, collecting every prime in the gcds
    std::set<u64> S(S_.begin(), S_.end());
    std::array<Int, 4> x = P0.k;
    std::vector<long double> eps;
    const int exact_steps = 2;
    for (int n = 0; n < exact_steps; ++n) {
        std::array<Int, 4> y;
        for (int i = 0; i < 4; ++i) y[i] = eval_int(delta_[i], x);
        Int g = 0, mx = 0, my = 0;
        for (int i = 0; i < 4; ++i) {
            g = gcd(g, y[i]);
            mx = std::max(mx, Int(abs(x[i])));
            my = std::max(my, Int(abs(y[i])));
        }
        if (g == 0) throw PrecisionLoss("duplication vanished identically");
        for (u64 p : small_prime_factors(g)) S.insert(p);
        eps.push_back(log_abs(my) - log_abs(g) - 4 * log_abs(mx));
        for (auto& c : y) c /= g;
        x = y;
        if (x == O || (x[0] == 0 && x[1] == 0 && x[2] == 0)) break;
    }
    const int max_steps = 60;
    int steps = 0;
    long double bound = 1;
    for (auto e : eps) bound = std::max(bound, 2 * std::fabs(e));
    // needed steps for the geometric tail
    while (steps < max_steps && bound * std::pow(4.0L, -(exact_steps + steps)) / 3 > tol / 4) ++steps;
    if (steps >= max_steps) throw PrecisionLoss("height iteration exceeds the configured maximum");
    std::vector<long double> eps_rest(steps, 0.0L);
    bool reached_origin = (x[0] == 0 && x[1] == 0 && x[2] == 0);
    if (!reached_origin && steps > 0) {
        // archimedean part with normalized real vectors
        const mp_bitcnt_t prec = 320;
        std::array<mpf_class, 4> xr;
        for (int i = 0; i < 4; ++i) xr[i] = mpf_class(mpf_class(x[i], prec), prec);
        auto normalize = [&](std::array<mpf_class, 4>& v) {
            mpf_class m(0, prec);
            for (auto& c : v)
                if (abs(c) > m) m = abs(c);
            for (auto& c : v) c /= m;
            return m;
        };
        normalize(xr);
        std::array<std::array<mpf_class, 35>, 4> dc;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 35; ++j) dc[i][j] = mpf_class(delta_[i][j], prec);
        const auto& m = quartic_monomials();
        for (int n = 0; n < steps; ++n) {
            std::array<std::array<mpf_class, 5>, 4> pw;
            for (int i = 0; i < 4; ++i) {
                pw[i][0] = mpf_class(1, prec);
                for (int e = 1; e <= 4; ++e) pw[i][e] = mpf_class(pw[i][e - 1] * xr[i], prec);
            }
            std::array<mpf_class, 4> y;
            for (int i = 0; i < 4; ++i) {
                y[i] = mpf_class(0, prec);
                for (int j = 0; j < 35; ++j) {
                    if (delta_[i][j] == 0) continue;
                    y[i] += dc[i][j] * pw[0][m[j][0]] * pw[1][m[j][1]] * pw[2][m[j][2]] * pw[3][m[j][3]];
                }
            }
            mpf_class mx = normalize(y);
            eps_rest[n] += log_abs(mx);
            xr = y;
        }
        // non-archimedean parts
        for (u64 p : S) {
            Int P(static_cast<unsigned long>(p));
            int digits = static_cast<int>(std::ceil(2400.0 / std::log2(static_cast<double>(p))));
            Int mod;
            mpz_pow_ui(mod.get_mpz_t(), P.get_mpz_t(), digits);
            std::array<Int, 4> xp = x;
            int prec_left = digits;
            auto val = [&](const Int& z, int cap) {
                if (z == 0) return cap;
                Int t = z;
                int v = 0;
                while (v < cap && mpz_divisible_ui_p(t.get_mpz_t(), p)) {
                    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
                    ++v;
                }
                return v;
            };
            for (int n = 0; n < steps; ++n) {
                std::array<Int, 4> y;
                for (int i = 0; i < 4; ++i) {
                    y[i] = eval_int(delta_[i], xp) % mod;
                    if (y[i] < 0) y[i] += mod;
                }
                int v = prec_left;
                for (int i = 0; i < 4; ++i) v = std::min(v, val(y[i], prec_left));
                if (v >= prec_left - 8) throw PrecisionLoss("p-adic precision exhausted in height");
                Int pv;
                mpz_pow_ui(pv.get_mpz_t(), P.get_mpz_t(), v);
                prec_left -= v;
                mpz_pow_ui(mod.get_mpz_t(), P.get_mpz_t(), prec_left);
                for (int i = 0; i < 4; ++i) xp[i] = (y[i] / pv) % mod;
                eps_rest[n] -= v * std::log(static_cast<long double>(p));
            }
        }
    }
    long double total = h, w = 0.25L;
    for (auto e : eps) {
        total += w * e;
        w /= 4;
    }
    for (auto e : eps_rest) {
        total += w * e;
        bound = std::max(bound, 2 * std::fabs(e));
        w /= 4;
    }
    HeightValue out;
    out.value = total;
    out.error_bound = bound * w * 4 / 3 + 1e-30L;
    if (std::fabs(out.value) < out.error_bound) out.value = std::max(out.value, 0.0L);
    return out;
}

long double height_pairing(const KummerSurface& S, const DivQ& P, const DivQ& Q, long double tol)
{
    auto J = jacobian_q(S.model());
    long double hp = S.canonical_height(P, tol).value;
    long double hq = S.canonical_height(Q, tol).value;
    long double hs = S.canonical_height(J.add(P, Q), tol).value;
    return (hs - hp - hq) / 2;
}

long double gram_determinant(const std::vector<std::vector<long double>>& G0)
{
    auto G = G0;
    const size_t n = G.size();
    long double det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        for (size_t r = c + 1; r < n; ++r)
            if (std::fabs(G[r][c]) > std::fabs(G[piv][c])) piv = r;
        if (G[piv][c] == 0) return 0;
        if (piv != c) {
            std::swap(G[piv], G[c]);
            det = -det;
        }
        det *= G[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            long double f = G[r][c] / G[c][c];
            for (size_t j = c; j < n; ++j) G[r][j] -= f * G[c][j];
        }
    }
    return det;
}

RegulatorValue regulator(const KummerSurface& S, const std::vector<DivQ>& gens, long double tol)
{
    RegulatorValue R;
    const size_t n = gens.size();
    if (n == 0) return R;
    auto J = jacobian_q(S.model());
    std::vector<long double> h(n);
    for (size_t i = 0; i < n; ++i) h[i] = S.canonical_height(gens[i], tol).value;
    R.gram.assign(n, std::vector<long double>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        R.gram[i][i] = h[i];
        for (size_t j = i + 1; j < n; ++j) {
            long double hs = S.canonical_height(J.add(gens[i], gens[j]), tol).value;
            R.gram[i][j] = R.gram[j][i] = (hs - h[i] - h[j]) / 2;
        }
    }
    R.value = gram_determinant(R.gram);
    long double scale = 1;
    for (size_t i = 0; i < n; ++i) scale *= std::max(h[i], 1e-30L);
    R.error = 4 * n * tol * scale / std::max(*std::min_element(h.begin(), h.end()), 1e-30L);
    if (R.value <= R.error + 1e-9L * scale) throw DependentGenerators("Gram determinant " + std::to_string(static_cast<double>(R.value)));
    return R;
}

namespace {

struct Combo {
    std::vector<std::pair<long, int>> terms;  // coefficient, class index
};

}  // namespace

MordellWeilReport mordell_weil_lattice(const KummerSurface& S, const std::vector<DivQ>& classes,
                                       const TorsionReport& torsion, int rank, long double tol)
{
    MordellWeilReport R;
    if (rank == 0) return R;
    if (rank != 2) throw PreconditionViolation("only ranks 0 and 2 are supported");
    auto J = jacobian_q(S.model());
    std::set<std::string> tors;
    for (const auto& t : torsion.elements) tors.insert(divisor_key(t));
    struct Cand {
        int idx;
        long double h;
    };
    std::vector<Cand> cands;
    for (size_t i = 0; i < classes.size(); ++i) {
        if (tors.count(divisor_key(classes[i]))) continue;
        long double hv = S.canonical_height(classes[i], tol).value;
        if (hv < 1e-8L) continue;
        cands.push_back({static_cast<int>(i), hv});
    }
    R.found = static_cast<int>(cands.size());
    if (cands.size() < 2) throw SearchExhausted("fewer than two non-torsion classes found");
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.h < b.h; });
    if (cands.size() > 40) cands.resize(40);
    const DivQ& P1 = classes[cands[0].idx];
    std::map<int, long double> hmap;
    for (auto& c : cands) hmap[c.idx] = c.h;
    auto pairing = [&](int a, int b) {
        long double hs = S.canonical_height(J.add(classes[a], classes[b]), tol).value;
        return (hs - hmap[a] - hmap[b]) / 2;
    };
    int i2 = -1;
    long double g12 = 0;
    for (size_t j = 1; j < cands.size(); ++j) {
        long double p = pairing(cands[0].idx, cands[j].idx);
        long double det = cands[0].h * cands[j].h - p * p;
        if (det > 1e-6L * cands[0].h * cands[j].h) {
            i2 = cands[j].idx;
            g12 = p;
            break;
        }
    }
    if (i2 < 0) throw DependentGenerators("searched classes span a rank-one lattice");
    const int i1 = cands[0].idx;
    const long double g11 = hmap[i1], g22 = hmap[i2];
    const long double det12 = g11 * g22 - g12 * g12;
    // coordinates of every class in the basis (P1, P2)
    struct Coord {
        int idx;
        long double c1, c2;
    };
    std::vector<Coord> coords;
    long den = 1;
    for (auto& c : cands) {
        long double q1 = (c.idx == i1) ? g11 : pairing(c.idx, i1);
        long double q2 = (c.idx == i2) ? g22 : pairing(c.idx, i2);
        long double c1 = (g22 * q1 - g12 * q2) / det12;
        long double c2 = (g11 * q2 - g12 * q1) / det12;
        long d = 1;
        for (; d <= 24; ++d)
            if (std::fabs(d * c1 - std::round(d * c1)) < 1e-5L && std::fabs(d * c2 - std::round(d * c2)) < 1e-5L) break;
        if (d > 24) throw PrecisionLoss("class coordinates not recognised as rationals");
        den = std::lcm(den, d);
        coords.push_back({c.idx, c1, c2});
    }
    // integer vectors den * coords, lattice basis by 2x2 Hermite reduction
    struct Vec {
        long x, y;
        Combo combo;
    };
    std::vector<Vec> vecs;
    for (auto& c : coords)
        vecs.push_back({std::lround(den * c.c1), std::lround(den * c.c2), Combo{{{1, c.idx}}}});
    auto combine = [](const Combo& a, long ca, const Combo& b, long cb) {
        Combo r;
        for (auto& t : a.terms) r.terms.push_back({t.first * ca, t.second});
        for (auto& t : b.terms) r.terms.push_back({t.first * cb, t.second});
        std::map<int, long> m;
        for (auto& t : r.terms) m[t.second] += t.first;
        r.terms.clear();
        for (auto& [i, c] : m)
            if (c != 0) r.terms.push_back({c, i});
        return r;
    };
    // first basis vector: gcd of x components
    Vec b1{0, 0, {}};
    for (auto& v : vecs) {
        if (v.x == 0) continue;
        if (b1.x == 0) {
            b1 = v;
            continue;
        }
        // extended gcd on (b1.x, v.x)
        long a = b1.x, b = v.x, sa = 1, sb = 0, ta = 0, tb = 1;
        while (b != 0) {
            long q = a / b;
            long t = a - q * b; a = b; b = t;
            t = sa - q * ta; sa = ta; ta = t;
            t = sb - q * tb; sb = tb; tb = t;
        }
        Vec nb{sa * b1.x + sb * v.x, sa * b1.y + sb * v.y, combine(b1.combo, sa, v.combo, sb)};
        b1 = nb;
    }
    if (b1.x < 0) {
        b1.x = -b1.x;
        b1.y = -b1.y;
        for (auto& t : b1.combo.terms) t.first = -t.first;
    }
    // second: vectors with x reduced to 0
    Vec b2{0, 0, {}};
    for (auto& v : vecs) {
        long q = v.x / b1.x;
        Vec w{v.x - q * b1.x, v.y - q * b1.y, combine(v.combo, 1, b1.combo, -q)};
        if (w.x != 0) throw PrecisionLoss("lattice reduction failed");
        if (w.y == 0) continue;
        if (b2.y == 0) {
            b2 = w;
            continue;
        }
        long a = b2.y, b = w.y, sa = 1, sb = 0, ta = 0, tb = 1;
        while (b != 0) {
            long qq = a / b;
            long t = a - qq * b; a = b; b = t;
            t = sa - qq * ta; sa = ta; ta = t;
            t = sb - qq * tb; sb = tb; tb = t;
        }
        Vec nb{0, sa * b2.y + sb * w.y, combine(b2.combo, sa, w.combo, sb)};
        b2 = nb;
    }
    if (b2.y == 0) throw DependentGenerators("lattice has rank below two");
    long detB = std::labs(b1.x * b2.y);
    long double ratio = static_cast<long double>(detB) / (static_cast<long double>(den) * den);
    R.index_over_first_pair = std::lround(1.0L / ratio);
    // exact relation check for classes with fractional coordinates
    bool verified = true;
    Int texp = torsion.order;
    for (auto& c : coords) {
        long d = 1;
        for (; d <= 24; ++d)
            if (std::fabs(d * c.c1 - std::round(d * c.c1)) < 1e-5L && std::fabs(d * c.c2 - std::round(d * c.c2)) < 1e-5L) break;
        if (d == 1) continue;
        DivQ lhs = J.mul(Int(d), classes[c.idx]);
        DivQ rhs = J.add(J.mul(Int(std::lround(d * c.c1)), P1), J.mul(Int(std::lround(d * c.c2)), classes[i2]));
        DivQ diff = J.add(lhs, J.negate(rhs));
        if (!J.is_identity(J.mul(texp, diff))) verified = false;
    }
    R.relations_verified = verified;
    // basis classes from the combinations
    auto build = [&](const Combo& cb) {
        DivQ acc = J.identity();
        for (auto& [c, i] : cb.terms) acc = J.add(acc, J.mul(Int(c), classes[i]));
        return acc;
    };
    DivQ G1 = build(b1.combo), G2 = build(b2.combo);
    // Lagrange-Gauss reduction with the numerical Gram matrix
    auto h1 = S.canonical_height(G1, tol).value, h2 = S.canonical_height(G2, tol).value;
    for (int it = 0; it < 20; ++it) {
        long double p = (S.canonical_height(J.add(G1, G2), tol).value - h1 - h2) / 2;
        if (h2 < h1) {
            std::swap(G1, G2);
            std::swap(h1, h2);
        }
        long q = std::lround(p / h1);
        if (q == 0) break;
        G2 = J.add(G2, J.mul(Int(-q), G1));
        h2 = S.canonical_height(G2, tol).value;
    }
    R.generators = {G1, G2};
    R.heights = {h1, h2};
    R.reg = regulator(S, R.generators, tol);
    long double expected = det12 * ratio * ratio;
    if (std::fabs(R.reg.value - expected) > 1e-6L * expected) R.relations_verified = false;
    const auto& G = R.reg.gram;
    long double tr = G[0][0] + G[1][1], dt = G[0][0] * G[1][1] - G[0][1] * G[1][0];
    long double lmin = (tr - std::sqrt(std::max(0.0L, tr * tr - 4 * dt))) / 2;
    R.min_eigen_quarter = lmin / 4;
    R.saturation_heuristic = true;
    for (auto& c : cands)
        if (c.h < R.min_eigen_quarter) R.saturation_heuristic = false;
    return R;
}

}  // namespace g2bsd
