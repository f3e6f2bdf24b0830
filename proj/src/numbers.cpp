#include "g2bsd/numbers.hpp"

#include <cmath>
#include <stdexcept>

#include "g2bsd/errors.hpp"

namespace g2bsd {

u64 powmod(u64 a, u64 e, u64 p)
{
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p)
{
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(p), nr = static_cast<i64>(a % p);
    while (nr) {
        i64 q = r / nr;
        i64 tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: not invertible");
    return t < 0 ? static_cast<u64>(t + static_cast<i64>(p)) : static_cast<u64>(t);
}

u64 to_mod(i64 a, u64 p)
{
    i64 r = a % static_cast<i64>(p);
    return r < 0 ? static_cast<u64>(r + static_cast<i64>(p)) : static_cast<u64>(r);
}

u64 to_mod(const Int& a, u64 p)
{
    Int r = a % Int(static_cast<unsigned long>(p));
    if (r < 0) r += static_cast<unsigned long>(p);
    return r.get_ui();
}

int legendre(u64 a, u64 p)
{
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return 1;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

u64 least_nonresidue(u64 p)
{
    for (u64 n = 2; n < p; ++n)
        if (legendre(n, p) == -1) return n;
    return 0;
}

u64 sqrt_mod(u64 a, u64 p)
{
    a %= p;
    if (a == 0 || p == 2) return a;
    if (legendre(a, p) != 1) throw std::domain_error("sqrt_mod: non-residue");
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1; int s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    u64 z = least_nonresidue(p);
    u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        u64 b = c;
        for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
        m = i; c = mulmod(b, b, p); t = mulmod(t, c, p); r = mulmod(r, b, p);
    }
    return r;
}

int kronecker(const Int& D, const Int& n) { return mpz_kronecker(D.get_mpz_t(), n.get_mpz_t()); }

int kronecker(i64 D, u64 n)
{
    return kronecker(Int(static_cast<long>(D)), Int(static_cast<unsigned long>(n)));
}

bool is_prime(u64 n)
{
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1; int s = 0;
    while (d % 2 == 0) { d /= 2; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { comp = false; break; }
        }
        if (comp) return false;
    }
    return true;
}

std::vector<u64> primes_up_to(u64 n)
{
    std::vector<u64> out;
    if (n < 2) return out;
    std::vector<bool> comp(n + 1, false);
    for (u64 i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

std::vector<std::pair<u64, int>> factor(u64 n)
{
    std::vector<std::pair<u64, int>> out;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<std::pair<Int, int>> factor(const Int& n0)
{
    std::vector<std::pair<Int, int>> out;
    Int n = abs(n0);
    for (unsigned long p = 2; p < 1000000 && Int(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p) == 0) continue;
        int e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) { n /= p; ++e; }
        out.emplace_back(Int(p), e);
    }
    if (n > 1) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
            throw std::runtime_error("factor: cofactor beyond trial division bound");
        out.emplace_back(n, 1);
    }
    return out;
}

bool is_squarefree(u64 n)
{
    for (auto& [p, e] : factor(n))
        if (e > 1) return false;
    return true;
}

u64 odd_part(u64 n)
{
    if (n == 0) return 0;
    while (n % 2 == 0) n /= 2;
    return n;
}

bool is_fundamental_discriminant(i64 D)
{
    if (D == 0 || D == 1) return false;
    i64 m = D % 4;
    if (m < 0) m += 4;
    u64 a = static_cast<u64>(D < 0 ? -D : D);
    if (m == 1) return is_squarefree(a);
    if (m != 0) return false;
    i64 q = D / 4;
    i64 r = q % 4;
    if (r < 0) r += 4;
    if (r != 2 && r != 3) return false;
    return is_squarefree(static_cast<u64>(q < 0 ? -q : q));
}

std::vector<i64> fundamental_discriminants_below(i64 bound)
{
    std::vector<i64> out;
    for (i64 a = 3; a <= bound; ++a)
        if (is_fundamental_discriminant(-a)) out.push_back(-a);
    return out;
}

FundamentalDiscriminant::FundamentalDiscriminant(i64 d) : D(d)
{
    if (d >= 0 || !is_fundamental_discriminant(d))
        throw PreconditionViolation("not a negative fundamental discriminant: " + std::to_string(d));
}

QuadOrder::QuadOrder(const Int& d) : disc(d)
{
    if (d <= 1 || !is_fundamental_discriminant(d.get_si()))
        throw PreconditionViolation("not a real quadratic fundamental discriminant");
}

Int QuadOrder::w_trace() const { return disc % 4 == 0 ? Int(0) : Int(1); }

Int QuadOrder::w_norm_coeff() const
{
    // w^2 = t w + n
    if (disc % 4 == 0) return disc / 4;
    return (disc - 1) / 4;
}

double QuadOrder::w_embedding(int sign) const
{
    double s = std::sqrt(disc.get_d()) * sign;
    return disc % 4 == 0 ? s / 2 : (1 + s) / 2;
}

OElement o_mul(const QuadOrder& O, const OElement& a, const OElement& b)
{
    Int t = O.w_trace(), n = O.w_norm_coeff();
    Int yy = a.y * b.y;
    return {a.x * b.x + yy * n, a.x * b.y + a.y * b.x + yy * t};
}

OElement o_add(const OElement& a, const OElement& b) { return {a.x + b.x, a.y + b.y}; }

OElement o_conj(const QuadOrder& O, const OElement& a)
{
    // conj(w) = t - w
    return {a.x + a.y * O.w_trace(), -a.y};
}

Int o_trace(const QuadOrder& O, const OElement& a) { return 2 * a.x + a.y * O.w_trace(); }

Int o_norm(const QuadOrder& O, const OElement& a)
{
    return a.x * a.x + a.x * a.y * O.w_trace() - a.y * a.y * O.w_norm_coeff();
}

double o_embed(const QuadOrder& O, const OElement& a, int sign)
{
    return a.x.get_d() + a.y.get_d() * O.w_embedding(sign);
}

std::vector<PrimeIdealO> splitting_type(const QuadOrder& O, u64 p)
{
    int k = kronecker(O.disc, Int(static_cast<unsigned long>(p)));
    std::vector<PrimeIdealO> out;
    u64 t = to_mod(O.w_trace(), p), n = to_mod(O.w_norm_coeff(), p);
    auto roots = [&]() {
        std::vector<u64> r;
        for (u64 x = 0; x < p && r.size() < 2; ++x)
            if (submod(mulmod(x, x, p), addmod(mulmod(t, x, p), n, p), p) == 0) r.push_back(x);
        return r;
    };
    if (k == 0) {
        auto r = roots();
        out.push_back({p, Splitting::ramified, 0, p, r.empty() ? 0 : r[0]});
    } else if (k == -1) {
        out.push_back({p, Splitting::inert, 0, p * p, 0});
    } else {
        std::vector<u64> r;
        if (p < 100000) {
            r = roots();
        } else {
            u64 d = to_mod(O.disc, p), s = sqrt_mod(d, p), i2 = invmod(2, p);
            r = {mulmod(addmod(t, s, p), i2, p), mulmod(submod(t, s, p), i2, p)};
            if (r[0] > r[1]) std::swap(r[0], r[1]);
        }
        out.push_back({p, Splitting::split, 1, p, r.at(0)});
        out.push_back({p, Splitting::split, 2, p, r.at(1)});
    }
    return out;
}

std::string ideal_name(const PrimeIdealO& P)
{
    switch (P.type) {
    case Splitting::split: return std::to_string(P.p) + "_" + std::to_string(P.index);
    case Splitting::ramified: return "sqrt(" + std::to_string(P.p) + ")";
    default: return std::to_string(P.p);
    }
}

Fp2::Fp2(u64 prime) : p(prime)
{
    if (p == 2) { c0 = 1; c1 = 1; }
    else { c0 = least_nonresidue(p); c1 = 0; }
}

Fp2::E Fp2::mul(E x, E y) const
{
    u64 bb = mulmod(x.b, y.b, p);
    u64 a = addmod(mulmod(x.a, y.a, p), mulmod(bb, c0, p), p);
    u64 b = addmod(addmod(mulmod(x.a, y.b, p), mulmod(x.b, y.a, p), p), mulmod(bb, c1, p), p);
    return {a, b};
}

u64 Fp2::norm(E x) const
{
    u64 r = addmod(mulmod(x.a, x.a, p), mulmod(mulmod(x.a, x.b, p), c1, p), p);
    return submod(r, mulmod(mulmod(x.b, x.b, p), c0, p), p);
}

}  // namespace g2bsd
