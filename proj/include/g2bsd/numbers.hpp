#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace g2bsd {

using Int = mpz_class;
using Rat = mpq_class;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
inline u64 addmod(u64 a, u64 b, u64 p) { u64 s = a + b; return s >= p ? s - p : s; }
inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
u64 powmod(u64 a, u64 e, u64 p);
u64 invmod(u64 a, u64 p);
// Reduces a signed value into [0, p).
u64 to_mod(i64 a, u64 p);
u64 to_mod(const Int& a, u64 p);
int legendre(u64 a, u64 p);
// Square root mod an odd prime; a must be a residue.
u64 sqrt_mod(u64 a, u64 p);
u64 least_nonresidue(u64 p);

int kronecker(const Int& D, const Int& n);
int kronecker(i64 D, u64 n);

bool is_prime(u64 n);
std::vector<u64> primes_up_to(u64 n);
std::vector<std::pair<u64, int>> factor(u64 n);
std::vector<std::pair<Int, int>> factor(const Int& n);
bool is_squarefree(u64 n);
u64 odd_part(u64 n);

bool is_fundamental_discriminant(i64 D);
// Negative fundamental discriminants with |D| <= bound, by increasing |D|.
std::vector<i64> fundamental_discriminants_below(i64 bound);

struct FundamentalDiscriminant {
    i64 D;
    explicit FundamentalDiscriminant(i64 d);
};

// Maximal order of Q(sqrt(disc)), basis {1, w} with w = sqrt(disc)/2 or (1+sqrt(disc))/2.
struct QuadOrder {
    Int disc;
    explicit QuadOrder(const Int& d);
    // w^2 = t*w + n with these integers.
    Int w_trace() const;
    Int w_norm_coeff() const;
    double w_embedding(int sign) const;
};

struct OElement {
    Int x, y;
    OElement() = default;
    OElement(Int a, Int b) : x(std::move(a)), y(std::move(b)) {}
};

OElement o_mul(const QuadOrder& O, const OElement& a, const OElement& b);
OElement o_add(const OElement& a, const OElement& b);
OElement o_conj(const QuadOrder& O, const OElement& a);
Int o_trace(const QuadOrder& O, const OElement& a);
Int o_norm(const QuadOrder& O, const OElement& a);
double o_embed(const QuadOrder& O, const OElement& a, int sign);

enum class Splitting { split, inert, ramified };

struct PrimeIdealO {
    u64 p = 0;
    Splitting type = Splitting::inert;
    int index = 0;           // 1 or 2 for split primes, else 0
    u64 residue_size = 0;   // p or p^2
    u64 root = 0;           // residue of w mod the ideal, split/ramified only
};

std::vector<PrimeIdealO> splitting_type(const QuadOrder& O, u64 p);
// Notation "11_1", "sqrt(5)", "2".
std::string ideal_name(const PrimeIdealO& P);

// F_{p^2} = F_p[t]/(t^2 - c1 t - c0); c1 = 0 and c0 the least non-residue for odd p,
// t^2 = t + 1 for p = 2.
struct Fp2 {
    u64 p, c0, c1;
    explicit Fp2(u64 prime);
    struct E { u64 a, b; };
    E add(E x, E y) const { return {addmod(x.a, y.a, p), addmod(x.b, y.b, p)}; }
    E sub(E x, E y) const { return {submod(x.a, y.a, p), submod(x.b, y.b, p)}; }
    E mul(E x, E y) const;
    E scal(u64 c, E x) const { return {mulmod(c, x.a, p), mulmod(c, x.b, p)}; }
    u64 norm(E x) const;
    bool is_zero(E x) const { return x.a == 0 && x.b == 0; }
};

}  // namespace g2bsd
