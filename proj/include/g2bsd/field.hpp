#pragma once

#include <vector>

#include "g2bsd/numbers.hpp"

namespace g2bsd {

struct FpField {
    using E = u64;
    u64 p;
    explicit FpField(u64 prime) : p(prime) {}
    E zero() const { return 0; }
    E one() const { return 1 % p; }
    E add(E a, E b) const { return addmod(a, b, p); }
    E sub(E a, E b) const { return submod(a, b, p); }
    E mul(E a, E b) const { return mulmod(a, b, p); }
    E neg(E a) const { return a ? p - a : 0; }
    E inv(E a) const { return invmod(a, p); }
    bool is_zero(E a) const { return a == 0; }
    bool eq(E a, E b) const { return a == b; }
    E from(const Int& a) const { return to_mod(a, p); }
    E from(i64 a) const { return to_mod(a, p); }
};

struct QField {
    using E = Rat;
    E zero() const { return Rat(0); }
    E one() const { return Rat(1); }
    E add(const E& a, const E& b) const { return a + b; }
    E sub(const E& a, const E& b) const { return a - b; }
    E mul(const E& a, const E& b) const { return a * b; }
    E neg(const E& a) const { return -a; }
    E inv(const E& a) const { return 1 / a; }
    bool is_zero(const E& a) const { return a == 0; }
    bool eq(const E& a, const E& b) const { return a == b; }
    E from(const Int& a) const { return Rat(a); }
    E from(i64 a) const { return Rat(static_cast<long>(a)); }
};

// Dense polynomials, coefficient i at index i, no trailing zeros (zero is empty).
template <class K>
using Poly = std::vector<typename K::E>;

template <class K>
void trim(const K& k, Poly<K>& a)
{
    while (!a.empty() && k.is_zero(a.back())) a.pop_back();
}

template <class K>
int deg(const Poly<K>& a) { return static_cast<int>(a.size()) - 1; }

template <class K>
Poly<K> padd(const K& k, const Poly<K>& a, const Poly<K>& b)
{
    Poly<K> r(std::max(a.size(), b.size()), k.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = k.add(r[i], b[i]);
    trim(k, r);
    return r;
}

template <class K>
Poly<K> psub(const K& k, const Poly<K>& a, const Poly<K>& b)
{
    Poly<K> r(std::max(a.size(), b.size()), k.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = k.sub(r[i], b[i]);
    trim(k, r);
    return r;
}

template <class K>
Poly<K> pneg(const K& k, const Poly<K>& a)
{
    Poly<K> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = k.neg(a[i]);
    return r;
}

template <class K>
Poly<K> pmul(const K& k, const Poly<K>& a, const Poly<K>& b)
{
    if (a.empty() || b.empty()) return {};
    Poly<K> r(a.size() + b.size() - 1, k.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (k.is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
    }
    trim(k, r);
    return r;
}

template <class K>
Poly<K> pscale(const K& k, const typename K::E& c, const Poly<K>& a)
{
    Poly<K> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = k.mul(c, a[i]);
    trim(k, r);
    return r;
}

template <class K>
void pdivmod(const K& k, const Poly<K>& a, const Poly<K>& b, Poly<K>& q, Poly<K>& r)
{
    if (b.empty()) throw std::domain_error("polynomial division by zero");
    r = a;
    q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, k.zero());
    auto lcinv = k.inv(b.back());
    while (r.size() >= b.size()) {
        size_t s = r.size() - b.size();
        auto c = k.mul(r.back(), lcinv);
        q[s] = c;
        for (size_t j = 0; j < b.size(); ++j) r[s + j] = k.sub(r[s + j], k.mul(c, b[j]));
        r.pop_back();
        trim(k, r);
    }
    trim(k, q);
}

template <class K>
Poly<K> pmod(const K& k, const Poly<K>& a, const Poly<K>& b)
{
    Poly<K> q, r;
    pdivmod(k, a, b, q, r);
    return r;
}

template <class K>
Poly<K> pdiv_exact(const K& k, const Poly<K>& a, const Poly<K>& b)
{
    Poly<K> q, r;
    pdivmod(k, a, b, q, r);
    if (!r.empty()) throw std::domain_error("inexact polynomial division");
    return q;
}

template <class K>
Poly<K> pmonic(const K& k, const Poly<K>& a)
{
    if (a.empty()) return a;
    return pscale(k, k.inv(a.back()), a);
}

// Returns monic g = gcd(a, b) and s, t with s a + t b = g.
template <class K>
Poly<K> pxgcd(const K& k, const Poly<K>& a, const Poly<K>& b, Poly<K>& s, Poly<K>& t)
{
    Poly<K> r0 = a, r1 = b;
    Poly<K> s0{k.one()}, s1{}, t0{}, t1{k.one()};
    trim(k, s0);
    trim(k, t1);
    while (!r1.empty()) {
        Poly<K> q, r;
        pdivmod(k, r0, r1, q, r);
        Poly<K> s2 = psub(k, s0, pmul(k, q, s1));
        Poly<K> t2 = psub(k, t0, pmul(k, q, t1));
        r0 = std::move(r1); r1 = std::move(r);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (r0.empty()) { s = {}; t = {}; return {}; }
    auto c = k.inv(r0.back());
    s = pscale(k, c, s0);
    t = pscale(k, c, t0);
    return pscale(k, c, r0);
}

template <class K>
typename K::E peval(const K& k, const Poly<K>& a, const typename K::E& x)
{
    auto r = k.zero();
    for (size_t i = a.size(); i-- > 0;) r = k.add(k.mul(r, x), a[i]);
    return r;
}

template <class K>
Poly<K> pderiv(const K& k, const Poly<K>& a)
{
    if (a.size() <= 1) return {};
    Poly<K> r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = k.mul(k.from(static_cast<i64>(i)), a[i]);
    trim(k, r);
    return r;
}

template <class K>
Poly<K> pfrom(const K& k, const std::vector<Int>& c)
{
    Poly<K> r(c.size());
    for (size_t i = 0; i < c.size(); ++i) r[i] = k.from(c[i]);
    trim(k, r);
    return r;
}

template <class K>
bool peq(const K& k, const Poly<K>& a, const Poly<K>& b)
{
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!k.eq(a[i], b[i])) return false;
    return true;
}

// t^n a(c + 1/t) as a polynomial in t.
template <class K>
Poly<K> invert_shift(const K& k, const Poly<K>& a, const typename K::E& c, int n)
{
    // shift: a(x + c)
    Poly<K> s = a;
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = s.size() - 1; j > i; --j) s[j - 1] = k.add(s[j - 1], k.mul(c, s[j]));
    Poly<K> r(n + 1, k.zero());
    for (size_t i = 0; i < s.size(); ++i) r[n - i] = s[i];
    trim(k, r);
    return r;
}

}  // namespace g2bsd
