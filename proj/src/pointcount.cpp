#include "g2bsd/pointcount.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

#include "g2bsd/field.hpp"

namespace g2bsd {

namespace {

// Bit i set iff i is a nonzero square mod p.
void build_square_bits(u64 p, std::vector<std::uint64_t>& bits)
{
    bits.assign(p / 64 + 1, 0);
    u64 s = 0;
    for (u64 k = 1; k <= (p - 1) / 2; ++k) {
        s += 2 * k - 1;
        if (s >= p) s -= p;
        bits[s >> 6] |= std::uint64_t{1} << (s & 63);
    }
}

void build_chi(u64 p, std::vector<std::int8_t>& chi)
{
    chi.assign(p, -1);
    chi[0] = 0;
    u64 s = 0;
    for (u64 k = 1; k <= (p - 1) / 2; ++k) {
        s += 2 * k - 1;
        if (s >= p) s -= p;
        chi[s] = 1;
    }
}

u64 horner(const std::vector<u64>& F, u64 x, u64 p)
{
    u64 r = 0;
    for (size_t i = F.size(); i-- > 0;) r = addmod(mulmod(r, x, p), F[i] % p, p);
    return r;
}

}  // namespace

i64 char_sum_reference(const std::vector<u64>& F, u64 p)
{
    i64 s = 0;
    for (u64 x = 0; x < p; ++x) s += legendre(horner(F, x, p), p);
    return s;
}

namespace {

// Eight interleaved difference schemes in 32-bit lanes; p < 2^31.
i64 char_sum_lanes(const std::uint32_t* d0, int n, u64 p, const std::uint64_t* bits)
{
    constexpr int L = 8;
    const u64 B = (p + L - 1) / L;
    alignas(32) std::uint32_t d[8][L];
    for (int i = 0; i <= n; ++i)
        for (int l = 0; l < L; ++l) d[i][l] = d0[i * L + l];
    for (int i = n + 1; i < 8; ++i)
        for (int l = 0; l < L; ++l) d[i][l] = 0;
    const std::uint32_t P = static_cast<std::uint32_t>(p);
    auto chi = [bits](std::uint32_t v) {
        int b = static_cast<int>(bits[v >> 6] >> (v & 63) & 1);
        return 2 * b - 1 + (v == 0);
    };
    i64 s = 0;
    const u64 common = B - L;
    for (u64 t = 0; t < common; ++t) {
        int acc = 0;
        for (int l = 0; l < L; ++l) acc += chi(d[0][l]);
        s += acc;
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < L; ++l) {
                std::uint32_t v = d[i][l] + d[i + 1][l];
                std::uint32_t w = v - P;
                d[i][l] = v < P ? v : w;
            }
    }
    for (int l = 0; l < L; ++l) {
        u64 len = std::min<u64>(B, p - std::min<u64>(p, l * B));
        for (u64 t = common; t < len; ++t) {
            s += chi(d[0][l]);
            for (int i = 0; i < n; ++i) {
                std::uint32_t v = d[i][l] + d[i + 1][l];
                d[i][l] = v < P ? v : v - P;
            }
        }
    }
    return s;
}

}  // namespace

i64 char_sum(const std::vector<u64>& F, u64 p, std::vector<std::int8_t>& chi)
{
    if (p < 3) throw std::domain_error("char_sum: odd prime required");
    const int n = static_cast<int>(F.size()) - 1;
    if (n < 0) return 0;
    auto diffs = [&](u64 x0, u64* d) {
        for (int j = 0; j <= n; ++j) d[j] = horner(F, (x0 + static_cast<u64>(j)) % p, p);
        for (int i = 1; i <= n; ++i)
            for (int j = n; j >= i; --j) d[j] = submod(d[j], d[j - 1], p);
    };
    if (p >= 4096 && p < (1ull << 31) && n <= 7) {
        constexpr int L = 8;
        const u64 B = (p + L - 1) / L;
        std::uint32_t d0[8 * L] = {0};
        for (int l = 0; l < L; ++l) {
            u64 d[8] = {0};
            diffs(l * B, d);
            for (int i = 0; i <= n; ++i) d0[i * L + l] = static_cast<std::uint32_t>(d[i]);
        }
        thread_local std::vector<std::uint64_t> bits;
        build_square_bits(p, bits);
        return char_sum_lanes(d0, n, p, bits.data());
    }
    build_chi(p, chi);
    u64 d[8] = {0};
    diffs(0, d);
    i64 s = 0;
    for (u64 x = 0; x < p; ++x) {
        s += chi[d[0]];
        for (int i = 0; i < n; ++i) {
            u64 t = d[i] + d[i + 1];
            d[i] = t >= p ? t - p : t;
        }
    }
    return s;
}

i64 char_sum_fp2(const std::vector<u64>& F, u64 p)
{
    if (p < 3) throw std::domain_error("char_sum_fp2: odd prime required");
    Fp2 K(p);
    std::vector<std::int8_t> chi;
    build_chi(p, chi);
    const int n = static_cast<int>(F.size()) - 1;
    if (n < 0) return 0;
    i64 s = 0;
    const bool small = p < (1ull << 31);
    for (u64 b = 0; b < p; ++b) {
        Fp2::E d[8];
        for (int j = 0; j <= n; ++j) {
            Fp2::E z{static_cast<u64>(j) % p, b}, r{0, 0};
            for (int i = n; i >= 0; --i) r = K.add(K.mul(r, z), {F[i] % p, 0});
            d[j] = r;
        }
        for (int i = 1; i <= n; ++i)
            for (int j = n; j >= i; --j) d[j] = K.sub(d[j], d[j - 1]);
        for (u64 a = 0; a < p; ++a) {
            u64 nm;
            if (small) {
                u64 x = d[0].a, y = d[0].b;
                nm = (x * x + p * p - (y * y % p) * K.c0 % p) % p;
            } else {
                nm = K.norm(d[0]);
            }
            s += chi[nm];
            for (int i = 0; i < n; ++i) {
                u64 ta = d[i].a + d[i + 1].a, tb = d[i].b + d[i + 1].b;
                d[i].a = ta >= p ? ta - p : ta;
                d[i].b = tb >= p ? tb - p : tb;
            }
        }
    }
    return s;
}

u64 count_points_bruteforce(const std::vector<u64>& f, const std::vector<u64>& h, u64 p, int k)
{
    auto coef = [](const std::vector<u64>& v, size_t i) { return i < v.size() ? v[i] : 0; };
    if (k == 1) {
        FpField K(p);
        Poly<FpField> F(f.begin(), f.end()), H(h.begin(), h.end());
        trim(K, F); trim(K, H);
        u64 n = 0;
        for (u64 x = 0; x < p; ++x) {
            u64 fx = peval(K, F, x), hx = peval(K, H, x);
            for (u64 y = 0; y < p; ++y)
                if (K.eq(K.add(K.mul(y, y), K.mul(hx, y)), fx)) ++n;
        }
        u64 h3 = coef(h, 3) % p, f6 = coef(f, 6) % p;
        for (u64 Y = 0; Y < p; ++Y)
            if (K.eq(K.add(K.mul(Y, Y), K.mul(h3, Y)), f6)) ++n;
        return n;
    }
    Fp2 K(p);
    auto ev = [&](const std::vector<u64>& c, Fp2::E z) {
        Fp2::E r{0, 0};
        for (size_t i = c.size(); i-- > 0;) r = K.add(K.mul(r, z), {c[i] % p, 0});
        return r;
    };
    auto eq = [](Fp2::E a, Fp2::E b) { return a.a == b.a && a.b == b.b; };
    u64 n = 0;
    for (u64 xa = 0; xa < p; ++xa)
        for (u64 xb = 0; xb < p; ++xb) {
            Fp2::E x{xa, xb}, fx = ev(f, x), hx = ev(h, x);
            for (u64 ya = 0; ya < p; ++ya)
                for (u64 yb = 0; yb < p; ++yb) {
                    Fp2::E y{ya, yb};
                    if (eq(K.add(K.mul(y, y), K.mul(hx, y)), fx)) ++n;
                }
        }
    Fp2::E h3{coef(h, 3) % p, 0}, f6{coef(f, 6) % p, 0};
    for (u64 ya = 0; ya < p; ++ya)
        for (u64 yb = 0; yb < p; ++yb) {
            Fp2::E Y{ya, yb};
            if (eq(K.add(K.mul(Y, Y), K.mul(h3, Y)), f6)) ++n;
        }
    return n;
}

namespace {

std::vector<u64> reduce(const std::vector<Int>& F, u64 p)
{
    std::vector<u64> r(F.size());
    for (size_t i = 0; i < F.size(); ++i) r[i] = to_mod(F[i], p);
    return r;
}

i64 trace_one(const std::vector<Int>& F, u64 p, std::vector<std::int8_t>& scratch)
{
    auto Fp = reduce(F, p);
    u64 lead = Fp.size() == 7 ? Fp[6] : 0;
    return -char_sum(Fp, p, scratch) - legendre(lead, p);
}

}  // namespace

std::vector<i64> traces_serial(const std::vector<Int>& F, const std::vector<u64>& primes)
{
    std::vector<i64> out(primes.size());
    std::vector<std::int8_t> scratch;
    for (size_t i = 0; i < primes.size(); ++i) out[i] = trace_one(F, primes[i], scratch);
    return out;
}

std::vector<i64> traces_omp(const std::vector<Int>& F, const std::vector<u64>& primes, int threads)
{
    std::vector<i64> out(primes.size());
    if (threads <= 0) threads = omp_get_max_threads();
    const long n = static_cast<long>(primes.size());
#pragma omp parallel num_threads(threads)
    {
        std::vector<std::int8_t> scratch;
        // Largest primes first so the dynamic schedule balances.
#pragma omp for schedule(dynamic, 8)
        for (long i = n - 1; i >= 0; --i) out[i] = trace_one(F, primes[i], scratch);
    }
    return out;
}

}  // namespace g2bsd
