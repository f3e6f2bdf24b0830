#include "g2bsd/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "g2bsd/periods.hpp"

namespace g2bsd {

namespace {

Poly<QField> qpoly(const std::vector<Int>& c)
{
    QField Q;
    return pfrom(Q, c);
}

std::vector<Int> int_coeffs(const Poly<QField>& a, size_t n)
{
    std::vector<Int> out(n, Int(0));
    for (size_t i = 0; i < a.size() && i < n; ++i) {
        if (a[i].get_den() != 1) throw IntegralityViolation("non-integral transformed model");
        out[i] = a[i].get_num();
    }
    return out;
}

bool is_rational_square(const Int& v)
{
    return v >= 0 && mpz_perfect_square_p(v.get_mpz_t());
}

Int int128_to_mpz(__int128 v)
{
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    Int hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u & ~0ull));
    Int r = (hi << 64) + lo;
    return neg ? Int(-r) : r;
}

Int eval_int(const std::vector<Int>& a, const Int& x)
{
    Int r = 0;
    for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

}  // namespace

ImaginaryModel make_imaginary(const CurveModel& model)
{
    auto F = model.sextic();
    for (long k = 0; k < 200; ++k) {
        long c = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
        Int v = eval_int(F, Int(c));
        if (v == 0 || is_rational_square(v)) continue;
        QField Q;
        ImaginaryModel M;
        M.original = model;
        M.c = c;
        M.f = int_coeffs(invert_shift(Q, qpoly(model.f), Rat(c), 6), 7);
        M.h = int_coeffs(invert_shift(Q, qpoly(model.h), Rat(c), 3), 4);
        M.F = int_coeffs(invert_shift(Q, qpoly(F), Rat(c), 6), 7);
        return M;
    }
    throw PreconditionViolation("no imaginary shift found");
}

bool imaginary_mod_p(const CurveModel& model, u64 p, u64& c_out)
{
    auto F = model.sextic();
    for (u64 c = 0; c < p; ++c) {
        if (p == 2) {
            u64 hc = to_mod(eval_int(model.h, Int(static_cast<unsigned long>(c))), 2);
            u64 fc = to_mod(eval_int(model.f, Int(static_cast<unsigned long>(c))), 2);
            if (hc == 1 && fc == 1) { c_out = c; return true; }
            continue;
        }
        u64 v = to_mod(eval_int(F, Int(static_cast<unsigned long>(c))), p);
        if (v == 0 || legendre(v, p) == -1) { c_out = c; return true; }
    }
    return false;
}

Jacobian<QField> jacobian_q(const ImaginaryModel& M)
{
    return Jacobian<QField>(QField{}, qpoly(M.f), qpoly(M.h));
}

Jacobian<FpField> jacobian_fp(const ImaginaryModel& M, u64 p)
{
    FpField K(p);
    if (p != 2 && legendre(to_mod(M.F[6], p), p) != -1)
        throw PreconditionViolation("model not imaginary mod " + std::to_string(p));
    return Jacobian<FpField>(K, pfrom(K, M.f), pfrom(K, M.h));
}

Jacobian<FpField> jacobian_fp_shift(const CurveModel& model, u64 p, u64 c)
{
    FpField K(p);
    if (p == 2) {
        Poly<FpField> f = invert_shift(K, pfrom(K, model.f), c, 6);
        Poly<FpField> h = invert_shift(K, pfrom(K, model.h), c, 3);
        return Jacobian<FpField>(K, f, h);
    }
    Poly<FpField> F = invert_shift(K, pfrom(K, model.sextic()), c, 6);
    return Jacobian<FpField>(K, F, {});
}

DivP reduce_divisor(const DivQ& D, u64 p)
{
    FpField K(p);
    auto red = [&](const Poly<QField>& a) {
        Poly<FpField> r(a.size());
        for (size_t i = 0; i < a.size(); ++i) {
            u64 den = to_mod(Int(a[i].get_den()), p);
            if (den == 0) throw BadReduction("divisor denominator at p = " + std::to_string(p));
            r[i] = mulmod(to_mod(Int(a[i].get_num()), p), invmod(den, p), p);
        }
        trim(K, r);
        return r;
    };
    return DivP{red(D.a), red(D.b)};
}

std::vector<RationalPoint> search_rational_points(const ImaginaryModel& M, long H)
{
    const auto F = M.original.sextic();
    const auto& h = M.original.h;
    std::vector<RationalPoint> pts;
    Rat c(M.c);
    auto push_affine = [&](const Rat& x, const Rat& yprime) {
        Rat hx = 0;
        for (size_t i = h.size(); i-- > 0;) hx = hx * x + Rat(h[i]);
        std::set<std::string> seen;
        for (int s : {1, -1}) {
            Rat y = (s * yprime - hx) / 2;
            std::string key = y.get_str();
            if (seen.count(key)) continue;
            seen.insert(key);
            RationalPoint P;
            P.x = x; P.y = y;
            P.t = 1 / (x - c);
            P.Y = y * P.t * P.t * P.t;
            pts.push_back(P);
        }
    };
    // points at infinity: Y^2 + h3 Y = f6
    {
        Int lead = F[6];
        if (is_rational_square(lead)) {
            Int s = sqrt(lead);
            std::set<std::string> seen;
            for (int sg : {1, -1}) {
                Rat Y = (Rat(sg * s) - (h.size() > 3 ? Rat(h[3]) : Rat(0))) / 2;
                if (seen.count(Y.get_str())) continue;
                seen.insert(Y.get_str());
                RationalPoint P;
                P.at_infinity = true;
                P.y = Y;
                P.t = 0;
                P.Y = Y;
                pts.push_back(P);
            }
        }
    }
    std::vector<__int128> Fc(7);
    for (int i = 0; i < 7; ++i) Fc[i] = static_cast<__int128>(F[i].get_si());
    std::vector<__int128> vpow(7), upow(7);
    for (long v = 1; v <= H; ++v) {
        vpow[0] = 1;
        for (int i = 1; i < 7; ++i) vpow[i] = vpow[i - 1] * v;
        for (long u = -H; u <= H; ++u) {
            if (std::gcd(u, v) != 1) continue;
            upow[0] = 1;
            for (int i = 1; i < 7; ++i) upow[i] = upow[i - 1] * u;
            __int128 val = 0;
            for (int i = 0; i < 7; ++i) val += Fc[i] * upow[i] * vpow[6 - i];
            if (val < 0) continue;
            unsigned m = static_cast<unsigned>(val & 63);
            if (!((0x202021202030213ull >> m) & 1)) continue;
            Int big = int128_to_mpz(val);
            if (!is_rational_square(big)) continue;
            Rat x{Int(u), Int(v)};
            x.canonicalize();
            if (x == c) continue;
            Int s = sqrt(big);
            push_affine(x, Rat(s, Int(v) * Int(v) * Int(v)));
        }
    }
    return pts;
}

std::string divisor_key(const DivQ& D)
{
    std::ostringstream os;
    for (const auto& c : D.a) os << c.get_str() << ',';
    os << '|';
    for (const auto& c : D.b) os << c.get_str() << ',';
    return os.str();
}

namespace {

// Rational quadratic factors of F via its complex roots.
std::vector<Poly<QField>> quadratic_factors(const std::vector<Int>& F)
{
    std::vector<long double> coeffs;
    for (const auto& c : F) coeffs.push_back(c.get_d());
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    auto roots = polynomial_roots(coeffs);
    QField Q;
    Poly<QField> FQ = pfrom(Q, F);
    std::vector<Poly<QField>> out;
    std::set<std::string> seen;
    long double L = std::fabs(coeffs.back());
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j) {
            auto s = roots[i] + roots[j], p = roots[i] * roots[j];
            if (std::fabs(s.imag()) > 1e-6 || std::fabs(p.imag()) > 1e-6) continue;
            Rat a1(Int(static_cast<long>(std::llround(-s.real() * L))), Int(static_cast<long>(std::llround(L))));
            Rat a0(Int(static_cast<long>(std::llround(p.real() * L))), Int(static_cast<long>(std::llround(L))));
            a1.canonicalize(); a0.canonicalize();
            Poly<QField> q{a0, a1, Rat(1)};
            if (!pmod(Q, FQ, q).empty()) continue;
            std::string key = a0.get_str() + "," + a1.get_str();
            if (seen.insert(key).second) out.push_back(q);
        }
    return out;
}

}  // namespace

std::vector<DivQ> search_points(const ImaginaryModel& M, long height_bound)
{
    auto J = jacobian_q(M);
    QField Q;
    std::vector<DivQ> out{J.identity()};
    std::set<std::string> seen{divisor_key(out[0])};
    auto push = [&](const DivQ& D) {
        auto key = divisor_key(D);
        if (seen.insert(key).second) out.push_back(D);
    };
    for (const auto& q : quadratic_factors(M.F)) {
        // b = -h/2 mod q
        Poly<QField> b = pmod(Q, pscale(Q, Rat(-1, 2), pfrom(Q, M.h)), q);
        DivQ D{q, b};
        if (J.is_valid(D)) push(D);
    }
    auto pts = search_rational_points(M, height_bound);
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i; j < pts.size(); ++j) {
            DivQ D = J.from_points(pts[i].t, pts[i].Y, pts[j].t, pts[j].Y);
            push(D);
        }
    for (const auto& D : search_quadratic_divisors(M, height_bound)) push(D);
    return out;
}

namespace {

bool rational_sqrt(const Rat& q, Rat& r)
{
    if (q < 0) return false;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return false;
    Int n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    r = Rat(n, d);
    r.canonicalize();
    return true;
}

}  // namespace

std::vector<DivQ> search_quadratic_divisors(const ImaginaryModel& M, long coeff_bound)
{
    auto J = jacobian_q(M);
    QField Q;
    Poly<QField> F = pfrom(Q, M.F), h = pfrom(Q, M.h);
    std::vector<DivQ> out;
    const long B = coeff_bound;
    for (long l2 = 1; l2 <= B; ++l2)
        for (long l1 = -B; l1 <= B; ++l1)
            for (long l0 = -B; l0 <= B; ++l0) {
                if (std::gcd(std::gcd(l2, std::labs(l1)), std::labs(l0)) != 1) continue;
                long disc = l1 * l1 - 4 * l0 * l2;
                if (disc >= 0) {
                    long s = static_cast<long>(std::llround(std::sqrt(static_cast<double>(disc))));
                    if (s * s == disc) continue;
                }
                // a = t^2 + a1 t + a0 irreducible; need c = c1 t + c0 with c^2 = F mod a
                Rat a1(l1, l2), a0(l0, l2);
                a1.canonicalize();
                a0.canonicalize();
                Poly<QField> a{a0, a1, Rat(1)};
                Poly<QField> r = pmod(Q, F, a);
                Rat r0 = r.size() > 0 ? r[0] : Rat(0), r1 = r.size() > 1 ? r[1] : Rat(0);
                Rat c0, c1;
                if (r1 == 0) {
                    if (!rational_sqrt(r0, c0)) continue;
                } else {
                    // (a1^2 - 4 a0) z^2 + (2 a1 r1 - 4 r0) z + r1^2 = 0 with z = c1^2
                    Rat A = a1 * a1 - 4 * a0, Bq = 2 * a1 * r1 - 4 * r0, C = r1 * r1;
                    Rat sq;
                    if (!rational_sqrt(Bq * Bq - 4 * A * C, sq)) continue;
                    bool found = false;
                    for (int sgn : {1, -1}) {
                        Rat z = (-Bq + sgn * sq) / (2 * A);
                        if (z > 0 && rational_sqrt(z, c1)) {
                            found = true;
                            break;
                        }
                    }
                    if (!found) continue;
                    c0 = (r1 + a1 * c1 * c1) / (2 * c1);
                }
                Poly<QField> c{c0, c1};
                trim(Q, c);
                Poly<QField> b = pmod(Q, pscale(Q, Rat(1, 2), psub(Q, c, h)), a);
                DivQ D{a, b};
                if (J.is_valid(D)) out.push_back(D);
            }
    return out;
}

Int order_in_group(const Jacobian<FpField>& J, const DivP& D, const Int& n)
{
    Int ord = n;
    for (auto& [q, e] : factor(n)) {
        for (int i = 0; i < e; ++i) {
            if (J.is_identity(J.mul(ord / q, D))) ord /= q;
            else break;
        }
    }
    return ord;
}

namespace {

std::vector<long> group_structure(const std::vector<DivQ>& G, const Jacobian<QField>& J)
{
    // invariant factors from counts of elements killed by each n
    const long n = static_cast<long>(G.size());
    std::vector<long> inv;
    if (n == 1) return inv;
    std::map<long, long> killed;
    for (long d = 1; d <= n; ++d) {
        if (n % d) continue;
        long c = 0;
        for (const auto& g : G)
            if (J.is_identity(J.mul(Int(d), g))) ++c;
        killed[d] = c;
    }
    // For each prime p, the p-rank pattern gives the invariants.
    std::vector<std::pair<u64, int>> fac = factor(static_cast<u64>(n));
    std::map<long, long> factors;  // cyclic p-power parts
    std::vector<std::vector<long>> per_prime;
    for (auto& [p, e] : fac) {
        std::vector<long> parts;
        long pp = static_cast<long>(p);
        // r_k = log_p #G[p^k]
        std::vector<int> r;
        long pk = 1;
        for (int k = 0; k <= e; ++k) {
            long cnt = killed.count(pk) ? killed[pk] : 0;
            int lg = 0;
            while (cnt > 1) { cnt /= pp; ++lg; }
            r.push_back(lg);
            pk *= pp;
        }
        // number of cyclic factors of order >= p^k is r_k - r_{k-1}
        for (int k = e; k >= 1; --k) {
            int ge_k = r[k] - r[k - 1];
            int ge_k1 = k < e ? r[k + 1] - r[k] : 0;
            long pw = 1;
            for (int i = 0; i < k; ++i) pw *= pp;
            for (int i = 0; i < ge_k - ge_k1; ++i) parts.push_back(pw);
        }
        per_prime.push_back(parts);
    }
    size_t m = 0;
    for (auto& v : per_prime) m = std::max(m, v.size());
    for (auto& v : per_prime) std::sort(v.begin(), v.end(), std::greater<long>());
    for (size_t i = 0; i < m; ++i) {
        long c = 1;
        for (auto& v : per_prime)
            if (i < v.size()) c *= v[i];
        inv.push_back(c);
    }
    std::sort(inv.begin(), inv.end());
    return inv;
}

}  // namespace

TorsionReport torsion_subgroup(const ImaginaryModel& M, const std::vector<DivQ>& candidates, int num_primes)
{
    TorsionReport R;
    Int disc = M.original.discriminant();
    Int bound = 0;
    u64 p0 = 0;
    Int n0 = 0;
    for (u64 p = 3; static_cast<int>(R.primes_used.size()) < num_primes; p += 2) {
        if (!is_prime(p) || disc % Int(static_cast<unsigned long>(p)) == 0) continue;
        auto E = euler_factor(M.original, p);
        Int order(static_cast<long>(E.at_one()));
        bound = gcd(bound, order);
        R.primes_used.push_back(p);
        if (p0 == 0 && legendre(to_mod(M.F[6], p), p) == -1) {
            bool ok = true;
            for (const auto& D : candidates)
                for (const auto& c : D.a)
                    if (to_mod(Int(c.get_den()), p) == 0) ok = false;
            if (ok) { p0 = p; n0 = order; }
        }
    }
    R.bound = bound;
    auto J = jacobian_q(M);
    std::vector<DivQ> tors;
    if (p0 != 0) {
        auto Jp = jacobian_fp(M, p0);
        for (const auto& D : candidates) {
            DivP d;
            try { d = reduce_divisor(D, p0); } catch (const BadReduction&) { continue; }
            Int o = order_in_group(Jp, d, n0);
            if (bound % o != 0) continue;
            if (J.is_identity(J.mul(o, D))) tors.push_back(D);
        }
    }
    // closure
    std::vector<DivQ> G{J.identity()};
    std::set<std::string> keys{divisor_key(G[0])};
    for (const auto& t : tors) {
        if (keys.count(divisor_key(t))) continue;
        std::vector<DivQ> add = G;
        DivQ m = t;
        while (!keys.count(divisor_key(m))) {
            for (const auto& g : G) {
                DivQ s = J.add(g, m);
                if (keys.insert(divisor_key(s)).second) add.push_back(s);
            }
            m = J.add(m, t);
        }
        G = add;
        if (G.size() > 1000) break;
    }
    R.order = static_cast<long>(G.size());
    R.elements = G;
    R.structure = group_structure(G, J);
    R.certified = (Int(R.order) == bound);
    return R;
}

TorsionReport torsion_subgroup(const CurveModel& model)
{
    auto M = make_imaginary(model);
    return torsion_subgroup(M, search_points(M, 30));
}

std::vector<DivP> enumerate_jacobian(const Jacobian<FpField>& J)
{
    const u64 p = J.k.p;
    std::vector<DivP> out{J.identity()};
    const bool ramified = deg<FpField>(J.f) == 5;
    if (ramified) {
        for (u64 u = 0; u < p; ++u)
            for (u64 b0 = 0; b0 < p; ++b0) {
                DivP D{{J.k.neg(u), 1}, {}};
                if (b0) D.b = {b0};
                if (J.is_valid(D)) out.push_back(D);
            }
    }
    for (u64 a0 = 0; a0 < p; ++a0)
        for (u64 a1 = 0; a1 < p; ++a1)
            for (u64 b0 = 0; b0 < p; ++b0)
                for (u64 b1 = 0; b1 < p; ++b1) {
                    DivP D{{a0, a1, 1}, {b0, b1}};
                    trim(J.k, D.b);
                    if (J.is_valid(D)) out.push_back(D);
                }
    return out;
}

}  // namespace g2bsd
