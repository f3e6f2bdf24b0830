#include "g2bsd/curve.hpp"

#include "g2bsd/errors.hpp"
#include "g2bsd/pointcount.hpp"

namespace g2bsd {

CurveModel::CurveModel(std::vector<Int> f_, std::vector<Int> h_, std::string label_, u64 N)
    : f(std::move(f_)), h(std::move(h_)), label(std::move(label_)), level(N)
{
    if (f.size() > 7 || h.size() > 4) throw PreconditionViolation("model degrees exceed (6, 3)");
    f.resize(7, Int(0));
    h.resize(4, Int(0));
}

CurveModel CurveModel::from_ints(const std::vector<long>& f, const std::vector<long>& h,
                                 std::string label, u64 N)
{
    std::vector<Int> F(f.begin(), f.end()), H(h.begin(), h.end());
    return CurveModel(F, H, std::move(label), N);
}

std::vector<Int> CurveModel::sextic() const
{
    std::vector<Int> F(7, Int(0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) F[i + j] += h[i] * h[j];
    for (int i = 0; i < 7; ++i) F[i] += 4 * f[i];
    return F;
}

namespace {

Int det_bareiss(std::vector<std::vector<Int>> M)
{
    const size_t n = M.size();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k] == 0) {
            size_t r = k + 1;
            while (r < n && M[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(M[k], M[r]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]);
                mpz_divexact(M[i][j].get_mpz_t(), M[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = M[k][k];
    }
    return sign * M[n - 1][n - 1];
}

std::vector<Int> trimmed(std::vector<Int> a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

}  // namespace

Int poly_resultant(const std::vector<Int>& a0, const std::vector<Int>& b0)
{
    auto a = trimmed(a0), b = trimmed(b0);
    if (a.empty() || b.empty()) return 0;
    const size_t m = a.size() - 1, n = b.size() - 1;
    const size_t s = m + n;
    if (s == 0) return 1;
    std::vector<std::vector<Int>> M(s, std::vector<Int>(s, Int(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j <= m; ++j) M[i][i + j] = a[m - j];
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j <= n; ++j) M[n + i][i + j] = b[n - j];
    return det_bareiss(M);
}

Int binary_form_discriminant(const std::vector<Int>& F0, int n)
{
    auto F = trimmed(F0);
    int d = static_cast<int>(F.size()) - 1;
    if (d < n - 1) return 0;
    if (d == n - 1) return F.back() * F.back() * binary_form_discriminant(F, n - 1);
    std::vector<Int> dF;
    for (int i = 1; i <= d; ++i) dF.push_back(F[i] * i);
    Int r = poly_resultant(F, dF);
    r /= F.back();
    if ((n * (n - 1) / 2) % 2) r = -r;
    return r;
}

Int CurveModel::discriminant() const
{
    Int D = binary_form_discriminant(sextic(), 6);
    if (D % 4096 != 0) throw IntegralityViolation("sextic discriminant not divisible by 2^12");
    return D / 4096;
}

CurveFp reduce_mod_p(const CurveModel& model, u64 p)
{
    Int D = model.discriminant();
    if (D % Int(static_cast<unsigned long>(p)) == 0)
        throw BadReduction(model.label + " at p = " + std::to_string(p));
    CurveFp C;
    C.p = p;
    for (const auto& c : model.f) C.f.push_back(to_mod(c, p));
    for (const auto& c : model.h) C.h.push_back(to_mod(c, p));
    for (const auto& c : model.sextic()) C.F.push_back(to_mod(c, p));
    return C;
}

u64 count_points(const CurveFp& C, int k)
{
    const u64 p = C.p;
    if (p == 2) return count_points_bruteforce(C.f, C.h, p, k);
    const u64 lead = C.F[6];
    if (k == 1) {
        std::vector<std::int8_t> scratch;
        i64 s = char_sum(C.F, p, scratch);
        return static_cast<u64>(static_cast<i64>(p) + s + 1 + legendre(lead, p));
    }
    i64 s = char_sum_fp2(C.F, p);
    return static_cast<u64>(static_cast<i64>(p * p) + s + (lead ? 2 : 1));
}

EulerFactor EulerFactor::good_factor(u64 p, i64 e1, i64 e2)
{
    EulerFactor E;
    E.p = p; E.e1 = e1; E.e2 = e2; E.good = true;
    i64 P = static_cast<i64>(p);
    E.poly = {1, -e1, e2, -P * e1, P * P};
    return E;
}

EulerFactor EulerFactor::bad_factor(u64 p, std::vector<i64> poly)
{
    EulerFactor E;
    E.p = p; E.good = false;
    E.e1 = poly.size() > 1 ? -poly[1] : 0;
    E.e2 = poly.size() > 2 ? poly[2] : 0;
    E.poly = std::move(poly);
    return E;
}

i64 EulerFactor::at_one() const
{
    i64 s = 0;
    for (auto c : poly) s += c;
    return s;
}

EulerFactor euler_factor_from_counts(u64 p, u64 N1, u64 N2)
{
    i64 P = static_cast<i64>(p);
    i64 e1 = P + 1 - static_cast<i64>(N1);
    i64 s2 = P * P + 1 - static_cast<i64>(N2);
    i64 t = e1 * e1 - s2;
    if (t % 2) throw IntegralityViolation("e2 not integral at p = " + std::to_string(p));
    return EulerFactor::good_factor(p, e1, t / 2);
}

EulerFactor euler_factor(const CurveModel& model, u64 p)
{
    CurveFp C = reduce_mod_p(model, p);
    return euler_factor_from_counts(p, count_points(C, 1), count_points(C, 2));
}

CurveModel quadratic_twist(const CurveModel& model, i64 D)
{
    if (D == 1) return model;
    auto F = model.sextic();
    Int d(static_cast<long>(D));
    std::vector<Int> f(7), h(4, Int(0));
    i64 m = ((D % 4) + 4) % 4;
    if (m == 1) {
        h = model.h;
        h.resize(4, Int(0));
        std::vector<Int> h2(7, Int(0));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) h2[i + j] += h[i] * h[j];
        for (int i = 0; i < 7; ++i) {
            Int t = d * F[i] - h2[i];
            if (t % 4 != 0) throw IntegralityViolation("twist model not integral");
            f[i] = t / 4;
        }
    } else if (m == 0) {
        for (int i = 0; i < 7; ++i) f[i] = d * F[i] / 4;
    } else {
        throw PreconditionViolation("twist discriminant must be 0 or 1 mod 4");
    }
    std::string label = model.label.empty() ? std::string() : model.label + "^(" + std::to_string(D) + ")";
    return CurveModel(f, h, label, model.level * static_cast<u64>(D < 0 ? -D : D));
}

std::vector<std::vector<i64>> bad_euler_factor_candidates(const CurveModel& model, u64 p)
{
    if (model.level && model.level % (p * p) == 0) return {{1}};
    std::vector<std::vector<i64>> base = {{1}, {1, -1}, {1, 1}};
    std::vector<std::vector<i64>> out;
    for (const auto& a : base)
        for (const auto& b : base) {
            std::vector<i64> c(a.size() + b.size() - 1, 0);
            for (size_t i = 0; i < a.size(); ++i)
                for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
            out.push_back(c);
        }
    return out;
}

std::vector<u64> bad_primes(const CurveModel& model)
{
    std::vector<u64> out;
    for (auto& [q, e] : factor(model.discriminant())) out.push_back(q.get_ui());
    return out;
}

}  // namespace g2bsd
