#include "g2bsd/periods.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "g2bsd/errors.hpp"

namespace g2bsd {

namespace {

cld horner(const std::vector<long double>& c, cld x)
{
    cld r = 0;
    for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

std::vector<long double> trimmed(std::vector<long double> c)
{
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

}  // namespace

std::vector<cld> polynomial_roots(const std::vector<long double>& coeffs0)
{
    auto c = trimmed(coeffs0);
    const int n = static_cast<int>(c.size()) - 1;
    if (n < 1) return {};
    std::vector<long double> d(n);
    for (int i = 1; i <= n; ++i) d[i - 1] = c[i] * i;
    long double rad = 0;
    for (int i = 0; i < n; ++i) rad = std::max(rad, std::pow(std::fabs(c[i] / c[n]), 1.0L / (n - i)));
    rad = 2 * rad + 1;
    std::vector<cld> z(n);
    for (int k = 0; k < n; ++k) z[k] = std::polar(rad * 0.6L, 2 * M_PIl * (k + 0.25L) / n);
    // Aberth iteration
    for (int it = 0; it < 500; ++it) {
        long double move = 0;
        for (int k = 0; k < n; ++k) {
            cld p = horner(c, z[k]), dp = horner(d, z[k]);
            if (std::abs(p) == 0) continue;
            cld ratio = p / dp;
            cld s = 0;
            for (int j = 0; j < n; ++j)
                if (j != k) s += 1.0L / (z[k] - z[j]);
            cld w = ratio / (1.0L - ratio * s);
            z[k] -= w;
            move = std::max(move, std::abs(w) / std::max(1.0L, std::abs(z[k])));
        }
        if (move < 1e-19L) break;
    }
    for (auto& r : z) {
        for (int it = 0; it < 3; ++it) {
            cld dp = horner(d, r);
            if (std::abs(dp) == 0) break;
            r -= horner(c, r) / dp;
        }
        if (std::fabs(r.imag()) < 1e-16L * std::max(1.0L, std::abs(r))) r = cld(r.real(), 0);
    }
    std::sort(z.begin(), z.end(), [](const cld& a, const cld& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return z;
}

RealLocus components_real_locus(const std::vector<long double>& F0)
{
    auto F = trimmed(F0);
    RealLocus L;
    auto roots = polynomial_roots(F);
    std::vector<long double> real;
    for (auto& r : roots)
        if (r.imag() == 0) real.push_back(r.real());
    std::sort(real.begin(), real.end());
    const int deg = static_cast<int>(F.size()) - 1;
    auto val = [&](long double x) {
        long double r = 0;
        for (size_t i = F.size(); i-- > 0;) r = r * x + F[i];
        return r;
    };
    if (real.empty()) {
        if (F.back() > 0) {
            L.components = 1;
            L.intervals.push_back({1, -1});
        }
        return L;
    }
    const size_t m = real.size();
    for (size_t i = 0; i + 1 < m; ++i) {
        long double mid = (real[i] + real[i + 1]) / 2;
        if (val(mid) > 0) L.intervals.push_back({real[i], real[i + 1]});
    }
    // the unbounded stretch through infinity
    bool left = val(real[0] - 1) > 0, right = val(real[m - 1] + 1) > 0;
    if ((deg % 2 == 0 && left && right) || (deg % 2 == 1 && (left || right)))
        L.intervals.push_back({real[m - 1], real[0]});
    L.components = static_cast<int>(L.intervals.size());
    return L;
}

RealLocus components_real_locus(const CurveModel& model)
{
    std::vector<long double> F;
    for (const auto& c : model.sextic()) F.push_back(c.get_d());
    return components_real_locus(F);
}

int real_two_torsion_rank(const std::vector<cld>& roots)
{
    const int n = static_cast<int>(roots.size());
    if (n != 6) throw PreconditionViolation("two-torsion rank needs six branch points");
    auto conj_index = [&](int i) {
        int best = 0;
        long double bd = 1e300L;
        for (int j = 0; j < n; ++j) {
            long double d = std::abs(std::conj(roots[i]) - roots[j]);
            if (d < bd) { bd = d; best = j; }
        }
        return best;
    };
    std::array<int, 6> sigma{};
    for (int i = 0; i < n; ++i) sigma[i] = conj_index(i);
    int count = 0;
    for (int S = 0; S < 64; ++S) {
        if (__builtin_popcount(S) % 2) continue;
        if (S & 32) continue;  // S and its complement give the same class
        int T = 0;
        for (int i = 0; i < n; ++i)
            if (S >> i & 1) T |= 1 << sigma[i];
        if (T == S || T == (63 ^ S)) ++count;
    }
    int d = 0;
    while ((1 << d) < count) ++d;
    return d;
}

namespace {

// Integral of x^j dx / sqrt(F) along the straight segment [a, b] for j = 0, 1,
// with F = lc * prod (x - e_k); x = (a+b)/2 - (b-a)/2 cos(t).
struct SegmentResult {
    cld v[2];
    long double err;
    int nodes;
};

SegmentResult segment_integral(const std::vector<cld>& roots, long double lc, int ia, int ib, long double precision)
{
    const cld a = roots[ia], b = roots[ib];
    const cld mid = (a + b) / 2.0L, half = (b - a) / 2.0L;
    for (size_t k = 0; k < roots.size(); ++k) {
        if (static_cast<int>(k) == ia || static_cast<int>(k) == ib) continue;
        // distance from the segment
        cld r = roots[k];
        long double t = std::real((r - a) * std::conj(b - a)) / std::norm(b - a);
        t = std::clamp(t, 0.0L, 1.0L);
        if (std::abs(r - (a + t * (b - a))) < 1e-9L * std::max(1.0L, std::abs(b - a)))
            throw PathDegeneracy("branch point on integration path");
    }
    auto G = [&](cld x) {
        cld g = lc;
        for (size_t k = 0; k < roots.size(); ++k)
            if (static_cast<int>(k) != ia && static_cast<int>(k) != ib) g *= (x - roots[k]);
        return g;
    };
    auto run = [&](int n, cld out[2]) {
        // trapezoid on [0, pi] with n intervals; the integrand is even at both ends
        cld prev_s = 0;
        out[0] = out[1] = 0;
        for (int i = 0; i <= n; ++i) {
            long double th = M_PIl * i / n;
            cld x = mid - half * std::cos(th);
            cld s = std::sqrt(G(x));
            if (i > 0 && std::abs(s - prev_s) > std::abs(s + prev_s)) s = -s;
            prev_s = s;
            long double w = (i == 0 || i == n) ? 0.5L : 1.0L;
            cld val = w / (cld(0, 1) * s);
            out[0] += val;
            out[1] += val * x;
        }
        for (int j = 0; j < 2; ++j) out[j] *= M_PIl / n;
    };
    cld cur[2], nxt[2];
    int n = 64;
    run(n, cur);
    while (true) {
        run(2 * n, nxt);
        long double scale = std::max(std::abs(nxt[0]), std::abs(nxt[1]));
        long double diff = std::max(std::abs(nxt[0] - cur[0]), std::abs(nxt[1] - cur[1]));
        n *= 2;
        cur[0] = nxt[0];
        cur[1] = nxt[1];
        if (diff <= precision * scale) return SegmentResult{{cur[0], cur[1]}, diff, n};
        if (n > (1 << 20)) throw PrecisionLoss("period quadrature did not converge");
    }
}

using Mat4 = std::array<std::array<long double, 4>, 4>;

bool invert4(const Mat4& A, Mat4& inv)
{
    Mat4 M = A;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) inv[i][j] = (i == j);
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::fabs(M[r][c]) > std::fabs(M[piv][c])) piv = r;
        if (std::fabs(M[piv][c]) < 1e-30L) return false;
        std::swap(M[c], M[piv]);
        std::swap(inv[c], inv[piv]);
        long double d = M[c][c];
        for (int j = 0; j < 4; ++j) { M[c][j] /= d; inv[c][j] /= d; }
        for (int r = 0; r < 4; ++r) {
            if (r == c) continue;
            long double f = M[r][c];
            for (int j = 0; j < 4; ++j) { M[r][j] -= f * M[c][j]; inv[r][j] -= f * inv[c][j]; }
        }
    }
    return true;
}

// Z-basis of the left integer kernel of an integer n x 4 matrix (rows x with x A = 0).
std::vector<std::array<long long, 4>> integer_left_kernel(std::array<std::array<long long, 4>, 4> A)
{
    std::array<std::array<long long, 4>, 4> U{};
    for (int i = 0; i < 4; ++i) U[i][i] = 1;
    int row = 0;
    for (int col = 0; col < 4 && row < 4; ++col) {
        // gcd-reduce column col among rows >= row
        while (true) {
            int piv = -1;
            for (int r = row; r < 4; ++r)
                if (A[r][col] != 0 && (piv < 0 || std::llabs(A[r][col]) < std::llabs(A[piv][col]))) piv = r;
            if (piv < 0) break;
            std::swap(A[row], A[piv]);
            std::swap(U[row], U[piv]);
            bool done = true;
            for (int r = row + 1; r < 4; ++r) {
                if (A[r][col] == 0) continue;
                long long q = A[r][col] / A[row][col];
                for (int j = 0; j < 4; ++j) { A[r][j] -= q * A[row][j]; U[r][j] -= q * U[row][j]; }
                if (A[r][col] != 0) done = false;
            }
            if (done) { ++row; break; }
        }
    }
    std::vector<std::array<long long, 4>> ker;
    for (int r = 0; r < 4; ++r) {
        bool zero = true;
        for (int j = 0; j < 4; ++j)
            if (A[r][j] != 0) zero = false;
        if (zero) ker.push_back(U[r]);
    }
    return ker;
}

}  // namespace

PeriodData periods_of_sextic(const std::vector<long double>& F0, long double precision)
{
    auto F = trimmed(F0);
    const int deg = static_cast<int>(F.size()) - 1;
    if (deg != 5 && deg != 6) throw PreconditionViolation("period computation needs degree 5 or 6");
    // Move a branch point away from infinity: x = c + 1/t, which maps
    // (dx/Y, x dx/Y) to (-t dt/Y', -(c t + 1) dt/Y') with determinant -1.
    long double c = 0;
    std::vector<long double> G = F;
    bool shifted = false;
    if (deg == 5) {
        for (int k = 0; k < 50; ++k) {
            long double cc = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
            long double v = 0;
            for (size_t i = F.size(); i-- > 0;) v = v * cc + F[i];
            if (std::fabs(v) > 1e-6L) { c = cc; break; }
        }
        // s(t) = t^6 F(c + 1/t)
        std::vector<long double> s = F;
        s.resize(7, 0);
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = s.size() - 1; j > i; --j) s[j - 1] += c * s[j];
        G.assign(7, 0);
        for (int i = 0; i < 7; ++i) G[6 - i] = s[i];
        shifted = true;
    }
    auto roots = polynomial_roots(G);
    if (roots.size() != 6) throw PrecisionLoss("root finder lost roots");
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-12L) throw PathDegeneracy("colliding branch points");
    const long double lc = G.back();
    PeriodData P;
    for (auto& r : roots)
        if (r.imag() == 0) ++P.real_roots;
    std::vector<std::array<cld, 2>> cyc;
    long double err = 0;
    for (int i = 0; i + 1 < 6; ++i) {
        auto s = segment_integral(roots, lc, i, i + 1, precision);
        std::array<cld, 2> v{2.0L * s.v[0], 2.0L * s.v[1]};
        if (shifted) v = {-2.0L * s.v[1], -(c * 2.0L * s.v[1] + 2.0L * s.v[0])};
        // undo the orientation of t -> x: only the lattice matters
        cyc.push_back(v);
        err = std::max(err, s.err);
        P.nodes += s.nodes;
    }
    auto realvec = [](const std::array<cld, 2>& v) {
        return std::array<long double, 4>{v[0].real(), v[0].imag(), v[1].real(), v[1].imag()};
    };
    // pick four of the five cycles spanning the lattice
    int drop = -1;
    Mat4 B{}, Binv{};
    for (int d = 0; d < 5 && drop < 0; ++d) {
        int r = 0;
        for (int i = 0; i < 5; ++i)
            if (i != d) B[r++] = realvec(cyc[i]);
        if (!invert4(B, Binv)) continue;
        auto w = realvec(cyc[d]);
        bool integral = true;
        for (int j = 0; j < 4; ++j) {
            long double cj = 0;
            for (int k = 0; k < 4; ++k) cj += w[k] * Binv[k][j];
            if (std::fabs(cj - std::round(cj)) > 1e-6L) integral = false;
        }
        if (integral) drop = d;
    }
    if (drop < 0) throw PrecisionLoss("could not identify a lattice basis");
    {
        int r = 0;
        for (int i = 0; i < 5; ++i)
            if (i != drop) {
                P.big[0][r] = cyc[i][0];
                P.big[1][r] = cyc[i][1];
                ++r;
            }
    }
    // complex conjugation in lattice coordinates: conj(B) = M B
    Mat4 Bc{};
    for (int i = 0; i < 4; ++i) Bc[i] = {B[i][0], -B[i][1], B[i][2], -B[i][3]};
    std::array<std::array<long long, 4>, 4> A{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            long double m = 0;
            for (int k = 0; k < 4; ++k) m += Bc[i][k] * Binv[k][j];
            long long mi = std::llround(m);
            if (std::fabs(m - mi) > 1e-6L) throw PrecisionLoss("conjugation matrix not integral");
            A[i][j] = mi - (i == j ? 1 : 0);
        }
    // fixed vectors x with x (M - I) = 0
    auto ker = integer_left_kernel(A);
    if (ker.size() != 2) throw PrecisionLoss("real sublattice has wrong rank");
    for (int v = 0; v < 2; ++v) {
        long double re0 = 0, re1 = 0;
        for (int k = 0; k < 4; ++k) {
            re0 += ker[v][k] * B[k][0];
            re1 += ker[v][k] * B[k][2];
        }
        P.real_basis[v] = {re0, re1};
    }
    P.covolume = std::fabs(P.real_basis[0][0] * P.real_basis[1][1] - P.real_basis[0][1] * P.real_basis[1][0]);
    int d = real_two_torsion_rank(roots);
    P.components = 1 << (d - 2);
    P.omega = P.covolume * P.components;
    P.error = P.omega * std::max(err, 1e-18L) * 8;
    return P;
}

PeriodData real_volume(const CurveModel& model, long double precision)
{
    std::vector<long double> F;
    for (const auto& c : model.sextic()) F.push_back(c.get_d());
    return periods_of_sextic(F, precision);
}

}  // namespace g2bsd
