#include "g2bsd/galrep.hpp"

#include <algorithm>
#include <set>

#include "g2bsd/errors.hpp"

namespace g2bsd {

bool ReducibleSuperset::contains(const std::string& name) const
{
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<i64> characters_dividing(u64 N)
{
    std::vector<i64> out{1};
    const i64 n = static_cast<i64>(N);
    for (i64 d = -n; d <= n; ++d) {
        if (d == 0 || d == 1) continue;
        i64 a = d < 0 ? -d : d;
        if (n % a == 0 && is_fundamental_discriminant(d)) out.push_back(d);
    }
    return out;
}

std::vector<FrobeniusDatum> frobenius_data(const CurveModel& model, u64 bound)
{
    std::vector<FrobeniusDatum> out;
    for (u64 q : primes_up_to(bound)) {
        if (model.level % q == 0) continue;
        auto E = euler_factor(model, q);
        out.push_back({q, E.e1, E.e2 - 2 * static_cast<i64>(q)});
    }
    return out;
}

namespace {

// Norm(a_q - c) for c in Z, from the trace and norm of a_q.
Int norm_shift(const FrobeniusDatum& d, i64 c)
{
    return Int(static_cast<long>(d.n)) - Int(static_cast<long>(c)) * Int(static_cast<long>(d.e1)) +
           Int(static_cast<long>(c)) * Int(static_cast<long>(c));
}

std::vector<i64> dihedral_discriminants(u64 ell, u64 N)
{
    std::set<u64> ps;
    for (auto& [p, e] : factor(N)) ps.insert(p);
    ps.insert(ell);
    std::vector<i64> base;
    bool two = false;
    for (u64 p : ps) {
        if (p == 2) {
            two = true;
            continue;
        }
        base.push_back(p % 4 == 1 ? static_cast<i64>(p) : -static_cast<i64>(p));
    }
    std::vector<i64> out;
    const size_t n = base.size();
    std::vector<i64> twos{1};
    if (two) twos = {1, -4, 8, -8};
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        i64 d = 1;
        for (size_t i = 0; i < n; ++i)
            if (mask >> i & 1) d *= base[i];
        for (i64 t : twos) {
            i64 e = d * t;
            if (e != 1 && is_fundamental_discriminant(e)) out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string name_for(const PrimeIdealO& P) { return ideal_name(P); }

}  // namespace

ReducibleSuperset reducible_superset(const CurveModel& model, const QuadOrder& O, u64 q_bound,
                                     const std::vector<i64>& characters)
{
    ReducibleSuperset R;
    R.characters = characters;
    auto data = frobenius_data(model, q_bound);
    for (auto& d : data) R.test_primes.push_back(d.q);
    // characteristic -> (flag "both ideals above a split prime")
    std::map<u64, bool> found;
    for (i64 chi : characters) {
        std::vector<std::pair<const FrobeniusDatum*, i64>> rows;
        for (auto& d : data) {
            u64 cond = static_cast<u64>(chi < 0 ? -chi : chi);
            if (cond % d.q == 0) continue;
            int phi = kronecker(chi, d.q);
            rows.push_back({&d, phi * static_cast<i64>(d.q + 1)});
        }
        // candidate characteristics from the first two nonzero values
        std::set<u64> cands;
        int taken = 0;
        for (auto& [d, c] : rows) {
            Int v = norm_shift(*d, c);
            if (v == 0) continue;
            for (auto& [p, e] : factor(abs(v))) cands.insert(p.get_ui());
            cands.insert(d->q);
            if (++taken == 2) break;
        }
        if (taken < 2) throw UnstableGcd("no nonzero norm values for character " + std::to_string(chi));
        Int prod = 1;
        for (u64 ell : cands) {
            int tests = 0;
            bool ok = true, both = true;
            for (auto& [d, c] : rows) {
                if (d->q == ell) continue;
                Int v = norm_shift(*d, c);
                ++tests;
                const Int L(static_cast<unsigned long>(ell));
                if (v % L != 0) {
                    ok = false;
                    break;
                }
                i64 tr = d->e1 - 2 * c;
                if (tr % static_cast<i64>(ell) != 0 || v % (L * L) != 0) both = false;
            }
            if (!ok) continue;
            if (tests < 4) throw UnstableGcd("too few test primes below " + std::to_string(q_bound));
            found[ell] = found.count(ell) ? (found[ell] || both) : both;
            prod *= Int(static_cast<unsigned long>(ell));
        }
        R.gcds[chi] = prod;
    }
    for (auto& [ell, both] : found) {
        for (auto& P : splitting_type(O, ell)) {
            if (P.type == Splitting::split && P.index == 2 && !both) {
                R.ambiguous.push_back(name_for(P));
                continue;
            }
            R.ideals.push_back(P);
            R.names.push_back(name_for(P));
        }
    }
    for (u64 ell : {2, 3, 5, 7}) {
        if (found.count(ell)) continue;
        for (auto& P : splitting_type(O, ell)) {
            auto cert = maximal_image_check(model, P, q_bound, nullptr);
            if (!cert.maximal) R.fallback.push_back(name_for(P));
        }
    }
    return R;
}

ReducibleSuperset reducible_superset(const CurveModel& model, const QuadOrder& O, u64 q_bound)
{
    return reducible_superset(model, O, q_bound, characters_dividing(model.level));
}

ImageCertificate maximal_image_check(const CurveModel& model, const PrimeIdealO& P, u64 q_bound,
                                     const ReducibleSuperset* superset)
{
    if (superset && superset->contains(ideal_name(P)))
        throw PreconditionViolation(ideal_name(P) + " lies in the reducible superset");
    ImageCertificate C;
    C.ideal = P;
    const u64 ell = P.p;
    if (ell < 5) {
        C.note = "residue characteristic below 5";
        return C;
    }
    auto data = frobenius_data(model, q_bound);
    auto md = [&](i64 x) { return to_mod(x, ell); };
    bool exceptional_done = false, subfield_done = P.type != Splitting::inert;
    auto dihedral = dihedral_discriminants(ell, model.level);
    std::vector<bool> dih_done(dihedral.size(), false);
    for (auto& d : data) {
        if (d.q == ell) continue;
        u64 e1 = md(d.e1), n = md(d.n), q = d.q % ell;
        // r^2 runs over the roots of g(X) = X^2 - (e1^2 - 2n) X + n^2
        u64 s1 = submod(mulmod(e1, e1, ell), mulmod(2, n, ell), ell), s0 = mulmod(n, n, ell);
        auto g = [&](u64 x) { return addmod(submod(mulmod(x, x, ell), mulmod(s1, x, ell), ell), s0, ell); };
        if (!exceptional_done && n != 0) {
            bool ok = true;
            for (u64 s : {0, 1, 2, 4})
                if (g(mulmod(q, s, ell)) == 0) ok = false;
            // resultant of g with X^2 - 3q X + q^2
            u64 t1 = mulmod(3, q, ell), t0 = mulmod(q, q, ell);
            u64 a = submod(s0, t0, ell), b = submod(t1, s1, ell);
            // remainder g mod h = b X + a; resultant vanishes iff h(-a/b) = 0 or b = a = 0
            bool common;
            if (b == 0) {
                common = a == 0;
            } else {
                u64 x = mulmod(ell - a % ell, invmod(b, ell), ell);
                common = addmod(submod(mulmod(x, x, ell), mulmod(t1, x, ell), ell), t0, ell) == 0;
            }
            if (common) ok = false;
            if (ok) {
                exceptional_done = true;
                C.witnesses.push_back({d.q, "exceptional"});
            }
        }
        if (!subfield_done && n != 0) {
            u64 disc = mulmod(mulmod(e1, e1, ell), submod(mulmod(e1, e1, ell), mulmod(4, n, ell), ell), ell);
            if (legendre(disc, ell) == -1) {
                subfield_done = true;
                C.witnesses.push_back({d.q, "subfield"});
            }
        }
        if (n != 0)
            for (size_t i = 0; i < dihedral.size(); ++i)
                if (!dih_done[i] && kronecker(dihedral[i], d.q) == -1) {
                    dih_done[i] = true;
                    C.witnesses.push_back({d.q, "dihedral:" + std::to_string(dihedral[i])});
                }
    }
    bool all_dih = std::all_of(dih_done.begin(), dih_done.end(), [](bool b) { return b; });
    C.maximal = exceptional_done && subfield_done && all_dih;
    if (!C.maximal) C.note = "insufficient witnesses below " + std::to_string(q_bound);
    return C;
}

}  // namespace g2bsd
