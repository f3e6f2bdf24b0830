#include "g2bsd/bsd.hpp"

#include <cmath>
#include <set>

#include "g2bsd/errors.hpp"

namespace g2bsd {

std::optional<Rat> recognize_rational(long double x, long double err, long max_den)
{
    if (!std::isfinite(x) || !std::isfinite(err)) return std::nullopt;
    // convergents p_k / q_k
    long p0 = 1, q0 = 0, p1 = static_cast<long>(std::floor(x)), q1 = 1;
    long double r = x - std::floor(x);
    for (int it = 0; it < 40; ++it) {
        if (q1 > max_den) break;
        long double approx = static_cast<long double>(p1) / q1;
        if (std::fabs(x - approx) <= 3 * err + 1e-15L * std::fabs(x)) {
            if (err > 0.5L / (static_cast<long double>(q1) * max_den)) return std::nullopt;
            Rat out(p1, q1);
            out.canonicalize();
            return out;
        }
        if (r < 1e-18L) break;
        long double inv = 1 / r;
        long a = static_cast<long>(std::floor(inv));
        r = inv - a;
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    return std::nullopt;
}

BSDReport sha_analytic(const ShaInputs& in)
{
    if (in.omega <= 0 || in.reg <= 0 || in.tamagawa_product <= 0)
        throw PreconditionViolation("period, regulator and Tamagawa product must be positive");
    BSDReport R;
    R.in = in;
    R.torsion_dual = in.torsion;
    R.tamagawa_odd = static_cast<long>(odd_part(static_cast<u64>(in.tamagawa_product)));
    const long double t2 = static_cast<long double>(in.torsion) * in.torsion;
    R.sha_real = t2 * in.L_star / (in.tamagawa_product * in.omega * in.reg);
    long double rel = 0;
    if (in.L_star != 0) rel += in.L_err / std::fabs(in.L_star);
    rel += in.omega_err / in.omega + in.reg_err / in.reg;
    R.sha_err = std::fabs(R.sha_real) * rel;
    R.sha_rational = recognize_rational(R.sha_real, R.sha_err);
    if (!R.sha_rational) {
        R.verdict = "unrecognized";
        R.notes.push_back("UnrecognizedRational: " + std::to_string(static_cast<double>(R.sha_real)) + " +- " +
                          std::to_string(static_cast<double>(R.sha_err)));
        return R;
    }
    const Rat& s = *R.sha_rational;
    if (s == 1) {
        R.verdict = "consistent with 1";
    } else {
        R.verdict = "not 1";
        Int num = s.get_num();
        if (s.get_den() == 1 && num > 1 && mpz_perfect_square_p(num.get_mpz_t()) && in.rank > 0)
            R.notes.push_back("perfect square " + num.get_str() + ": generators may be unsaturated");
    }
    if (in.reg_saturation_caveat) R.notes.push_back("regulator saturation is heuristic");
    return R;
}

namespace {

u64 characteristic_of(const std::string& name)
{
    std::string digits;
    for (char c : name) {
        if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
        else if (!digits.empty()) break;
    }
    return digits.empty() ? 0 : std::stoull(digits);
}

}  // namespace

HypothesisChecklist theorem_checklist(const CurveRecord& r, const ReducibleSuperset& S, std::optional<Rat> sha)
{
    HypothesisChecklist H;
    H.squarefree_N = is_squarefree(r.level);
    H.polarization_degree = 1;
    H.two_primary_trivial = r.sha2_trivial;
    std::optional<long> index;
    for (auto& h : r.heegner)
        if (h.index) {
            index = h.index;
            break;
        }
    if (!index) throw MissingIngestedDatum(r.label + ": no Heegner index");
    if (r.local_h1.empty()) throw MissingIngestedDatum(r.label + ": no local H1 orders");
    Rat s = sha ? *sha : Rat(r.sha_an);
    std::set<u64> primes{3, 5, 7};
    for (auto& [p, e] : factor(r.level)) primes.insert(p);
    for (auto& t : r.tamagawa)
        for (auto& [p, e] : factor(static_cast<u64>(t.c))) primes.insert(p);
    for (auto& [p, e] : factor(static_cast<u64>(*index))) primes.insert(p);
    for (auto& L : r.local_h1)
        for (long o : L.places)
            for (auto& [p, e] : factor(static_cast<u64>(o))) primes.insert(p);
    std::set<u64> reducible;
    for (auto* list : {&S.names, &S.ambiguous, &S.fallback})
        for (auto& n : *list) {
            u64 p = characteristic_of(n);
            reducible.insert(p);
            primes.insert(p);
        }
    primes.erase(2);
    for (u64 p : primes) {
        bool irr = !reducible.count(p);
        bool no_index = *index % static_cast<long>(p) != 0;
        bool no_local = true;
        for (auto& L : r.local_h1)
            for (long o : L.places) no_local &= o % static_cast<long>(p) != 0;
        H.irreducible[p] = irr;
        H.p_not_dividing_index[p] = no_index;
        H.p_not_dividing_local_h1[p] = no_local;
        Int P(static_cast<unsigned long>(p));
        bool sha_unit = s.get_num() % P != 0 && s.get_den() % P != 0;
        if (!irr) H.verdict[p] = "needs separate argument: residual representation may be reducible";
        else if (no_index && no_local) H.verdict[p] = "Sha[p] = 0 certified (polarization path)";
        else if (H.squarefree_N && sha_unit) H.verdict[p] = "Sha[p] = 0 certified (square-free level path)";
        else H.verdict[p] = "needs separate argument: p divides the Heegner index or a local order";
    }
    H.other_primes = "Sha[p] = 0 certified (polarization path)";
    return H;
}

Figure2Row rank1_route(const std::string& label, i64 D, long double L_value, long double L_err,
                       long double omega, long double omega_err, long torsion, long tamagawa_product,
                       long expected)
{
    Figure2Row row;
    row.label = label;
    row.D = D;
    row.L_value = L_value;
    row.L_err = L_err;
    row.omega = omega;
    row.omega_err = omega_err;
    row.torsion = torsion;
    row.tamagawa_product = tamagawa_product;
    row.expected = expected;
    const long double t2 = static_cast<long double>(torsion) * torsion;
    row.sha_real = t2 * L_value / (tamagawa_product * omega);
    row.sha_err = std::fabs(row.sha_real) * (L_err / std::fabs(L_value) + omega_err / omega);
    row.sha_rational = recognize_rational(row.sha_real, row.sha_err);
    if (row.sha_rational && row.sha_rational->get_den() == 1) {
        Int v = row.sha_rational->get_num();
        if (v > 0 && v.fits_ulong_p()) {
            row.exact_match = v.get_ui() == static_cast<unsigned long>(expected);
            row.odd_part_matches = odd_part(v.get_ui()) == odd_part(static_cast<u64>(expected));
        }
    }
    return row;
}

}  // namespace g2bsd
