#pragma once

#include <array>
#include <vector>

#include "g2bsd/jacobian.hpp"

namespace g2bsd {

struct KummerPoint {
    std::array<Int, 4> k;  // primitive, first nonzero entry positive
    bool operator==(const KummerPoint& o) const { return k == o.k; }
};

struct HeightValue {
    long double value = 0;
    long double error_bound = 0;
};

// Quartic forms in (k1, k2, k3, k4), one coefficient per monomial in a fixed order.
using Quartic = std::array<Int, 35>;
const std::array<std::array<int, 4>, 35>& quartic_monomials();

// Kummer surface of Y^2 = F(t) for the imaginary model; K and the duplication map
// are derived by interpolation modulo word-size primes and rational reconstruction.
class KummerSurface {
public:
    explicit KummerSurface(const ImaginaryModel& M);

    const ImaginaryModel& model() const { return M_; }
    const Quartic& equation() const { return K_; }
    const std::array<Quartic, 4>& duplication() const { return delta_; }
    const std::vector<u64>& bad_primes() const { return S_; }
    int primes_used() const { return primes_used_; }

    KummerPoint to_kummer(const DivQ& D) const;
    Int evaluate_equation(const KummerPoint& P) const;
    KummerPoint duplicate(const KummerPoint& P) const;
    long double naive_height(const KummerPoint& P) const;
    HeightValue canonical_height(const DivQ& D, long double tol = 1e-12L) const;
    HeightValue canonical_height(const KummerPoint& P, long double tol = 1e-12L) const;

private:
    ImaginaryModel M_;
    Quartic K_{};
    std::array<Quartic, 4> delta_{};
    std::vector<u64> S_;
    int primes_used_ = 0;
    void derive();
};

// <P, Q> = (h(P + Q) - h(P) - h(Q)) / 2.
long double height_pairing(const KummerSurface& S, const DivQ& P, const DivQ& Q, long double tol = 1e-12L);

struct RegulatorValue {
    long double value = 1;
    long double error = 0;
    std::vector<std::vector<long double>> gram;
};

RegulatorValue regulator(const KummerSurface& S, const std::vector<DivQ>& gens, long double tol = 1e-12L);
long double gram_determinant(const std::vector<std::vector<long double>>& G);

// Lattice spanned by the non-torsion classes found by search.
struct MordellWeilReport {
    std::vector<DivQ> generators;
    std::vector<long double> heights;
    RegulatorValue reg;
    int found = 0;                 // non-torsion classes examined
    long double min_eigen_quarter = 0;
    bool relations_verified = false;
    bool saturation_heuristic = false;
    long index_over_first_pair = 1;
};

MordellWeilReport mordell_weil_lattice(const KummerSurface& S, const std::vector<DivQ>& classes,
                                       const TorsionReport& torsion, int rank, long double tol = 1e-12L);

}  // namespace g2bsd
