#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "g2bsd/curve.hpp"

namespace g2bsd {

using cld = std::complex<long double>;

// Roots of a real polynomial (constant first), polished by Newton steps.
std::vector<cld> polynomial_roots(const std::vector<long double>& coeffs);

struct PeriodData {
    // Rows: dx/(2y+h) and x dx/(2y+h); columns: a Z-basis of the lattice.
    std::array<std::array<cld, 4>, 2> big{};
    std::array<std::array<long double, 2>, 2> real_basis{};  // basis of the fixed sublattice
    long double covolume = 0;
    int components = 0;
    long double omega = 0;
    long double error = 0;
    int real_roots = 0;
    int nodes = 0;
};

// Periods of Y^2 = F(x) (real coefficients, deg 5 or 6) for dx/Y, x dx/Y.
PeriodData periods_of_sextic(const std::vector<long double>& F, long double precision = 1e-15L);
PeriodData real_volume(const CurveModel& model, long double precision = 1e-15L);

struct RealLocus {
    int components = 0;
    // Intervals of x where F >= 0; for an interval through infinity, lo > hi.
    std::vector<std::pair<long double, long double>> intervals;
};

RealLocus components_real_locus(const std::vector<long double>& F);
RealLocus components_real_locus(const CurveModel& model);

// Number of real points of J[2], as an F_2-dimension.
int real_two_torsion_rank(const std::vector<cld>& roots);

}  // namespace g2bsd
