#pragma once

#include <cstdint>
#include <vector>

#include "g2bsd/numbers.hpp"

namespace g2bsd {

// Character sums sum_x chi(F(x)) over F_p for a polynomial F (coefficients mod p,
// constant first), p odd.  The reference version evaluates each term directly.
i64 char_sum_reference(const std::vector<u64>& F, u64 p);
i64 char_sum(const std::vector<u64>& F, u64 p, std::vector<std::int8_t>& scratch);
// sum over z in F_{p^2} of chi_{p^2}(F(z)).
i64 char_sum_fp2(const std::vector<u64>& F, u64 p);

// Exhaustive count on y^2 + h y = f over F_{p^k}, any p, k in {1, 2}.
u64 count_points_bruteforce(const std::vector<u64>& f, const std::vector<u64>& h, u64 p, int k);

// Frobenius traces e1 = p + 1 - #X(F_p) for each prime (all must be odd and of good
// reduction) of the curve y^2 = F.
std::vector<i64> traces_serial(const std::vector<Int>& F, const std::vector<u64>& primes);
std::vector<i64> traces_omp(const std::vector<Int>& F, const std::vector<u64>& primes, int threads = 0);

}  // namespace g2bsd
