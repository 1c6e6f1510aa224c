#pragma once

#include <vector>

#include "oscint/types.hpp"

namespace oscint {

struct AccelResult {
  cplx value{};
  double error = kInf;
  bool unstable = false;  // epsilon table hit a near-zero difference before any even column
};

/// Wynn's epsilon algorithm on a sequence of partial sums. Returns the even
/// column entry with the smallest error estimate (difference to its
/// neighbours in the table).
AccelResult wynn_epsilon(const std::vector<cplx>& partial_sums);

/// Iterated Euler averaging of partial sums: S'_n = (S_n + S_{n+1}) / 2,
/// repeated until one entry is left. Error is the spread of the last two.
AccelResult euler_average(const std::vector<cplx>& partial_sums);

/// Wynn first, Euler when the epsilon table is unstable.
AccelResult accelerate(const std::vector<cplx>& partial_sums);

/// Aitken delta-squared on the last three entries.
AccelResult aitken(const std::vector<cplx>& partial_sums);

/// First-order Richardson for a step halved each time: R_k = 2 I_k - I_{k-1}.
std::vector<cplx> richardson_halving(const std::vector<cplx>& seq);

}  // namespace oscint
