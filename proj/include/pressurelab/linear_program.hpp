#pragma once

#include <vector>

#include "pressurelab/matrix.hpp"

namespace pressurelab {

struct PackingSolution {
  double value = 0.0;
  std::vector<double> primal;  // one entry per column
  std::vector<double> dual;    // one price per row
  int pivots = 0;
};

/// Maximizes c.y subject to A y <= b, y >= 0, with b >= 0, by the dense tableau
/// simplex. Pricing is Dantzig's; long degenerate runs fall back to Bland's rule.
PackingSolution maximize_packing(const Matrix& a, const std::vector<double>& b,
                                 const std::vector<double>& c);

struct FractionalCover {
  double value = 0.0;
  std::vector<double> weights;  // one per set
  std::vector<double> packing;  // dual certificate, one per element
};

/// Minimizes sum cost_i x_i subject to sum_{i : e in set_i} x_i >= 1 for every element
/// e < elements, x >= 0. Solved through the packing dual; weights are its row prices.
FractionalCover solve_fractional_cover(const std::vector<std::vector<int>>& sets, int elements,
                                       const std::vector<double>& costs);

}  // namespace pressurelab
