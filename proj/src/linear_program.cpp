#include "pressurelab/linear_program.hpp"

#include <algorithm>
#include <cmath>

#include "pressurelab/error.hpp"

namespace pressurelab {

PackingSolution maximize_packing(const Matrix& a, const std::vector<double>& b,
                                 const std::vector<double>& c) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m || c.size() != n)
    throw Error(ErrorCode::InvalidArgument, "LP dimensions disagree");
  for (double v : b)
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "packing LP needs b >= 0");

  // columns: n structural, m slack, 1 rhs; last row holds the reduced costs
  const std::size_t width = n + m + 1;
  Matrix t(m + 1, width);
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = a(i, j);
    t(i, n + i) = 1.0;
    t(i, width - 1) = b[i];
    scale = std::max(scale, b[i]);
  }
  for (std::size_t j = 0; j < n; ++j) t(m, j) = -c[j];
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  const double eps = 1e-12;
  const double rhs_eps = 1e-12 * std::max(scale, 1e-300);
  int pivots = 0;
  // Dantzig pricing, switching to Bland's rule during long degenerate streaks so the
  // method cannot cycle
  int degenerate_run = 0;
  std::vector<std::size_t> nz;
  nz.reserve(width);
  for (;;) {
    const bool bland = degenerate_run > 50;
    std::size_t enter = width;
    double most = -eps;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (t(m, j) >= most) continue;
      enter = j;
      if (bland) break;
      most = t(m, j);
    }
    if (enter == width) break;
    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t(i, enter) <= eps) continue;
      const double ratio = std::max(0.0, t(i, width - 1)) / t(i, enter);
      if (leave == m || ratio < best - rhs_eps ||
          (ratio <= best + rhs_eps && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) throw Error(ErrorCode::NumericalFailure, "packing LP is unbounded");
    degenerate_run = best <= rhs_eps ? degenerate_run + 1 : 0;
    const double pv = t(leave, enter);
    auto prow = t.row(leave);
    nz.clear();
    for (std::size_t j = 0; j < width; ++j)
      if (prow[j] != 0.0) {
        prow[j] /= pv;
        nz.push_back(j);
      }
    // laminar instances keep the tableau sparse, so only touch the pivot row's support
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = t(i, enter);
      if (factor == 0.0) continue;
      auto row = t.row(i);
      for (std::size_t j : nz) row[j] -= factor * prow[j];
      row[enter] = 0.0;
    }
    basis[leave] = enter;
    if (++pivots > 1000000) throw Error(ErrorCode::NumericalFailure, "simplex pivot limit reached");
  }

  PackingSolution sol;
  sol.pivots = pivots;
  sol.value = t(m, width - 1);
  sol.primal.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.primal[basis[i]] = std::max(0.0, t(i, width - 1));
  sol.dual.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.dual[i] = std::max(0.0, t(m, n + i));
  return sol;
}

FractionalCover solve_fractional_cover(const std::vector<std::vector<int>>& sets, int elements,
                                       const std::vector<double>& costs) {
  if (sets.size() != costs.size())
    throw Error(ErrorCode::InvalidArgument, "one cost per set is required");
  std::vector<bool> hit(static_cast<std::size_t>(elements), false);
  for (const auto& s : sets)
    for (int e : s) {
      if (e < 0 || e >= elements) throw Error(ErrorCode::InvalidArgument, "set element out of range");
      hit[static_cast<std::size_t>(e)] = true;
    }
  if (std::find(hit.begin(), hit.end(), false) != hit.end())
    throw Error(ErrorCode::InvalidArgument, "some element lies in no set; cover LP infeasible");
  double top = 0.0;
  for (double c : costs) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "costs must be finite and >= 0");
    top = std::max(top, c);
  }
  FractionalCover out;
  if (elements == 0) {
    out.weights.assign(sets.size(), 0.0);
    return out;
  }
  if (top == 0.0) top = 1.0;
  // costs rescaled to [0, 1] keep the tableau well conditioned
  Matrix a(sets.size(), static_cast<std::size_t>(elements));
  std::vector<double> b(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (int e : sets[i]) a(i, static_cast<std::size_t>(e)) = 1.0;
    b[i] = costs[i] / top;
  }
  const auto sol = maximize_packing(a, b, std::vector<double>(static_cast<std::size_t>(elements), 1.0));
  out.value = sol.value * top;
  out.weights = sol.dual;
  out.packing = sol.primal;
  for (double& y : out.packing) y *= top;
  return out;
}

}  // namespace pressurelab
