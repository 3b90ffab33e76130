#pragma once

#include <utility>
#include <vector>

#include "pressurelab/subset.hpp"
#include "pressurelab/symbolic.hpp"

namespace pressurelab {

/// log P_n(T, f, Z, 2^-m): log-sum over admissible length-(n+m-1) words meeting Z
/// of exp(sup f_n on the word's cylinder).
double log_partition_function(const Subshift& sft, const SubsetSpec& z,
                              const LocallyConstantPotential& f, int n, Scale scale);
double partition_function(const Subshift& sft, const SubsetSpec& z,
                          const LocallyConstantPotential& f, int n, Scale scale);

struct CapacityEstimate {
  std::vector<std::pair<int, double>> log_p;  // (n, log P_n), ascending n
  double slope = 0.0;                          // reported estimate
  double intercept = 0.0;
  double max_tail = 0.0;  // max of (1/n) log P_n over the upper half of the window
  double fit_residual = 0.0;  // max absolute residual of the linear fit
  Scale scale;
  NRange window;
  int approximation_depth = 0;  // word length used at the largest n
};

CapacityEstimate capacity_pressure(const Subshift& sft, const SubsetSpec& z,
                                   const LocallyConstantPotential& f, Scale scale, NRange window,
                                   unsigned threads = 1);

/// Least-squares line through (x, y); returns {slope, intercept}.
std::pair<double, double> least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pressurelab
