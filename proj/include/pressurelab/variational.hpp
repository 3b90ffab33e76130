#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pressurelab/caratheodory.hpp"
#include "pressurelab/subset.hpp"
#include "pressurelab/transfer.hpp"

namespace pressurelab {

struct VariationalOptions {
  Scale scale{1};
  int N = 4;
  int L = 16;
  SearchOptions search{};
  int grid_points = 200;
  std::uint64_t seed = 0;
  double tolerance = 1e-2;
};

struct VariationalReport {
  CriticalExponent p_bowen;
  double measure_sup = 0.0;
  std::string witness;
  MarkovMeasure witness_measure;  // on the host alphabet
  double equilibrium_pressure = 0.0;  // NaN when K is not compact
  double spectral_pressure = 0.0;     // NaN when K is not compact
  double grid_max = 0.0;
  int grid_points = 0;
  bool equilibrium_is_argmax = false;
  bool compact = true;
  double gap = 0.0;  // p_bowen.midpoint() - measure_sup
  double tolerance = 0.0;
  bool passed = false;
};

/// Both sides of the variational principle for K. Compact K (whole or sub_sft):
/// asserts |gap| <= tolerance and that the equilibrium measure tops the grid.
/// Otherwise only the lower bound sup P_mu <= P_B (+ tolerance) is asserted, over
/// measures with mu(K) = 1.
VariationalReport verify_theoremA1(const Subshift& sft, const SubsetSpec& k,
                                   const LocallyConstantPotential& f,
                                   const VariationalOptions& options = {});

struct UnionReport {
  std::vector<CriticalExponent> components;
  CriticalExponent union_pressure;
  double max_component = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// P_B of the union against the largest component, within 2 * options.tolerance.
UnionReport verify_theoremA2_unions(const Subshift& sft,
                                    const std::vector<TransitionRelation>& components,
                                    const LocallyConstantPotential& f,
                                    const VariationalOptions& options = {});

struct FrostmanRow {
  double beta = 0.0;
  double s = 0.0;
  double max_log_ratio = 0.0;  // log C
  double tail_slope = 0.0;     // growth rate of the per-n maximum
  bool bounded = false;
  std::vector<std::pair<int, double>> log_ratio_by_n;
};

struct FrostmanReport {
  double pressure = 0.0;  // Bowen estimate used to place s
  std::vector<FrostmanRow> rows;
  FrostmanRow control;
  bool passed = false;  // every row bounded and the control unbounded
};

/// mu(B_n(x, eps)) <= C exp(-n s + sup f_n) with s = P_B(K) - beta and mu the
/// equilibrium measure of K, over all centers up to depth L; the control uses
/// beta = control_beta (negative) and must fail.
FrostmanReport verify_lemma33_bound(const Subshift& sft, const SubsetSpec& k,
                                    const LocallyConstantPotential& f,
                                    const VariationalOptions& options = {},
                                    const std::vector<double>& betas = {0.05, 0.1},
                                    double control_beta = -0.1);

struct PropertyTrial {
  int index = 0;
  std::string description;
  std::map<std::string, bool> checks;
  std::map<std::string, double> values;
};

struct PropertyReport {
  std::uint64_t seed = 0;
  std::vector<PropertyTrial> trials;
  std::map<std::string, int> failures;
  bool passed = false;
};

struct PropertyOptions {
  int N = 8;
  int L = 20;
  NRange capacity_window{8, 24};
  double tolerance = 2e-2;
  unsigned threads = 1;
};

/// Randomized monotonicity, union and P_B <= P checks on random sub-SFTs.
PropertyReport property_suite(std::uint64_t seed, int trials, const PropertyOptions& options = {});

/// Embeds a measure on a sub-system into the host alphabet (zero mass elsewhere).
MarkovMeasure lift_measure(const MarkovMeasure& mu, const SubSystem& sub, const Subshift& host);

}  // namespace pressurelab
