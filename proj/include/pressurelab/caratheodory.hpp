#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "pressurelab/subset.hpp"
#include "pressurelab/symbolic.hpp"

namespace pressurelab {

/// Bowen ball B_n(x, 2^-m), stored as the cylinder of its length-(n+m) center prefix.
struct Ball {
  Word center;
  int n = 1;
  Scale scale;

  int depth() const { return n + scale.m; }
};

struct WeightedCover {
  std::vector<Ball> balls;
  std::vector<double> weights;  // all 1 for an unweighted cover

  int min_n() const;
};

/// sum_i c_i exp(-s n_i + S_i); S_i is sup f_{n_i} on the ball, or the value at the
/// center when `centered` (the infimum over the ball if the center does not fix it).
double cover_value(const WeightedCover& cover, const LocallyConstantPotential& f, double s,
                   bool centered = false);

/// Exact minimum over covers of Z's depth-L approximation by balls with n in [N, L-m].
double log_min_cover_value(const Subshift& sft, const SubsetSpec& z,
                           const LocallyConstantPotential& f, double s, int N, Scale scale, int L);
double min_cover_value(const Subshift& sft, const SubsetSpec& z, const LocallyConstantPotential& f,
                       double s, int N, Scale scale, int L);

/// Same search with ball cost exp(-s n + inf f_n on the ball).
double log_centered_cover_value(const Subshift& sft, const SubsetSpec& z,
                                const LocallyConstantPotential& f, double s, int N, Scale scale,
                                int L);

/// Cover by strings of the depth-q cylinder partition; a length-n string has
/// X(U) = cylinder of depth n+q-1, cost exp(-s n + sup f_n on X(U)).
double log_string_cover_value(const Subshift& sft, const SubsetSpec& z,
                              const LocallyConstantPotential& f, double s, int N, int q, int L);
double string_cover_value(const Subshift& sft, const SubsetSpec& z,
                          const LocallyConstantPotential& f, double s, int N, int q, int L);

enum class LpMode { blocked, single };

/// Optimal value of the fractional covering LP over all balls with n in [N, L-m].
double log_weighted_cover_value(const Subshift& sft, const SubsetSpec& k,
                                const LocallyConstantPotential& f, double s, int N, Scale scale,
                                int L, LpMode mode = LpMode::blocked,
                                std::uint64_t budget = kDefaultEnumerationBudget);
double weighted_cover_value(const Subshift& sft, const SubsetSpec& k,
                            const LocallyConstantPotential& f, double s, int N, Scale scale, int L,
                            LpMode mode = LpMode::blocked);

/// Optimal fractional cover from one whole-problem LP, with its packing certificate value.
struct WeightedCoverSolution {
  WeightedCover cover;
  double value = 0.0;
  double dual_value = 0.0;
  std::vector<Word> leaves;
};
WeightedCoverSolution optimal_weighted_cover(const Subshift& sft, const SubsetSpec& k,
                                             const LocallyConstantPotential& f, double s, int N,
                                             Scale scale, int L);

enum class Estimator { window_shift, threshold };
std::string_view to_string(Estimator e);

/// Bracket for the critical exponent. For window_shift the bracketed function is
/// log V(N, L)(s) - log V(N - shift, L - shift)(s); for threshold it is log V(N, L)(s).
/// It is >= threshold_value at s_low and <= threshold_value at s_high.
struct CriticalExponent {
  double s_low = 0.0;
  double s_high = 0.0;
  double threshold_value = 0.0;
  int L = 0;
  int N = 0;
  int shift = 0;
  Estimator estimator = Estimator::window_shift;
  // raw crossing of the cover value with 1 (always reported, diagnostic only)
  double raw_low = 0.0;
  double raw_high = 0.0;
  int evaluations = 0;

  double midpoint() const { return 0.5 * (s_low + s_high); }
  double width() const { return s_high - s_low; }
};

struct SearchOptions {
  double tol = 1e-4;
  Estimator estimator = Estimator::window_shift;
  int shift = -1;  // -1: min(N - 1, L / 2)
  bool raw_diagnostic = true;
};

CriticalExponent bowen_pressure(const Subshift& sft, const SubsetSpec& z,
                                const LocallyConstantPotential& f, Scale scale, int N, int L,
                                const SearchOptions& options = {});
CriticalExponent weighted_pressure(const Subshift& sft, const SubsetSpec& k,
                                   const LocallyConstantPotential& f, Scale scale, int N, int L,
                                   const SearchOptions& options = {});

bool cylinders_disjoint(std::span<const Symbol> u, std::span<const Symbol> v);
/// Center prefix of the enlarged ball at scale m - 3 (radius 8 eps, covering 5 eps).
Word vitali_enlargement(const Ball& ball);
/// Greedy disjoint selection, larger balls first and input order among equals.
/// Returns selected indices in ascending order. Requires a common scale with m >= 3.
std::vector<std::size_t> vitali_select(const std::vector<Ball>& balls);
/// Every input cylinder lies inside the enlargement of some selected ball.
bool vitali_enlargements_cover(const std::vector<Ball>& balls,
                               const std::vector<std::size_t>& selected);

struct ChainReport {
  double centered = 0.0;    // centered quantity at s + delta and scale m - 3
  double weighted = 0.0;    // W at s and scale m
  double unweighted = 0.0;  // M at s and scale m
  double log_centered = 0.0;
  double log_weighted = 0.0;
  double log_unweighted = 0.0;
  bool lower_holds = false;
  bool upper_holds = false;
  bool precondition_holds = false;  // n^2 e^{-n delta} <= 1 for all n >= N
  double s = 0.0;
  double delta = 0.0;
  int N = 0;
  int L = 0;
  int m = 0;
  int coarse_m = 0;

  bool passed() const { return lower_holds && upper_holds; }
};

bool chain_precondition(double delta, int N);

/// Depth L defaults to N + m + 4 when <= 0.
ChainReport check_chain(const Subshift& sft, const SubsetSpec& k, const LocallyConstantPotential& f,
                        double s, double delta, int N, Scale scale, int L = 0);

}  // namespace pressurelab
