#pragma once

#include <map>
#include <utility>
#include <vector>

#include "forward_sums.hpp"
#include "pressurelab/subset.hpp"
#include "pressurelab/symbolic.hpp"

namespace pressurelab::detail {

/// Covers of Z's depth-L approximation by cylinders of depth n + offset with
/// n in [N, L - offset]; the ball for a word w of that depth costs
/// exp(-s n + ext f_n on [w]) where ext is sup or inf.
struct CoverProblem {
  const Subshift* sft = nullptr;
  const SubsetSpec* z = nullptr;
  const LocallyConstantPotential* f = nullptr;
  double s = 0.0;
  int N = 1;
  int L = 1;
  int offset = 0;
  Extremum which = Extremum::sup;
};

/// Checks the common preconditions (depth, same system, subset fits host).
void validate(const CoverProblem& p);

/// log of the minimal cover value; throws EmptyTarget when nothing needs covering.
double log_min_cover(const CoverProblem& p);

/// log of the ball cost of the word w of depth n + offset.
double log_ball_cost(const CoverProblem& p, const ExtremalTails& tails, std::span<const Symbol> w);

/// Prefix factor log exp(sum_{i<p} (f_i - s)), p = max(0, |w| - max(offset, k-1)).
double log_prefix_factor(const CoverProblem& p, std::span<const Symbol> w);

/// Words of depth `depth` meeting Z, grouped by (last R symbols, tracker state).
/// Every subtree below words of the same group is the same up to the prefix factor.
struct RootGroup {
  Word representative;           // lexicographically first member
  double log_total_factor = 0.0;  // log sum of prefix factors over the group
  int state = 0;
};
std::vector<RootGroup> group_roots(const CoverProblem& p, int depth, TrackerAutomaton& tracker);

/// Subtree of candidate balls below `root` (all depths in [root depth, L]) and the
/// accepted leaves they cover. Only nodes with an accepted leaf below are kept.
struct CoverInstance {
  std::vector<Word> balls;
  std::vector<double> log_costs;
  std::vector<std::vector<int>> covered;  // leaf indices per ball
  int leaves = 0;
};
CoverInstance build_instance(const CoverProblem& p, const Word& root, int root_state,
                             TrackerAutomaton& tracker, std::uint64_t budget);

}  // namespace pressurelab::detail
