#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "pressurelab/subset.hpp"
#include "pressurelab/symbolic.hpp"

namespace pressurelab::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t word_code(std::span<const Symbol> w, int alphabet_size);
std::size_t int_pow(int base, int exponent);
double log_add_exp(double a, double b);

/// Extremal sums of f over admissible continuations of a word, backed by
/// max-plus (or min-plus) tables indexed by the last max(1, k-1) symbols.
class ExtremalTails {
 public:
  ExtremalTails(const LocallyConstantPotential& f, Extremum which, int max_windows);

  /// Extremum over all admissible extensions of `word` of the sum of f over the
  /// windows starting at first, ..., first+count-1.
  double over_extensions(std::span<const Symbol> word, int first, int count) const;

  int state_length() const noexcept { return state_len_; }

 private:
  double pick(double x, double y) const { return which_ == Extremum::sup ? (x > y ? x : y) : (x < y ? x : y); }
  double worst() const { return which_ == Extremum::sup ? -kInf : kInf; }
  double walk(std::size_t state, int skip, int count) const;

  const LocallyConstantPotential* f_;
  Extremum which_;
  int alphabet_ = 1;
  int depth_ = 1;
  int state_len_ = 1;
  std::size_t states_ = 1;
  std::vector<std::int64_t> next_;  // next_[state * a + b], -1 if not allowed
  std::vector<double> gain_;        // f on the window completed by appending b
  std::vector<std::vector<double>> best_;
};

/// Subset tracker with interned states and cached transitions. Not thread-safe;
/// each computation owns its own instance.
class TrackerAutomaton {
 public:
  TrackerAutomaton(const SubsetSpec& spec, const Subshift& host);

  int initial() const noexcept { return 0; }
  /// Successor state id after appending b, or -1 when the word can no longer meet Z.
  int next(int id, Symbol b);
  bool accepts(int id, int length) const;
  std::size_t size() const noexcept { return states_.size(); }

 private:
  int intern(const SubsetTracker::State& s);

  SubsetTracker tracker_;
  int alphabet_;
  std::vector<SubsetTracker::State> states_;
  std::map<SubsetTracker::State, int> ids_;
  std::vector<std::vector<int>> transitions_;  // -2 = not yet computed
};

}  // namespace pressurelab::detail
