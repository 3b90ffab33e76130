#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pressurelab/symbolic.hpp"

namespace pressurelab {

/// Description of a subset Z of the host subshift.
struct SubsetSpec {
  enum class Kind { whole, sub_sft, finite_union, frequency_level };

  Kind kind = Kind::whole;
  TransitionRelation relation;     // sub_sft
  std::vector<SubsetSpec> members;  // finite_union
  int symbol = 0;                   // frequency_level
  double alpha = 0.0;
  double eta = 0.0;

  static SubsetSpec whole();
  static SubsetSpec sub_sft(TransitionRelation relation);
  static SubsetSpec finite_union(std::vector<SubsetSpec> members);
  static SubsetSpec frequency_level(int symbol, double alpha, double eta);

  /// Throws InvalidArgument when the spec does not fit the host.
  void validate(const Subshift& host) const;
  /// True for whole and sub_sft (and unions of those): closed, shift-invariant sets.
  bool is_compact_invariant() const;
  std::string describe() const;
};

std::string_view to_string(SubsetSpec::Kind kind);

/// Streaming membership test for the depth-l outer approximation of Z: feed the
/// symbols of a word one at a time, then ask whether the word meets Z.
class SubsetTracker {
 public:
  using State = std::vector<std::int32_t>;

  SubsetTracker(const SubsetSpec& spec, const Subshift& host);

  State initial() const;
  /// Appends b; returns false once no extension of the word can meet Z.
  bool step(State& state, Symbol b) const;
  bool accepts(const State& state, int length) const;

  /// Convenience: does the cylinder of w meet Z's depth-|w| approximation?
  bool meets(std::span<const Symbol> w) const;

 private:
  std::size_t state_size() const;
  bool step_at(std::span<std::int32_t> state, Symbol b) const;
  bool accepts_at(std::span<const std::int32_t> state, int length) const;
  void initial_at(std::span<std::int32_t> state) const;

  SubsetSpec::Kind kind_;
  TransitionRelation relation_;
  std::vector<bool> essential_;
  std::vector<SubsetTracker> children_;
  int symbol_ = 0;
  double alpha_ = 0.0;
  double eta_ = 0.0;
};

/// Sub-SFT on the recurrent core of a sub-relation, relabelled to 0..k-1.
struct SubSystem {
  Subshift system;
  std::vector<Symbol> to_host;

  Word lift(std::span<const Symbol> w) const;
};

/// Throws EmptyTarget when the relation carries no infinite orbit.
SubSystem restrict_to(const Subshift& host, const TransitionRelation& relation);
LocallyConstantPotential restrict_potential(const LocallyConstantPotential& f,
                                            const SubSystem& sub);

}  // namespace pressurelab
