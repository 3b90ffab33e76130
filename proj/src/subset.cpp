#include "pressurelab/subset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pressurelab/error.hpp"

namespace pressurelab {

std::string_view to_string(SubsetSpec::Kind kind) {
  switch (kind) {
    case SubsetSpec::Kind::whole: return "whole";
    case SubsetSpec::Kind::sub_sft: return "sub_sft";
    case SubsetSpec::Kind::finite_union: return "finite_union";
    case SubsetSpec::Kind::frequency_level: return "frequency_level";
  }
  return "unknown";
}

SubsetSpec SubsetSpec::whole() { return SubsetSpec{}; }

SubsetSpec SubsetSpec::sub_sft(TransitionRelation relation) {
  SubsetSpec s;
  s.kind = Kind::sub_sft;
  s.relation = std::move(relation);
  return s;
}

SubsetSpec SubsetSpec::finite_union(std::vector<SubsetSpec> members) {
  SubsetSpec s;
  s.kind = Kind::finite_union;
  s.members = std::move(members);
  return s;
}

SubsetSpec SubsetSpec::frequency_level(int symbol, double alpha, double eta) {
  SubsetSpec s;
  s.kind = Kind::frequency_level;
  s.symbol = symbol;
  s.alpha = alpha;
  s.eta = eta;
  return s;
}

void SubsetSpec::validate(const Subshift& host) const {
  switch (kind) {
    case Kind::whole: return;
    case Kind::sub_sft:
      if (!relation.is_subrelation_of(host.relation()))
        throw Error(ErrorCode::InvalidArgument, "sub_sft relation is not a sub-relation of the host");
      return;
    case Kind::finite_union:
      if (members.empty()) throw Error(ErrorCode::InvalidArgument, "finite_union needs members");
      for (const auto& m : members) m.validate(host);
      return;
    case Kind::frequency_level:
      if (symbol < 0 || symbol >= host.alphabet_size())
        throw Error(ErrorCode::InvalidArgument, "frequency symbol outside the alphabet");
      if (!(alpha >= 0.0 && alpha <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "frequency target must lie in [0, 1]");
      if (!(eta > 0.0)) throw Error(ErrorCode::InvalidArgument, "frequency tolerance must be > 0");
      return;
  }
}

bool SubsetSpec::is_compact_invariant() const {
  switch (kind) {
    case Kind::whole:
    case Kind::sub_sft: return true;
    case Kind::finite_union:
      return std::all_of(members.begin(), members.end(),
                         [](const SubsetSpec& m) { return m.is_compact_invariant(); });
    case Kind::frequency_level: return false;
  }
  return false;
}

std::string SubsetSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::whole: os << "whole"; break;
    case Kind::sub_sft: {
      os << "sub_sft{";
      bool first = true;
      for (auto [a, b] : relation.pairs()) {
        os << (first ? "" : ",") << a << b;
        first = false;
      }
      os << "}";
      break;
    }
    case Kind::finite_union: {
      os << "union(";
      for (std::size_t i = 0; i < members.size(); ++i) os << (i ? "," : "") << members[i].describe();
      os << ")";
      break;
    }
    case Kind::frequency_level:
      os << "frequency(symbol=" << symbol << ",alpha=" << alpha << ",eta=" << eta << ")";
      break;
  }
  return os.str();
}

SubsetTracker::SubsetTracker(const SubsetSpec& spec, const Subshift& host)
    : kind_(spec.kind), symbol_(spec.symbol), alpha_(spec.alpha), eta_(spec.eta) {
  spec.validate(host);
  if (kind_ == SubsetSpec::Kind::sub_sft) {
    relation_ = spec.relation;
    essential_ = relation_.essential_symbols();
  }
  for (const auto& m : spec.members) children_.emplace_back(m, host);
}

std::size_t SubsetTracker::state_size() const {
  switch (kind_) {
    case SubsetSpec::Kind::whole: return 0;
    case SubsetSpec::Kind::sub_sft:
    case SubsetSpec::Kind::frequency_level: return 1;
    case SubsetSpec::Kind::finite_union: {
      std::size_t n = 0;
      for (const auto& c : children_) n += 1 + c.state_size();
      return n;
    }
  }
  return 0;
}

void SubsetTracker::initial_at(std::span<std::int32_t> state) const {
  switch (kind_) {
    case SubsetSpec::Kind::whole: return;
    case SubsetSpec::Kind::sub_sft: state[0] = -1; return;
    case SubsetSpec::Kind::frequency_level: state[0] = 0; return;
    case SubsetSpec::Kind::finite_union: {
      std::size_t off = 0;
      for (const auto& c : children_) {
        state[off] = 1;
        c.initial_at(state.subspan(off + 1, c.state_size()));
        off += 1 + c.state_size();
      }
      return;
    }
  }
}

SubsetTracker::State SubsetTracker::initial() const {
  State s(state_size(), 0);
  initial_at(s);
  return s;
}

bool SubsetTracker::step_at(std::span<std::int32_t> state, Symbol b) const {
  switch (kind_) {
    case SubsetSpec::Kind::whole: return true;
    case SubsetSpec::Kind::sub_sft:
      if (b >= essential_.size() || !essential_[b]) return false;
      if (state[0] >= 0 && !relation_.allowed(state[0], b)) return false;
      state[0] = b;
      return true;
    case SubsetSpec::Kind::frequency_level:
      if (b == symbol_) ++state[0];
      return true;
    case SubsetSpec::Kind::finite_union: {
      bool any = false;
      std::size_t off = 0;
      for (const auto& c : children_) {
        const std::size_t n = c.state_size();
        auto sub = state.subspan(off + 1, n);
        if (state[off]) {
          if (c.step_at(sub, b)) {
            any = true;
          } else {
            state[off] = 0;
            std::fill(sub.begin(), sub.end(), 0);
          }
        }
        off += 1 + n;
      }
      return any;
    }
  }
  return false;
}

bool SubsetTracker::step(State& state, Symbol b) const { return step_at(state, b); }

bool SubsetTracker::accepts_at(std::span<const std::int32_t> state, int length) const {
  switch (kind_) {
    case SubsetSpec::Kind::whole:
    case SubsetSpec::Kind::sub_sft: return true;
    case SubsetSpec::Kind::frequency_level:
      if (length <= 0) return false;
      return std::abs(static_cast<double>(state[0]) / length - alpha_) <= eta_ + 1e-12;
    case SubsetSpec::Kind::finite_union: {
      std::size_t off = 0;
      for (const auto& c : children_) {
        const std::size_t n = c.state_size();
        if (state[off] && c.accepts_at(state.subspan(off + 1, n), length)) return true;
        off += 1 + n;
      }
      return false;
    }
  }
  return false;
}

bool SubsetTracker::accepts(const State& state, int length) const {
  return accepts_at(state, length);
}

bool SubsetTracker::meets(std::span<const Symbol> w) const {
  State s = initial();
  for (Symbol b : w)
    if (!step(s, b)) return false;
  return accepts(s, static_cast<int>(w.size()));
}

Word SubSystem::lift(std::span<const Symbol> w) const {
  Word out;
  out.reserve(w.size());
  for (Symbol s : w) out.push_back(to_host.at(s));
  return out;
}

SubSystem restrict_to(const Subshift& host, const TransitionRelation& relation) {
  if (!relation.is_subrelation_of(host.relation()))
    throw Error(ErrorCode::InvalidArgument, "relation is not a sub-relation of the host");
  const auto core = relation.recurrent_core();
  std::vector<Symbol> to_host;
  for (int a = 0; a < host.alphabet_size(); ++a)
    if (core[a]) to_host.push_back(static_cast<Symbol>(a));
  if (to_host.empty()) throw Error(ErrorCode::EmptyTarget, "sub-relation carries no infinite orbit");
  const int k = static_cast<int>(to_host.size());
  TransitionRelation rel(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (relation.allowed(to_host[i], to_host[j])) rel.set(i, j);
  return SubSystem{Subshift(rel, host.label() + "|sub"), std::move(to_host)};
}

LocallyConstantPotential restrict_potential(const LocallyConstantPotential& f,
                                            const SubSystem& sub) {
  return LocallyConstantPotential::from_function(
      sub.system, f.depth(), [&](std::span<const Symbol> w) { return f(sub.lift(w)); });
}

}  // namespace pressurelab
