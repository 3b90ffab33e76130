#include "cover_engine.hpp"

#include <algorithm>
#include <cmath>

#include "pressurelab/error.hpp"

namespace pressurelab::detail {

void validate(const CoverProblem& p) {
  if (!(p.sft->relation() == p.f->system().relation()))
    throw Error(ErrorCode::InvalidArgument, "potential is defined on a different subshift");
  if (p.N < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  if (p.offset < 0) throw Error(ErrorCode::ScaleTooCoarse, "negative ball depth offset");
  if (p.L < p.N + p.offset)
    throw Error(ErrorCode::DepthTooShallow,
                "L = " + std::to_string(p.L) + " is below N + m = " + std::to_string(p.N + p.offset));
  p.z->validate(*p.sft);
}

namespace {

int lag(const CoverProblem& p) { return std::max(p.offset, p.f->depth() - 1); }

class Engine {
 public:
  explicit Engine(const CoverProblem& p)
      : p_(p),
        tails_(*p.f, p.which, p.L),
        tracker_(*p.z, *p.sft),
        r_(lag(p)),
        keep_(std::max(r_, 1)),
        memo_(static_cast<std::size_t>(p.L) + 1) {}

  double run() { return value(0, Word{}, tracker_.initial()); }

 private:
  double value(int d, const Word& suffix, int state) {
    const auto key = std::make_pair(word_code(suffix, p_.sft->alphabet_size()), state);
    auto& layer = memo_[static_cast<std::size_t>(d)];
    if (auto it = layer.find(key); it != layer.end()) return it->second;

    const int k = p_.f->depth();
    const int pfx = std::max(0, d - r_);
    const int n = d - p_.offset;
    double ball = kInf;
    if (d >= 1 && n >= p_.N) {
      const int first = pfx - (d - static_cast<int>(suffix.size()));
      ball = -p_.s * (n - pfx) + tails_.over_extensions(suffix, first, n - pfx);
    }
    double result;
    if (d == p_.L) {
      result = tracker_.accepts(state, d) ? ball : -kInf;
    } else {
      double children = -kInf;
      Word w = suffix;
      w.push_back(0);
      for (int b = 0; b < p_.sft->alphabet_size(); ++b) {
        if (!suffix.empty() && !p_.sft->allowed(suffix.back(), b)) continue;
        const int ns = tracker_.next(state, static_cast<Symbol>(b));
        if (ns < 0) continue;
        w.back() = static_cast<Symbol>(b);
        double ratio = 0.0;
        if (d >= r_) {
          const int start = (d - r_) - (d + 1 - static_cast<int>(w.size()));
          ratio = (*p_.f)(std::span(w).subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(k))) - p_.s;
        }
        Word child = static_cast<int>(w.size()) > keep_ ? Word(w.begin() + 1, w.end()) : w;
        children = log_add_exp(children, ratio + value(d + 1, child, ns));
      }
      result = ball <= children ? ball : children;  // ties go to the shallower ball
    }
    layer.emplace(key, result);
    return result;
  }

  const CoverProblem& p_;
  ExtremalTails tails_;
  TrackerAutomaton tracker_;
  int r_;
  int keep_;
  std::vector<std::map<std::pair<std::size_t, int>, double>> memo_;
};

}  // namespace

double log_min_cover(const CoverProblem& p) {
  validate(p);
  Engine engine(p);
  const double v = engine.run();
  if (v == -kInf) throw Error(ErrorCode::EmptyTarget, "subset approximation at depth L is empty");
  return v;
}

double log_ball_cost(const CoverProblem& p, const ExtremalTails& tails, std::span<const Symbol> w) {
  const int n = static_cast<int>(w.size()) - p.offset;
  return -p.s * n + tails.over_extensions(w, 0, n);
}

double log_prefix_factor(const CoverProblem& p, std::span<const Symbol> w) {
  const int pfx = std::max(0, static_cast<int>(w.size()) - lag(p));
  const int k = p.f->depth();
  double sum = 0.0;
  for (int i = 0; i < pfx; ++i)
    sum += (*p.f)(w.subspan(static_cast<std::size_t>(i), static_cast<std::size_t>(k))) - p.s;
  return sum;
}

std::vector<RootGroup> group_roots(const CoverProblem& p, int depth, TrackerAutomaton& tracker) {
  const int keep = std::max(lag(p), 1);
  struct Entry {
    Word representative;
    double log_total;
  };
  using Key = std::pair<Word, int>;
  // forward pass carrying the prefix factor of each (suffix, state) class
  std::map<Key, Entry> layer{{Key{Word{}, tracker.initial()}, Entry{Word{}, 0.0}}};
  const int r = lag(p);
  const int k = p.f->depth();
  for (int d = 0; d < depth; ++d) {
    std::map<Key, Entry> next;
    for (const auto& [key, entry] : layer) {
      const auto& [suffix, state] = key;
      for (int b = 0; b < p.sft->alphabet_size(); ++b) {
        if (!suffix.empty() && !p.sft->allowed(suffix.back(), b)) continue;
        const int ns = tracker.next(state, static_cast<Symbol>(b));
        if (ns < 0) continue;
        Word w = suffix;
        w.push_back(static_cast<Symbol>(b));
        double ratio = 0.0;
        if (d >= r) {
          const int start = (d - r) - (d + 1 - static_cast<int>(w.size()));
          ratio = (*p.f)(std::span(w).subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(k))) - p.s;
        }
        Word rep = entry.representative;
        rep.push_back(static_cast<Symbol>(b));
        if (static_cast<int>(w.size()) > keep) w.erase(w.begin());
        auto [it, fresh] = next.emplace(Key{std::move(w), ns}, Entry{rep, entry.log_total + ratio});
        if (!fresh) {
          it->second.log_total = log_add_exp(it->second.log_total, entry.log_total + ratio);
          if (rep < it->second.representative) it->second.representative = std::move(rep);
        }
      }
    }
    layer.swap(next);
  }
  std::vector<RootGroup> out;
  for (auto& [key, entry] : layer) out.push_back(RootGroup{entry.representative, entry.log_total, key.second});
  return out;
}

CoverInstance build_instance(const CoverProblem& p, const Word& root, int root_state,
                             TrackerAutomaton& tracker, std::uint64_t budget) {
  CoverInstance inst;
  ExtremalTails tails(*p.f, p.which, p.L);
  const int min_depth = p.N + p.offset;
  std::uint64_t nodes = 0;
  // depth-first; returns the leaf indices under w
  auto visit = [&](auto&& self, Word& w, int state) -> std::vector<int> {
    if (++nodes > budget)
      throw Error(ErrorCode::EnumerationBudgetExceeded, "cover LP exceeds the node budget");
    const int d = static_cast<int>(w.size());
    std::vector<int> leaves;
    if (d == p.L) {
      if (tracker.accepts(state, d)) leaves.push_back(inst.leaves++);
    } else {
      for (int b = 0; b < p.sft->alphabet_size(); ++b) {
        if (!w.empty() && !p.sft->allowed(w.back(), b)) continue;
        const int ns = tracker.next(state, static_cast<Symbol>(b));
        if (ns < 0) continue;
        w.push_back(static_cast<Symbol>(b));
        auto sub = self(self, w, ns);
        w.pop_back();
        leaves.insert(leaves.end(), sub.begin(), sub.end());
      }
    }
    if (d >= min_depth && !leaves.empty()) {
      inst.balls.push_back(w);
      inst.log_costs.push_back(log_ball_cost(p, tails, w));
      inst.covered.push_back(leaves);
    }
    return leaves;
  };
  Word w = root;
  visit(visit, w, root_state);
  return inst;
}

}  // namespace pressurelab::detail
