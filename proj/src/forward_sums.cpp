#include "forward_sums.hpp"

#include <algorithm>
#include <cmath>

#include "pressurelab/error.hpp"

namespace pressurelab::detail {

std::size_t word_code(std::span<const Symbol> w, int alphabet_size) {
  std::size_t code = 0;
  for (Symbol s : w) code = code * static_cast<std::size_t>(alphabet_size) + s;
  return code;
}

std::size_t int_pow(int base, int exponent) {
  std::size_t r = 1;
  for (int i = 0; i < exponent; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

ExtremalTails::ExtremalTails(const LocallyConstantPotential& f, Extremum which, int max_windows)
    : f_(&f), which_(which) {
  const Subshift& sft = f.system();
  alphabet_ = sft.alphabet_size();
  depth_ = f.depth();
  state_len_ = std::max(1, depth_ - 1);
  states_ = int_pow(alphabet_, state_len_);
  const auto a = static_cast<std::size_t>(alphabet_);
  const std::size_t modulus = states_;

  std::vector<bool> valid(states_, false);
  for_each_word(sft, state_len_, [&](const Word& w) { valid[word_code(w, alphabet_)] = true; });

  next_.assign(states_ * a, -1);
  gain_.assign(states_ * a, 0.0);
  for (std::size_t s = 0; s < states_; ++s) {
    if (!valid[s]) continue;
    const auto last = static_cast<int>(s % a);
    for (std::size_t b = 0; b < a; ++b) {
      if (!sft.allowed(last, static_cast<int>(b))) continue;
      next_[s * a + b] = static_cast<std::int64_t>(state_len_ == 1 ? b : (s * a + b) % modulus);
      gain_[s * a + b] = depth_ == 1 ? f.at_code(b) : f.at_code(s * a + b);
    }
  }

  best_.assign(1, std::vector<double>(states_, 0.0));
  for (std::size_t s = 0; s < states_; ++s)
    if (!valid[s]) best_[0][s] = worst();
  for (int t = 1; t <= std::max(0, max_windows); ++t) {
    std::vector<double> row(states_, worst());
    const auto& prev = best_.back();
    for (std::size_t s = 0; s < states_; ++s) {
      if (!valid[s]) continue;
      for (std::size_t b = 0; b < a; ++b) {
        const auto nx = next_[s * a + b];
        if (nx < 0) continue;
        row[s] = pick(row[s], gain_[s * a + b] + prev[static_cast<std::size_t>(nx)]);
      }
    }
    best_.push_back(std::move(row));
  }
}

double ExtremalTails::walk(std::size_t state, int skip, int count) const {
  if (count >= static_cast<int>(best_.size()))
    throw Error(ErrorCode::InvalidArgument, "extremal table too short for requested windows");
  if (skip == 0) return best_[static_cast<std::size_t>(count)][state];
  const auto a = static_cast<std::size_t>(alphabet_);
  std::vector<double> v = best_[static_cast<std::size_t>(count)];
  for (int i = 0; i < skip; ++i) {
    std::vector<double> u(states_, worst());
    for (std::size_t s = 0; s < states_; ++s)
      for (std::size_t b = 0; b < a; ++b) {
        const auto nx = next_[s * a + b];
        if (nx >= 0) u[s] = pick(u[s], v[static_cast<std::size_t>(nx)]);
      }
    v.swap(u);
  }
  return v[state];
}

double ExtremalTails::over_extensions(std::span<const Symbol> word, int first, int count) const {
  if (count <= 0) return 0.0;
  const int len = static_cast<int>(word.size());
  const int end = first + count;
  const int determined_end = std::min(end, len - depth_ + 1);
  double det = 0.0;
  for (int j = std::max(first, 0); j < determined_end; ++j)
    det += (*f_)(word.subspan(static_cast<std::size_t>(j), static_cast<std::size_t>(depth_)));
  const int j0 = std::max(first, len - depth_ + 1);
  if (j0 >= end) return det;
  if (len < state_len_) {
    // too short to index the tables: branch on the next symbol
    double ext = worst();
    Word longer(word.begin(), word.end());
    longer.push_back(0);
    for (int b = 0; b < alphabet_; ++b) {
      if (len > 0 && !f_->system().allowed(word.back(), b)) continue;
      longer.back() = static_cast<Symbol>(b);
      ext = pick(ext, over_extensions(longer, j0, end - j0));
    }
    return det + ext;
  }
  const std::size_t state = word_code(word.subspan(static_cast<std::size_t>(len - state_len_)), alphabet_);
  return det + walk(state, j0 - (len - depth_ + 1), end - j0);
}

TrackerAutomaton::TrackerAutomaton(const SubsetSpec& spec, const Subshift& host)
    : tracker_(spec, host), alphabet_(host.alphabet_size()) {
  intern(tracker_.initial());
}

int TrackerAutomaton::intern(const SubsetTracker::State& s) {
  auto [it, inserted] = ids_.emplace(s, static_cast<int>(states_.size()));
  if (inserted) {
    states_.push_back(s);
    transitions_.emplace_back(static_cast<std::size_t>(alphabet_), -2);
  }
  return it->second;
}

int TrackerAutomaton::next(int id, Symbol b) {
  int cached = transitions_[static_cast<std::size_t>(id)][b];
  if (cached != -2) return cached;
  SubsetTracker::State s = states_[static_cast<std::size_t>(id)];
  const int result = tracker_.step(s, b) ? intern(s) : -1;
  transitions_[static_cast<std::size_t>(id)][b] = result;
  return result;
}

bool TrackerAutomaton::accepts(int id, int length) const {
  return tracker_.accepts(states_[static_cast<std::size_t>(id)], length);
}

}  // namespace pressurelab::detail
