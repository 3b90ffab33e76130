#include "pressurelab/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "forward_sums.hpp"
#include "pressurelab/error.hpp"

namespace pressurelab {

double Scale::epsilon() const { return std::ldexp(1.0, -m); }

TransitionRelation::TransitionRelation(int alphabet_size, bool fill)
    : size_(alphabet_size),
      bits_(static_cast<std::size_t>(alphabet_size * alphabet_size), fill ? 1 : 0) {
  if (alphabet_size < 1 || alphabet_size > 255)
    throw Error(ErrorCode::InvalidArgument, "alphabet size must lie in [1, 255]");
}

TransitionRelation TransitionRelation::from_pairs(int alphabet_size,
                                                  const std::vector<std::pair<int, int>>& pairs) {
  TransitionRelation rel(alphabet_size);
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= alphabet_size || b >= alphabet_size)
      throw Error(ErrorCode::InvalidArgument, "transition pair outside the alphabet");
    rel.set(a, b);
  }
  return rel;
}

std::vector<std::pair<int, int>> TransitionRelation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < size_; ++a)
    for (int b = 0; b < size_; ++b)
      if (allowed(a, b)) out.emplace_back(a, b);
  return out;
}

bool TransitionRelation::is_subrelation_of(const TransitionRelation& other) const {
  if (other.size_ != size_) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

namespace {

// Iteratively strips symbols lacking a live successor (and predecessor if asked).
std::vector<bool> prune(const TransitionRelation& rel, bool need_predecessor) {
  const int a = rel.alphabet_size();
  std::vector<bool> live(static_cast<std::size_t>(a), true);
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < a; ++x) {
      if (!live[x]) continue;
      bool succ = false, pred = false;
      for (int y = 0; y < a; ++y) {
        if (!live[y]) continue;
        succ = succ || rel.allowed(x, y);
        pred = pred || rel.allowed(y, x);
      }
      if (!succ || (need_predecessor && !pred)) {
        live[x] = false;
        changed = true;
      }
    }
  }
  return live;
}

}  // namespace

std::vector<bool> TransitionRelation::essential_symbols() const { return prune(*this, false); }
std::vector<bool> TransitionRelation::recurrent_core() const { return prune(*this, true); }

bool TransitionRelation::is_irreducible(const std::vector<bool>* keep) const {
  std::vector<int> nodes;
  for (int x = 0; x < size_; ++x)
    if (!keep || (*keep)[x]) nodes.push_back(x);
  if (nodes.empty()) return false;
  auto reach_all = [&](bool forward) {
    std::vector<bool> seen(static_cast<std::size_t>(size_), false);
    std::vector<int> stack{nodes.front()};
    seen[nodes.front()] = true;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : nodes) {
        bool edge = forward ? allowed(x, y) : allowed(y, x);
        if (edge && !seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
    return std::all_of(nodes.begin(), nodes.end(), [&](int x) { return seen[x]; });
  };
  return reach_all(true) && reach_all(false);
}

Subshift::Subshift(TransitionRelation relation, std::string label)
    : relation_(std::move(relation)), label_(std::move(label)) {
  const int a = relation_.alphabet_size();
  if (a < 1) throw Error(ErrorCode::InvalidArgument, "empty alphabet");
  for (int x = 0; x < a; ++x) {
    bool succ = false, pred = false;
    for (int y = 0; y < a; ++y) {
      succ = succ || relation_.allowed(x, y);
      pred = pred || relation_.allowed(y, x);
    }
    if (!succ || !pred)
      throw Error(ErrorCode::InvalidArgument,
                  "symbol " + std::to_string(x) + " has no successor or no predecessor");
  }
}

Subshift Subshift::full(int alphabet_size) {
  return Subshift(TransitionRelation(alphabet_size, true),
                  "full-" + std::to_string(alphabet_size) + "-shift");
}

Subshift Subshift::golden_mean() {
  return Subshift(TransitionRelation::from_pairs(2, {{0, 0}, {0, 1}, {1, 0}}), "golden-mean");
}

Subshift Subshift::fixed_point() {
  return Subshift(TransitionRelation::from_pairs(1, {{0, 0}}), "fixed-point");
}

bool Subshift::is_admissible(std::span<const Symbol> w) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] >= alphabet_size()) return false;
    if (i > 0 && !allowed(w[i - 1], w[i])) return false;
  }
  return true;
}

std::uint64_t count_words(const Subshift& sft, int n) {
  if (n <= 0) return 1;
  const int a = sft.alphabet_size();
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> cur(static_cast<std::size_t>(a), 1), nxt(cur.size());
  for (int len = 1; len < n; ++len) {
    std::fill(nxt.begin(), nxt.end(), 0);
    for (int x = 0; x < a; ++x)
      for (int y = 0; y < a; ++y)
        if (sft.allowed(x, y)) nxt[y] = cur[x] > cap - nxt[y] ? cap : nxt[y] + cur[x];
    cur.swap(nxt);
  }
  std::uint64_t total = 0;
  for (auto c : cur) total = c > cap - total ? cap : total + c;
  return total;
}

void for_each_word(const Subshift& sft, int n, const std::function<void(const Word&)>& visit,
                   std::uint64_t budget) {
  if (n <= 0) {
    visit(Word{});
    return;
  }
  const std::uint64_t total = count_words(sft, n);
  if (total > budget)
    throw Error(ErrorCode::EnumerationBudgetExceeded,
                std::to_string(total) + " words of length " + std::to_string(n) +
                    " exceed the budget of " + std::to_string(budget));
  const int a = sft.alphabet_size();
  Word w(static_cast<std::size_t>(n), 0);
  std::vector<int> next(static_cast<std::size_t>(n), 0);
  int pos = 0;
  while (pos >= 0) {
    int& cand = next[pos];
    while (cand < a && pos > 0 && !sft.allowed(w[pos - 1], cand)) ++cand;
    if (cand >= a) {
      cand = 0;
      --pos;
      if (pos >= 0) ++next[pos];
      continue;
    }
    w[pos] = static_cast<Symbol>(cand);
    if (pos + 1 == n) {
      visit(w);
      ++cand;
    } else {
      ++pos;
      next[pos] = 0;
    }
  }
}

std::vector<Word> enumerate_words(const Subshift& sft, int n, std::uint64_t budget) {
  std::vector<Word> out;
  for_each_word(sft, n, [&](const Word& w) { out.push_back(w); }, budget);
  return out;
}

int bowen_ball_word_length(int n, Scale scale) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "time horizon must be positive");
  if (scale.m < 0) throw Error(ErrorCode::InvalidArgument, "scale exponent must be >= 0");
  return n + scale.m;
}

int separated_word_length(int n, Scale scale) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "time horizon must be positive");
  if (scale.m < 1)
    throw Error(ErrorCode::ScaleTooCoarse, "separated sets need m >= 1 under this metric");
  return n + scale.m - 1;
}

double prefix_distance(std::span<const Symbol> x, std::span<const Symbol> y) {
  const std::size_t len = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < len; ++i)
    if (x[i] != y[i]) return std::ldexp(1.0, -static_cast<int>(i));
  return 0.0;
}

double bowen_distance(std::span<const Symbol> x, std::span<const Symbol> y, int n) {
  double d = 0.0;
  for (int i = 0; i < n && static_cast<std::size_t>(i) < std::min(x.size(), y.size()); ++i)
    d = std::max(d, prefix_distance(x.subspan(i), y.subspan(i)));
  return d;
}

LocallyConstantPotential::LocallyConstantPotential(Subshift sft, int depth,
                                                   std::vector<double> values)
    : system_(std::move(sft)), depth_(depth), values_(std::move(values)) {
  min_ = std::numeric_limits<double>::infinity();
  max_ = -min_;
  for (double v : values_) {
    if (std::isnan(v)) continue;
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "potential values must be finite");
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
  }
}

namespace {

void check_depth(const Subshift& sft, int depth) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "potential depth must be >= 1");
  const double size = std::pow(static_cast<double>(sft.alphabet_size()), depth);
  if (size > double(1 << 24))
    throw Error(ErrorCode::InvalidArgument, "potential table too large");
}

}  // namespace

LocallyConstantPotential LocallyConstantPotential::from_function(
    const Subshift& sft, int depth, const std::function<double(std::span<const Symbol>)>& fn) {
  check_depth(sft, depth);
  const int a = sft.alphabet_size();
  std::vector<double> values(detail::int_pow(a, depth), std::numeric_limits<double>::quiet_NaN());
  for_each_word(sft, depth,
                [&](const Word& w) { values[detail::word_code(w, a)] = fn(w); });
  return LocallyConstantPotential(sft, depth, std::move(values));
}

LocallyConstantPotential LocallyConstantPotential::zero(const Subshift& sft) {
  return constant(sft, 0.0);
}

LocallyConstantPotential LocallyConstantPotential::constant(const Subshift& sft, double c) {
  return from_function(sft, 1, [c](std::span<const Symbol>) { return c; });
}

LocallyConstantPotential LocallyConstantPotential::from_table(const Subshift& sft, int depth,
                                                              const std::map<Word, double>& table) {
  check_depth(sft, depth);
  for (const auto& [w, v] : table) {
    if (static_cast<int>(w.size()) != depth)
      throw Error(ErrorCode::InvalidArgument,
                  "potential key '" + word_to_string(w) + "' has the wrong length");
    if (!sft.is_admissible(w))
      throw Error(ErrorCode::InadmissibleWord,
                  "potential key '" + word_to_string(w) + "' is not admissible");
  }
  return from_function(sft, depth, [&](std::span<const Symbol> w) {
    auto it = table.find(Word(w.begin(), w.end()));
    if (it == table.end())
      throw Error(ErrorCode::InvalidArgument,
                  "potential table misses admissible word '" + word_to_string(w) + "'");
    return it->second;
  });
}

double LocallyConstantPotential::operator()(std::span<const Symbol> window) const {
  if (static_cast<int>(window.size()) != depth_)
    throw Error(ErrorCode::InvalidArgument, "window length differs from potential depth");
  for (Symbol s : window)
    if (s >= system_.alphabet_size())
      throw Error(ErrorCode::InadmissibleWord, "symbol outside the alphabet");
  const double v = values_[detail::word_code(window, system_.alphabet_size())];
  if (std::isnan(v))
    throw Error(ErrorCode::InadmissibleWord, "window '" + word_to_string(window) + "' is not admissible");
  return v;
}

LocallyConstantPotential LocallyConstantPotential::shifted(double c) const {
  auto values = values_;
  for (double& v : values) v += c;
  return LocallyConstantPotential(system_, depth_, std::move(values));
}

LocallyConstantPotential LocallyConstantPotential::lifted(int depth) const {
  if (depth < depth_) throw Error(ErrorCode::InvalidArgument, "cannot lower potential depth");
  if (depth == depth_) return *this;
  return from_function(system_, depth, [this](std::span<const Symbol> w) {
    return (*this)(w.first(static_cast<std::size_t>(depth_)));
  });
}

std::map<Word, double> LocallyConstantPotential::table() const {
  std::map<Word, double> out;
  for_each_word(system_, depth_, [&](const Word& w) { out[w] = (*this)(w); });
  return out;
}

double birkhoff_sum(const LocallyConstantPotential& f, std::span<const Symbol> w, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative number of summands");
  if (!f.system().is_admissible(w))
    throw Error(ErrorCode::InadmissibleWord, "'" + word_to_string(w) + "' is not admissible");
  if (n == 0) return 0.0;
  const int k = f.depth();
  if (static_cast<int>(w.size()) < n + k - 1)
    throw Error(ErrorCode::InsufficientDepth,
                "word of length " + std::to_string(w.size()) + " cannot determine " +
                    std::to_string(n) + " summands of a depth-" + std::to_string(k) + " potential");
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f(w.subspan(static_cast<std::size_t>(i), static_cast<std::size_t>(k)));
  return sum;
}

double extremal_birkhoff_on_cylinder(const LocallyConstantPotential& f,
                                     std::span<const Symbol> w, int n, Extremum which) {
  if (!f.system().is_admissible(w))
    throw Error(ErrorCode::InadmissibleWord, "'" + word_to_string(w) + "' is not admissible");
  if (n <= 0) return 0.0;
  detail::ExtremalTails tails(f, which, n);
  return tails.over_extensions(w, 0, n);
}

double sup_birkhoff_on_cylinder(const LocallyConstantPotential& f, std::span<const Symbol> w,
                                int n) {
  return extremal_birkhoff_on_cylinder(f, w, n, Extremum::sup);
}

double inf_birkhoff_on_cylinder(const LocallyConstantPotential& f, std::span<const Symbol> w,
                                int n) {
  return extremal_birkhoff_on_cylinder(f, w, n, Extremum::inf);
}

BlockRecoding recode_to_blocks(const LocallyConstantPotential& f) {
  const Subshift& sft = f.system();
  const int k = f.depth();
  if (k <= 2) {
    std::vector<Word> blocks;
    for (int a = 0; a < sft.alphabet_size(); ++a) blocks.push_back(Word{static_cast<Symbol>(a)});
    return BlockRecoding{sft, f, std::move(blocks)};
  }
  auto blocks = enumerate_words(sft, k - 1);
  if (blocks.size() > 255)
    throw Error(ErrorCode::InvalidArgument, "too many blocks for an order-1 recoding");
  const int nb = static_cast<int>(blocks.size());
  TransitionRelation rel(nb);
  for (int u = 0; u < nb; ++u)
    for (int v = 0; v < nb; ++v)
      if (std::equal(blocks[u].begin() + 1, blocks[u].end(), blocks[v].begin()) &&
          sft.allowed(blocks[u].back(), blocks[v].back()))
        rel.set(u, v);
  Subshift recoded(rel, sft.label() + "/blocks" + std::to_string(k - 1));
  auto g = LocallyConstantPotential::from_function(recoded, 2, [&](std::span<const Symbol> uv) {
    Word w = blocks[uv[0]];
    w.push_back(blocks[uv[1]].back());
    return f(w);
  });
  return BlockRecoding{recoded, g, std::move(blocks)};
}

std::string word_to_string(std::span<const Symbol> w) {
  static constexpr char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  out.reserve(w.size());
  for (Symbol s : w) {
    if (s >= 36) throw Error(ErrorCode::InvalidArgument, "symbol has no single-character name");
    out.push_back(digits[s]);
  }
  return out;
}

Word word_from_string(const std::string& text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    if (c >= '0' && c <= '9') w.push_back(static_cast<Symbol>(c - '0'));
    else if (c >= 'a' && c <= 'z') w.push_back(static_cast<Symbol>(c - 'a' + 10));
    else throw Error(ErrorCode::InvalidArgument, std::string("bad symbol character '") + c + "'");
  }
  return w;
}

}  // namespace pressurelab
