#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pressurelab {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

/// Dyadic scale: epsilon = 2^-m.
struct Scale {
  int m = 1;
  double epsilon() const;
};

/// Inclusive range of time horizons.
struct NRange {
  int first = 1;
  int last = 1;
  int size() const { return last - first + 1; }
};

/// Allowed-transition relation A on symbols {0, ..., size-1}.
class TransitionRelation {
 public:
  TransitionRelation() = default;
  explicit TransitionRelation(int alphabet_size, bool fill = false);

  static TransitionRelation from_pairs(int alphabet_size,
                                       const std::vector<std::pair<int, int>>& pairs);

  int alphabet_size() const noexcept { return size_; }
  bool allowed(int a, int b) const { return bits_[static_cast<std::size_t>(a * size_ + b)] != 0; }
  void set(int a, int b, bool value = true) {
    bits_[static_cast<std::size_t>(a * size_ + b)] = value ? 1 : 0;
  }

  std::vector<std::pair<int, int>> pairs() const;
  bool is_subrelation_of(const TransitionRelation& other) const;

  /// Symbols that start an infinite forward path.
  std::vector<bool> essential_symbols() const;
  /// Symbols lying on a bi-infinite path (forward and backward essential).
  std::vector<bool> recurrent_core() const;
  /// Strong connectivity of the graph restricted to `keep` (all symbols by default).
  bool is_irreducible(const std::vector<bool>* keep = nullptr) const;

  bool operator==(const TransitionRelation&) const = default;

 private:
  int size_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// One-sided subshift of finite type given by an order-1 transition relation.
class Subshift {
 public:
  Subshift(TransitionRelation relation, std::string label = "");

  static Subshift full(int alphabet_size);
  static Subshift golden_mean();  // forbids 11
  static Subshift fixed_point();  // alphabet {0}, 0 -> 0

  int alphabet_size() const noexcept { return relation_.alphabet_size(); }
  bool allowed(int a, int b) const { return relation_.allowed(a, b); }
  const TransitionRelation& relation() const noexcept { return relation_; }
  const std::string& label() const noexcept { return label_; }

  bool is_admissible(std::span<const Symbol> w) const;
  bool is_irreducible() const { return relation_.is_irreducible(); }

 private:
  TransitionRelation relation_;
  std::string label_;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 26;

/// Number of admissible words of length n (saturates at UINT64_MAX).
std::uint64_t count_words(const Subshift& sft, int n);
/// Admissible words of length n in lexicographic order; n = 0 gives {empty}.
std::vector<Word> enumerate_words(const Subshift& sft, int n,
                                  std::uint64_t budget = kDefaultEnumerationBudget);
/// Visits the admissible words of length n in lexicographic order without storing them.
void for_each_word(const Subshift& sft, int n, const std::function<void(const Word&)>& visit,
                   std::uint64_t budget = kDefaultEnumerationBudget);

/// Cylinder depth of the Bowen ball B_n(x, 2^-m).
int bowen_ball_word_length(int n, Scale scale);
/// Prefix length whose distinct values index a maximal (n, 2^-m)-separated set.
int separated_word_length(int n, Scale scale);

/// Literal metric d(x,y) = 2^-(first disagreement) on finite prefixes; 0 if they agree
/// on their common length.
double prefix_distance(std::span<const Symbol> x, std::span<const Symbol> y);
/// d_n(x,y) = max_{i<n} d(T^i x, T^i y) on finite prefixes.
double bowen_distance(std::span<const Symbol> x, std::span<const Symbol> y, int n);

/// Potential depending on the first `depth` coordinates.
class LocallyConstantPotential {
 public:
  static LocallyConstantPotential zero(const Subshift& sft);
  static LocallyConstantPotential constant(const Subshift& sft, double c);
  /// Table must list every admissible word of length `depth` and nothing else.
  static LocallyConstantPotential from_table(const Subshift& sft, int depth,
                                             const std::map<Word, double>& table);
  static LocallyConstantPotential from_function(
      const Subshift& sft, int depth, const std::function<double(std::span<const Symbol>)>& fn);

  int depth() const noexcept { return depth_; }
  const Subshift& system() const noexcept { return system_; }

  double operator()(std::span<const Symbol> window) const;
  /// Value at a window given by its base-a code.
  double at_code(std::size_t code) const { return values_[code]; }

  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

  LocallyConstantPotential shifted(double c) const;
  /// Same function viewed as a potential of larger depth.
  LocallyConstantPotential lifted(int depth) const;
  std::map<Word, double> table() const;

 private:
  LocallyConstantPotential(Subshift sft, int depth, std::vector<double> values);

  Subshift system_;
  int depth_ = 1;
  std::vector<double> values_;  // indexed by base-a code, NaN off the language
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Sum of f over the windows starting at 0..n-1 of w.
double birkhoff_sum(const LocallyConstantPotential& f, std::span<const Symbol> w, int n);

enum class Extremum { sup, inf };

/// Exact sup (or inf) of f_n over the cylinder [w].
double extremal_birkhoff_on_cylinder(const LocallyConstantPotential& f,
                                     std::span<const Symbol> w, int n, Extremum which);
double sup_birkhoff_on_cylinder(const LocallyConstantPotential& f, std::span<const Symbol> w,
                                int n);
double inf_birkhoff_on_cylinder(const LocallyConstantPotential& f, std::span<const Symbol> w,
                                int n);

/// Order-1 recoding on admissible (k-1)-blocks with a depth-2 potential.
struct BlockRecoding {
  Subshift system;
  LocallyConstantPotential potential;
  std::vector<Word> blocks;
};
BlockRecoding recode_to_blocks(const LocallyConstantPotential& f);

/// Word rendering with one character per symbol (0-9 then a-z).
std::string word_to_string(std::span<const Symbol> w);
Word word_from_string(const std::string& text);

}  // namespace pressurelab
