#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pressurelab/error.hpp"
#include "pressurelab/symbolic.hpp"
#include "pressurelab/transfer.hpp"

using namespace pressurelab;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

LocallyConstantPotential random_potential(std::mt19937_64& rng, const Subshift& sft, int depth) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::map<Word, double> table;
  for (const auto& w : oracle::words(sft, depth)) table[w] = u(rng);
  return LocallyConstantPotential::from_table(sft, depth, table);
}

}  // namespace

TEST_CASE("relations: essential symbols and recurrent core") {
  // 0 -> 1 -> 1, 2 -> 0; symbol 2 has no predecessor
  auto rel = TransitionRelation::from_pairs(3, {{0, 1}, {1, 1}, {2, 0}});
  const auto ess = rel.essential_symbols();
  CHECK(ess == std::vector<bool>{true, true, true});
  const auto core = rel.recurrent_core();
  CHECK(core == std::vector<bool>{false, true, false});
  CHECK_FALSE(rel.is_irreducible());
  CHECK(TransitionRelation(2, true).is_irreducible());
  CHECK(rel.is_subrelation_of(TransitionRelation(3, true)));
  CHECK_FALSE(TransitionRelation(3, true).is_subrelation_of(rel));
}

TEST_CASE("subshift rejects dead ends") {
  CHECK(code_of([] { Subshift(TransitionRelation::from_pairs(2, {{0, 1}})); }) == ErrorCode::InvalidArgument);
  CHECK(Subshift::golden_mean().is_admissible(Word{0, 1, 0, 0, 1}));
  CHECK_FALSE(Subshift::golden_mean().is_admissible(Word{0, 1, 1}));
}

TEST_CASE("word counts agree with brute enumeration") {
  for (const auto& sft : {Subshift::full(2), Subshift::golden_mean(), Subshift::full(3), Subshift::fixed_point()})
    for (int n = 0; n <= 7; ++n) {
      const auto brute = oracle::words(sft, n);
      CHECK(count_words(sft, n) == brute.size());
      CHECK(enumerate_words(sft, n) == brute);
    }
  // Fibonacci growth on the golden mean
  CHECK(count_words(Subshift::golden_mean(), 10) == 144);
  CHECK(code_of([] { enumerate_words(Subshift::full(2), 12, 100); }) == ErrorCode::EnumerationBudgetExceeded);
}

TEST_CASE("ball and separation lengths") {
  CHECK(bowen_ball_word_length(3, Scale{2}) == 5);
  CHECK(separated_word_length(3, Scale{2}) == 4);
  CHECK(code_of([] { separated_word_length(3, Scale{0}); }) == ErrorCode::ScaleTooCoarse);
  CHECK(Scale{3}.epsilon() == doctest::Approx(0.125));
}

TEST_CASE("metric agrees with the literal definition") {
  const auto sft = Subshift::full(2);
  const auto ws = oracle::words(sft, 7);
  for (const auto& x : ws)
    for (const auto& y : ws) {
      CHECK(prefix_distance(x, y) == oracle::distance(x, y));
      for (int n = 1; n <= 4; ++n) CHECK(bowen_distance(x, y, n) == oracle::bowen_distance(x, y, n));
    }
}

TEST_CASE("Bowen balls are cylinders of depth n+m") {
  // exhaustive over all pairs of long enough prefixes
  for (const auto& sft : {Subshift::full(2), Subshift::golden_mean()})
    for (int n = 1; n <= 4; ++n)
      for (int m = 0; m <= 4; ++m) {
        const int len = n + m + 1;
        const auto ws = oracle::words(sft, len);
        const int depth = bowen_ball_word_length(n, Scale{m});
        for (const auto& x : ws)
          for (const auto& y : ws) {
            const bool inside = oracle::bowen_distance(x, y, n) < std::ldexp(1.0, -m);
            const bool same = std::equal(x.begin(), x.begin() + depth, y.begin());
            CHECK(inside == same);
          }
      }
}

TEST_CASE("separated sets are indexed by prefixes of length n+m-1") {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m) {
      const auto ws = oracle::words(Subshift::full(2), n + m + 1);
      const int len = separated_word_length(n, Scale{m});
      for (const auto& x : ws)
        for (const auto& y : ws) {
          const bool separated = oracle::bowen_distance(x, y, n) > std::ldexp(1.0, -m);
          const bool differ = !std::equal(x.begin(), x.begin() + len, y.begin());
          CHECK(separated == differ);
        }
    }
}

TEST_CASE("potential construction errors") {
  const auto g = Subshift::golden_mean();
  CHECK(code_of([&] {
          LocallyConstantPotential::from_table(g, 2, {{Word{0, 0}, 0.0}, {Word{0, 1}, 0.0}, {Word{1, 0}, 0.0},
                                                      {Word{1, 1}, 1.0}});
        }) == ErrorCode::InadmissibleWord);
  CHECK(code_of([&] { LocallyConstantPotential::from_table(g, 1, {{Word{0}, 0.0}}); }) ==
        ErrorCode::InvalidArgument);
  const auto f = LocallyConstantPotential::from_table(g, 1, {{Word{0}, 0.5}, {Word{1}, -1.0}});
  CHECK(f.min() == -1.0);
  CHECK(f.max() == 0.5);
  CHECK(f(Word{1}) == -1.0);
  CHECK(f.shifted(2.0)(Word{0}) == 2.5);
  CHECK(f.lifted(3)(Word{1, 0, 1}) == -1.0);
}

TEST_CASE("Birkhoff sums and cylinder extremes") {
  const auto sft = Subshift::full(2);
  const auto f = LocallyConstantPotential::from_table(sft, 1, {{Word{0}, 1.0}, {Word{1}, 0.0}});
  CHECK(birkhoff_sum(f, Word{0, 0, 1, 0}, 4) == 3.0);
  CHECK(code_of([&] { birkhoff_sum(f.lifted(2), Word{0, 0}, 2); }) == ErrorCode::InsufficientDepth);
  // sup of f_2 over [00] is 2, over [0] it is 2 as well, inf over [0] is 1
  CHECK(sup_birkhoff_on_cylinder(f, Word{0, 0}, 2) == 2.0);
  CHECK(sup_birkhoff_on_cylinder(f, Word{0}, 2) == 2.0);
  CHECK(inf_birkhoff_on_cylinder(f, Word{0}, 2) == 1.0);

  std::mt19937_64 rng(17);
  for (const auto& host : {Subshift::full(2), Subshift::golden_mean(), Subshift::full(3)})
    for (int k = 1; k <= 3; ++k) {
      const auto g = random_potential(rng, host, k);
      for (int len = 1; len <= 4; ++len)
        for (const auto& w : oracle::words(host, len))
          for (int n = 1; n <= 5; ++n) {
            CHECK(sup_birkhoff_on_cylinder(g, w, n) == doctest::Approx(oracle::extremal_sum(host, g, w, n, true)));
            CHECK(inf_birkhoff_on_cylinder(g, w, n) == doctest::Approx(oracle::extremal_sum(host, g, w, n, false)));
          }
    }
}

TEST_CASE("block recoding keeps the spectral radius") {
  std::mt19937_64 rng(5);
  for (const auto& host : {Subshift::full(2), Subshift::golden_mean()})
    for (int k = 2; k <= 4; ++k) {
      const auto f = random_potential(rng, host, k);
      const auto rec = recode_to_blocks(f);
      CHECK(rec.potential.depth() <= 2);
      CHECK(spectral_pressure(rec.potential).value == doctest::Approx(oracle::spectral_pressure(host, f)).epsilon(1e-9));
    }
}

TEST_CASE("word text round trip") {
  const Word w{0, 1, 9, 10, 35};
  CHECK(word_to_string(w) == "019az");
  CHECK(word_from_string("019az") == w);
  CHECK(code_of([] { word_from_string("0-1"); }) == ErrorCode::InvalidArgument);
}
