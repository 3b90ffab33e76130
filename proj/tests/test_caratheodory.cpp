#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pressurelab/caratheodory.hpp"
#include "pressurelab/error.hpp"

using namespace pressurelab;

namespace {

LocallyConstantPotential random_potential(std::mt19937_64& rng, const Subshift& sft, int depth) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::map<Word, double> table;
  for (const auto& w : oracle::words(sft, depth)) table[w] = u(rng);
  return LocallyConstantPotential::from_table(sft, depth, table);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

struct RandomCase {
  Subshift host;
  SubsetSpec spec;
  oracle::Membership member;
  LocallyConstantPotential f;
  double s;
  int N, m, L;
};

RandomCase draw_case(std::mt19937_64& rng, int max_l) {
  std::uniform_int_distribution<int> pick(0, 2);
  const Subshift host = pick(rng) == 0 ? Subshift::golden_mean() : Subshift::full(2);
  const auto f = random_potential(rng, host, 1 + static_cast<int>(rng() % 3));
  const int m = static_cast<int>(rng() % 3);
  const int N = 1 + static_cast<int>(rng() % 3);
  const int L = std::min(max_l, N + m + 1 + static_cast<int>(rng() % 4));
  const double s = std::uniform_real_distribution<double>(-0.5, 1.5)(rng);
  switch (pick(rng)) {
    case 0: return {host, SubsetSpec::whole(), oracle::whole(host), f, s, N, m, L};
    case 1: {
      auto rel = host.relation();
      rel.set(1, 0, false);
      return {host, SubsetSpec::sub_sft(rel), oracle::sub_sft(rel), f, s, N, m, L};
    }
    default: {
      const double alpha = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
      return {host, SubsetSpec::frequency_level(0, alpha, 0.2), oracle::frequency(host, 0, alpha, 0.2), f, s, N, m, L};
    }
  }
}

}  // namespace

TEST_CASE("single ball cover value") {
  const auto sft = Subshift::full(2);
  const auto f = LocallyConstantPotential::from_table(sft, 1, {{Word{0}, 1.0}, {Word{1}, 0.0}});
  WeightedCover c;
  c.balls.push_back(Ball{Word{0, 0, 0}, 2, Scale{1}});
  c.weights.push_back(1.0);
  CHECK(cover_value(c, f, 0.0) == doctest::Approx(std::exp(2.0)));
  CHECK(c.min_n() == 2);
  // a depth-2 potential reading the next symbol is not fixed by a one-symbol center
  const auto g = LocallyConstantPotential::from_function(sft, 2, [](std::span<const Symbol> w) { return double(w[1]); });
  WeightedCover d;
  d.balls.push_back(Ball{Word{0}, 1, Scale{0}});
  d.weights.push_back(2.0);
  CHECK(cover_value(d, g, 0.0) == doctest::Approx(2.0 * std::exp(1.0)));
  CHECK(cover_value(d, g, 0.0, true) == doctest::Approx(2.0));
}

TEST_CASE("exact cover values on the full shift") {
  const auto sft = Subshift::full(2);
  const auto zero = LocallyConstantPotential::zero(sft);
  const double ln2 = std::log(2.0);
  // every cylinder of depth d costs 2^-(d-1); any prefix-free cover sums to 2
  CHECK(min_cover_value(sft, SubsetSpec::whole(), zero, ln2, 2, Scale{1}, 8) == doctest::Approx(2.0));
  CHECK(weighted_cover_value(sft, SubsetSpec::whole(), zero, ln2, 2, Scale{1}, 6) == doctest::Approx(2.0));
  CHECK(weighted_cover_value(sft, SubsetSpec::whole(), zero, ln2, 2, Scale{1}, 6, LpMode::single) ==
        doctest::Approx(2.0));
  CHECK(string_cover_value(sft, SubsetSpec::whole(), zero, ln2, 2, 1, 8) == doctest::Approx(1.0));
  // s far above the pressure makes the value small
  CHECK(min_cover_value(sft, SubsetSpec::whole(), zero, 3.0, 4, Scale{1}, 10) < 1.0);
  CHECK(weighted_cover_value(sft, SubsetSpec::whole(), zero, 3.0, 4, Scale{1}, 10) < 1.0);
}

TEST_CASE("cover search agrees with the brute tree recursion") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 80; ++trial) {
    auto c = draw_case(rng, 8);
    const oracle::CoverCase oc{&c.host, c.member, &c.f, c.s, c.N, c.m, c.L};
    const double brute = oracle::min_cover_tree(oc);
    CAPTURE(trial);
    if (std::isnan(brute)) {
      CHECK(code_of([&] { log_min_cover_value(c.host, c.spec, c.f, c.s, c.N, Scale{c.m}, c.L); }) ==
            ErrorCode::EmptyTarget);
      continue;
    }
    CHECK(log_min_cover_value(c.host, c.spec, c.f, c.s, c.N, Scale{c.m}, c.L) ==
          doctest::Approx(std::log(brute)).epsilon(1e-10));
    CHECK(log_centered_cover_value(c.host, c.spec, c.f, c.s, c.N, Scale{c.m}, c.L) ==
          doctest::Approx(std::log(oracle::min_cover_tree(oc, false))).epsilon(1e-10));
    if (c.m >= 0)
      CHECK(log_string_cover_value(c.host, c.spec, c.f, c.s, c.N, c.m + 1, c.L) ==
            doctest::Approx(log_min_cover_value(c.host, c.spec, c.f, c.s, c.N, Scale{c.m}, c.L)).epsilon(1e-12));
  }
}

TEST_CASE("tree recursion agrees with literal subset enumeration") {
  std::mt19937_64 rng(77);
  int compared = 0;
  for (int trial = 0; trial < 80; ++trial) {
    auto c = draw_case(rng, 5);
    const oracle::CoverCase oc{&c.host, c.member, &c.f, c.s, c.N, c.m, c.L};
    const double exhaustive = oracle::min_cover_subsets(oc);
    const double tree = oracle::min_cover_tree(oc);
    if (std::isnan(exhaustive) || std::isnan(tree)) continue;
    ++compared;
    CHECK(tree == doctest::Approx(exhaustive).epsilon(1e-12));
    CHECK(min_cover_value(c.host, c.spec, c.f, c.s, c.N, Scale{c.m}, c.L) == doctest::Approx(exhaustive).epsilon(1e-10));
  }
  CHECK(compared >= 15);
}

TEST_CASE("cover value monotonicity") {
  std::mt19937_64 rng(5150);
  const auto host = Subshift::full(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_potential(rng, host, 2);
    const int L = 10;
    auto lv = [&](const SubsetSpec& z, double s, int N) { return log_min_cover_value(host, z, f, s, N, Scale{1}, L); };
    const double s = std::uniform_real_distribution<double>(0.0, 1.5)(rng);
    CHECK(lv(SubsetSpec::whole(), s + 0.1, 3) <= lv(SubsetSpec::whole(), s, 3));
    CHECK(lv(SubsetSpec::whole(), s, 3) <= lv(SubsetSpec::whole(), s, 4) + 1e-12);
    const auto sub = SubsetSpec::sub_sft(TransitionRelation::from_pairs(2, {{0, 0}, {0, 1}, {1, 0}}));
    CHECK(lv(sub, s, 3) <= lv(SubsetSpec::whole(), s, 3) + 1e-12);
    const double w = log_weighted_cover_value(host, SubsetSpec::whole(), f, s, 3, Scale{1}, L);
    CHECK(w <= lv(SubsetSpec::whole(), s, 3) + 1e-9);
  }
}

TEST_CASE("fractional cover LP: blocked and single solves agree and certify") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    auto c = draw_case(rng, 7);
    CAPTURE(trial);
    double single = 0.0;
    try {
      single = log_weighted_cover_value(c.host, c.spec, c.f, c.s, c.N, Scale{c.m}, c.L, LpMode::single);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyTarget);
      continue;
    }
    const double blocked = log_weighted_cover_value(c.host, c.spec, c.f, c.s, c.N, Scale{c.m}, c.L);
    CHECK(blocked == doctest::Approx(single).epsilon(1e-9));
    CHECK(blocked <= log_min_cover_value(c.host, c.spec, c.f, c.s, c.N, Scale{c.m}, c.L) + 1e-9);

    const auto sol = optimal_weighted_cover(c.host, c.spec, c.f, c.s, c.N, Scale{c.m}, c.L);
    CHECK(std::log(sol.value) == doctest::Approx(single).epsilon(1e-9));
    CHECK(sol.dual_value == doctest::Approx(sol.value).epsilon(1e-9));
    CHECK(cover_value(sol.cover, c.f, c.s) == doctest::Approx(sol.value).epsilon(1e-9));
    for (const auto& leaf : sol.leaves) {
      double mass = 0.0;
      for (std::size_t i = 0; i < sol.cover.balls.size(); ++i)
        if (oracle::is_prefix(sol.cover.balls[i].center, leaf)) mass += sol.cover.weights[i];
      CHECK(mass >= 1.0 - 1e-9);
    }
    CHECK(sol.cover.min_n() >= c.N);
  }
}

TEST_CASE("depth and scale errors") {
  const auto sft = Subshift::full(2);
  const auto zero = LocallyConstantPotential::zero(sft);
  CHECK(code_of([&] { min_cover_value(sft, SubsetSpec::whole(), zero, 0.5, 4, Scale{2}, 5); }) ==
        ErrorCode::DepthTooShallow);
  CHECK(code_of([&] { min_cover_value(sft, SubsetSpec::frequency_level(0, 0.3, 0.02), zero, 0.5, 2, Scale{1}, 12); }) ==
        ErrorCode::EmptyTarget);
  CHECK(code_of([&] { check_chain(sft, SubsetSpec::whole(), zero, 0.5, 0.5, 4, Scale{2}); }) ==
        ErrorCode::ScaleTooCoarse);
}

TEST_CASE("critical exponent brackets") {
  const auto full = Subshift::full(2);
  const auto zero = LocallyConstantPotential::zero(full);
  const auto ce = bowen_pressure(full, SubsetSpec::whole(), zero, Scale{1}, 4, 14);
  CHECK(ce.s_low <= ce.s_high);
  CHECK(ce.width() <= 1e-4);
  CHECK(ce.midpoint() == doctest::Approx(std::log(2.0)).epsilon(1e-3));
  // the raw crossing brackets the threshold-one point of the cover value
  CHECK(log_min_cover_value(full, SubsetSpec::whole(), zero, ce.raw_high, 4, Scale{1}, 14) <= 0.0);
  CHECK(log_min_cover_value(full, SubsetSpec::whole(), zero, ce.raw_low, 4, Scale{1}, 14) >= 0.0);

  SearchOptions th;
  th.estimator = Estimator::threshold;
  const auto ct = bowen_pressure(Subshift::golden_mean(), SubsetSpec::whole(),
                                 LocallyConstantPotential::zero(Subshift::golden_mean()), Scale{1}, 4, 14, th);
  CHECK(ct.estimator == Estimator::threshold);
  CHECK(ct.raw_low == ct.s_low);
  CHECK(min_cover_value(Subshift::golden_mean(), SubsetSpec::whole(),
                        LocallyConstantPotential::zero(Subshift::golden_mean()), ct.s_high, 4, Scale{1}, 14) <= 1.0);

  // window-shift and weighted agree on a full shift
  const auto wp = weighted_pressure(full, SubsetSpec::whole(), zero, Scale{1}, 6, 13);
  CHECK(wp.midpoint() == doctest::Approx(std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("Vitali selection examples") {
  const Ball b{Word{0, 1, 0, 1}, 1, Scale{3}};
  CHECK(vitali_select({b, b, b}) == std::vector<std::size_t>{0});
  std::vector<Ball> all;
  for (const auto& w : oracle::words(Subshift::full(2), 4)) all.push_back(Ball{w, 1, Scale{3}});
  CHECK(vitali_select(all).size() == 16);
  CHECK(vitali_enlargements_cover(all, vitali_select(all)));
  // a ball of depth 4 contains one of depth 6 sharing its prefix
  const std::vector<Ball> nested{Ball{Word{0, 0, 1, 1, 0, 1}, 3, Scale{3}}, Ball{Word{0, 0, 1, 1}, 1, Scale{3}}};
  CHECK(vitali_select(nested) == std::vector<std::size_t>{1});
  CHECK(code_of([] { vitali_select({Ball{Word{0, 1}, 1, Scale{1}}}); }) == ErrorCode::ScaleTooCoarse);
  CHECK(vitali_enlargement(Ball{Word{0, 1, 1, 0, 1}, 2, Scale{3}}) == Word{0, 1});
}

TEST_CASE("Vitali selection on random families") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 3 + static_cast<int>(rng() % 2);
    const int count = 1 + static_cast<int>(rng() % 30);
    const bool common_n = trial % 2 == 0;
    const int n0 = 1 + static_cast<int>(rng() % 4);
    std::vector<Ball> balls;
    for (int i = 0; i < count; ++i) {
      const int n = common_n ? n0 : 1 + static_cast<int>(rng() % 4);
      Word w;
      for (int j = 0; j < n + m; ++j) w.push_back(static_cast<Symbol>(rng() % 2));
      balls.push_back(Ball{w, n, Scale{m}});
    }
    const auto kept = vitali_select(balls);
    for (std::size_t a = 0; a < kept.size(); ++a)
      for (std::size_t b = a + 1; b < kept.size(); ++b) {
        const auto& u = balls[kept[a]].center;
        const auto& v = balls[kept[b]].center;
        CHECK_FALSE(oracle::is_prefix(u, v));
        CHECK_FALSE(oracle::is_prefix(v, u));
      }
    // every input ball meets a kept ball of at most its depth and lies in that ball's enlargement
    for (const auto& ball : balls) {
      bool covered = false;
      for (std::size_t j : kept) {
        const auto big = Word(balls[j].center.begin(), balls[j].center.begin() + balls[j].depth() - 3);
        covered = covered || oracle::is_prefix(big, ball.center);
      }
      CHECK(covered);
    }
    CHECK(vitali_enlargements_cover(balls, kept));
  }
}

TEST_CASE("chain of cover quantities") {
  const auto full = Subshift::full(2);
  const auto g = Subshift::golden_mean();
  const auto r1 = check_chain(full, SubsetSpec::whole(), LocallyConstantPotential::zero(full), std::log(2.0), 0.5, 6,
                              Scale{4}, 14);
  CHECK(r1.passed());
  CHECK(r1.log_weighted <= r1.log_unweighted + 1e-9);
  const auto r2 = check_chain(g, SubsetSpec::whole(), LocallyConstantPotential::zero(g), 0.45, 0.4, 8, Scale{4}, 16);
  CHECK(r2.passed());
  const auto fp = Subshift::fixed_point();
  const auto r3 = check_chain(fp, SubsetSpec::whole(), LocallyConstantPotential::constant(fp, 0.3), 0.2, 0.5, 3,
                              Scale{3}, 9);
  CHECK(r3.passed());
  CHECK(r3.weighted == doctest::Approx(r3.unweighted));
  CHECK(chain_precondition(0.8, 1));
  CHECK_FALSE(chain_precondition(0.5, 8));
  CHECK(chain_precondition(0.5, 9));
}
