#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pressurelab/error.hpp"
#include "pressurelab/measure.hpp"
#include "pressurelab/transfer.hpp"

using namespace pressurelab;

TEST_CASE("orbit samples follow the transition law and are reproducible") {
  const auto mu = MarkovMeasure::bernoulli({0.3, 0.7});
  const auto a = sample_orbit(mu, 20000, 9);
  const auto b = sample_orbit(mu, 20000, 9);
  CHECK(a.word == b.word);
  CHECK(sample_orbit(mu, 50, 10).word != sample_orbit(mu, 50, 9).word);
  double zeros = 0.0;
  for (Symbol s : a.word) zeros += (s == 0);
  CHECK(zeros / 20000.0 == doctest::Approx(0.3).epsilon(0.05));
  // golden-mean Parry chain never emits 11
  const auto parry = equilibrium_measure(LocallyConstantPotential::zero(Subshift::golden_mean()));
  const auto w = sample_orbit(parry, 5000, 1).word;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) CHECK_FALSE((w[i] == 1 && w[i + 1] == 1));
}

TEST_CASE("local pressure along an orbit equals the brute definition") {
  const auto sft = Subshift::full(2);
  const auto f = LocallyConstantPotential::from_table(sft, 1, {{Word{0}, 1.0}, {Word{1}, 0.0}});
  const auto mu = MarkovMeasure::bernoulli({0.4, 0.6});
  const auto x = sample_orbit(mu, 40, 3);
  const auto tr = local_pressure(mu, f, x, Scale{2}, NRange{1, 30});
  CHECK(tr.values.size() == 30);
  for (const auto& [n, v] : tr.values) {
    const Word ball(x.word.begin(), x.word.begin() + n + 2);
    double logmu = 0.0;
    for (Symbol s : ball) logmu += std::log(s == 0 ? 0.4 : 0.6);
    const double fn = oracle::extremal_sum(sft, f, Word(x.word.begin(), x.word.begin() + n), n, true);
    CHECK(v == doctest::Approx((fn - logmu) / n).epsilon(1e-12));
  }
  CHECK_THROWS_AS(local_pressure(mu, f, x, Scale{2}, NRange{1, 39}), Error);
}

TEST_CASE("closed-form invariant pressure matches the Markov oracle") {
  const auto sft = Subshift::full(2);
  const auto zero = LocallyConstantPotential::zero(sft);
  CHECK(exact_invariant_pressure(MarkovMeasure::bernoulli({0.5, 0.5}), zero) == doctest::Approx(std::log(2.0)));
  CHECK(exact_invariant_pressure(MarkovMeasure::bernoulli({0.3, 0.7}), zero) ==
        doctest::Approx(oracle::binary_entropy(0.3)));
  Matrix p(2, 2);
  p(0, 0) = 0.2;
  p(0, 1) = 0.8;
  p(1, 0) = 0.6;
  p(1, 1) = 0.4;
  const auto f = LocallyConstantPotential::from_function(sft, 2, [](std::span<const Symbol> w) {
    return 0.3 * w[0] + 0.5 * w[0] * w[1];
  });
  CHECK(exact_invariant_pressure(MarkovMeasure::stationary(p), f) ==
        doctest::Approx(oracle::markov_pressure(p, f)).epsilon(1e-12));
  CHECK(exact_invariant_pressure(MarkovMeasure::point_mass(2, 1), f) == doctest::Approx(0.8));
}

TEST_CASE("measure validation") {
  auto mu = MarkovMeasure::bernoulli({0.5, 0.5});
  CHECK_THROWS_AS(validate_measure(mu, Subshift::golden_mean()), Error);
  CHECK_NOTHROW(validate_measure(mu, Subshift::full(2)));
  Matrix p(2, 2);
  p(0, 1) = 1.0;
  p(1, 1) = 1.0;
  const MarkovMeasure transient{p, {1.0, 0.0}, "transient"};
  try {
    exact_invariant_pressure(transient, LocallyConstantPotential::zero(Subshift::full(2)));
    FAIL("expected NonInvariantMeasure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonInvariantMeasure);
  }
}

TEST_CASE("Monte Carlo estimate is deterministic and thread independent") {
  const auto sft = Subshift::full(2);
  const auto f = LocallyConstantPotential::from_table(sft, 1, {{Word{0}, 1.0}, {Word{1}, 0.0}});
  const auto mu = MarkovMeasure::bernoulli({0.3, 0.7});
  const auto one = measure_pressure_mc(mu, f, Scale{2}, NRange{1, 400}, 20, 42, 1);
  const auto four = measure_pressure_mc(mu, f, Scale{2}, NRange{1, 400}, 20, 42, 4);
  CHECK(one.mean == four.mean);
  CHECK(one.per_sample == four.per_sample);
  CHECK(one.samples == 20);
  CHECK(one.excluded == 0);
  CHECK(one.mean == doctest::Approx(exact_invariant_pressure(mu, f)).epsilon(0.1));
}
