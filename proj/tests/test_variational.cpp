#include <doctest.h>

#include <cmath>

#include "pressurelab/error.hpp"
#include "pressurelab/variational.hpp"

using namespace pressurelab;

TEST_CASE("variational principle on the tilted full shift") {
  const auto sft = Subshift::full(2);
  const auto f = LocallyConstantPotential::from_table(sft, 1, {{Word{0}, 1.0}, {Word{1}, 0.0}});
  VariationalOptions opt;
  opt.L = 14;
  opt.grid_points = 60;
  const auto r = verify_theoremA1(sft, SubsetSpec::whole(), f, opt);
  CHECK(r.passed);
  CHECK(r.equilibrium_is_argmax);
  CHECK(r.grid_points >= 60);
  CHECK(r.spectral_pressure == doctest::Approx(std::log(std::exp(1.0) + 1.0)));
  CHECK(std::abs(r.gap) <= 5e-3);
}

TEST_CASE("variational principle on a fixed point") {
  const auto sft = Subshift::full(2);
  const auto f = LocallyConstantPotential::from_table(sft, 1, {{Word{0}, 0.4}, {Word{1}, -0.2}});
  VariationalOptions opt;
  opt.L = 12;
  opt.grid_points = 30;
  const auto k = SubsetSpec::sub_sft(TransitionRelation::from_pairs(2, {{0, 0}}));
  const auto r = verify_theoremA1(sft, k, f, opt);
  CHECK(r.passed);
  CHECK(r.measure_sup == doctest::Approx(0.4));
  CHECK(r.p_bowen.midpoint() == doctest::Approx(0.4).epsilon(1e-3));
}

TEST_CASE("frequency level sets only assert the measure side") {
  const auto sft = Subshift::full(2);
  VariationalOptions opt;
  opt.N = 8;
  opt.L = 16;
  opt.grid_points = 40;
  const auto r = verify_theoremA1(sft, SubsetSpec::frequency_level(0, 0.3, 0.1), LocallyConstantPotential::zero(sft), opt);
  CHECK_FALSE(r.compact);
  CHECK(std::isnan(r.spectral_pressure));
  CHECK(r.measure_sup <= r.p_bowen.s_high + opt.tolerance);
  CHECK(r.passed);
}

TEST_CASE("unions take the larger component") {
  const auto sft = Subshift::full(2);
  VariationalOptions opt;
  opt.L = 14;
  const auto golden = TransitionRelation::from_pairs(2, {{0, 0}, {0, 1}, {1, 0}});
  const auto ones = TransitionRelation::from_pairs(2, {{1, 1}});
  const auto r = verify_theoremA2_unions(sft, {golden, ones}, LocallyConstantPotential::zero(sft), opt);
  CHECK(r.passed);
  CHECK(r.max_component == doctest::Approx(0.4812).epsilon(1e-2));
  const auto zeros = TransitionRelation::from_pairs(2, {{0, 0}});
  const auto pts = verify_theoremA2_unions(sft, {zeros, ones}, LocallyConstantPotential::zero(sft), opt);
  CHECK(pts.passed);
  CHECK(pts.union_pressure.midpoint() == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("Gibbs bound and its negative control") {
  const auto sft = Subshift::full(2);
  const auto f = LocallyConstantPotential::from_table(sft, 1, {{Word{0}, 1.0}, {Word{1}, 0.0}});
  VariationalOptions opt;
  opt.L = 14;
  const auto r = verify_lemma33_bound(sft, SubsetSpec::whole(), f, opt);
  CHECK(r.passed);
  for (const auto& row : r.rows) CHECK(row.bounded);
  CHECK_FALSE(r.control.bounded);
  CHECK(r.control.tail_slope > 0.05);
  // the control has to sit above the pressure
  CHECK_THROWS_AS(verify_lemma33_bound(sft, SubsetSpec::whole(), f, opt, {0.05}, 0.05), Error);
}

TEST_CASE("randomized structural properties") {
  PropertyOptions opt;
  opt.N = 6;
  opt.L = 16;
  opt.capacity_window = NRange{6, 20};
  const auto r = property_suite(2718, 4, opt);
  CHECK(r.trials.size() == 4);
  CHECK(r.passed);
  for (const auto& t : r.trials) CHECK(t.checks.size() >= 8);
  const auto again = property_suite(2718, 4, opt);
  CHECK(again.trials.front().values == r.trials.front().values);
}

TEST_CASE("lifted measures live on the host alphabet") {
  const auto host = Subshift::full(3);
  const auto sub = restrict_to(host, TransitionRelation::from_pairs(3, {{1, 2}, {2, 1}, {2, 2}}));
  const auto mu = equilibrium_measure(LocallyConstantPotential::zero(sub.system));
  const auto lifted = lift_measure(mu, sub, host);
  CHECK(lifted.alphabet_size() == 3);
  CHECK(lifted.initial[0] == 0.0);
  CHECK(lifted.is_invariant());
}
