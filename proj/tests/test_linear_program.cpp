#include <doctest.h>

#include <random>

#include "pressurelab/error.hpp"
#include "pressurelab/linear_program.hpp"

using namespace pressurelab;

namespace {

// primal and dual feasibility plus equal objectives certify optimality
void certify(const std::vector<std::vector<int>>& sets, int elements, const std::vector<double>& costs,
             const FractionalCover& fc) {
  const double scale = 1.0 + *std::max_element(costs.begin(), costs.end());
  std::vector<double> load(static_cast<std::size_t>(elements), 0.0);
  double primal = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    CHECK(fc.weights[i] >= 0.0);
    primal += costs[i] * fc.weights[i];
    for (int e : sets[i]) load[static_cast<std::size_t>(e)] += fc.weights[i];
  }
  for (double l : load) CHECK(l >= 1.0 - 1e-9);
  double dual = 0.0;
  for (double y : fc.packing) {
    CHECK(y >= 0.0);
    dual += y;
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    double used = 0.0;
    for (int e : sets[i]) used += fc.packing[static_cast<std::size_t>(e)];
    CHECK(used <= costs[i] + 1e-9 * scale);
  }
  CHECK(primal == doctest::Approx(fc.value).epsilon(1e-9));
  CHECK(dual == doctest::Approx(fc.value).epsilon(1e-9));
}

}  // namespace

TEST_CASE("small packing LP") {
  Matrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 3;
  a(1, 1) = 1;
  const auto sol = maximize_packing(a, {4, 6}, {1, 1});
  CHECK(sol.value == doctest::Approx(2.8));
  CHECK(sol.primal[0] == doctest::Approx(1.6));
  CHECK(sol.primal[1] == doctest::Approx(1.2));
  CHECK(sol.dual[0] * 4 + sol.dual[1] * 6 == doctest::Approx(2.8));
}

TEST_CASE("odd cycle has a half-integral fractional cover") {
  const std::vector<std::vector<int>> sets{{0, 1}, {1, 2}, {0, 2}};
  const auto fc = solve_fractional_cover(sets, 3, {1, 1, 1});
  CHECK(fc.value == doctest::Approx(1.5));
  for (double w : fc.weights) CHECK(w == doctest::Approx(0.5));
  certify(sets, 3, {1, 1, 1}, fc);
}

TEST_CASE("random cover LPs carry optimality certificates") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> cost(0.01, 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int elements = 1 + static_cast<int>(rng() % 15);
    const int count = 1 + static_cast<int>(rng() % 20);
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(count));
    for (auto& s : sets)
      for (int e = 0; e < elements; ++e)
        if (rng() % 3 == 0) s.push_back(e);
    for (int e = 0; e < elements; ++e) sets[static_cast<std::size_t>(rng() % count)].push_back(e);
    for (auto& s : sets) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    std::vector<double> costs;
    for (int i = 0; i < count; ++i) costs.push_back(trial % 4 == 0 ? 1.0 : cost(rng));
    certify(sets, elements, costs, solve_fractional_cover(sets, elements, costs));
  }
}

TEST_CASE("laminar instances are integral") {
  // complete binary tree of depth 7 with depth-dependent costs: the LP value equals
  // the tree recursion min(cost, sum of children)
  const int depth = 7;
  std::vector<std::vector<int>> sets;
  std::vector<double> costs;
  std::vector<double> best;
  const int leaves = 1 << depth;
  for (int d = 0; d <= depth; ++d)
    for (int i = 0; i < (1 << d); ++i) {
      const int width = leaves >> d;
      std::vector<int> s;
      for (int e = i * width; e < (i + 1) * width; ++e) s.push_back(e);
      sets.push_back(s);
      costs.push_back(std::pow(0.55, d) * (1.0 + 0.1 * (i % 3)));
    }
  std::vector<double> value(costs.size());
  for (int d = depth; d >= 0; --d)
    for (int i = 0; i < (1 << d); ++i) {
      const std::size_t id = static_cast<std::size_t>((1 << d) - 1 + i);
      value[id] = costs[id];
      if (d < depth) {
        const std::size_t child = static_cast<std::size_t>((1 << (d + 1)) - 1 + 2 * i);
        value[id] = std::min(value[id], value[child] + value[child + 1]);
      }
    }
  const auto fc = solve_fractional_cover(sets, leaves, costs);
  CHECK(fc.value == doctest::Approx(value[0]).epsilon(1e-12));
  certify(sets, leaves, costs, fc);
}

TEST_CASE("cover LP input errors") {
  CHECK_THROWS_AS(solve_fractional_cover({{0}}, 2, {1.0}), Error);
  CHECK_THROWS_AS(solve_fractional_cover({{0}}, 1, {-1.0}), Error);
  CHECK_THROWS_AS(solve_fractional_cover({{0}}, 1, {1.0, 2.0}), Error);
  const auto empty = solve_fractional_cover({{}}, 0, {1.0});
  CHECK(empty.value == 0.0);
}
