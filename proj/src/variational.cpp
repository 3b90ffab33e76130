#include "pressurelab/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pressurelab/capacity.hpp"
#include "pressurelab/error.hpp"
#include "pressurelab/measure.hpp"
#include "pressurelab/parallel.hpp"

namespace pressurelab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Random row-stochastic matrix supported exactly on the relation (flat Dirichlet rows).
Matrix random_stochastic(const TransitionRelation& rel, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(rel.alphabet_size());
  Matrix p(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (!rel.allowed(static_cast<int>(a), static_cast<int>(b))) continue;
      p(a, b) = -std::log(1.0 - uniform01(rng));
      row += p(a, b);
    }
    for (std::size_t b = 0; b < n && row > 0.0; ++b) p(a, b) /= row;
  }
  return p;
}

TransitionRelation relation_of(const SubsetSpec& k, const Subshift& host) {
  if (k.kind == SubsetSpec::Kind::whole) return host.relation();
  if (k.kind == SubsetSpec::Kind::sub_sft) return k.relation;
  throw Error(ErrorCode::InvalidArgument, "expected whole or sub_sft");
}

}  // namespace

MarkovMeasure lift_measure(const MarkovMeasure& mu, const SubSystem& sub, const Subshift& host) {
  const auto n = static_cast<std::size_t>(host.alphabet_size());
  Matrix p(n, n);
  std::vector<double> init(n, 0.0);
  std::vector<bool> inside(n, false);
  for (std::size_t i = 0; i < sub.to_host.size(); ++i) {
    inside[sub.to_host[i]] = true;
    init[sub.to_host[i]] = mu.initial[i];
    for (std::size_t j = 0; j < sub.to_host.size(); ++j) p(sub.to_host[i], sub.to_host[j]) = mu.transition(i, j);
  }
  // rows of uncharged symbols only need to be stochastic
  for (std::size_t a = 0; a < n; ++a) {
    if (inside[a]) continue;
    int out = 0;
    for (std::size_t b = 0; b < n; ++b) out += host.allowed(static_cast<int>(a), static_cast<int>(b));
    for (std::size_t b = 0; b < n; ++b)
      if (host.allowed(static_cast<int>(a), static_cast<int>(b))) p(a, b) = 1.0 / out;
  }
  return MarkovMeasure{std::move(p), std::move(init), mu.label};
}

VariationalReport verify_theoremA1(const Subshift& sft, const SubsetSpec& k,
                                   const LocallyConstantPotential& f,
                                   const VariationalOptions& options) {
  VariationalReport rep;
  rep.tolerance = options.tolerance;
  rep.p_bowen = bowen_pressure(sft, k, f, options.scale, options.N, options.L, options.search);
  std::mt19937_64 rng(splitmix64(options.seed));

  if (k.kind == SubsetSpec::Kind::whole || k.kind == SubsetSpec::Kind::sub_sft) {
    const SubSystem sub = restrict_to(sft, relation_of(k, sft));
    if (!sub.system.is_irreducible())
      throw Error(ErrorCode::ReducibleSystem, "K is reducible; pass one irreducible component");
    const auto g = restrict_potential(f, sub);
    rep.spectral_pressure = spectral_pressure(g).value;
    const MarkovMeasure eq = equilibrium_measure(g);
    rep.witness_measure = lift_measure(eq, sub, sft);
    rep.witness = "equilibrium";
    rep.equilibrium_pressure = exact_invariant_pressure(rep.witness_measure, f);
    rep.grid_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < options.grid_points; ++i) {
      // mixtures with the equilibrium chain probe both its neighbourhood and far away
      const Matrix q = random_stochastic(sub.system.relation(), rng);
      const double lambda = i % 2 == 0 ? uniform01(rng) : 0.02 * uniform01(rng);
      Matrix p = eq.transition;
      for (std::size_t a = 0; a < p.rows(); ++a)
        for (std::size_t b = 0; b < p.cols(); ++b) p(a, b) = (1.0 - lambda) * p(a, b) + lambda * q(a, b);
      const auto mu = lift_measure(MarkovMeasure::stationary(std::move(p)), sub, sft);
      rep.grid_max = std::max(rep.grid_max, exact_invariant_pressure(mu, f));
      ++rep.grid_points;
    }
    rep.measure_sup = std::max(rep.equilibrium_pressure, rep.grid_max);
    rep.equilibrium_is_argmax = rep.equilibrium_pressure >= rep.grid_max - 1e-12;
    rep.gap = rep.p_bowen.midpoint() - rep.measure_sup;
    rep.passed = std::abs(rep.gap) <= rep.tolerance && rep.equilibrium_is_argmax;
    return rep;
  }

  // non-compact K: measures with mu(K) = 1 give lower bounds only
  rep.compact = false;
  rep.equilibrium_pressure = kNaN;
  rep.spectral_pressure = kNaN;
  rep.equilibrium_is_argmax = false;
  rep.grid_max = -std::numeric_limits<double>::infinity();
  auto consider = [&](MarkovMeasure mu) {
    // ergodic mu charges K iff its stationary symbol frequencies satisfy K's constraint
    if (k.kind == SubsetSpec::Kind::frequency_level &&
        std::abs(mu.initial[static_cast<std::size_t>(k.symbol)] - k.alpha) > k.eta)
      return;
    const double p = exact_invariant_pressure(mu, f);
    ++rep.grid_points;
    if (p > rep.grid_max) {
      rep.grid_max = p;
      rep.witness_measure = std::move(mu);
    }
  };
  if (k.kind != SubsetSpec::Kind::frequency_level)
    throw Error(ErrorCode::InvalidArgument, "variational check supports whole, sub_sft and frequency_level");
  const int a = sft.alphabet_size();
  bool full = true;
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < a; ++y) full = full && sft.allowed(x, y);
  if (full && a >= 2) {
    for (int i = 0; i < options.grid_points; ++i) {
      const double p = std::clamp(k.alpha - k.eta + 2.0 * k.eta * i / std::max(1, options.grid_points - 1), 0.0, 1.0);
      std::vector<double> w(static_cast<std::size_t>(a), (1.0 - p) / (a - 1));
      w[static_cast<std::size_t>(k.symbol)] = p;
      double total = 0.0;
      for (double v : w) total += v;
      for (double& v : w) v /= total;
      consider(MarkovMeasure::bernoulli(w, "bernoulli"));
    }
  }
  for (int tries = 0; tries < 100 * options.grid_points && rep.grid_points < 2 * options.grid_points; ++tries)
    consider(MarkovMeasure::stationary(random_stochastic(sft.relation(), rng)));
  if (rep.grid_points == 0) throw Error(ErrorCode::EmptyTarget, "no sampled measure charges K");
  rep.witness = rep.witness_measure.label;
  rep.measure_sup = rep.grid_max;
  rep.gap = rep.p_bowen.midpoint() - rep.measure_sup;
  rep.passed = rep.measure_sup <= rep.p_bowen.s_high + rep.tolerance;
  return rep;
}

UnionReport verify_theoremA2_unions(const Subshift& sft,
                                    const std::vector<TransitionRelation>& components,
                                    const LocallyConstantPotential& f,
                                    const VariationalOptions& options) {
  if (components.empty()) throw Error(ErrorCode::InvalidArgument, "no components given");
  UnionReport rep;
  std::vector<SubsetSpec> members;
  rep.max_component = -std::numeric_limits<double>::infinity();
  for (const auto& rel : components) {
    members.push_back(SubsetSpec::sub_sft(rel));
    rep.components.push_back(bowen_pressure(sft, members.back(), f, options.scale, options.N, options.L, options.search));
    rep.max_component = std::max(rep.max_component, rep.components.back().midpoint());
  }
  rep.union_pressure = bowen_pressure(sft, SubsetSpec::finite_union(members), f, options.scale, options.N,
                                      options.L, options.search);
  rep.gap = rep.union_pressure.midpoint() - rep.max_component;
  rep.tolerance = 2.0 * options.tolerance;
  rep.passed = std::abs(rep.gap) <= rep.tolerance;
  return rep;
}

namespace {

FrostmanRow frostman_row(const Subshift& sft, const LocallyConstantPotential& f,
                         const MarkovMeasure& mu, double pressure, double beta, Scale scale, int L) {
  FrostmanRow row;
  row.beta = beta;
  row.s = pressure - beta;
  row.max_log_ratio = -std::numeric_limits<double>::infinity();
  for (int n = 1; n + scale.m <= L; ++n) {
    double best = -std::numeric_limits<double>::infinity();
    for_each_word(sft, n + scale.m, [&](const Word& w) {
      const double mass = cylinder_measure(mu, w);
      if (mass <= 0.0) return;
      best = std::max(best, std::log(mass) + n * row.s - sup_birkhoff_on_cylinder(f, w, n));
    });
    row.log_ratio_by_n.emplace_back(n, best);
    row.max_log_ratio = std::max(row.max_log_ratio, best);
  }
  std::vector<double> xs, ys;
  const std::size_t half = row.log_ratio_by_n.size() / 2;
  for (std::size_t i = half; i < row.log_ratio_by_n.size(); ++i) {
    xs.push_back(row.log_ratio_by_n[i].first);
    ys.push_back(row.log_ratio_by_n[i].second);
  }
  row.tail_slope = xs.size() >= 2 ? least_squares(xs, ys).first : 0.0;
  row.bounded = row.tail_slope <= 1e-3;
  return row;
}

}  // namespace

FrostmanReport verify_lemma33_bound(const Subshift& sft, const SubsetSpec& k,
                                    const LocallyConstantPotential& f,
                                    const VariationalOptions& options,
                                    const std::vector<double>& betas, double control_beta) {
  if (!(control_beta < 0.0)) throw Error(ErrorCode::InvalidArgument, "control beta must be negative");
  const SubSystem sub = restrict_to(sft, relation_of(k, sft));
  if (!sub.system.is_irreducible())
    throw Error(ErrorCode::ReducibleSystem, "K is reducible; pass one irreducible component");
  const auto mu = lift_measure(equilibrium_measure(restrict_potential(f, sub)), sub, sft);
  FrostmanReport rep;
  rep.pressure = bowen_pressure(sft, k, f, options.scale, options.N, options.L, options.search).midpoint();
  rep.passed = true;
  for (double beta : betas) {
    rep.rows.push_back(frostman_row(sft, f, mu, rep.pressure, beta, options.scale, options.L));
    rep.passed = rep.passed && rep.rows.back().bounded;
  }
  rep.control = frostman_row(sft, f, mu, rep.pressure, control_beta, options.scale, options.L);
  rep.passed = rep.passed && !rep.control.bounded;
  return rep;
}

namespace {

TransitionRelation random_irreducible(int a, std::mt19937_64& rng) {
  for (;;) {
    TransitionRelation rel(a);
    for (int x = 0; x < a; ++x)
      for (int y = 0; y < a; ++y)
        if (uniform01(rng) < 0.65) rel.set(x, y);
    const auto core = rel.recurrent_core();
    if (!rel.is_irreducible(&core)) continue;
    TransitionRelation clean(a);
    for (auto [x, y] : rel.pairs())
      if (core[x] && core[y]) clean.set(x, y);
    return clean;
  }
}

bool has_orbit(const TransitionRelation& rel) {
  const auto core = rel.recurrent_core();
  return std::find(core.begin(), core.end(), true) != core.end();
}

}  // namespace

PropertyReport property_suite(std::uint64_t seed, int trials, const PropertyOptions& options) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  PropertyReport rep;
  rep.seed = seed;
  rep.trials.resize(static_cast<std::size_t>(trials));
  parallel_for(rep.trials.size(), options.threads, [&](std::size_t t) {
    std::mt19937_64 rng(splitmix64(seed + t));
    PropertyTrial& trial = rep.trials[t];
    trial.index = static_cast<int>(t);
    const int a = 2 + static_cast<int>(rng() % 2);
    const Subshift host = Subshift::full(a);
    const TransitionRelation z2 = random_irreducible(a, rng);
    TransitionRelation z1 = z2;
    {
      const auto edges = z2.pairs();
      const auto drop = edges[rng() % edges.size()];
      z1.set(drop.first, drop.second, false);
      if (!has_orbit(z1)) z1 = z2;  // nested identical sets
    }
    const TransitionRelation z3 = random_irreducible(a, rng);
    const int depth = 1 + static_cast<int>(rng() % 2);
    const auto f = LocallyConstantPotential::from_function(host, depth, [&](std::span<const Symbol>) {
      return 2.0 * uniform01(rng) - 1.0;
    });
    const SubsetSpec s1 = SubsetSpec::sub_sft(z1), s2 = SubsetSpec::sub_sft(z2), s3 = SubsetSpec::sub_sft(z3);
    const SubsetSpec u23 = SubsetSpec::finite_union({s2, s3});
    const SubsetSpec u13 = SubsetSpec::finite_union({s1, s3});
    trial.description = "alphabet " + std::to_string(a) + ", depth " + std::to_string(depth) + ", Z1 " +
                        s1.describe() + ", Z2 " + s2.describe() + ", Z3 " + s3.describe();

    // (i) monotonicity under Z1 within Z2
    bool cap_mono = true, cap_union = true;
    for (int m = 1; m <= 2; ++m)
      for (int n : {2, 4, 6}) {
        const double p1 = log_partition_function(host, s1, f, n, Scale{m});
        const double p2 = log_partition_function(host, s2, f, n, Scale{m});
        const double p3 = log_partition_function(host, s3, f, n, Scale{m});
        const double pu = log_partition_function(host, u13, f, n, Scale{m});
        cap_mono = cap_mono && p1 <= p2 + 1e-12;
        cap_union = cap_union && pu <= std::log(std::exp(p1) + std::exp(p3)) + 1e-12 &&
                    pu >= std::max(p1, p3) - 1e-12;
      }
    trial.checks["capacity_monotone"] = cap_mono;
    trial.checks["capacity_union_subadditive"] = cap_union;

    bool cover_mono = true, weighted_mono = true, weighted_below = true;
    for (double s : {0.0, 0.5, 1.0}) {
      const double m1 = log_min_cover_value(host, s1, f, s, 2, Scale{1}, 8);
      const double m2 = log_min_cover_value(host, s2, f, s, 2, Scale{1}, 8);
      cover_mono = cover_mono && m1 <= m2 + 1e-12;
      const double w1 = log_weighted_cover_value(host, s1, f, s, 2, Scale{1}, 7);
      const double w2 = log_weighted_cover_value(host, s2, f, s, 2, Scale{1}, 7);
      const double c2 = log_min_cover_value(host, s2, f, s, 2, Scale{1}, 7);
      weighted_mono = weighted_mono && w1 <= w2 + 1e-9;
      weighted_below = weighted_below && w2 <= c2 + 1e-9;
    }
    trial.checks["cover_monotone"] = cover_mono;
    trial.checks["weighted_monotone"] = weighted_mono;
    trial.checks["weighted_below_unweighted"] = weighted_below;

    const Scale unit{1};
    const auto b1 = bowen_pressure(host, s1, f, unit, options.N, options.L);
    const auto b2 = bowen_pressure(host, s2, f, unit, options.N, options.L);
    const auto b3 = bowen_pressure(host, s3, f, unit, options.N, options.L);
    const auto bu = bowen_pressure(host, u23, f, unit, options.N, options.L);
    trial.values["bowen_z1"] = b1.midpoint();
    trial.values["bowen_z2"] = b2.midpoint();
    trial.values["bowen_z3"] = b3.midpoint();
    trial.values["bowen_union"] = bu.midpoint();
    trial.checks["bowen_monotone"] = b1.midpoint() <= b2.midpoint() + options.tolerance;

    // (ii) finite-union sup law
    trial.checks["bowen_union_sup"] =
        std::abs(bu.midpoint() - std::max(b2.midpoint(), b3.midpoint())) <= options.tolerance;

    // (iii) P_B <= P and equality on compact invariant sets
    const auto cap2 = capacity_pressure(host, s2, f, unit, options.capacity_window);
    const auto capu = capacity_pressure(host, u23, f, unit, options.capacity_window);
    const double spec2 = spectral_pressure(restrict_potential(f, restrict_to(host, z2))).value;
    trial.values["capacity_z2"] = cap2.slope;
    trial.values["capacity_union"] = capu.slope;
    trial.values["spectral_z2"] = spec2;
    trial.checks["bowen_below_capacity"] = b2.midpoint() <= cap2.slope + options.tolerance &&
                                           bu.midpoint() <= capu.slope + options.tolerance;
    trial.checks["bowen_equals_capacity"] = std::abs(b2.midpoint() - cap2.slope) <= options.tolerance;
    trial.checks["capacity_matches_spectral"] = std::abs(cap2.slope - spec2) <= options.tolerance;
  });
  rep.passed = true;
  for (const auto& t : rep.trials)
    for (const auto& [name, ok] : t.checks) {
      rep.failures.try_emplace(name, 0);
      if (!ok) {
        ++rep.failures[name];
        rep.passed = false;
      }
    }
  return rep;
}

}  // namespace pressurelab
