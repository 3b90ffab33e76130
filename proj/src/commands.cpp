#include "pressurelab/commands.hpp"

#include <chrono>
#include <cmath>
#include <set>

#include "pressurelab/error.hpp"

namespace pressurelab {

using nlohmann::json;

const std::vector<std::pair<std::string, std::string>>& known_commands() {
  static const std::vector<std::pair<std::string, std::string>> all = {
      {"pressure", "exact"},  {"pressure", "capacity"}, {"pressure", "bowen"},
      {"pressure", "weighted"}, {"pressure", "measure"},  {"verify", "chain"},
      {"verify", "variational"}, {"verify", "unions"},   {"verify", "gibbs"},
      {"verify", "properties"}};
  return all;
}

namespace {

struct Outcome {
  json results = json::object();
  bool passed = true;
  Trace trace;
};

void allow_options(const ExperimentConfig& cfg, const std::set<std::string>& allowed) {
  std::vector<std::string> bad;
  for (const auto& [k, v] : cfg.options.items())
    if (!allowed.count(k)) bad.push_back("options." + k + ": not used by this command");
  if (!bad.empty()) throw SchemaError(bad);
}

SearchOptions search_options(const ExperimentConfig& cfg) {
  SearchOptions so;
  so.tol = cfg.tol;
  so.shift = option_or<int>(cfg, "shift", -1);
  const auto est = option_or<std::string>(cfg, "estimator", "window_shift");
  if (est == "window_shift") so.estimator = Estimator::window_shift;
  else if (est == "threshold") so.estimator = Estimator::threshold;
  else throw SchemaError({"options.estimator: expected window_shift or threshold"});
  return so;
}

std::vector<TransitionRelation> compact_components(const ExperimentConfig& cfg, const SubsetSpec& z) {
  switch (z.kind) {
    case SubsetSpec::Kind::whole: return {cfg.system.relation()};
    case SubsetSpec::Kind::sub_sft: return {z.relation};
    case SubsetSpec::Kind::finite_union: {
      std::vector<TransitionRelation> out;
      for (const auto& m : z.members) {
        auto sub = compact_components(cfg, m);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    case SubsetSpec::Kind::frequency_level: break;
  }
  throw Error(ErrorCode::InvalidArgument, "no closed-form pressure for frequency level sets");
}

Outcome pressure_exact(const ExperimentConfig& cfg) {
  allow_options(cfg, {});
  Outcome o;
  json comps = json::array();
  PressureValue best;
  bool first = true;
  for (const auto& rel : compact_components(cfg, cfg.subset)) {
    const SubSystem sub = restrict_to(cfg.system, rel);
    const PressureValue v = spectral_pressure(restrict_potential(cfg.potential, sub), std::min(cfg.tol, 1e-12));
    comps.push_back(to_json(v));
    if (first || v.value > best.value) best = v;
    first = false;
  }
  o.results["pressure"] = to_json(best);
  o.results["components"] = comps;
  return o;
}

Outcome pressure_capacity(const ExperimentConfig& cfg, unsigned threads) {
  allow_options(cfg, {});
  Outcome o;
  o.trace.header = {"m", "n", "log_p_n", "rate"};
  o.trace.x_column = 1;
  o.trace.y_column = 3;
  json per = json::array();
  for (int m : cfg.scales) {
    const auto est = capacity_pressure(cfg.system, cfg.subset, cfg.potential, Scale{m}, cfg.n_range, threads);
    per.push_back(to_json(est));
    for (const auto& [n, lp] : est.log_p) o.trace.rows.push_back({double(m), double(n), lp, lp / n});
  }
  o.results["scales"] = per;
  return o;
}

Outcome pressure_cover(const ExperimentConfig& cfg, bool weighted) {
  allow_options(cfg, {"shift", "estimator", "grid_points", "grid_halfwidth"});
  Outcome o;
  const SearchOptions so = search_options(cfg);
  const int grid = option_or<int>(cfg, "grid_points", 11);
  const double half = option_or<double>(cfg, "grid_halfwidth", 0.25);
  o.trace.header = {"m", "s", "log_cover_value"};
  o.trace.x_column = 1;
  o.trace.y_column = 2;
  json per = json::array();
  for (int m : cfg.scales) {
    const Scale sc{m};
    const auto ce = weighted ? weighted_pressure(cfg.system, cfg.subset, cfg.potential, sc, cfg.N, cfg.L, so)
                             : bowen_pressure(cfg.system, cfg.subset, cfg.potential, sc, cfg.N, cfg.L, so);
    json j = to_json(ce);
    j["m"] = m;
    per.push_back(j);
    for (int i = 0; i < grid; ++i) {
      const double s = ce.midpoint() - half + (grid > 1 ? 2.0 * half * i / (grid - 1) : 0.0);
      const double v = weighted ? log_weighted_cover_value(cfg.system, cfg.subset, cfg.potential, s, cfg.N, sc, cfg.L)
                                : log_min_cover_value(cfg.system, cfg.subset, cfg.potential, s, cfg.N, sc, cfg.L);
      o.trace.rows.push_back({double(m), s, v});
    }
  }
  o.results["scales"] = per;
  return o;
}

MarkovMeasure measure_from(const ExperimentConfig& cfg, const json& spec) {
  const std::string kind = spec.value("kind", "equilibrium");
  const auto n = static_cast<std::size_t>(cfg.system.alphabet_size());
  try {
    if (kind == "equilibrium") {
      const auto rels = compact_components(cfg, cfg.subset);
      if (rels.size() != 1) throw SchemaError({"options.measure: equilibrium needs whole or sub_sft"});
      const SubSystem sub = restrict_to(cfg.system, rels.front());
      return lift_measure(equilibrium_measure(restrict_potential(cfg.potential, sub)), sub, cfg.system);
    }
    if (kind == "bernoulli") return MarkovMeasure::bernoulli(spec.at("p").get<std::vector<double>>());
    if (kind == "point_mass") return MarkovMeasure::point_mass(int(n), spec.value("symbol", Symbol{0}));
    if (kind == "markov") {
      const auto rows = spec.at("transition").get<std::vector<std::vector<double>>>();
      Matrix p(rows.size(), rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw SchemaError({"options.measure.transition: not square"});
        for (std::size_t j = 0; j < rows.size(); ++j) p(i, j) = rows[i][j];
      }
      if (spec.contains("initial"))
        return MarkovMeasure{std::move(p), spec.at("initial").get<std::vector<double>>(), "markov"};
      return MarkovMeasure::stationary(std::move(p));
    }
  } catch (const json::exception& e) {
    throw SchemaError({std::string("options.measure: ") + e.what()});
  }
  throw SchemaError({"options.measure.kind: expected equilibrium, bernoulli, markov or point_mass"});
}

Outcome pressure_measure(const ExperimentConfig& cfg, std::uint64_t seed, unsigned threads) {
  allow_options(cfg, {"measure", "samples", "n_max", "tolerance"});
  Outcome o;
  const MarkovMeasure mu = measure_from(cfg, cfg.options.value("measure", json::object()));
  validate_measure(mu, cfg.system);
  const int samples = option_or<int>(cfg, "samples", 100);
  const double tolerance = option_or<double>(cfg, "tolerance", 5e-2);
  const NRange window = cfg.options.contains("n_max") ? NRange{1, option_or<int>(cfg, "n_max", 2000)} : cfg.n_range;
  json exact = nullptr;
  std::string note;
  try {
    exact = exact_invariant_pressure(mu, cfg.potential);
  } catch (const Error& e) {
    note = e.what();
  }
  o.results["measure"] = to_json(mu);
  o.results["exact"] = exact;
  if (!note.empty()) o.results["exact_note"] = note;
  o.trace.header = {"m", "n", "mean_local_pressure"};
  o.trace.x_column = 1;
  o.trace.y_column = 2;
  json per = json::array();
  for (int m : cfg.scales) {
    const auto mc = measure_pressure_mc(mu, cfg.potential, Scale{m}, window, samples, seed, threads);
    json j = to_json(mc);
    j["m"] = m;
    j["window"] = {window.first, window.last};
    j["tolerance"] = tolerance;
    if (!exact.is_null()) {
      j["gap"] = mc.mean - exact.get<double>();
      j["passed"] = std::abs(mc.mean - exact.get<double>()) <= tolerance;
      o.passed = o.passed && j["passed"].get<bool>();
    }
    per.push_back(j);
    for (const auto& [n, v] : mc.mean_trace) o.trace.rows.push_back({double(m), double(n), v});
  }
  o.results["scales"] = per;
  return o;
}

Outcome verify_chain(const ExperimentConfig& cfg) {
  allow_options(cfg, {"s", "delta"});
  Outcome o;
  if (!cfg.options.contains("s")) throw SchemaError({"options.s: required for verify chain"});
  const double s = option_or<double>(cfg, "s", 0.0);
  const double delta = option_or<double>(cfg, "delta", 0.5);
  o.trace.header = {"m", "log_centered", "log_weighted", "log_unweighted"};
  json per = json::array();
  for (int m : cfg.scales) {
    const auto r = check_chain(cfg.system, cfg.subset, cfg.potential, s, delta, cfg.N, Scale{m}, cfg.L);
    per.push_back(to_json(r));
    o.passed = o.passed && r.passed();
    o.trace.rows.push_back({double(m), r.log_centered, r.log_weighted, r.log_unweighted});
  }
  o.results["scales"] = per;
  return o;
}

VariationalOptions variational_options(const ExperimentConfig& cfg, int m, std::uint64_t seed, double tol) {
  VariationalOptions vo;
  vo.scale = Scale{m};
  vo.N = cfg.N;
  vo.L = cfg.L;
  vo.search = search_options(cfg);
  vo.grid_points = option_or<int>(cfg, "grid_points", 200);
  vo.seed = seed;
  vo.tolerance = option_or<double>(cfg, "tolerance", tol);
  return vo;
}

Outcome verify_variational(const ExperimentConfig& cfg, std::uint64_t seed) {
  allow_options(cfg, {"grid_points", "tolerance", "shift", "estimator"});
  Outcome o;
  json per = json::array();
  for (int m : cfg.scales) {
    const auto r = verify_theoremA1(cfg.system, cfg.subset, cfg.potential, variational_options(cfg, m, seed, 1e-2));
    json j = to_json(r);
    j["m"] = m;
    per.push_back(j);
    o.passed = o.passed && r.passed;
  }
  o.results["scales"] = per;
  return o;
}

Outcome verify_unions(const ExperimentConfig& cfg, std::uint64_t seed) {
  allow_options(cfg, {"components", "tolerance", "shift", "estimator"});
  Outcome o;
  std::vector<TransitionRelation> comps;
  if (cfg.options.contains("components")) {
    std::vector<std::string> violations;
    const json& list = cfg.options.at("components");
    if (!list.is_array() || list.empty()) throw SchemaError({"options.components: expected a nonempty list"});
    for (std::size_t i = 0; i < list.size(); ++i)
      comps.push_back(parse_relation(list[i], cfg.system.alphabet_size(),
                                     "options.components[" + std::to_string(i) + "]", violations));
    if (!violations.empty()) throw SchemaError(violations);
  } else {
    comps = compact_components(cfg, cfg.subset);
  }
  json per = json::array();
  for (int m : cfg.scales) {
    const auto r = verify_theoremA2_unions(cfg.system, comps, cfg.potential, variational_options(cfg, m, seed, 5e-3));
    json j = to_json(r);
    j["m"] = m;
    per.push_back(j);
    o.passed = o.passed && r.passed;
  }
  o.results["scales"] = per;
  return o;
}

Outcome verify_gibbs(const ExperimentConfig& cfg, std::uint64_t seed) {
  allow_options(cfg, {"betas", "control_beta", "shift", "estimator"});
  Outcome o;
  const auto betas = option_or<std::vector<double>>(cfg, "betas", {0.05, 0.1});
  const double control = option_or<double>(cfg, "control_beta", -0.1);
  o.trace.header = {"m", "beta", "n", "log_ratio"};
  o.trace.x_column = 2;
  o.trace.y_column = 3;
  json per = json::array();
  for (int m : cfg.scales) {
    const auto r = verify_lemma33_bound(cfg.system, cfg.subset, cfg.potential, variational_options(cfg, m, seed, 1e-2),
                                        betas, control);
    json j = to_json(r);
    j["m"] = m;
    per.push_back(j);
    o.passed = o.passed && r.passed;
    auto rows = r.rows;
    rows.push_back(r.control);
    for (const auto& row : rows)
      for (const auto& [n, v] : row.log_ratio_by_n) o.trace.rows.push_back({double(m), row.beta, double(n), v});
  }
  o.results["scales"] = per;
  return o;
}

Outcome verify_properties(const ExperimentConfig& cfg, std::uint64_t seed, unsigned threads) {
  allow_options(cfg, {"trials", "tolerance"});
  Outcome o;
  PropertyOptions po;
  po.N = cfg.N;
  po.L = cfg.L;
  po.capacity_window = cfg.n_range;
  po.tolerance = option_or<double>(cfg, "tolerance", 2e-2);
  po.threads = threads;
  const auto r = property_suite(seed, option_or<int>(cfg, "trials", 20), po);
  o.results = to_json(r);
  o.passed = r.passed;
  o.trace.header = {"trial", "checks_passed", "checks_total"};
  for (const auto& t : r.trials) {
    int ok = 0;
    for (const auto& [name, pass] : t.checks) ok += pass;
    o.trace.rows.push_back({double(t.index), double(ok), double(t.checks.size())});
  }
  return o;
}

}  // namespace

RunResult run(const std::string& command, const std::string& subcommand, const ExperimentConfig& config,
              const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  bool known = false;
  for (const auto& [c, s] : known_commands()) known = known || (c == command && s == subcommand);
  if (!known) throw Error(ErrorCode::InvalidArgument, "unknown command '" + command + " " + subcommand + "'");
  validate_for(config, command, subcommand);
  const std::uint64_t seed = options.seed.value_or(config.seed);
  const unsigned threads = std::max(1u, options.threads);

  Outcome o;
  const std::string full = command + " " + subcommand;
  if (full == "pressure exact") o = pressure_exact(config);
  else if (full == "pressure capacity") o = pressure_capacity(config, threads);
  else if (full == "pressure bowen") o = pressure_cover(config, false);
  else if (full == "pressure weighted") o = pressure_cover(config, true);
  else if (full == "pressure measure") o = pressure_measure(config, seed, threads);
  else if (full == "verify chain") o = verify_chain(config);
  else if (full == "verify variational") o = verify_variational(config, seed);
  else if (full == "verify unions") o = verify_unions(config, seed);
  else if (full == "verify gibbs") o = verify_gibbs(config, seed);
  else o = verify_properties(config, seed, threads);

  RunResult res;
  res.report = {{"command", full},
                {"version", kVersion},
                {"inputs", {{"config", config.source}, {"seed", seed},
                            {"system", to_json(config.system)}, {"subset", to_json(config.subset)}}},
                {"results", o.results},
                {"passed", o.passed}};
  res.trace = std::move(o.trace);
  res.exit_code = o.passed ? 0 : 2;
  res.report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (options.write_files) {
    std::filesystem::create_directories(options.out_dir);
    const std::string stem = command + "-" + subcommand;
    const auto json_path = options.out_dir / (stem + ".json");
    write_atomic(json_path, res.report.dump(2) + "\n");
    res.files.push_back(json_path);
    if (!res.trace.empty()) {
      const auto csv_path = options.out_dir / (stem + ".csv");
      write_atomic(csv_path, to_csv(res.trace));
      res.files.push_back(csv_path);
      if (options.svg) {
        const auto svg_path = options.out_dir / (stem + ".svg");
        write_atomic(svg_path, to_svg(res.trace, full));
        res.files.push_back(svg_path);
      }
    }
  }
  return res;
}

json error_record(const std::exception& e) {
  json rec = {{"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    rec["code"] = std::string(to_string(err->code()));
    if (const auto* se = dynamic_cast<const SchemaError*>(&e)) rec["violations"] = se->violations();
  } else {
    rec["code"] = "InternalError";
  }
  return {{"error", rec}};
}

json without_wall_time(json report) {
  report.erase("wall_time_s");
  return report;
}

}  // namespace pressurelab
