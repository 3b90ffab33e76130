#include "pressurelab/config.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pressurelab {

using nlohmann::json;

namespace {

bool is_int(const json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

int read_int(const json& obj, const std::string& key, const std::string& path, int fallback, int lo,
             std::vector<std::string>& violations) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!is_int(v)) {
    violations.push_back(path + key + ": expected an integer");
    return fallback;
  }
  const auto x = v.get<long long>();
  if (x < lo || x > 1000000) {
    violations.push_back(path + key + ": must be >= " + std::to_string(lo));
    return fallback;
  }
  return static_cast<int>(x);
}

double read_double(const json& obj, const std::string& key, const std::string& path, double fallback,
                   std::vector<std::string>& violations) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    violations.push_back(path + key + ": expected a number");
    return fallback;
  }
  return v.get<double>();
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path,
                std::vector<std::string>& violations) {
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) violations.push_back(path + k + ": unknown field");
}

}  // namespace

TransitionRelation parse_relation(const json& node, int alphabet_size, const std::string& path,
                                  std::vector<std::string>& violations) {
  TransitionRelation rel(alphabet_size);
  if (!node.is_array()) {
    violations.push_back(path + ": expected a list of pairs");
    return rel;
  }
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& p = node[i];
    const std::string where = path + "[" + std::to_string(i) + "]";
    int a = -1, b = -1;
    if (p.is_array() && p.size() == 2 && is_int(p[0]) && is_int(p[1])) {
      a = p[0].get<int>();
      b = p[1].get<int>();
    } else if (p.is_string() && p.get<std::string>().size() == 2) {
      try {
        const Word w = word_from_string(p.get<std::string>());
        a = w[0];
        b = w[1];
      } catch (const Error&) {
      }
    }
    if (a < 0 || b < 0 || a >= alphabet_size || b >= alphabet_size) {
      violations.push_back(where + ": expected a pair of symbols below the alphabet size");
      continue;
    }
    rel.set(a, b);
  }
  return rel;
}

SubsetSpec parse_subset(const json& node, int alphabet_size, const std::string& path,
                        std::vector<std::string>& violations) {
  if (!node.is_object() || !node.contains("kind") || !node.at("kind").is_string()) {
    violations.push_back(path + ": expected an object with a string 'kind'");
    return SubsetSpec::whole();
  }
  const std::string kind = node.at("kind").get<std::string>();
  const std::string pre = path + ".";
  if (kind == "whole") {
    check_keys(node, {"kind"}, pre, violations);
    return SubsetSpec::whole();
  }
  if (kind == "sub_sft") {
    check_keys(node, {"kind", "allowed"}, pre, violations);
    if (!node.contains("allowed")) {
      violations.push_back(pre + "allowed: required for sub_sft");
      return SubsetSpec::whole();
    }
    return SubsetSpec::sub_sft(parse_relation(node.at("allowed"), alphabet_size, pre + "allowed", violations));
  }
  if (kind == "finite_union") {
    check_keys(node, {"kind", "members"}, pre, violations);
    if (!node.contains("members") || !node.at("members").is_array() || node.at("members").empty()) {
      violations.push_back(pre + "members: expected a nonempty list");
      return SubsetSpec::whole();
    }
    std::vector<SubsetSpec> members;
    for (std::size_t i = 0; i < node.at("members").size(); ++i)
      members.push_back(parse_subset(node.at("members")[i], alphabet_size,
                                     pre + "members[" + std::to_string(i) + "]", violations));
    return SubsetSpec::finite_union(std::move(members));
  }
  if (kind == "frequency_level") {
    check_keys(node, {"kind", "symbol", "alpha", "eta"}, pre, violations);
    const int symbol = read_int(node, "symbol", pre, 0, 0, violations);
    const double alpha = read_double(node, "alpha", pre, 0.5, violations);
    const double eta = read_double(node, "eta", pre, 0.0, violations);
    if (symbol >= alphabet_size) violations.push_back(pre + "symbol: outside the alphabet");
    if (!(alpha >= 0.0 && alpha <= 1.0)) violations.push_back(pre + "alpha: must lie in [0, 1]");
    if (!(eta > 0.0)) violations.push_back(pre + "eta: must be > 0");
    return SubsetSpec::frequency_level(symbol, alpha, eta);
  }
  violations.push_back(pre + "kind: unknown subset kind '" + kind + "'");
  return SubsetSpec::whole();
}

ExperimentConfig parse_config_json(const json& doc) {
  std::vector<std::string> violations;
  if (!doc.is_object()) throw SchemaError({"$: expected an object"});
  check_keys(doc, {"system", "potential", "subset", "scales", "n_range", "N", "L", "tol", "seed", "options"},
             "", violations);

  // system
  int alphabet = 2;
  TransitionRelation relation(2, true);
  std::string label;
  if (!doc.contains("system") || !doc.at("system").is_object()) {
    violations.push_back("system: required object");
  } else {
    const json& sys = doc.at("system");
    check_keys(sys, {"alphabet_size", "allowed", "label", "preset"}, "system.", violations);
    if (sys.contains("preset")) {
      const std::string preset = sys.at("preset").is_string() ? sys.at("preset").get<std::string>() : "";
      if (preset == "golden_mean") {
        alphabet = 2;
        relation = Subshift::golden_mean().relation();
        label = "golden-mean";
      } else if (preset == "fixed_point") {
        alphabet = 1;
        relation = Subshift::fixed_point().relation();
        label = "fixed-point";
      } else if (preset == "full") {
        alphabet = read_int(sys, "alphabet_size", "system.", 2, 1, violations);
        relation = TransitionRelation(std::min(alphabet, 36), true);
        label = "full-" + std::to_string(alphabet) + "-shift";
      } else {
        violations.push_back("system.preset: expected full, golden_mean or fixed_point");
      }
    } else {
      alphabet = read_int(sys, "alphabet_size", "system.", 0, 1, violations);
      if (!sys.contains("alphabet_size")) violations.push_back("system.alphabet_size: required");
      if (alphabet > 36) violations.push_back("system.alphabet_size: at most 36 symbols");
      alphabet = std::clamp(alphabet, 1, 36);
      if (sys.contains("allowed")) {
        relation = parse_relation(sys.at("allowed"), alphabet, "system.allowed", violations);
        label = "sft";
      } else {
        relation = TransitionRelation(alphabet, true);
        label = "full-" + std::to_string(alphabet) + "-shift";
      }
    }
    if (sys.contains("label")) {
      if (sys.at("label").is_string()) label = sys.at("label").get<std::string>();
      else violations.push_back("system.label: expected a string");
    }
  }
  std::optional<Subshift> system;
  if (violations.empty()) {
    try {
      system.emplace(relation, label);
    } catch (const Error& e) {
      violations.push_back(std::string("system.allowed: ") + e.what());
    }
  }

  // subset
  SubsetSpec subset;
  if (doc.contains("subset")) subset = parse_subset(doc.at("subset"), alphabet, "subset", violations);
  if (system && violations.empty()) {
    try {
      subset.validate(*system);
    } catch (const Error& e) {
      violations.push_back(std::string("subset: ") + e.what());
    }
  }

  // scalars
  ExperimentConfig cfg;
  if (doc.contains("scales")) {
    const json& sc = doc.at("scales");
    if (!sc.is_array() || sc.empty()) {
      violations.push_back("scales: expected a nonempty list of integers");
    } else {
      cfg.scales.clear();
      for (std::size_t i = 0; i < sc.size(); ++i) {
        if (!is_int(sc[i]) || sc[i].get<long long>() < 0 || sc[i].get<long long>() > 60)
          violations.push_back("scales[" + std::to_string(i) + "]: expected an integer in [0, 60]");
        else
          cfg.scales.push_back(sc[i].get<int>());
      }
    }
  }
  if (doc.contains("n_range")) {
    const json& nr = doc.at("n_range");
    if (!nr.is_array() || nr.size() != 2 || !is_int(nr[0]) || !is_int(nr[1]) || nr[0].get<long long>() < 1 ||
        nr[1].get<long long>() < nr[0].get<long long>() || nr[1].get<long long>() > 1000000)
      violations.push_back("n_range: expected [first, last] with 1 <= first <= last");
    else
      cfg.n_range = NRange{nr[0].get<int>(), nr[1].get<int>()};
  }
  cfg.N = read_int(doc, "N", "", 4, 1, violations);
  cfg.L = read_int(doc, "L", "", 16, 1, violations);
  cfg.tol = read_double(doc, "tol", "", 1e-4, violations);
  if (!(cfg.tol > 0.0)) violations.push_back("tol: must be > 0");
  if (doc.contains("seed")) {
    if (doc.at("seed").is_number_unsigned() || (doc.at("seed").is_number_integer() && doc.at("seed").get<long long>() >= 0))
      cfg.seed = doc.at("seed").get<std::uint64_t>();
    else
      violations.push_back("seed: expected a nonnegative integer");
  }
  if (doc.contains("options")) {
    if (doc.at("options").is_object()) cfg.options = doc.at("options");
    else violations.push_back("options: expected an object");
  }

  // potential
  if (doc.contains("potential") && !doc.at("potential").is_object())
    violations.push_back("potential: expected an object");
  if (!violations.empty()) throw SchemaError(violations);

  cfg.system = *system;
  cfg.subset = subset;
  cfg.potential = LocallyConstantPotential::zero(cfg.system);
  if (doc.contains("potential")) {
    const json& pot = doc.at("potential");
    check_keys(pot, {"depth", "table", "constant"}, "potential.", violations);
    if (pot.contains("constant") && pot.contains("table"))
      violations.push_back("potential: give either constant or table");
    if (pot.contains("constant")) {
      const double c = read_double(pot, "constant", "potential.", 0.0, violations);
      if (violations.empty()) cfg.potential = LocallyConstantPotential::constant(cfg.system, c);
    } else if (pot.contains("table")) {
      const int depth = read_int(pot, "depth", "potential.", 1, 1, violations);
      const json& table = pot.at("table");
      std::map<Word, double> entries;
      if (!table.is_object()) violations.push_back("potential.table: expected an object of word -> number");
      else
        for (const auto& [key, value] : table.items()) {
          const std::string where = "potential.table." + key;
          if (!value.is_number()) {
            violations.push_back(where + ": expected a number");
            continue;
          }
          Word w;
          try {
            w = word_from_string(key);
          } catch (const Error&) {
            violations.push_back(where + ": key must use symbols 0-9a-z");
            continue;
          }
          if (static_cast<int>(w.size()) != depth) {
            violations.push_back(where + ": key length differs from depth " + std::to_string(depth));
            continue;
          }
          if (std::any_of(w.begin(), w.end(), [&](Symbol s) { return s >= alphabet; })) {
            violations.push_back(where + ": symbol outside the alphabet");
            continue;
          }
          entries[w] = value.get<double>();
        }
      if (!violations.empty()) throw SchemaError(violations);
      for (const auto& [w, v] : entries)
        if (!cfg.system.is_admissible(w))
          throw Error(ErrorCode::InadmissibleWord, "potential.table." + word_to_string(w) + " is not admissible");
      try {
        cfg.potential = LocallyConstantPotential::from_table(cfg.system, depth, entries);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::InadmissibleWord) throw;
        violations.push_back(std::string("potential.table: ") + e.what());
      }
    }
  }
  if (!violations.empty()) throw SchemaError(violations);
  cfg.source = doc;
  return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError({std::string("$: not valid JSON (") + e.what() + ")"});
  }
  return parse_config_json(doc);
}

void validate_for(const ExperimentConfig& config, const std::string& command,
                  const std::string& subcommand) {
  const std::string full = command + " " + subcommand;
  for (int m : config.scales) {
    if (full == "pressure capacity" && m < 1)
      throw Error(ErrorCode::ScaleTooCoarse, "scales: separated sets need m >= 1 (got " + std::to_string(m) + ")");
    if (full == "verify chain" && m < 3)
      throw Error(ErrorCode::ScaleTooCoarse, "scales: the chain needs m >= 3 (got " + std::to_string(m) + ")");
    if ((full == "pressure bowen" || full == "pressure weighted" || full == "verify variational" ||
         full == "verify unions" || full == "verify gibbs") &&
        config.L < config.N + m)
      throw Error(ErrorCode::DepthTooShallow, "L must be at least N + m");
  }
  if (full == "pressure capacity" && config.n_range.size() < 4)
    throw SchemaError({"n_range: capacity needs at least 4 horizons"});
  if ((full == "verify variational" && config.subset.kind == SubsetSpec::Kind::finite_union) ||
      (full == "verify gibbs" && !(config.subset.kind == SubsetSpec::Kind::whole ||
                                   config.subset.kind == SubsetSpec::Kind::sub_sft)))
    throw SchemaError({"subset.kind: " + full + " needs whole or sub_sft"});
}

}  // namespace pressurelab
