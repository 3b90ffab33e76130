#include "pressurelab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pressurelab/error.hpp"

namespace pressurelab {

using nlohmann::json;

namespace {

json pairs_json(const std::vector<std::pair<int, double>>& v) {
  json out = json::array();
  for (const auto& [n, x] : v) out.push_back({n, x});
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json bracket(double value, double lower, double upper, double tolerance) {
  return {{"value", value}, {"lower", lower}, {"upper", upper}, {"tolerance", tolerance}};
}

}  // namespace

json to_json(const PressureValue& v) {
  json j = bracket(v.value, v.lower, v.upper, v.tolerance);
  j["method"] = std::string(to_string(v.method));
  return j;
}

json to_json(const CriticalExponent& ce) {
  return {{"value", ce.midpoint()},
          {"s_low", ce.s_low},
          {"s_high", ce.s_high},
          {"tolerance", ce.width() / 2},
          {"threshold_value", ce.threshold_value},
          {"estimator", std::string(to_string(ce.estimator))},
          {"N", ce.N},
          {"L", ce.L},
          {"shift", ce.shift},
          {"raw_crossing", {{"s_low", ce.raw_low}, {"s_high", ce.raw_high}}},
          {"evaluations", ce.evaluations}};
}

json to_json(const CapacityEstimate& est) {
  return {{"value", est.slope},
          {"bracket", {std::min(est.slope, est.max_tail), std::max(est.slope, est.max_tail)}},
          {"slope", est.slope},
          {"intercept", est.intercept},
          {"max_tail", est.max_tail},
          {"fit_residual", est.fit_residual},
          {"m", est.scale.m},
          {"window", {est.window.first, est.window.last}},
          {"approximation_depth", est.approximation_depth},
          {"log_p", pairs_json(est.log_p)}};
}

json to_json(const MarkovMeasure& mu) {
  return {{"label", mu.label}, {"initial", mu.initial}, {"transition", matrix_json(mu.transition)}};
}

json to_json(const MonteCarloPressure& mc) {
  return {{"value", mc.mean},
          {"standard_error", mc.standard_error},
          {"samples", mc.samples},
          {"excluded", mc.excluded},
          {"per_sample", mc.per_sample}};
}

json to_json(const ChainReport& r) {
  return {{"centered", r.centered},
          {"weighted", r.weighted},
          {"unweighted", r.unweighted},
          {"log_centered", r.log_centered},
          {"log_weighted", r.log_weighted},
          {"log_unweighted", r.log_unweighted},
          {"relative_tolerance", 1e-9},
          {"lower_holds", r.lower_holds},
          {"upper_holds", r.upper_holds},
          {"precondition_holds", r.precondition_holds},
          {"s", r.s},
          {"delta", r.delta},
          {"N", r.N},
          {"L", r.L},
          {"m", r.m},
          {"coarse_m", r.coarse_m},
          {"passed", r.passed()}};
}

json to_json(const VariationalReport& r) {
  return {{"p_bowen", to_json(r.p_bowen)},
          {"measure_sup", r.measure_sup},
          {"witness", r.witness},
          {"witness_measure", to_json(r.witness_measure)},
          {"equilibrium_pressure", r.equilibrium_pressure},
          {"spectral_pressure", r.spectral_pressure},
          {"grid_max", r.grid_max},
          {"grid_points", r.grid_points},
          {"equilibrium_is_argmax", r.equilibrium_is_argmax},
          {"compact", r.compact},
          {"gap", r.gap},
          {"tolerance", r.tolerance},
          {"passed", r.passed}};
}

json to_json(const UnionReport& r) {
  json comps = json::array();
  for (const auto& c : r.components) comps.push_back(to_json(c));
  return {{"components", comps},
          {"union", to_json(r.union_pressure)},
          {"max_component", r.max_component},
          {"gap", r.gap},
          {"tolerance", r.tolerance},
          {"passed", r.passed}};
}

json to_json(const FrostmanRow& r) {
  return {{"beta", r.beta},
          {"s", r.s},
          {"log_C", r.max_log_ratio},
          {"tail_slope", r.tail_slope},
          {"slope_tolerance", 1e-3},
          {"bounded", r.bounded},
          {"log_ratio_by_n", pairs_json(r.log_ratio_by_n)}};
}

json to_json(const FrostmanReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  return {{"pressure", r.pressure}, {"rows", rows}, {"control", to_json(r.control)}, {"passed", r.passed}};
}

json to_json(const PropertyReport& r) {
  json trials = json::array();
  for (const auto& t : r.trials)
    trials.push_back({{"index", t.index}, {"description", t.description}, {"checks", t.checks}, {"values", t.values}});
  return {{"seed", r.seed}, {"trials", trials}, {"failures", r.failures}, {"passed", r.passed}};
}

json to_json(const SubsetSpec& z) {
  json j = {{"kind", std::string(to_string(z.kind))}};
  switch (z.kind) {
    case SubsetSpec::Kind::whole: break;
    case SubsetSpec::Kind::sub_sft: {
      json pairs = json::array();
      for (auto [a, b] : z.relation.pairs()) pairs.push_back({a, b});
      j["allowed"] = pairs;
      break;
    }
    case SubsetSpec::Kind::finite_union: {
      json members = json::array();
      for (const auto& m : z.members) members.push_back(to_json(m));
      j["members"] = members;
      break;
    }
    case SubsetSpec::Kind::frequency_level:
      j["symbol"] = z.symbol;
      j["alpha"] = z.alpha;
      j["eta"] = z.eta;
      break;
  }
  return j;
}

json to_json(const Subshift& sft) {
  json pairs = json::array();
  for (auto [a, b] : sft.relation().pairs()) pairs.push_back({a, b});
  return {{"alphabet_size", sft.alphabet_size()}, {"allowed", pairs}, {"label", sft.label()}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Trace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.header.size(); ++i) out += (i ? "," : "") + trace.header[i];
  out += '\n';
  for (const auto& row : trace.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += '\n';
  }
  return out;
}

std::string to_svg(const Trace& trace, const std::string& title) {
  const double w = 640, h = 400, pad = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : trace.rows) {
    const double x = row.at(static_cast<std::size_t>(trace.x_column));
    const double y = row.at(static_cast<std::size_t>(trace.y_column));
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    pts.emplace_back(x, y);
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << pad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  if (!pts.empty()) {
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts)
      os << pad + (x - x0) / (x1 - x0) * (w - 2 * pad) << ',' << h - pad - (y - y0) / (y1 - y0) * (h - 2 * pad) << ' ';
    os << "\"/>\n";
    const std::string& xl = trace.header.at(static_cast<std::size_t>(trace.x_column));
    const std::string& yl = trace.header.at(static_cast<std::size_t>(trace.y_column));
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" font-size=\"12\">" << xl << " [" << format_double(x0)
       << ", " << format_double(x1) << "]</text>\n";
    os << "<text x=\"8\" y=\"" << h / 2 << "\" font-size=\"12\">" << yl << "</text>\n";
    os << "<text x=\"8\" y=\"" << h / 2 + 16 << "\" font-size=\"10\">[" << format_double(y0) << ", "
       << format_double(y1) << "]</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorCode::InvalidArgument, "failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace pressurelab
