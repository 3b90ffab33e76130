#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pressurelab/caratheodory.hpp"
#include "pressurelab/capacity.hpp"
#include "pressurelab/measure.hpp"
#include "pressurelab/transfer.hpp"
#include "pressurelab/variational.hpp"

namespace pressurelab {

nlohmann::json to_json(const PressureValue& v);
nlohmann::json to_json(const CriticalExponent& ce);
nlohmann::json to_json(const CapacityEstimate& est);
nlohmann::json to_json(const MarkovMeasure& mu);
nlohmann::json to_json(const MonteCarloPressure& mc);
nlohmann::json to_json(const ChainReport& r);
nlohmann::json to_json(const VariationalReport& r);
nlohmann::json to_json(const UnionReport& r);
nlohmann::json to_json(const FrostmanRow& r);
nlohmann::json to_json(const FrostmanReport& r);
nlohmann::json to_json(const PropertyReport& r);
nlohmann::json to_json(const SubsetSpec& z);
nlohmann::json to_json(const Subshift& sft);

/// Tabular trace: header row plus numeric rows.
struct Trace {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int x_column = 0;  // columns used by the optional SVG plot
  int y_column = 1;

  bool empty() const { return rows.empty(); }
};

/// CSV with a header row, LF line endings, '.' decimals and round-trip precision.
std::string to_csv(const Trace& trace);
/// Minimal static line plot of one column against another.
std::string to_svg(const Trace& trace, const std::string& title);
/// Shortest decimal form that reads back to the same double, independent of locale.
std::string format_double(double v);

/// Writes through a temporary sibling file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace pressurelab
