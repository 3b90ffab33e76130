#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pressurelab/commands.hpp"
#include "pressurelab/error.hpp"

using namespace pressurelab;
namespace fs = std::filesystem;

namespace {

const char* kTilted = R"({
  "system": {"preset": "full"},
  "potential": {"depth": 1, "table": {"0": 1.0, "1": 0.0}},
  "scales": [1], "n_range": [4, 16], "N": 4, "L": 12, "seed": 5,
  "options": %OPTIONS%
})";

ExperimentConfig tilted(const std::string& options = "{}") {
  std::string text = kTilted;
  text.replace(text.find("%OPTIONS%"), 9, options);
  return parse_config(text);
}

RunOptions quiet() {
  RunOptions o;
  o.write_files = false;
  return o;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pressurelab-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("every command runs and reports") {
  const std::vector<std::pair<std::string, std::string>> plan = {
      {"pressure exact", "{}"},
      {"pressure capacity", "{}"},
      {"pressure bowen", R"({"grid_points": 3})"},
      {"pressure weighted", R"({"grid_points": 3})"},
      {"pressure measure", R"({"samples": 8, "n_max": 200})"},
      {"verify variational", R"({"grid_points": 20})"},
      {"verify unions", R"({"components": [["00", "01", "10"], ["11"]]})"},
      {"verify gibbs", "{}"},
  };
  for (const auto& [cmd, opts] : plan) {
    CAPTURE(cmd);
    const auto sp = cmd.find(' ');
    const auto res = run(cmd.substr(0, sp), cmd.substr(sp + 1), tilted(opts), quiet());
    CHECK(res.exit_code == 0);
    CHECK(res.report.at("passed") == true);
    CHECK(res.report.at("command") == cmd);
    CHECK(res.report.at("version") == kVersion);
    CHECK(res.report.at("inputs").at("seed") == 5);
    CHECK(res.report.contains("wall_time_s"));
  }
  auto chain = parse_config(R"({"system": {"preset": "full"}, "potential": {"constant": 0}, "scales": [3],
                                "N": 5, "L": 12, "options": {"s": 0.7, "delta": 0.9}})");
  CHECK(run("verify", "chain", chain, quiet()).exit_code == 0);
  auto props = parse_config(R"({"system": {"preset": "full"}, "potential": {"constant": 0}, "N": 6, "L": 14,
                                "n_range": [6, 18], "options": {"trials": 2}})");
  CHECK(run("verify", "properties", props, quiet()).exit_code == 0);
}

TEST_CASE("exact pressure report carries its bracket") {
  const auto res = run("pressure", "exact", tilted(), quiet());
  const auto& p = res.report.at("results").at("pressure");
  CHECK(p.at("value").get<double>() == doctest::Approx(std::log(std::exp(1.0) + 1.0)));
  CHECK(p.at("lower").get<double>() <= p.at("value").get<double>());
  CHECK(p.at("upper").get<double>() >= p.at("value").get<double>());
  CHECK(p.at("method") == "spectral");
}

TEST_CASE("failed verification gives exit code 2") {
  const auto res = run("verify", "variational", tilted(R"({"grid_points": 20, "tolerance": 1e-9})"), quiet());
  CHECK(res.exit_code == 2);
  CHECK(res.report.at("passed") == false);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  for (const auto& [c, s, opts] : std::vector<std::tuple<std::string, std::string, std::string>>{
           {"pressure", "measure", R"({"samples": 12, "n_max": 300})"},
           {"verify", "variational", R"({"grid_points": 30})"},
           {"pressure", "bowen", "{}"}}) {
    RunOptions a = quiet(), b = quiet();
    a.threads = 1;
    b.threads = 3;
    const auto r1 = run(c, s, tilted(opts), a);
    const auto r2 = run(c, s, tilted(opts), b);
    CHECK(without_wall_time(r1.report).dump() == without_wall_time(r2.report).dump());
    CHECK(to_csv(r1.trace) == to_csv(r2.trace));
  }
  RunOptions seeded = quiet();
  seeded.seed = 77;
  const auto r3 = run("pressure", "measure", tilted(R"({"samples": 4, "n_max": 100})"), seeded);
  CHECK(r3.report.at("inputs").at("seed") == 77);
}

TEST_CASE("errors become machine-readable records") {
  CHECK_THROWS_AS(run("pressure", "nonsense", tilted(), quiet()), Error);
  CHECK_THROWS_AS(run("pressure", "exact", tilted(R"({"unexpected": 1})"), quiet()), SchemaError);
  try {
    parse_config(R"({"system": {}})");
  } catch (const std::exception& e) {
    const auto rec = error_record(e);
    CHECK(rec.at("error").at("code") == "SchemaError");
    CHECK(rec.at("error").at("violations").size() >= 1);
  }
  const auto rec = error_record(std::runtime_error("boom"));
  CHECK(rec.at("error").at("code") == "InternalError");
}

TEST_CASE("files are written with portable formatting") {
  const auto dir = scratch("files");
  RunOptions o;
  o.out_dir = dir;
  o.svg = true;
  const auto res = run("pressure", "capacity", tilted(), o);
  CHECK(res.files.size() == 3);
  const auto csv = slurp(dir / "pressure-capacity.csv");
  CHECK(csv.rfind("m,n,log_p_n,rate\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.back() == '\n');
  const auto report = nlohmann::json::parse(slurp(dir / "pressure-capacity.json"));
  CHECK(report.at("command") == "pressure capacity");
  CHECK(slurp(dir / "pressure-capacity.svg").find("<svg") != std::string::npos);
  for (const auto& entry : fs::directory_iterator(dir)) CHECK(entry.path().extension() != ".tmp");
}

TEST_CASE("command-line exit codes") {
  const auto dir = scratch("cli");
  const std::string exe = PRESSURELAB_CLI;
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  std::string good = kTilted;
  good.replace(good.find("%OPTIONS%"), 9, "{}");
  std::string failing = kTilted;
  failing.replace(failing.find("%OPTIONS%"), 9, R"({"grid_points": 20, "tolerance": 1e-9})");
  const auto good_path = write("good.json", good);
  const auto out = " --out " + dir.string();
  CHECK(shell(exe + " pressure exact --config " + good_path + out) == 0);
  CHECK(fs::exists(dir / "pressure-exact.json"));
  CHECK(shell(exe + " verify variational --config " + write("fail.json", failing) + out) == 2);
  CHECK(shell(exe + " pressure exact --config " + write("bad.json", R"({"system": 3})") + out) == 1);
  CHECK(shell(exe + " verify chain --config " + good_path + out) == 1);
  CHECK(shell(exe + " pressure exact") != 0);
  CHECK(shell(exe + " --version") == 0);
}
