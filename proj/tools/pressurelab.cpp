#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pressurelab/commands.hpp"
#include "pressurelab/error.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pressurelab::Error(pressurelab::ErrorCode::InvalidArgument, "cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pressure estimators for subsets of subshifts of finite type"};
  app.set_version_flag("--version", std::string(pressurelab::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool svg = false;
  bool quiet = false;

  std::map<std::string, CLI::App*> groups;
  std::vector<std::pair<CLI::App*, std::string>> leaves;
  for (const auto& [cmd, sub] : pressurelab::known_commands()) {
    auto& group = groups[cmd];
    if (!group) {
      group = app.add_subcommand(cmd, cmd == "pressure" ? "Estimate a pressure" : "Run a numerical check");
      group->require_subcommand(1);
    }
    CLI::App* leaf = group->add_subcommand(sub);
    leaf->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    leaf->add_option("--out", out_dir, "Output directory");
    leaf->add_option("--seed", seed, "Override the config seed");
    leaf->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    leaf->add_flag("--svg", svg, "Also write an SVG plot of the trace");
    leaf->add_flag("--quiet", quiet, "Do not echo the report");
    leaves.emplace_back(leaf, cmd);
  }

  CLI11_PARSE(app, argc, argv);

  std::string command, subcommand;
  const CLI::App* chosen = nullptr;
  for (const auto& [leaf, cmd] : leaves)
    if (leaf->parsed()) {
      chosen = leaf;
      command = cmd;
      subcommand = leaf->get_name();
    }

  try {
    const auto config = pressurelab::parse_config(slurp(config_path));
    pressurelab::RunOptions options;
    options.out_dir = out_dir;
    if (chosen->count("--seed") > 0) options.seed = seed;
    options.threads = threads;
    options.svg = svg;
    const auto result = pressurelab::run(command, subcommand, config, options);
    if (!quiet) std::cout << result.report.dump(2) << "\n";
    for (const auto& f : result.files) std::cerr << "wrote " << f.string() << "\n";
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cout << pressurelab::error_record(e).dump(2) << "\n";
    return 1;
  }
}
