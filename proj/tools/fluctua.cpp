#include "fluctua/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

// Exit codes: 0 success, 2 parameter/usage error, 3 numerical abort.
constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

std::vector<fluctua::SweepAxis> parse_axes(const std::vector<std::string>& specs) {
  std::vector<fluctua::SweepAxis> axes;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
      throw std::invalid_argument("bad --axis spec (expected name=v1,v2,...): " + spec);
    fluctua::SweepAxis axis;
    axis.name = spec.substr(0, eq);
    std::stringstream values(spec.substr(eq + 1));
    std::string item;
    while (std::getline(values, item, ',')) {
      if (item.empty()) throw std::invalid_argument("bad --axis value in: " + spec);
      axis.values.push_back(std::stod(item));
    }
    if (axis.values.empty()) throw std::invalid_argument("empty --axis: " + spec);
    axes.push_back(std::move(axis));
  }
  return axes;
}

int cmd_run(const std::string& config_path) {
  const auto config = fluctua::config_from_file(config_path);
  const auto summary = fluctua::run_scenario(config);
  std::cout << summary.to_json().dump() << "\n";
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& axis_specs,
              int workers) {
  const auto config = fluctua::config_from_file(config_path);
  const auto axes = parse_axes(axis_specs);
  const auto result = fluctua::sweep(config, axes, workers);
  fluctua::write_sweep_csv(config, result, config.output);
  for (const auto& row : result.rows) {
    if (row.status == 0) continue;
    std::cerr << "point";
    for (const auto& [key, value] : row.point) std::cerr << " " << key << "=" << value;
    std::cerr << " failed (" << row.status << "): " << row.error << "\n";
  }
  return result.any_failed ? 1 : kOk;
}

int cmd_check(const std::string& suite) {
  const auto checks = fluctua::run_checks(suite);
  bool all_pass = true;
  for (const auto& check : checks) {
    std::printf("[%s] %-55s margin=%+.3e\n", check.pass ? "PASS" : "FAIL", check.name.c_str(),
                check.margin);
    all_pass = all_pass && check.pass;
  }
  std::printf("%zu checks, %s\n", checks.size(), all_pass ? "all passed" : "FAILURES PRESENT");
  return all_pass ? kOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fluctua: Gaussian quasi-free dynamics and mesoscopic entanglement scenarios"};
  app.require_subcommand(1);

  std::string config_path;
  std::string suite;
  std::vector<std::string> axis_specs;
  int workers = 1;

  auto* run = app.add_subcommand("run", "run one scenario from a JSON config");
  run->add_option("--config", config_path, "scenario config (JSON)")->required();

  auto* sw = app.add_subcommand("sweep", "run a parameter sweep over one or more axes");
  sw->add_option("--config", config_path, "scenario config template (JSON)")->required();
  sw->add_option("--axis", axis_specs, "axis spec name=v1,v2,... (repeatable)")->required();
  sw->add_option("--workers", workers, "worker pool size")->default_val(1);

  auto* check = app.add_subcommand("check", "run a self-check suite");
  check->add_option("suite", suite, "invariants | oracles | all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (sw->parsed()) return cmd_sweep(config_path, axis_specs, workers);
    if (check->parsed()) {
      if (suite.empty()) {
        std::cerr << "usage: fluctua check <invariants|oracles|all>\n";
        return kUsage;
      }
      return cmd_check(suite);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
