#pragma once

#include "fluctua/chains.hpp"
#include "fluctua/meanfield.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace fluctua {

enum class Scenario {
  SpinDissipative,
  OscillatorDissipative,
  MeanfieldMacro,
  MeanfieldFluct,
  CltCheck,
};

Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario s);

struct GridSpec {
  double t_max = 10.0;
  double dt = 0.01;
  int sample_stride = 1;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::SpinDissipative;
  std::map<std::string, double> params;
  GridSpec grid;
  std::string output;  // CSV path; empty suppresses the file
};

ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig config_from_file(const std::string& path);

struct ScenarioSummary {
  std::string scenario;
  std::map<std::string, double> params;  // resolved, defaults included
  double max_E = 0.0;
  double t_max_E = 0.0;
  double E_final = 0.0;

  nlohmann::ordered_json to_json() const;
};

/// Runs one scenario: writes the CSV (unless output is empty) and returns the
/// summary record. Parameter violations throw std::invalid_argument;
/// numerical aborts throw std::runtime_error.
ScenarioSummary run_scenario(const ScenarioConfig& config);

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepRow {
  std::map<std::string, double> point;
  ScenarioSummary summary;
  int status = 0;  // 0 ok, 2 parameter error, 3 numerical abort
  std::string error;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<SweepRow> rows;  // grid order, row-major over the axes
  bool any_failed = false;
};

/// Evaluates every grid point of the axes (cartesian product, row-major) on a
/// bounded worker pool. Row order is the grid order regardless of workers.
SweepResult sweep(const ScenarioConfig& base, const std::vector<SweepAxis>& axes, int workers);

void write_sweep_csv(const ScenarioConfig& base, const SweepResult& result,
                     const std::string& path);

struct CheckResult {
  std::string name;
  double margin = 0.0;  // >= 0 means pass
  bool pass = false;
};

/// suite: "invariants", "oracles" or "all".
std::vector<CheckResult> run_checks(const std::string& suite);

struct CurvePoint {
  double t = 0.0;
  double E = 0.0;
  double nu1 = 0.0;
  double nu2 = 0.0;
};

std::vector<CurvePoint> spin_negativity_curve(double beta, double eps, double gamma, double J0,
                                              double squeeze_r, const GridSpec& grid);
std::vector<CurvePoint> oscillator_negativity_curve(double beta, double eps, double lambda,
                                                    double squeeze_r, const GridSpec& grid);

/// Shortest round-trip decimal representation (deterministic, locale-free).
std::string csv_num(double v);

/// 17-significant-digit representation for trajectory exports.
std::string csv_num17(double v);

/// Row-major CSV fixture format for matrices (one row per line).
void write_matrix_csv(const Mat& m, const std::string& path);
Mat read_matrix_csv(const std::string& path);

}  // namespace fluctua
