#include "fluctua/scenario.hpp"

#include "fluctua/reference.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fluctua {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

std::string csv_num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_num17(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_matrix_csv(const Mat& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? "," : "") << csv_num17(m(i, j));
    out << "\n";
  }
}

Mat read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged matrix CSV: " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty matrix CSV: " + path);
  Mat m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "spin-dissipative") return Scenario::SpinDissipative;
  if (name == "oscillator-dissipative") return Scenario::OscillatorDissipative;
  if (name == "meanfield-macro") return Scenario::MeanfieldMacro;
  if (name == "meanfield-fluct") return Scenario::MeanfieldFluct;
  if (name == "clt-check") return Scenario::CltCheck;
  throw std::invalid_argument("unknown scenario: " + name);
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::SpinDissipative: return "spin-dissipative";
    case Scenario::OscillatorDissipative: return "oscillator-dissipative";
    case Scenario::MeanfieldMacro: return "meanfield-macro";
    case Scenario::MeanfieldFluct: return "meanfield-fluct";
    case Scenario::CltCheck: return "clt-check";
  }
  return "?";
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
  try {
    ScenarioConfig config;
    config.scenario = scenario_from_name(j.at("scenario").get<std::string>());
    if (j.contains("params"))
      for (const auto& [key, value] : j.at("params").items())
        config.params[key] = value.get<double>();
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.contains("t_max")) config.grid.t_max = g.at("t_max").get<double>();
      if (g.contains("dt")) config.grid.dt = g.at("dt").get<double>();
      if (g.contains("sample_stride"))
        config.grid.sample_stride = g.at("sample_stride").get<int>();
    }
    if (j.contains("output")) config.output = j.at("output").get<std::string>();
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad config: ") + e.what());
  }
}

ScenarioConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad config JSON in ") + path + ": " + e.what());
  }
  return config_from_json(j);
}

nlohmann::ordered_json ScenarioSummary::to_json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : params) j["params"][key] = value;
  j["max_E"] = max_E;
  j["t_max_E"] = t_max_E;
  j["E_final"] = E_final;
  return j;
}

namespace {

// Resolves the parameter map of a scenario: every required key present,
// defaults filled in, nothing unknown, temperature given as exactly one of
// T or beta.
class ParamSet {
 public:
  explicit ParamSet(const std::map<std::string, double>& params) : raw_(params) {}

  double required(const std::string& key) {
    auto it = raw_.find(key);
    require(it != raw_.end(), "missing required parameter: " + key);
    used_.insert(key);
    resolved_[key] = it->second;
    return it->second;
  }

  double optional(const std::string& key, double fallback) {
    auto it = raw_.find(key);
    const double v = it == raw_.end() ? fallback : it->second;
    if (it != raw_.end()) used_.insert(key);
    resolved_[key] = v;
    return v;
  }

  double beta() {
    const bool has_T = raw_.count("T") > 0;
    const bool has_beta = raw_.count("beta") > 0;
    require(has_T != has_beta, "exactly one of T, beta must be given");
    double b;
    if (has_T) {
      const double T = raw_.at("T");
      require(T > 0.0, "T > 0 required");
      b = 1.0 / T;
      used_.insert("T");
      resolved_["T"] = T;
    } else {
      b = raw_.at("beta");
      require(b > 0.0, "beta > 0 required");
      used_.insert("beta");
    }
    resolved_["beta"] = b;
    return b;
  }

  void finish() const {
    for (const auto& [key, value] : raw_)
      require(used_.count(key) > 0, "unknown parameter for this scenario: " + key);
  }

  const std::map<std::string, double>& resolved() const { return resolved_; }

 private:
  std::map<std::string, double> raw_;
  std::map<std::string, double> resolved_;
  std::set<std::string> used_;
};

void validate_grid(const GridSpec& grid) {
  require(grid.t_max > 0.0, "t_max > 0 required");
  require(grid.dt > 0.0, "dt > 0 required");
  require(grid.dt <= grid.t_max, "dt <= t_max required");
  require(grid.sample_stride >= 1, "sample_stride >= 1 required");
}

struct CsvFile {
  std::ofstream out;

  CsvFile(const std::string& path, const std::string& scenario,
          const std::map<std::string, double>& params, const std::string& header) {
    if (path.empty()) return;
    out.open(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "# scenario: " << scenario << "\n# params:";
    for (const auto& [key, value] : params) out << " " << key << "=" << csv_num(value);
    out << "\n" << header << "\n";
  }

  bool active() const { return out.is_open(); }
};

std::vector<CurvePoint> negativity_curve(const QuasiFreeModel& canonical, const Mat& Sigma0,
                                         const std::vector<int>& keep, const GridSpec& grid) {
  ModePartition partition;
  partition.pairs = {{0, 1, 'A'}, {2, 3, 'B'}};
  const long steps = std::lround(grid.t_max / grid.dt);
  std::vector<CurvePoint> curve;
  curve.reserve(steps + 1);
  for (long k = 0; k <= steps; ++k) {
    const double t = k * grid.dt;
    const Mat sig = evolve_covariance(Sigma0, canonical, t);
    const GaussianState reduced =
        reduce_modes(GaussianState(canonical.space, sig), keep);
    const auto nus = symplectic_spectrum(partial_transpose(reduced, partition));
    CurvePoint p;
    p.t = t;
    p.nu1 = nus[0];
    p.nu2 = nus[1];
    p.E = negativity_from_spectrum(nus);
    curve.push_back(p);
  }
  return curve;
}

ScenarioSummary summarize_curve(const std::string& name,
                                const std::map<std::string, double>& params,
                                const std::vector<CurvePoint>& curve) {
  ScenarioSummary s;
  s.scenario = name;
  s.params = params;
  for (const auto& p : curve) {
    if (p.E > s.max_E) {
      s.max_E = p.E;
      s.t_max_E = p.t;
    }
  }
  s.E_final = curve.back().E;
  return s;
}

void write_curve_csv(const ScenarioConfig& config, const ScenarioSummary& summary,
                     const std::vector<CurvePoint>& curve) {
  CsvFile csv(config.output, summary.scenario, summary.params, "t,E,nu1,nu2");
  if (!csv.active()) return;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (i % config.grid.sample_stride != 0 && i + 1 != curve.size()) continue;
    const auto& p = curve[i];
    csv.out << csv_num(p.t) << "," << csv_num(p.E) << "," << csv_num(p.nu1) << ","
            << csv_num(p.nu2) << "\n";
  }
}

ScenarioSummary run_spin(const ScenarioConfig& config) {
  ParamSet ps(config.params);
  const double beta = ps.beta();
  const double gamma = ps.required("gamma");
  const double squeeze_r = ps.required("squeeze");
  const double eps = ps.optional("epsilon", 1.0);
  const double J0 = ps.optional("J0", 1.0);
  ps.finish();
  require(std::abs(gamma) <= 0.5, "|gamma| <= 0.5 required");
  require(eps > 0.0, "epsilon > 0 required");
  require(J0 > 0.0, "J0 > 0 required");

  const auto curve = spin_negativity_curve(beta, eps, gamma, J0, squeeze_r, config.grid);
  const auto summary = summarize_curve("spin-dissipative", ps.resolved(), curve);
  write_curve_csv(config, summary, curve);
  return summary;
}

ScenarioSummary run_oscillator(const ScenarioConfig& config) {
  ParamSet ps(config.params);
  const double beta = ps.beta();
  const double lambda = ps.required("lambda");
  const double squeeze_r = ps.required("squeeze");
  const double eps = ps.optional("epsilon", 1.0);
  ps.finish();
  require(lambda * lambda <= 1.0, "lambda^2 <= 1 required");
  require(eps > 0.0, "epsilon > 0 required");

  const auto curve = oscillator_negativity_curve(beta, eps, lambda, squeeze_r, config.grid);
  const auto summary = summarize_curve("oscillator-dissipative", ps.resolved(), curve);
  write_curve_csv(config, summary, curve);
  return summary;
}

ScenarioSummary run_meanfield_macro(const ScenarioConfig& config) {
  ParamSet ps(config.params);
  Vec omega0(3);
  omega0(0) = ps.required("omega1");
  omega0(1) = ps.required("omega2");
  omega0(2) = ps.required("omega3");
  ps.finish();

  const MeanFieldModel model = single_spin_meanfield_model();
  const MacroTrajectory traj = integrate_macro(model, omega0, config.grid.t_max, config.grid.dt);

  ScenarioSummary summary;
  summary.scenario = "meanfield-macro";
  summary.params = ps.resolved();

  CsvFile csv(config.output, summary.scenario, summary.params, "t,omega_1,omega_2,omega_3");
  if (csv.active()) {
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
      if (i % config.grid.sample_stride != 0 && i + 1 != traj.t.size()) continue;
      csv.out << csv_num17(traj.t[i]);
      for (int c = 0; c < 3; ++c) csv.out << "," << csv_num17(traj.omega[i](c));
      csv.out << "\n";
    }
  }
  return summary;
}

ScenarioSummary run_meanfield_fluct(const ScenarioConfig& config) {
  ParamSet ps(config.params);
  const double a = ps.required("a");
  const double b = ps.required("b");
  const double zeta = ps.required("zeta");
  ps.finish();

  const TwoChainModel tc = twochain_meanfield_model(a, b, zeta);
  if (tc.zeta_warning)
    std::fprintf(stderr,
                 "warning: zeta = %g > 1/2, the initial covariance 1/(4 zeta) lies below "
                 "vacuum; treating zeta symbolically\n",
                 zeta);
  const auto samples = integrate_fluct_trajectory(tc.model, tc.omega0, config.grid.t_max,
                                                  config.grid.dt, config.grid.sample_stride);
  ModePartition partition;
  partition.pairs = {{0, 1, 'A'}, {2, 3, 'B'}};

  ScenarioSummary summary;
  summary.scenario = "meanfield-fluct";
  summary.params = ps.resolved();

  std::ostringstream header;
  header << "t";
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) header << ",Sigma_" << i << j;
  CsvFile csv(config.output, summary.scenario, summary.params, header.str());

  for (const auto& s : samples) {
    const Mat sig = s.X * tc.Sigma0 * s.X.transpose() + s.Y;
    const GaussianState state(tc.model.fluct_space(s.omega), Mat(0.5 * (sig + sig.transpose())));
    const double e = log_negativity(state, partition);
    if (e > summary.max_E) {
      summary.max_E = e;
      summary.t_max_E = s.t;
    }
    summary.E_final = e;
    if (csv.active()) {
      csv.out << csv_num17(s.t);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) csv.out << "," << csv_num17(state.Sigma(i, j));
      csv.out << "\n";
    }
  }
  return summary;
}

ScenarioSummary run_clt_check(const ScenarioConfig& config) {
  ParamSet ps(config.params);
  const double beta = ps.beta();
  const double eps = ps.optional("epsilon", 1.0);
  ps.finish();
  require(eps > 0.0, "epsilon > 0 required");

  const SiteAlgebra site = spin_double_site(beta, eps);
  const std::vector<int> ops = {0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<Vec> rs;
  Vec r1 = Vec::Zero(8);
  r1(0) = 1.0;
  Vec r2 = Vec::Zero(8);
  r2(0) = 0.5;
  r2(1) = 0.5;
  r2(2) = 0.5;
  r2(3) = 0.5;
  Vec r3(8);
  r3 << 0.3, -0.2, 0.4, 0.1, 0.2, -0.1, 0.3, -0.3;
  rs = {r1, r2, r3};

  ScenarioSummary summary;
  summary.scenario = "clt-check";
  summary.params = ps.resolved();

  CsvFile csv(config.output, summary.scenario, summary.params, "N,error");
  const long ns[] = {250, 500, 1000, 2000, 4000};
  for (long n : ns) {
    double err = 0.0;
    for (const auto& r : rs) {
      const Cplx finite = finite_N_char(site, ops, r, n);
      const double gauss = gaussian_limit_char(site, ops, r);
      err = std::max(err, std::abs(finite - gauss));
    }
    if (csv.active()) csv.out << n << "," << csv_num(err) << "\n";
  }
  return summary;
}

}  // namespace

std::vector<CurvePoint> spin_negativity_curve(double beta, double eps, double gamma, double J0,
                                              double squeeze_r, const GridSpec& grid) {
  validate_grid(grid);
  const ModelBundle bundle = spin_double_chain(beta, eps, gamma, J0);
  const GaussianState ref = bundle.canonical.reference_state();
  const GaussianState initial = squeeze(ref, {{0, 1}, {4, 5}}, squeeze_r);
  return negativity_curve(bundle.canonical, initial.Sigma, {0, 1, 4, 5}, grid);
}

std::vector<CurvePoint> oscillator_negativity_curve(double beta, double eps, double lambda,
                                                    double squeeze_r, const GridSpec& grid) {
  validate_grid(grid);
  const ModelBundle bundle = oscillator_double_chain(beta, eps, lambda);
  const GaussianState ref = bundle.canonical.reference_state();
  const GaussianState initial = squeeze(ref, {{0, 1}, {2, 3}}, squeeze_r);
  return negativity_curve(bundle.canonical, initial.Sigma, {0, 1, 2, 3}, grid);
}

ScenarioSummary run_scenario(const ScenarioConfig& config) {
  validate_grid(config.grid);
  switch (config.scenario) {
    case Scenario::SpinDissipative: return run_spin(config);
    case Scenario::OscillatorDissipative: return run_oscillator(config);
    case Scenario::MeanfieldMacro: return run_meanfield_macro(config);
    case Scenario::MeanfieldFluct: return run_meanfield_fluct(config);
    case Scenario::CltCheck: return run_clt_check(config);
  }
  throw std::invalid_argument("unhandled scenario");
}

SweepResult sweep(const ScenarioConfig& base, const std::vector<SweepAxis>& axes, int workers) {
  require(!axes.empty(), "sweep: at least one axis required");
  for (const auto& axis : axes) require(!axis.values.empty(), "sweep: empty axis " + axis.name);
  require(workers >= 1, "sweep: workers >= 1 required");

  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.values.size();

  SweepResult result;
  for (const auto& axis : axes) result.axis_names.push_back(axis.name);
  result.rows.resize(total);

  auto point_of = [&](std::size_t index) {
    std::map<std::string, double> point;
    std::size_t rest = index;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& axis = axes[a];
      point[axis.name] = axis.values[rest % axis.values.size()];
      rest /= axis.values.size();
    }
    return point;
  };

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t index = next.fetch_add(1);
      if (index >= total) return;
      SweepRow& row = result.rows[index];
      row.point = point_of(index);
      ScenarioConfig config = base;
      config.output.clear();
      for (const auto& [key, value] : row.point) config.params[key] = value;
      try {
        row.summary = run_scenario(config);
        row.status = 0;
      } catch (const std::invalid_argument& e) {
        row.status = 2;
        row.error = e.what();
      } catch (const std::exception& e) {
        row.status = 3;
        row.error = e.what();
      }
    }
  };

  const std::size_t nthreads = std::min<std::size_t>(workers, total);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  for (const auto& row : result.rows)
    if (row.status != 0) result.any_failed = true;
  return result;
}

void write_sweep_csv(const ScenarioConfig& base, const SweepResult& result,
                     const std::string& path) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "# scenario: " << scenario_name(base.scenario) << "\n# params:";
  for (const auto& [key, value] : base.params) out << " " << key << "=" << csv_num(value);
  out << "\n";
  for (const auto& name : result.axis_names) out << name << ",";
  out << "max_E,t_max_E,E_final,status\n";
  for (const auto& row : result.rows) {
    for (const auto& name : result.axis_names) out << csv_num(row.point.at(name)) << ",";
    if (row.status == 0)
      out << csv_num(row.summary.max_E) << "," << csv_num(row.summary.t_max_E) << ","
          << csv_num(row.summary.E_final);
    else
      out << "nan,nan,nan";
    out << "," << row.status << "\n";
  }
}

namespace {

void add_check(std::vector<CheckResult>& checks, const std::string& name, double margin) {
  checks.push_back({name, margin, margin >= 0.0});
}

void oracle_checks(std::vector<CheckResult>& checks) {
  // closed-form asymptotic negativity
  add_check(checks, "asymptotic negativity, closed form at (1,1,1)",
            1e-12 - std::abs(asymptotic_negativity(1.0, 1.0, 1.0) - 1.0));

  // macroscopic flow against the analytic solution
  {
    const MeanFieldModel model = single_spin_meanfield_model();
    Vec omega0(3);
    omega0 << 0.3, 0.2, 0.1;
    const MacroTrajectory traj = integrate_macro(model, omega0, 5.0, 1e-3);
    double err = 0.0;
    for (std::size_t i = 0; i < traj.t.size(); i += 200)
      err = std::max(
          err, (traj.omega[i] - ref::spin_macro(omega0, traj.t[i])).cwiseAbs().maxCoeff());
    add_check(checks, "macro flow vs closed form", 1e-8 - err);
  }

  // emergent-unitary phase quadrature against the arctan closed form
  {
    Vec omega0(3);
    omega0 << 0.4, -0.3, 0.2;
    double err = 0.0;
    for (double t : {0.5, 1.5, 3.0}) {
      const SpinRotation rot = emergent_unitary_spin(omega0, t);
      err = std::max(err, std::abs(rot.gamma - ref::spin_gamma(omega0, t)));
    }
    add_check(checks, "rotation phase quadrature vs closed form", 1e-8 - err);
  }

  // nonlinear fluctuation maps against the fixed-point closed forms
  {
    const TwoChainModel tc = twochain_meanfield_model(1.0, 1.0, 1.0);
    double err = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
      const FluctState s = integrate_fluct(tc.model, tc.omega0, t, 1e-3);
      err = std::max(err, max_abs(Mat(s.X - ref::twochain_X(1.0, 1.0, t))));
      err = std::max(err, max_abs(Mat(s.Y - ref::twochain_Y(1.0, 1.0, 1.0, t))));
    }
    add_check(checks, "fluctuation propagator/noise vs closed forms", 1e-8 - err);
  }

  // partial-transpose spectrum of the asymptotic two-chain state
  {
    const TwoChainModel tc = twochain_meanfield_model(1.0, 1.0, 1.0);
    const GaussianState state(tc.model.fluct_space(tc.omega0),
                              ref::twochain_Sigma_inf(1.0, 1.0, 1.0));
    ModePartition partition;
    partition.pairs = {{0, 1, 'A'}, {2, 3, 'B'}};
    const auto nus = symplectic_spectrum(partial_transpose(state, partition));
    const double expect = 0.5 / std::sqrt(2.0);
    const double err = std::max(std::abs(nus[0] - expect), std::abs(nus[1] - expect));
    add_check(checks, "PT symplectic spectrum at (1,1,1)", 1e-8 - err);
  }
}

void invariant_checks(std::vector<CheckResult>& checks) {
  const ModelBundle spin = spin_double_chain(10.0, 1.0, 0.5, 1.0);
  const ModelBundle osc = oscillator_double_chain(5.0, 1.0, 1.0);

  for (const ModelBundle* bundle : {&spin, &osc}) {
    double err = 0.0;
    for (double t = 0.0; t <= 10.0; t += 0.5)
      err = std::max(err,
                     max_abs(Mat(evolve_covariance(bundle->model.Sigma_ref, bundle->model, t) -
                                 bundle->model.Sigma_ref)));
    add_check(checks, "reference-state invariance (" + bundle->kind + ")", 1e-10 - err);
  }

  for (const ModelBundle* bundle : {&spin, &osc}) {
    double worst = 1.0;
    for (double t = 0.5; t <= 5.0; t += 0.5)
      worst = std::min(worst, check_cp(bundle->model, t).margin);
    add_check(checks, "complete positivity margin (" + bundle->kind + ")", worst - kPsdTol);
  }

  {
    double err = max_abs(Mat(mode_map_ccr(spin.mode_map) - spin.model.space.sigma));
    err = std::max(err, max_abs(Mat(mode_map_ccr(osc.mode_map) - osc.model.space.sigma)));
    add_check(checks, "mode map reproduces the commutation relations", 1e-12 - err);
  }

  // semigroup composition on random valid models
  {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double err = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const int pairs = 1 + static_cast<int>(rng() % 4);
      const int n = 2 * pairs;
      Mat a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = uni(rng);
      const Mat q = Eigen::HouseholderQR<Mat>(a).householderQ();
      Mat j2(2, 2);
      j2 << 0, 1, -1, 0;
      Mat sig = Mat::Zero(n, n), cov = Mat::Zero(n, n);
      for (int p = 0; p < pairs; ++p) {
        const double c = 0.5 + 1.5 * 0.5 * (uni(rng) + 1.0);
        const double nu = c * (0.5 + 0.5 * (uni(rng) + 1.0));
        sig.block(2 * p, 2 * p, 2, 2) = c * j2;
        cov.block(2 * p, 2 * p, 2, 2) = nu * Mat::Identity(2, 2);
      }
      sig = q.transpose() * sig * q;
      cov = q.transpose() * cov * q;
      Mat drift(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) drift(i, j) = uni(rng);
      const QuasiFreeModel model(ModeSpace(n, sig), drift, cov);
      Vec r(n);
      for (int i = 0; i < n; ++i) r(i) = uni(rng);
      const double t = 1.0 + uni(rng), s = 1.0 + uni(rng);
      const WeylAction once = apply_to_weyl(model, r, t + s);
      const WeylAction first = apply_to_weyl(model, r, t);
      const WeylAction second = apply_to_weyl(model, first.r_t, s);
      err = std::max(err, (once.r_t - second.r_t).cwiseAbs().maxCoeff());
      err = std::max(err,
                     std::abs(once.log_prefactor - first.log_prefactor - second.log_prefactor));
    }
    add_check(checks, "semigroup composition on random models", 1e-9 - err);
  }

  // norm conservation of the macroscopic flow
  {
    const MeanFieldModel model = single_spin_meanfield_model();
    Vec omega0(3);
    omega0 << 0.25, -0.35, 0.15;
    const MacroTrajectory traj = integrate_macro(model, omega0, 5.0, 1e-3);
    const double n0 = omega0.squaredNorm();
    double drift = 0.0;
    for (const auto& w : traj.omega) drift = std::max(drift, std::abs(w.squaredNorm() - n0));
    add_check(checks, "macro flow conserves |omega|^2", 1e-9 - drift);
  }

  // characteristic function stays in (0, 1] on valid states
  {
    const GaussianState ref = spin.canonical.reference_state();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    double worst = 1.0;
    for (int rep = 0; rep < 100; ++rep) {
      Vec r(ref.n());
      for (int i = 0; i < ref.n(); ++i) r(i) = uni(rng);
      const double chi = char_function(ref, r);
      worst = std::min(worst, chi);        // chi > 0
      worst = std::min(worst, 1.0 - chi);  // chi <= 1
    }
    const Vec zero = Vec::Zero(ref.n());
    worst = std::min(worst, 1e-15 - std::abs(char_function(ref, zero) - 1.0));
    add_check(checks, "characteristic function bounds", worst);
  }
}

}  // namespace

std::vector<CheckResult> run_checks(const std::string& suite) {
  std::vector<CheckResult> checks;
  if (suite == "oracles") {
    oracle_checks(checks);
  } else if (suite == "invariants") {
    invariant_checks(checks);
  } else if (suite == "all") {
    oracle_checks(checks);
    invariant_checks(checks);
  } else {
    throw std::invalid_argument("unknown check suite: '" + suite +
                                "' (expected invariants, oracles or all)");
  }
  return checks;
}

}  // namespace fluctua
