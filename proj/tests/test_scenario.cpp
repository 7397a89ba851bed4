#include <doctest.h>

#include "fluctua/reference.hpp"
#include "fluctua/scenario.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace fluctua;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string(FLUCTUA_TEST_TMPDIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ScenarioConfig spin_config() {
  ScenarioConfig config;
  config.scenario = Scenario::SpinDissipative;
  config.params = {{"T", 0.1}, {"gamma", 0.5}, {"squeeze", 1.0}};
  config.grid = {5.0, 0.02, 5};
  return config;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto j = nlohmann::json::parse(R"({
    "scenario": "spin-dissipative",
    "params": {"T": 0.1, "gamma": 0.5, "squeeze": 1.0},
    "grid": {"t_max": 4.0, "dt": 0.05, "sample_stride": 2},
    "output": "out.csv"
  })");
  const ScenarioConfig config = config_from_json(j);
  CHECK(config.scenario == Scenario::SpinDissipative);
  CHECK(config.params.at("gamma") == 0.5);
  CHECK(config.grid.t_max == 4.0);
  CHECK(config.output == "out.csv");

  CHECK_THROWS_AS(scenario_from_name("unknown"), std::invalid_argument);

  SUBCASE("unknown parameter rejected") {
    ScenarioConfig bad = spin_config();
    bad.params["typo"] = 1.0;
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
  }
  SUBCASE("temperature must be given exactly once") {
    ScenarioConfig bad = spin_config();
    bad.params["beta"] = 10.0;
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
    bad.params.erase("beta");
    bad.params.erase("T");
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
  }
  SUBCASE("constraint names appear in the message") {
    ScenarioConfig bad = spin_config();
    bad.params["gamma"] = 0.7;
    try {
      run_scenario(bad);
      FAIL("expected a parameter error");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("|gamma| <= 0.5") != std::string::npos);
    }
  }
  SUBCASE("grid validation") {
    ScenarioConfig bad = spin_config();
    bad.grid.dt = 0.0;
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
    bad.grid.dt = 0.01;
    bad.grid.t_max = -1.0;
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
  }
}

TEST_CASE("spin scenario: gamma = 0 never entangles; defaults are recorded") {
  ScenarioConfig config = spin_config();
  config.params["gamma"] = 0.0;
  config.output = tmp_path("spin_gamma0.csv");
  const ScenarioSummary summary = run_scenario(config);
  CHECK(summary.max_E == 0.0);
  CHECK(summary.E_final == 0.0);
  CHECK(summary.params.at("epsilon") == 1.0);
  CHECK(summary.params.at("J0") == 1.0);
  CHECK(summary.params.at("beta") == doctest::Approx(10.0));

  const std::string text = slurp(config.output);
  CHECK(text.find("# scenario: spin-dissipative") == 0);
  CHECK(text.find("J0=1") != std::string::npos);
  CHECK(text.find("t,E,nu1,nu2") != std::string::npos);

  const auto json = summary.to_json();
  CHECK(json.at("scenario") == "spin-dissipative");
  CHECK(json.at("max_E") == 0.0);
}

TEST_CASE("oscillator scenario: no statistical coupling, no entanglement") {
  ScenarioConfig config;
  config.scenario = Scenario::OscillatorDissipative;
  config.params = {{"T", 0.2}, {"lambda", 0.0}, {"squeeze", 1.0}};
  config.grid = {5.0, 0.05, 5};
  const ScenarioSummary summary = run_scenario(config);
  CHECK(summary.max_E == 0.0);
}

TEST_CASE("spin scenario: byte-identical reruns") {
  ScenarioConfig config = spin_config();
  config.output = tmp_path("det_a.csv");
  run_scenario(config);
  const std::string first = slurp(config.output);
  config.output = tmp_path("det_b.csv");
  run_scenario(config);
  CHECK(first == slurp(config.output));
  CHECK(first.find("nan") == std::string::npos);
}

TEST_CASE("clt scenario produces decreasing errors") {
  ScenarioConfig config;
  config.scenario = Scenario::CltCheck;
  config.params = {{"T", 0.5}};
  config.grid = {1.0, 0.1, 1};
  config.output = tmp_path("clt.csv");
  run_scenario(config);

  std::ifstream in(config.output);
  std::string line;
  std::getline(in, line);  // # scenario
  std::getline(in, line);  // # params
  std::getline(in, line);
  CHECK(line == "N,error");
  double prev = 1e9;
  int rows = 0;
  long n = 0, first_n = 0, last_n = 0;
  double err = 0.0, first_err = 0.0, last_err = 0.0;
  char comma = 0;
  while (in >> n >> comma >> err) {
    CHECK(err < prev);
    prev = err;
    if (rows == 0) {
      first_n = n;
      first_err = err;
    }
    last_n = n;
    last_err = err;
    ++rows;
  }
  CHECK(rows == 5);
  const double slope = std::log(last_err / first_err) /
                       std::log(static_cast<double>(last_n) / first_n);
  CHECK(slope > -1.3);
  CHECK(slope < -0.7);
}

TEST_CASE("spin negativity curve: canonical and field-basis routes agree") {
  const double beta = 10.0, eps = 1.0, gamma = 0.5, J0 = 1.0, r = 1.0;
  const GridSpec grid{3.0, 0.25, 1};
  const auto curve = spin_negativity_curve(beta, eps, gamma, J0, r, grid);

  // independent route: evolve in the field basis and reduce to the four field
  // components spanning the two single-chain modes
  const ModelBundle bundle = spin_double_chain(beta, eps, gamma, J0);
  const Mat t_map = bundle.field_from_canonical;
  const GaussianState canon_init =
      squeeze(bundle.canonical.reference_state(), {{0, 1}, {4, 5}}, r);
  const Mat sigma_f0 = t_map * canon_init.Sigma * t_map.transpose();
  ModePartition part;
  part.pairs = {{0, 1, 'A'}, {2, 3, 'B'}};
  bool saw_positive = false;
  for (const auto& p : curve) {
    Mat sig_f = evolve_covariance(sigma_f0, bundle.model, p.t);
    const GaussianState red =
        reduce_modes(GaussianState(bundle.model.space, sig_f), {0, 1, 2, 3});
    const double e = log_negativity(red, part);
    CHECK(std::abs(e - p.E) < 1e-10);
    saw_positive = saw_positive || p.E > 1e-3;
  }
  CHECK(saw_positive);  // the comparison covers a genuinely entangled stretch
}

TEST_CASE("meanfield scenarios write trajectories") {
  SUBCASE("macro") {
    ScenarioConfig config;
    config.scenario = Scenario::MeanfieldMacro;
    config.params = {{"omega1", 0.3}, {"omega2", 0.2}, {"omega3", 0.1}};
    config.grid = {1.0, 1e-3, 100};
    config.output = tmp_path("macro.csv");
    run_scenario(config);
    const std::string text = slurp(config.output);
    CHECK(text.find("t,omega_1,omega_2,omega_3") != std::string::npos);
  }
  SUBCASE("fluct") {
    ScenarioConfig config;
    config.scenario = Scenario::MeanfieldFluct;
    config.params = {{"a", 1.0}, {"b", 1.0}, {"zeta", 1.0}};
    config.grid = {2.0, 1e-3, 1000};
    config.output = tmp_path("fluct.csv");
    const ScenarioSummary summary = run_scenario(config);
    CHECK(summary.max_E > 0.0);
    CHECK(summary.E_final > 0.0);
    const std::string text = slurp(config.output);
    CHECK(text.find("Sigma_11") != std::string::npos);
    CHECK(text.find("Sigma_44") != std::string::npos);

    // the row at t = 1 carries the closed-form covariance
    std::istringstream lines(text);
    std::string line;
    bool found = false;
    while (std::getline(lines, line)) {
      if (line.rfind("1,", 0) != 0) continue;
      found = true;
      std::stringstream cells(line);
      std::string cell;
      std::vector<double> row;
      while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
      REQUIRE(row.size() == 17);
      const Mat x = ref::twochain_X(1.0, 1.0, 1.0);
      const Mat expected = x * (Mat::Identity(4, 4) / 4.0) * x.transpose() +
                           ref::twochain_Y(1.0, 1.0, 1.0, 1.0);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::abs(row[1 + 4 * i + j] - expected(i, j)) < 1e-9);
    }
    CHECK(found);
  }
}

TEST_CASE("sweep: single point equals run; order independent of workers") {
  ScenarioConfig base = spin_config();
  base.grid = {3.0, 0.05, 5};

  const ScenarioSummary direct = run_scenario(base);

  SweepAxis axis{"gamma", {0.5}};
  const SweepResult single = sweep(base, {axis}, 1);
  REQUIRE(single.rows.size() == 1);
  CHECK_FALSE(single.any_failed);
  CHECK(single.rows[0].summary.max_E == doctest::Approx(direct.max_E).epsilon(1e-15));
  CHECK(single.rows[0].summary.t_max_E == direct.t_max_E);

  SweepAxis gammas{"gamma", {0.0, 0.2, 0.4, 0.5}};
  SweepAxis squeezes{"squeeze", {0.5, 1.0}};
  const SweepResult one = sweep(base, {gammas, squeezes}, 1);
  const SweepResult four = sweep(base, {gammas, squeezes}, 4);
  REQUIRE(one.rows.size() == 8);
  REQUIRE(four.rows.size() == 8);
  const std::string p1 = tmp_path("sweep1.csv"), p4 = tmp_path("sweep4.csv");
  write_sweep_csv(base, one, p1);
  write_sweep_csv(base, four, p4);
  CHECK(slurp(p1) == slurp(p4));
  // row-major grid order: last axis fastest
  CHECK(one.rows[0].point.at("gamma") == 0.0);
  CHECK(one.rows[0].point.at("squeeze") == 0.5);
  CHECK(one.rows[1].point.at("squeeze") == 1.0);
  CHECK(one.rows[2].point.at("gamma") == 0.2);

  SUBCASE("failed points are recorded with their code") {
    SweepAxis bad{"gamma", {0.4, 0.9}};
    const SweepResult result = sweep(base, {bad}, 2);
    CHECK(result.any_failed);
    CHECK(result.rows[0].status == 0);
    CHECK(result.rows[1].status == 2);
    CHECK(!result.rows[1].error.empty());
    const std::string path = tmp_path("sweep_fail.csv");
    write_sweep_csv(base, result, path);
    CHECK(slurp(path).find("nan,nan,nan,2") != std::string::npos);
  }
}

TEST_CASE("check suites run and an unknown suite is rejected") {
  for (const char* suite : {"oracles", "invariants"}) {
    const auto checks = run_checks(suite);
    CHECK(!checks.empty());
    for (const auto& check : checks) {
      INFO(check.name);
      CHECK(check.pass);
    }
  }
  CHECK(run_checks("all").size() ==
        run_checks("oracles").size() + run_checks("invariants").size());
  CHECK_THROWS_AS(run_checks(""), std::invalid_argument);
  CHECK_THROWS_AS(run_checks("bogus"), std::invalid_argument);
}

TEST_CASE("numeric formatting is shortest-round-trip and stable") {
  CHECK(csv_num(0.5) == "0.5");
  CHECK(csv_num(1.0) == "1");
  CHECK(csv_num(0.1) == "0.1");
  CHECK(csv_num(-2.25) == "-2.25");
  const double v = 0.1234567890123456789;
  const std::string s17 = csv_num17(v);
  double back = 0.0;
  std::sscanf(s17.c_str(), "%lf", &back);
  CHECK(back == v);
}

TEST_CASE("matrix CSV fixtures round-trip") {
  Mat m(2, 3);
  m << 0.1, -2.25, 1.0 / 3.0, 4e-17, 12345.678, -0.0;
  const std::string path = tmp_path("matrix_fixture.csv");
  write_matrix_csv(m, path);
  const Mat back = read_matrix_csv(path);
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK(max_abs(Mat(back - m)) == 0.0);
}

namespace {
int run_cli(const std::string& args) {
  const int status = std::system((std::string(FLUCTUA_BIN) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}
}  // namespace

TEST_CASE("CLI exit codes: 0 ok, 2 parameter/usage, 3 numerical") {
  const std::string good = tmp_path("cli_good.json");
  {
    std::ofstream out(good);
    out << R"({"scenario":"spin-dissipative","params":{"T":0.1,"gamma":0.5,"squeeze":1.0},)"
        << R"("grid":{"t_max":1.0,"dt":0.1,"sample_stride":1},"output":""})";
  }
  CHECK(run_cli("run --config " + good) == 0);

  const std::string bad = tmp_path("cli_bad.json");
  {
    std::ofstream out(bad);
    out << R"({"scenario":"spin-dissipative","params":{"T":0.1,"gamma":0.9,"squeeze":1.0},)"
        << R"("grid":{"t_max":1.0,"dt":0.1,"sample_stride":1},"output":""})";
  }
  CHECK(run_cli("run --config " + bad) == 2);

  CHECK(run_cli("run --config " + tmp_path("missing.json")) == 2);

  const std::string garbled = tmp_path("cli_garbled.json");
  {
    std::ofstream out(garbled);
    out << "{not json";
  }
  CHECK(run_cli("run --config " + garbled) == 2);

  CHECK(run_cli("check") == 2);        // empty suite name
  CHECK(run_cli("check bogus") == 2);  // unknown suite
  CHECK(run_cli("") == 2);             // missing subcommand
}
