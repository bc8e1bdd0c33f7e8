#include <doctest.h>

#include <sstream>

#include "ztorch/config.hpp"
#include "ztorch/sweep.hpp"

using namespace ztorch;

TEST_CASE("default config round-trips") {
  std::ostringstream os;
  write_scenario(os, ScenarioConfig{});
  std::istringstream in(os.str());
  const auto c = parse_scenario(in);
  std::ostringstream again;
  write_scenario(again, c);
  CHECK(again.str() == os.str());
  CHECK(c.workload.sigma == 0.1);
  CHECK(c.initial_omega == 500);
  CHECK(c.qlearning.beta == 0.5);
  CHECK(c.qlearning.psi == 0.9);
  CHECK(c.qlearning.phi == 0.5);
  CHECK(c.intervals == std::vector<std::int64_t>{2, 5, 10, 20, 50});
  CHECK(c.workload.n_baselines == 5);
}

TEST_CASE("partial config keeps defaults") {
  std::istringstream in("[workload]\nsigma = 0.2\nn_vnfs = 50\n\n[nodes]\ncapacity = 1, 0.5, 1\n");
  const auto c = parse_scenario(in);
  CHECK(c.workload.sigma == 0.2);
  CHECK(c.workload.n_vnfs == 50);
  CHECK(c.node_capacity == KpiVector{1, 0.5, 1});
  CHECK(c.initial_omega == 500);
}

TEST_CASE("bad configs name the key") {
  auto err = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_scenario(in, "t.ini");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(err("[workload]\nsigmaa = 0.1\n").find("'workload.sigmaa'") != std::string::npos);
  CHECK(err("[workload]\nsigma = abc\n").find("'workload.sigma'") != std::string::npos);
  CHECK(err("[bogus]\nx = 1\n").find("'bogus'") != std::string::npos);
  CHECK(err("sigma = 0.1\n").find("'sigma'") != std::string::npos);
  CHECK(err("[engine]\npolicy = magic\n").find("'engine.policy'") != std::string::npos);
  CHECK(err("[affinity]\ngrow_rebind = maybe\n").find("'affinity.grow_rebind'") != std::string::npos);
  CHECK(err("[workload]\nhorizon = 10\n").find("horizon") != std::string::npos);
  CHECK(err("[workload\n").find("t.ini") != std::string::npos);
  CHECK_THROWS_AS(load_scenario("/nonexistent/x.ini"), ConfigError);
}

TEST_CASE("sweep spec parsing") {
  std::istringstream in("[sweep]\nparameter = sigma\nvalues = 0, 0.1\nseeds = 2\nbase_config = base.ini\n");
  const auto s = parse_sweep_spec(in, "s.ini", "/cfg");
  CHECK(s.values == std::vector<double>{0.0, 0.1});
  CHECK(s.seeds == 2);
  CHECK(s.base_config == std::filesystem::path("/cfg/base.ini"));

  auto bad = [](const std::string& text) {
    std::istringstream is(text);
    CHECK_THROWS_AS(parse_sweep_spec(is), ConfigError);
  };
  bad("[sweep]\nparameter = omega\nvalues = 1\n");
  bad("[sweep]\nvalues = \n");
  bad("[sweep]\nvalues = 0.1\nseeds = 0\n");
  bad("[sweep]\nparameter = i_count\nvalues = 10.5\n");
  bad("[sweep]\nvalue = 1\n");
}

TEST_CASE("sweep runs every cell and merges deterministically") {
  SweepSpec spec;
  spec.values = {0.0, 0.1};
  spec.seeds = 2;
  ScenarioConfig base;
  base.workload.n_vnfs = 30;
  base.workload.horizon = 3000;
  const auto one = run_sweep(spec, base, 1);
  const auto many = run_sweep(spec, base, 4);
  REQUIRE(one.cells.size() == 12);
  CHECK(one.failed_cells() == 0);
  std::ostringstream a, b;
  write_sweep_cells(a, spec, one);
  write_sweep_cells(b, spec, many);
  CHECK(a.str() == b.str());
  std::ostringstream x, y;
  write_sweep_aggregates(x, spec, one);
  write_sweep_aggregates(y, spec, many);
  CHECK(x.str() == y.str());
  CHECK(x.str().rfind("# schema: ztorch.sweep/1\n", 0) == 0);

  REQUIRE(one.aggregates.size() == 6);
  for (const auto& g : one.aggregates) {
    CHECK(g.runs == 2);
    if (g.value == 0.0) CHECK(g.qod_mean == 1.0);
  }
  // Cells are ordered by policy, then value, then seed.
  CHECK(one.cells[0].policy == Policy::ztorch);
  CHECK(one.cells[1].seed == 2);
  CHECK(one.cells[2].value == 0.1);
  CHECK(one.cells[4].policy == Policy::instant);
}

TEST_CASE("sweep keeps going past failed cells") {
  SweepSpec spec;
  spec.parameter = "i_count";
  spec.values = {3, 20};  // 3 VNFs is below the baseline count
  spec.seeds = 1;
  ScenarioConfig base;
  base.workload.horizon = 2000;
  const auto r = run_sweep(spec, base, 2);
  CHECK(r.failed_cells() == 3);
  CHECK(r.aggregates[1].runs == 1);
  std::ostringstream os;
  write_sweep_cells(os, spec, r);
  CHECK(os.str().find(",failed,") != std::string::npos);
}

TEST_CASE("confidence interval") {
  const auto [m, ci] = mean_ci95({1.0, 2.0, 3.0});
  CHECK(m == 2.0);
  CHECK(ci == doctest::Approx(4.302652729749464 / std::sqrt(3.0)));
  CHECK(std::isnan(mean_ci95({4.0}).second));
}
