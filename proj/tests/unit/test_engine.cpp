#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "ztorch/engine.hpp"

using namespace ztorch;

namespace {

ScenarioConfig small(double sigma, std::int64_t horizon = 20000, int n_vnfs = 100) {
  ScenarioConfig c;
  c.workload.n_vnfs = n_vnfs;
  c.workload.sigma = sigma;
  c.workload.horizon = horizon;
  c.workload.seed = 3;
  return c;
}

std::string results_csv(const RunMetrics& m) {
  std::ostringstream os;
  write_results_header(os);
  write_results_rows(os, "r", m);
  return os.str();
}

void check_totals(const RunMetrics& m) {
  std::int64_t mig = 0, msg = 0;
  for (const auto& e : m.epochs) {
    mig += e.migrations;
    msg += e.messages;
  }
  CHECK(mig == m.migrations_total);
  CHECK(msg == m.messages_total);
  CHECK(m.messages_total % m.i_count == 0);
}

}  // namespace

TEST_CASE("noiseless run settles") {
  const auto m = run(small(0.0, 40000));
  check_totals(m);
  CHECK(m.migrations_total == 0);
  for (const auto& e : m.epochs) CHECK(e.deviations == 0);
  CHECK(m.epochs.back().interval_index == 5);
  // Quiet epochs pay more the longer they are, so omega climbs well past the start.
  std::int64_t longest = 0;
  for (const auto& e : m.epochs) longest = std::max(longest, e.omega);
  CHECK(longest >= 1200);
  CHECK(m.mean_omega() > 500);
  CHECK(m.unresolved_violations == 0);
}

TEST_CASE("short horizon has one decisional point") {
  auto c = small(0.0, 900);
  const auto m = run(c);
  REQUIRE(m.epochs.size() == 2);  // the decision at slot 500 plus the tail
  CHECK(m.epochs[0].omega == 500);
  CHECK(m.epochs[1].start_slot == 500);
  CHECK(m.epochs[1].omega == 400);
}

TEST_CASE("runs are deterministic") {
  const auto c = small(0.1, 10000);
  CHECK(results_csv(run(c)) == results_csv(run(c)));
  CHECK(results_csv(run_instant_placement(c)) == results_csv(run_instant_placement(c)));
}

TEST_CASE("serial and parallel kernels give the same run") {
  auto c = small(0.1, 5000, 300);
  c.exec = Exec::serial;
  const auto a = results_csv(run(c));
  c.exec = Exec::parallel;
  CHECK(a == results_csv(run(c)));
}

TEST_CASE("instant placement baseline") {
  const auto quiet = run_instant_placement(small(0.0, 10000));
  CHECK(quiet.migrations_total == 0);
  check_totals(quiet);
  // Finest interval from slot 0 to the end.
  const auto m = run_instant_placement(small(0.1, 10000));
  CHECK(m.messages_total == 100 * (10000 / 2));
  for (const auto& e : m.epochs) CHECK(e.interval_index == 1);
  for (std::size_t k = 0; k + 1 < m.epochs.size(); ++k) CHECK(m.epochs[k].omega == 500);
  CHECK(m.epochs.front().n_groups == 2);
}

TEST_CASE("capacity is asserted every slot") {
  const auto m = run(small(0.1, 10000));
  CHECK(m.capacity_checks == static_cast<std::int64_t>(m.n_nodes) * 10000);
  CHECK(m.unresolved_violations == 0);
  CHECK(m.reactive_migrations <= m.migrations_total);
}

TEST_CASE("z-TORCH adapts under noise") {
  const auto m = run(small(0.1, 20000));
  check_totals(m);
  bool any_dev = false;
  for (const auto& e : m.epochs) {
    any_dev = any_dev || e.deviations > 0;
    CHECK(e.interval_index >= 1);
    CHECK(e.interval_index <= 5);
    CHECK(e.n_groups >= 2);
  }
  CHECK(any_dev);
}

TEST_CASE("optimum baseline") {
  auto c = small(0.0, 2000, 10);
  c.workload.baselines = "low";
  c.n_nodes = 2;
  const auto o = run_optimum(c);
  CHECK(o.optimum_kind == OptimumKind::exact);
  CHECK(o.migrations_total == 0);

  // Under pressure, the clairvoyant count never exceeds either policy.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto p = small(0.08, 3000, 10);
    p.workload.baselines = "low";
    p.workload.seed = seed;
    p.n_nodes = 3;
    p.node_capacity = KpiVector{0.7, 0.7, 0.7};
    const auto opt = run_optimum(p);
    REQUIRE(opt.optimum_kind == OptimumKind::exact);
    const auto z = run(p);
    const auto i = run_instant_placement(p);
    CHECK(opt.migrations_total <= z.migrations_total);
    CHECK(opt.migrations_total <= i.migrations_total);
    const double q = qod(z.migrations_total, opt.migrations_total);
    CHECK(q <= 1.0);
    CHECK(q >= 0.0);
  }

  auto big = small(0.1, 1000, 50);
  const auto lb = run_optimum(big);
  CHECK(lb.optimum_kind == OptimumKind::bounded);
  big.bounded_optimum = false;
  CHECK_THROWS_AS(run_optimum(big), GuardError);
}

TEST_CASE("exact optimum on hand-built traces") {
  const std::vector<KpiVector> caps{{1.0}, {1.0}};
  const std::vector<std::vector<KpiVector>> forced{{{0.5}, {0.4}, {0.5}}, {{0.5}, {0.6}, {0.3}}, {{0.5}, {0.6}, {0.3}}};
  CHECK(optimum_migrations_exact(forced, std::vector<int>{0, 0, 1}, caps) == 1);
  const std::vector<std::vector<KpiVector>> calm(5, {{0.2}, {0.2}, {0.2}});
  CHECK(optimum_migrations_exact(calm, std::vector<int>{0, 0, 1}, caps) == 0);
  // Every VNF has to hop twice between two tight nodes: 0.6 + 0.6 never fits.
  const std::vector<std::vector<KpiVector>> bounce{{{0.6}, {0.3}, {0.3}}, {{0.3}, {0.6}, {0.3}}};
  CHECK(optimum_migrations_exact(bounce, std::vector<int>{0, 1, 1}, caps) == 0);
  const std::vector<std::vector<KpiVector>> impossible{{{0.9}, {0.9}, {0.9}}};
  CHECK_THROWS_AS(optimum_migrations_exact(impossible, std::vector<int>{0, 0, 1}, caps), InfeasibleError);
}

TEST_CASE("optimum lower bound") {
  const std::vector<KpiVector> caps{{1.0}, {1.0}};
  OptimumLowerBound lb({0, 0, 0, 1}, caps);
  lb.observe(std::vector<KpiVector>{{0.3}, {0.3}, {0.3}, {0.1}});
  CHECK(lb.value() == 0);
  // Node 0 at 1.5: the largest resident alone brings it to 1.0.
  lb.observe(std::vector<KpiVector>{{0.5}, {0.5}, {0.5}, {0.1}});
  CHECK(lb.value() == 1);
  lb.observe(std::vector<KpiVector>{{0.2}, {0.2}, {0.2}, {0.1}});
  CHECK(lb.value() == 1);
  // Never above the exact answer.
  const std::vector<std::vector<KpiVector>> slots{{{0.3}, {0.3}, {0.3}, {0.1}}, {{0.5}, {0.5}, {0.5}, {0.1}}};
  CHECK(optimum_migrations_exact(slots, std::vector<int>{0, 0, 0, 1}, caps) >= 1);
}

TEST_CASE("metrics") {
  CHECK(qod(10, 10) == 1.0);
  CHECK(qod(20, 10) == 0.5);
  CHECK(qod(0, 0) == 1.0);
  CHECK(qod(5, 9) == 1.0);
  CHECK(normalized_monitoring_load(100, 100) == 1.0);
  CHECK(normalized_monitoring_load(4, 100) == doctest::Approx(0.04));
  CHECK_THROWS_AS(normalized_monitoring_load(1, 0), ContractViolation);

  // Noiseless: z-TORCH drifts to the coarsest interval, so the load ratio
  // approaches 2/50.
  const auto c = small(0.0, 100000);
  const double load = normalized_monitoring_load(run(c).messages_total, run_instant_placement(c).messages_total);
  CHECK(load < 0.06);
  CHECK(load > 0.04);
}

TEST_CASE("scenario validation") {
  auto c = small(0.1);
  c.workload.horizon = 100;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small(0.1);
  c.initial_n_groups = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small(0.1);
  c.max_n_groups = 20;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small(0.1);
  c.node_capacity = KpiVector{1, 1};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(parse_policy("greedy"), ConfigError);
  CHECK(parse_placement_trigger("any_rebind") == PlacementTrigger::any_rebind);
}

TEST_CASE("summary and results CSV layout") {
  const auto m = run(small(0.1, 3000));
  RunSummary s;
  s.run_id = "x";
  s.metrics = m;
  s.qod = 0.5;
  std::ostringstream os;
  write_summary_header(os);
  write_summary_row(os, s);
  const auto text = os.str();
  CHECK(text.rfind("# schema: ztorch.summary/1\n", 0) == 0);
  CHECK(text.find(",qod,monitoring_load\n") != std::string::npos);
  CHECK(text.find(",0.5,\n") != std::string::npos);
  const auto r = results_csv(m);
  CHECK(r.find("run_id,policy,seed,sigma,i_count,tau,omega,interval_index,n_groups,deviations,migrations,messages\n") !=
        std::string::npos);
}
