// ztorch command-line front end: run, sweep, oracle, defaults.
#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ztorch/config.hpp"
#include "ztorch/engine.hpp"
#include "ztorch/oracle.hpp"
#include "ztorch/placement.hpp"
#include "ztorch/sweep.hpp"

namespace fs = std::filesystem;
using namespace ztorch;

namespace {

enum Exit : int { kOk = 0, kConfig = 2, kInfeasible = 3, kOracle = 4, kIo = 5 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path default_out() {
  if (const char* env = std::getenv("ZTORCH_OUT_DIR"); env && *env) return env;
  return "ztorch-out";
}

void require_readable(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw IoError("cannot read '" + p.string() + "'");
}

std::ofstream open_out(const fs::path& p) {
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot write '" + p.string() + "'");
  return os;
}

int cmd_run(const std::optional<fs::path>& config, std::optional<std::uint64_t> seed, const std::string& policy,
            const fs::path& out) {
  ScenarioConfig cfg;
  if (config) {
    require_readable(*config);
    cfg = load_scenario(*config);
  }
  if (seed) cfg.workload.seed = *seed;
  cfg.policy = parse_policy(policy);
  cfg.validate();

  const std::string run_id = std::string(to_string(cfg.policy)) + "-seed" + std::to_string(cfg.seed());
  const RunSummary s = summarize(cfg, cfg.policy, run_id);

  auto results = open_out(out / "results.csv");
  write_results_header(results);
  write_results_rows(results, run_id, s.metrics);
  auto summary = open_out(out / "summary.csv");
  write_summary_header(summary);
  write_summary_row(summary, s);
  std::clog << "run " << run_id << ": migrations=" << s.metrics.migrations_total
            << " messages=" << s.metrics.messages_total << " epochs=" << s.metrics.epochs.size() << " -> "
            << out.string() << '\n';
  return kOk;
}

int cmd_sweep(const fs::path& spec_path, int jobs, std::optional<fs::path> out) {
  require_readable(spec_path);
  SweepSpec spec = load_sweep_spec(spec_path);
  ScenarioConfig base;
  if (!spec.base_config.empty()) {
    require_readable(spec.base_config);
    base = load_scenario(spec.base_config);
  }
  const fs::path dir = out ? *out : (spec.out.empty() ? default_out() : spec.out);
  const auto result = run_sweep(spec, base, jobs);
  auto cells = open_out(dir / "sweep_cells.csv");
  write_sweep_cells(cells, spec, result);
  auto agg = open_out(dir / "sweep.csv");
  write_sweep_aggregates(agg, spec, result);
  std::clog << "sweep: " << result.cells.size() << " runs, " << result.failed_cells() << " failed -> "
            << dir.string() << '\n';
  for (const auto& c : result.cells)
    if (!c.ok)
      std::clog << "  failed: " << to_string(c.policy) << ' ' << spec.parameter << '=' << c.value
                << " seed=" << c.seed << ": " << c.error << '\n';
  return kOk;
}

int cmd_oracle(const fs::path& out, bool faulty) {
  testing::set_faulty_tie_break(faulty);
  const auto rep = run_oracle_suite();
  testing::set_faulty_tie_break(false);
  auto os = open_out(out / "oracle_report.csv");
  write_oracle_report(os, rep);
  for (const auto& s : rep.suites)
    std::clog << (s.passed() ? "PASS " : "FAIL ") << s.name << " (" << s.instances << " instances, "
              << s.failures << " failures, " << s.seconds << " s) " << s.detail << '\n';
  return rep.passed() ? kOk : kOracle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"z-TORCH NFV orchestration simulator"};
  app.require_subcommand(1);

  std::optional<fs::path> run_config;
  std::optional<std::uint64_t> run_seed;
  std::string run_policy_name = "ztorch";
  std::optional<fs::path> run_out;
  auto* run = app.add_subcommand("run", "simulate one scenario and write results/summary CSVs");
  run->add_option("--config", run_config, "scenario INI file (defaults when omitted)");
  run->add_option("--seed", run_seed, "override workload.seed");
  run->add_option("--policy", run_policy_name, "ztorch | instant | optimum")->capture_default_str();
  run->add_option("--out", run_out, "output directory (default $ZTORCH_OUT_DIR or ./ztorch-out)");

  fs::path sweep_spec;
  int sweep_jobs = 1;
  std::optional<fs::path> sweep_out;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over sigma or i_count");
  sweep->add_option("--spec", sweep_spec, "sweep INI file")->required();
  sweep->add_option("--jobs", sweep_jobs, "parallel runs")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--out", sweep_out, "output directory");

  std::optional<fs::path> oracle_out;
  bool faulty = false;
  auto* oracle = app.add_subcommand("oracle", "small-instance oracle suites");
  oracle->add_option("--out", oracle_out, "output directory");
  oracle->add_flag("--inject-faulty-tie-break", faulty, "negative control: the suite must fail")
      ->group("");

  auto* defaults = app.add_subcommand("defaults", "print the default scenario config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(run_config, run_seed, run_policy_name, run_out ? *run_out : default_out());
    if (*sweep) return cmd_sweep(sweep_spec, sweep_jobs, sweep_out);
    if (*oracle) return cmd_oracle(oracle_out ? *oracle_out : default_out(), faulty);
    if (*defaults) {
      write_scenario(std::cout, ScenarioConfig{});
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const GuardError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  }
  return kOk;
}
