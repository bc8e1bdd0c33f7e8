#include "ztorch/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "ztorch/config.hpp"
#include "ztorch/csv.hpp"

namespace ztorch {

namespace {

constexpr Policy kPolicies[] = {Policy::ztorch, Policy::instant, Policy::optimum};

RunSummary make_summary(const std::string& run_id, RunMetrics m, const RunMetrics* optimum,
                        const RunMetrics* instant) {
  RunSummary s;
  s.run_id = run_id;
  if (optimum) {
    s.optimum_migrations = optimum->migrations_total;
    s.optimum_kind = optimum->optimum_kind;
    s.qod = qod(m.migrations_total, optimum->migrations_total);
  }
  if (instant && m.policy != Policy::optimum && instant->messages_total > 0)
    s.monitoring_load = normalized_monitoring_load(m.messages_total, instant->messages_total);
  s.metrics = std::move(m);
  return s;
}

template <class F>
std::optional<RunMetrics> try_run(F&& f) {
  try {
    return f();
  } catch (const InfeasibleError&) {
  } catch (const GuardError&) {
  }
  return std::nullopt;
}

}  // namespace

RunSummary summarize(const ScenarioConfig& cfg, Policy policy, const std::string& run_id) {
  ScenarioConfig c = cfg;
  c.policy = policy;
  RunMetrics m = run_policy(c);
  std::optional<RunMetrics> opt, inst;
  if (policy == Policy::optimum)
    opt = m;
  else
    opt = try_run([&] { return run_optimum(cfg); });
  if (policy == Policy::instant)
    inst = m;
  else if (policy == Policy::ztorch)
    inst = try_run([&] { return run_instant_placement(cfg); });
  return make_summary(run_id, std::move(m), opt ? &*opt : nullptr, inst ? &*inst : nullptr);
}

std::vector<RunSummary> summarize_all(const ScenarioConfig& cfg, const std::string& run_id) {
  RunMetrics z = run(cfg);
  RunMetrics i = run_instant_placement(cfg);
  RunMetrics o = run_optimum(cfg);
  std::vector<RunSummary> out;
  out.push_back(make_summary(run_id, z, &o, &i));
  out.push_back(make_summary(run_id, i, &o, &i));
  out.push_back(make_summary(run_id, o, &o, nullptr));
  return out;
}

void SweepSpec::validate() const {
  if (parameter != "sigma" && parameter != "i_count")
    throw ConfigError("sweep.parameter must be sigma or i_count, got '" + parameter + "'");
  if (values.empty()) throw ConfigError("sweep.values must not be empty");
  if (seeds < 1) throw ConfigError("sweep.seeds must be >= 1");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("sweep.values must be finite and >= 0");
    if (parameter == "i_count" && (v != std::floor(v) || v < 1.0))
      throw ConfigError("sweep.values must be positive integers for i_count");
  }
}

ScenarioConfig SweepSpec::apply(const ScenarioConfig& base, double value, std::uint64_t seed) const {
  ScenarioConfig c = base;
  if (parameter == "sigma")
    c.workload.sigma = value;
  else
    c.workload.n_vnfs = static_cast<int>(value);
  c.workload.seed = seed;
  c.validate();
  return c;
}

SweepSpec parse_sweep_spec(std::istream& is, const std::string& source, const std::filesystem::path& base_dir) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  SweepSpec spec;
  for (const auto& [section, body] : tree) {
    if (section != "sweep") throw ConfigError(source + ": unknown section '" + section + "'");
    for (const auto& [key, node] : body) {
      const std::string& v = node.data();
      try {
        if (key == "parameter") {
          spec.parameter = std::string(csv::trim(v));
        } else if (key == "values") {
          spec.values.clear();
          for (auto part : csv::split(v, ','))
            if (!csv::trim(part).empty()) spec.values.push_back(csv::parse_double(part));
        } else if (key == "seeds") {
          spec.seeds = static_cast<int>(csv::parse_int(v));
        } else if (key == "first_seed") {
          spec.first_seed = static_cast<std::uint64_t>(csv::parse_int(v));
        } else if (key == "base_config") {
          std::filesystem::path p(std::string(csv::trim(v)));
          spec.base_config = p.is_relative() && !p.empty() ? base_dir / p : p;
        } else if (key == "out") {
          spec.out = std::string(csv::trim(v));
        } else {
          throw ConfigError(source + ": unknown key 'sweep." + key + "'");
        }
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(source + ": bad value for 'sweep." + key + "': " + e.what());
      }
    }
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep spec '" + path.string() + "'");
  return parse_sweep_spec(in, path.string(), path.parent_path());
}

std::size_t SweepResult::failed_cells() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) { return !c.ok; }));
}

std::pair<double, double> mean_ci95(const std::vector<double>& xs) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (xs.empty()) return {nan, nan};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double n = static_cast<double>(xs.size());
  const double mean = sum / n;
  if (xs.size() < 2) return {mean, nan};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  return {mean, boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(n)};
}

SweepResult run_sweep(const SweepSpec& spec, const ScenarioConfig& base, int jobs) {
  spec.validate();
  const std::size_t n_values = spec.values.size();
  const std::size_t n_seeds = static_cast<std::size_t>(spec.seeds);
  const std::size_t n_tasks = n_values * n_seeds;
  constexpr std::size_t n_pol = std::size(kPolicies);

  // Slot layout: [policy][value][seed], so the merge is a plain scan.
  std::vector<SweepCell> cells(n_pol * n_tasks);
  auto slot = [&](std::size_t p, std::size_t v, std::size_t s) -> SweepCell& {
    return cells[(p * n_values + v) * n_seeds + s];
  };

  auto work = [&](std::size_t task) {
    const std::size_t v = task / n_seeds;
    const std::size_t s = task % n_seeds;
    const std::uint64_t seed = spec.first_seed + s;
    const double value = spec.values[v];
    for (std::size_t p = 0; p < n_pol; ++p) {
      auto& c = slot(p, v, s);
      c.policy = kPolicies[p];
      c.value_index = v;
      c.value = value;
      c.seed = seed;
    }
    const std::string run_id = spec.parameter + "=" + csv::format_double(value) + "/seed=" + std::to_string(seed);
    std::optional<RunMetrics> got[n_pol];
    ScenarioConfig cfg;
    try {
      cfg = spec.apply(base, value, seed);
      cfg.exec = Exec::serial;
    } catch (const std::exception& e) {
      for (std::size_t p = 0; p < n_pol; ++p) slot(p, v, s).error = e.what();
      return;
    }
    for (std::size_t p = 0; p < n_pol; ++p) {
      try {
        ScenarioConfig c = cfg;
        c.policy = kPolicies[p];
        got[p] = run_policy(c);
      } catch (const std::exception& e) {
        slot(p, v, s).error = e.what();
      }
    }
    const RunMetrics* opt = got[2] ? &*got[2] : nullptr;
    const RunMetrics* inst = got[1] ? &*got[1] : nullptr;
    for (std::size_t p = 0; p < n_pol; ++p) {
      if (!got[p]) continue;
      auto& c = slot(p, v, s);
      c.summary = make_summary(run_id, std::move(*got[p]), opt, p == 2 ? nullptr : inst);
      c.ok = true;
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n_tasks)));
  if (workers == 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) work(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < n_tasks; t = next++) work(t);
      });
  }

  SweepResult r;
  r.cells = std::move(cells);
  for (std::size_t p = 0; p < n_pol; ++p)
    for (std::size_t v = 0; v < n_values; ++v) {
      SweepAggregate a;
      a.policy = kPolicies[p];
      a.value = spec.values[v];
      std::vector<double> q, l;
      double mig = 0.0, om = 0.0, ng = 0.0, ix = 0.0;
      for (std::size_t s = 0; s < n_seeds; ++s) {
        const auto& c = r.cells[(p * n_values + v) * n_seeds + s];
        if (!c.ok) {
          ++a.failed;
          continue;
        }
        ++a.runs;
        if (c.summary.qod) q.push_back(*c.summary.qod);
        if (c.summary.monitoring_load) l.push_back(*c.summary.monitoring_load);
        mig += static_cast<double>(c.summary.metrics.migrations_total);
        om += c.summary.metrics.mean_omega();
        ng += c.summary.metrics.mean_n_groups();
        ix += c.summary.metrics.mean_interval_index();
      }
      a.qod_n = static_cast<int>(q.size());
      std::tie(a.qod_mean, a.qod_ci) = mean_ci95(q);
      a.load_n = static_cast<int>(l.size());
      std::tie(a.load_mean, a.load_ci) = mean_ci95(l);
      const double runs = a.runs > 0 ? a.runs : std::numeric_limits<double>::quiet_NaN();
      a.migrations_mean = mig / runs;
      a.mean_omega = om / runs;
      a.mean_n_groups = ng / runs;
      a.mean_interval_index = ix / runs;
      r.aggregates.push_back(a);
    }
  return r;
}

namespace {

std::string num(double v) { return std::isfinite(v) ? csv::format_double(v) : std::string(); }

}  // namespace

void write_sweep_cells(std::ostream& os, const SweepSpec& spec, const SweepResult& r) {
  os << csv::schema_line(kSweepCellsSchema) << '\n'
     << "policy,parameter,value,seed,status,migrations_total,messages_total,optimum_migrations,qod,"
        "monitoring_load,mean_omega,mean_n_groups,mean_interval_index,error\n";
  for (const auto& c : r.cells) {
    os << to_string(c.policy) << ',' << spec.parameter << ',' << csv::format_double(c.value) << ',' << c.seed << ',';
    if (!c.ok) {
      std::string msg = c.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      os << "failed,,,,,,,,," << msg << '\n';
      continue;
    }
    const auto& s = c.summary;
    os << "ok," << s.metrics.migrations_total << ',' << s.metrics.messages_total << ',';
    if (s.optimum_migrations) os << *s.optimum_migrations;
    os << ',' << (s.qod ? num(*s.qod) : "") << ',' << (s.monitoring_load ? num(*s.monitoring_load) : "") << ','
       << num(s.metrics.mean_omega()) << ',' << num(s.metrics.mean_n_groups()) << ','
       << num(s.metrics.mean_interval_index()) << ",\n";
  }
}

void write_sweep_aggregates(std::ostream& os, const SweepSpec& spec, const SweepResult& r) {
  os << csv::schema_line(kSweepSchema) << '\n'
     << "policy,parameter,value,runs,failed,qod_mean,qod_ci95,monitoring_load_mean,monitoring_load_ci95,"
        "migrations_mean,mean_omega,mean_n_groups,mean_interval_index\n";
  for (const auto& a : r.aggregates)
    os << to_string(a.policy) << ',' << spec.parameter << ',' << csv::format_double(a.value) << ',' << a.runs << ','
       << a.failed << ',' << num(a.qod_mean) << ',' << num(a.qod_ci) << ',' << num(a.load_mean) << ','
       << num(a.load_ci) << ',' << num(a.migrations_mean) << ',' << num(a.mean_omega) << ','
       << num(a.mean_n_groups) << ',' << num(a.mean_interval_index) << '\n';
}

}  // namespace ztorch
