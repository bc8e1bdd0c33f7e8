#include "ztorch/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <type_traits>

#include "ztorch/csv.hpp"

namespace ztorch {

namespace pt = boost::property_tree;

namespace {

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) out += ", ";
    if constexpr (std::is_floating_point_v<T>)
      out += csv::format_double(xs[k]);
    else
      out += std::to_string(xs[k]);
  }
  return out;
}

double as_double(const std::string& v) { return csv::parse_double(csv::trim(v)); }

long long as_int(const std::string& v) { return csv::parse_int(csv::trim(v)); }

bool as_bool(const std::string& raw) {
  const auto v = csv::trim(raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected true/false");
}

std::string as_word(const std::string& raw) { return std::string(csv::trim(raw)); }

template <class T, class F>
std::vector<T> as_list(const std::string& raw, F conv) {
  std::vector<T> out;
  for (auto part : csv::split(raw, ','))
    if (!csv::trim(part).empty()) out.push_back(static_cast<T>(conv(std::string(part))));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

// One entry per accepted key; the table doubles as the schema.
const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"workload",
       {
           {"n_vnfs", [](auto& c, auto& v) { c.workload.n_vnfs = static_cast<int>(as_int(v)); }},
           {"n_baselines", [](auto& c, auto& v) { c.workload.n_baselines = static_cast<int>(as_int(v)); }},
           {"baselines", [](auto& c, auto& v) { c.workload.baselines = as_word(v); }},
           {"sigma", [](auto& c, auto& v) { c.workload.sigma = as_double(v); }},
           {"pareto_shape", [](auto& c, auto& v) { c.workload.pareto_shape = as_double(v); }},
           {"horizon", [](auto& c, auto& v) { c.workload.horizon = as_int(v); }},
           {"seed", [](auto& c, auto& v) { c.workload.seed = static_cast<std::uint64_t>(as_int(v)); }},
           {"dims", [](auto& c, auto& v) { c.workload.dims = static_cast<std::size_t>(as_int(v)); }},
       }},
      {"nodes",
       {
           {"capacity",
            [](auto& c, auto& v) {
              const auto xs = as_list<double>(v, as_double);
              if (xs.size() > kMaxKpis) throw std::invalid_argument("too many entries");
              c.node_capacity = KpiVector(std::span<const double>(xs));
            }},
           {"count", [](auto& c, auto& v) { c.n_nodes = static_cast<int>(as_int(v)); }},
           {"headroom", [](auto& c, auto& v) { c.node_headroom = as_double(v); }},
           {"capacity_scale", [](auto& c, auto& v) { c.capacity_scale = as_double(v); }},
       }},
      {"affinity",
       {
           {"initial_groups", [](auto& c, auto& v) { c.initial_n_groups = static_cast<int>(as_int(v)); }},
           {"max_groups", [](auto& c, auto& v) { c.max_n_groups = static_cast<int>(as_int(v)); }},
           {"rebind_strikes", [](auto& c, auto& v) { c.rebind_strikes = static_cast<int>(as_int(v)); }},
           {"grow_rebind", [](auto& c, auto& v) { c.grow_rebind = as_bool(v); }},
       }},
      {"placement",
       {
           {"trigger", [](auto& c, auto& v) { c.placement_trigger = parse_placement_trigger(as_word(v)); }},
       }},
      {"monitoring",
       {
           {"intervals", [](auto& c, auto& v) { c.intervals = as_list<std::int64_t>(v, as_int); }},
           {"initial_index", [](auto& c, auto& v) { c.initial_interval_index = static_cast<int>(as_int(v)); }},
           {"default_index", [](auto& c, auto& v) { c.default_interval_index = static_cast<int>(as_int(v)); }},
       }},
      {"epoch",
       {
           {"initial_omega", [](auto& c, auto& v) { c.initial_omega = as_int(v); }},
       }},
      {"qlearning",
       {
           {"beta", [](auto& c, auto& v) { c.qlearning.beta = as_double(v); }},
           {"psi", [](auto& c, auto& v) { c.qlearning.psi = as_double(v); }},
           {"phi", [](auto& c, auto& v) { c.qlearning.phi = as_double(v); }},
           {"phi_decay", [](auto& c, auto& v) { c.qlearning.phi_decay = as_double(v); }},
           {"step", [](auto& c, auto& v) { c.qlearning.step = as_int(v); }},
           {"actions", [](auto& c, auto& v) { c.qlearning.action_multipliers = as_list<int>(v, as_int); }},
           {"state_bounds", [](auto& c, auto& v) { c.qlearning.state_bounds = as_list<std::int64_t>(v, as_int); }},
           {"omega_min", [](auto& c, auto& v) { c.qlearning.omega_min = as_int(v); }},
           {"omega_max", [](auto& c, auto& v) { c.qlearning.omega_max = as_int(v); }},
       }},
      {"engine",
       {
           {"policy", [](auto& c, auto& v) { c.policy = parse_policy(as_word(v)); }},
           {"bounded_optimum", [](auto& c, auto& v) { c.bounded_optimum = as_bool(v); }},
           {"exec",
            [](auto& c, auto& v) {
              const auto w = as_word(v);
              if (w == "serial") c.exec = Exec::serial;
              else if (w == "parallel") c.exec = Exec::parallel;
              else throw std::invalid_argument("expected serial or parallel");
            }},
       }},
  };
  return s;
}

}  // namespace

ScenarioConfig parse_scenario(std::istream& is, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  ScenarioConfig cfg;
  const auto& sch = schema();
  for (const auto& [section, body] : tree) {
    const auto sec = sch.find(section);
    if (sec == sch.end()) {
      if (!body.data().empty()) throw ConfigError(source + ": key '" + section + "' must sit inside a section");
      throw ConfigError(source + ": unknown section '" + section + "'");
    }
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      const auto it = sec->second.find(key);
      if (it == sec->second.end()) throw ConfigError(source + ": unknown key '" + name + "'");
      try {
        it->second(cfg, node.data());
      } catch (const ConfigError& e) {
        throw ConfigError(source + ": bad value for '" + name + "': " + e.what());
      } catch (const std::exception& e) {
        throw ConfigError(source + ": bad value for '" + name + "' ('" + node.data() + "'): " + e.what());
      }
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_scenario(in, path.string());
}

void write_scenario(std::ostream& os, const ScenarioConfig& c) {
  const auto exec = c.exec == Exec::serial ? "serial" : "parallel";
  os << "[workload]\n"
     << "n_vnfs = " << c.workload.n_vnfs << '\n'
     << "n_baselines = " << c.workload.n_baselines << '\n'
     << "baselines = " << c.workload.baselines << '\n'
     << "sigma = " << csv::format_double(c.workload.sigma) << '\n'
     << "pareto_shape = " << csv::format_double(c.workload.pareto_shape) << '\n'
     << "horizon = " << c.workload.horizon << '\n'
     << "seed = " << c.workload.seed << '\n'
     << "dims = " << c.workload.dims << "\n\n"
     << "[nodes]\n"
     << "capacity = " << join(std::vector<double>(c.node_capacity.begin(), c.node_capacity.end())) << '\n'
     << "count = " << c.n_nodes << '\n'
     << "headroom = " << csv::format_double(c.node_headroom) << '\n'
     << "capacity_scale = " << csv::format_double(c.capacity_scale) << "\n\n"
     << "[affinity]\n"
     << "initial_groups = " << c.initial_n_groups << '\n'
     << "max_groups = " << c.max_n_groups << '\n'
     << "rebind_strikes = " << c.rebind_strikes << '\n'
     << "grow_rebind = " << (c.grow_rebind ? "true" : "false") << "\n\n"
     << "[placement]\n"
     << "trigger = " << to_string(c.placement_trigger) << "\n\n"
     << "[monitoring]\n"
     << "intervals = " << join(c.intervals) << '\n'
     << "initial_index = " << c.initial_interval_index << '\n'
     << "default_index = " << c.default_interval_index << "\n\n"
     << "[epoch]\n"
     << "initial_omega = " << c.initial_omega << "\n\n"
     << "[qlearning]\n"
     << "beta = " << csv::format_double(c.qlearning.beta) << '\n'
     << "psi = " << csv::format_double(c.qlearning.psi) << '\n'
     << "phi = " << csv::format_double(c.qlearning.phi) << '\n'
     << "phi_decay = " << csv::format_double(c.qlearning.phi_decay) << '\n'
     << "step = " << c.qlearning.step << '\n'
     << "actions = " << join(c.qlearning.action_multipliers) << '\n'
     << "state_bounds = " << join(c.qlearning.state_bounds) << '\n'
     << "omega_min = " << c.qlearning.omega_min << '\n'
     << "omega_max = " << c.qlearning.omega_max << "\n\n"
     << "[engine]\n"
     << "policy = " << to_string(c.policy) << '\n'
     << "bounded_optimum = " << (c.bounded_optimum ? "true" : "false") << '\n'
     << "exec = " << exec << '\n';
}

}  // namespace ztorch
