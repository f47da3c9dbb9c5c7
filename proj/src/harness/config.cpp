#include "crnsim/harness/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace crnsim {
namespace {

using nlohmann::json;

void reject_unknown(const json& block, const std::set<std::string>& known, const char* where) {
  if (!block.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : block.items())
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& block, const char* key, T& out) {
  if (!block.contains(key)) return;
  try {
    out = block.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

// Accepts a scalar or a list.
template <class T>
void read_list(const json& block, const char* key, std::vector<T>& out) {
  if (!block.contains(key)) return;
  const json& v = block.at(key);
  try {
    out = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

ScenarioConfig parse_scenario(const json& j) {
  reject_unknown(j, {"num_cus", "num_aps", "num_channels", "area_m", "power_budget",
                     "noise_floor", "seed", "d_min"}, "scenario");
  ScenarioConfig sc;
  read(j, "num_cus", sc.num_cus);
  read(j, "num_aps", sc.num_aps);
  read(j, "num_channels", sc.num_channels);
  read(j, "area_m", sc.area_m);
  read(j, "power_budget", sc.power_budget);
  read(j, "noise_floor", sc.noise_floor);
  read(j, "seed", sc.seed);
  read(j, "d_min", sc.d_min);
  return sc;
}

AlgorithmConfig parse_algorithm(const json& j) {
  reject_unknown(j, {"name", "memory", "cost", "max_iters", "step_exponent", "inner",
                     "certify_tol"}, "algorithm");
  AlgorithmConfig ac;
  std::string name = "jaspa", inner = "siwf";
  read(j, "name", name);
  read(j, "inner", inner);
  ac.algo = parse_algo(name);
  if (inner == "siwf")
    ac.inner = InnerSolver::kSequential;
  else if (inner == "aiwf")
    ac.inner = InnerSolver::kAveraged;
  else
    throw ConfigError("inner must be siwf or aiwf");
  read(j, "memory", ac.memory);
  read(j, "cost", ac.cost);
  read(j, "max_iters", ac.max_iters);
  read(j, "step_exponent", ac.step_exponent);
  read(j, "certify_tol", ac.certify_tol);
  return ac;
}

ExperimentSpec parse_experiment(const json& j) {
  reject_unknown(j, {"name", "algos", "n", "w", "k", "costs", "seeds", "seed_offset", "oracle",
                     "x", "metric"}, "experiment");
  ExperimentSpec e;
  read(j, "name", e.name);
  read_list(j, "algos", e.algos);
  read_list(j, "n", e.n);
  read_list(j, "w", e.w);
  read_list(j, "k", e.k);
  read_list(j, "costs", e.costs);
  read(j, "seeds", e.seeds);
  read(j, "seed_offset", e.seed_offset);
  read(j, "oracle", e.oracle);
  read(j, "x", e.x);
  read(j, "metric", e.metric);
  return e;
}

ExperimentSpec make(std::string name, std::vector<std::string> algos, std::vector<int> n,
                    std::vector<int> w, std::vector<int> k, std::vector<double> costs, int seeds,
                    bool oracle, std::string x, std::string metric) {
  ExperimentSpec e;
  e.name = std::move(name);
  e.algos = std::move(algos);
  e.n = std::move(n);
  e.w = std::move(w);
  e.k = std::move(k);
  e.costs = std::move(costs);
  e.seeds = seeds;
  e.oracle = oracle;
  e.x = std::move(x);
  e.metric = std::move(metric);
  return e;
}

}  // namespace

Algo parse_algo(const std::string& name) {
  if (name == "jaspa") return Algo::kJaspa;
  if (name == "se") return Algo::kSe;
  if (name == "si") return Algo::kSi;
  if (name == "jjaspa") return Algo::kJJaspa;
  if (name == "closest") return Algo::kClosest;
  if (name == "multi") return Algo::kMulti;
  throw ConfigError("unknown algorithm '" + name + "' (jaspa|se|si|jjaspa|closest|multi)");
}

std::string algo_name(Algo algo) {
  switch (algo) {
    case Algo::kJaspa: return "jaspa";
    case Algo::kSe: return "se";
    case Algo::kSi: return "si";
    case Algo::kJJaspa: return "jjaspa";
    case Algo::kClosest: return "closest";
    case Algo::kMulti: return "multi";
  }
  return "?";
}

bool is_learning(Algo algo) { return algo != Algo::kClosest && algo != Algo::kMulti; }

void AlgorithmConfig::validate() const {
  if (memory < 1) throw ConfigError("memory must be >= 1");
  if (!(cost >= 0.0)) throw ConfigError("cost must be >= 0");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(step_exponent > 0.5 && step_exponent <= 1.0))
    throw ConfigError("step_exponent must lie in (0.5, 1]");
  if (!(certify_tol > 0.0)) throw ConfigError("certify_tol must be > 0");
}

LearnConfig AlgorithmConfig::learn_config(int num_channels) const {
  validate();
  LearnConfig lc;
  lc.memory = memory;
  lc.cost = cost / num_channels;
  lc.max_iters = max_iters;
  lc.schedule = StepsizeSchedule(step_exponent);
  lc.inner.solver = inner;
  lc.inner.schedule = StepsizeSchedule(step_exponent);
  lc.certify_tol = certify_tol;
  return lc;
}

void ExperimentSpec::validate() const {
  if (name.empty()) throw ConfigError("experiment needs a name");
  if (algos.empty() || n.empty() || w.empty() || k.empty() || costs.empty())
    throw ConfigError("experiment '" + name + "' has an empty sweep list");
  for (const auto& a : algos) parse_algo(a);
  for (double c : costs)
    if (!(c >= 0.0)) throw ConfigError("costs must be >= 0");
  if (seeds < 1) throw ConfigError("seeds must be >= 1");
  if (x != "n" && x != "w" && x != "k" && x != "cost") throw ConfigError("x must be n|w|k|cost");
  if (metric != "iters" && metric != "sum_rate") throw ConfigError("metric must be iters|sum_rate");
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      throw ConfigError("experiment name may use letters, digits, '_' and '-' only");
}

RunFile parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root, {"scenario", "algorithm", "experiments"}, "config");
  RunFile rf;
  if (root.contains("scenario")) rf.scenario = parse_scenario(root["scenario"]);
  if (root.contains("algorithm")) rf.algorithm = parse_algorithm(root["algorithm"]);
  if (root.contains("experiments")) {
    if (!root["experiments"].is_array()) throw ConfigError("experiments must be a list");
    for (const auto& e : root["experiments"]) rf.experiments.push_back(parse_experiment(e));
  }
  rf.scenario.validate();
  rf.algorithm.validate();
  for (const auto& e : rf.experiments) e.validate();
  return rf;
}

RunFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<ExperimentSpec> desk_experiments() {
  return {
      make("convergence", {"jaspa", "se", "si", "jjaspa"}, {4, 6, 8, 10}, {3}, {12}, {0.0}, 20,
           false, "n", "iters"),
      make("cost", {"jaspa", "si"}, {8}, {4}, {16}, {0.0, 3.0}, 20, false, "cost", "iters"),
      make("throughput", {"jaspa", "closest", "multi"}, {8}, {1, 2, 3, 4}, {16}, {0.0}, 20, true,
           "w", "sum_rate"),
      make("throughput_cost", {"jaspa"}, {8}, {1, 2, 3, 4}, {16}, {3.0}, 20, true, "w",
           "sum_rate"),
  };
}

std::vector<ExperimentSpec> large_experiments() {
  return {
      make("convergence", {"jaspa", "se", "si", "jjaspa"}, {10, 15, 20, 25, 30}, {4}, {128},
           {0.0}, 100, false, "n", "iters"),
      make("cost", {"jaspa", "si", "jjaspa"}, {20}, {4}, {128}, {0.0, 3.0}, 100, false, "cost",
           "iters"),
      make("throughput", {"jaspa", "closest", "multi"}, {30}, {1, 2, 4, 8}, {128}, {0.0, 3.0},
           100, false, "w", "sum_rate"),
  };
}

}  // namespace crnsim
