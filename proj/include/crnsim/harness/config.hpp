#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crnsim/learn.hpp"
#include "crnsim/model.hpp"

namespace crnsim {

enum class Algo { kJaspa, kSe, kSi, kJJaspa, kClosest, kMulti };

/// Accepts jaspa|se|si|jjaspa|closest|multi; throws ConfigError otherwise.
Algo parse_algo(const std::string& name);
std::string algo_name(Algo algo);
bool is_learning(Algo algo);

/// Algorithm settings as given by the user. Connection costs are in bit/s
/// with every channel carrying 1 Hz; rates are normalized by K internally,
/// so the learner sees cost / K.
struct AlgorithmConfig {
  Algo algo = Algo::kJaspa;
  int memory = 10;
  double cost = 0.0;
  int max_iters = 500;
  double step_exponent = kDefaultStepExponent;
  InnerSolver inner = InnerSolver::kSequential;
  double certify_tol = 1e-6;

  void validate() const;
  LearnConfig learn_config(int num_channels) const;
};

/// One sweep: the product of every list below, over seeds
/// seed_offset .. seed_offset + seeds - 1.
struct ExperimentSpec {
  std::string name;
  std::vector<std::string> algos;  // algo names
  std::vector<int> n, w, k;
  std::vector<double> costs{0.0};
  int seeds = 20;
  std::uint64_t seed_offset = 0;
  bool oracle = false;  // exhaustive T* and per-row ratio
  std::string x = "n";  // swept axis in the plot: n|w|k|cost
  std::string metric = "iters";  // iters|sum_rate

  void validate() const;
};

struct RunFile {
  ScenarioConfig scenario;
  AlgorithmConfig algorithm;
  std::vector<ExperimentSpec> experiments;
};

/// Parses the JSON config: optional "scenario", "algorithm" and
/// "experiments" blocks. Unknown keys are rejected.
RunFile parse_config(const std::string& json_text);
RunFile load_config(const std::string& path);

/// Built-in sweeps. The desk set keeps N <= 10 and K <= 32; the large set
/// uses 100 seeds per point and no exhaustive oracle.
std::vector<ExperimentSpec> desk_experiments();
std::vector<ExperimentSpec> large_experiments();

}  // namespace crnsim
