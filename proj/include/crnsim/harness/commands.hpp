#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "crnsim/harness/config.hpp"
#include "crnsim/learn.hpp"

namespace crnsim {

/// Seed of the algorithm's random stream for a given snapshot seed; keeps
/// the two streams apart while both derive from the one user seed.
std::uint64_t run_seed(std::uint64_t seed);

/// Runs one algorithm on one snapshot. Baselines yield a single-row trace
/// marked converged; multi-connectivity rows describe the merged network.
RunTrace run_algorithm(const NetworkInstance& inst, const AlgorithmConfig& config,
                       std::uint64_t seed);

struct RunRequest {
  ScenarioConfig scenario;  // scenario.seed selects the snapshot
  AlgorithmConfig algorithm;
  std::string out_path;  // empty writes the trace to out
};

/// Exit codes: 0 converged, 2 not converged, 1 configuration error.
int cmd_run(const RunRequest& req, std::ostream& out, std::ostream& err);

inline constexpr const char* kSummaryHeader =
    "experiment,algo,n,w,k,seed,iters_to_converge,sum_rate,sep,ratio_to_Tstar";

struct SummaryRow {
  std::string experiment;
  std::string algo;  // algorithm name, "+c<cost>" appended when cost > 0
  int n = 0, w = 0, k = 0;
  std::uint64_t seed = 0;
  std::optional<long> iters;  // -1 when a learner did not converge
  double sum_rate = 0.0;
  double sep = 0.0;
  std::optional<double> tstar;
  std::optional<double> ratio;
  double cost = 0.0;
};

/// Runs every sweep on a bounded worker pool. Rows come back ordered by
/// experiment, algorithm, cost, n, w, k and seed, whatever the pool size.
std::vector<SummaryRow> run_experiments(const std::vector<ExperimentSpec>& specs,
                                        const ScenarioConfig& base,
                                        const AlgorithmConfig& algorithm);

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

/// gnuplot script with the per-series means inlined as data blocks.
std::string plot_script(const ExperimentSpec& spec, const std::vector<SummaryRow>& rows);

struct ExperimentRequest {
  std::optional<std::string> config_path;
  bool large = false;
  std::string out_path = "summary.csv";  // "-" writes to out
  std::string plot_dir;  // empty: next to out_path, none when writing to out
};

int cmd_experiment(const ExperimentRequest& req, std::ostream& out, std::ostream& err);

struct VerifyRequest {
  bool quick = false;
  bool mutate = false;  // flip the sign of the potential
  std::vector<int> only;
};

/// 0 when every selected criterion passes, 1 otherwise.
int cmd_verify(const VerifyRequest& req, std::ostream& out);

}  // namespace crnsim
