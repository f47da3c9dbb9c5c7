#include <iostream>

#include "CLI11.hpp"
#include "crnsim/harness/commands.hpp"

using namespace crnsim;

int main(int argc, char** argv) {
  CLI::App app{"Joint AP selection and power allocation simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one algorithm on one random snapshot");
  std::string algo = "jaspa", config_path, inner = "siwf";
  ScenarioConfig sc;
  AlgorithmConfig ac;
  std::string trace_out;
  run->add_option("--config", config_path, "JSON file with scenario/algorithm blocks");
  run->add_option("--algo", algo, "jaspa|se|si|jjaspa|closest|multi");
  run->add_option("--n", sc.num_cus, "number of CUs");
  run->add_option("--w", sc.num_aps, "number of APs");
  run->add_option("--k", sc.num_channels, "number of channels");
  run->add_option("--seed", sc.seed, "snapshot seed (the algorithm stream derives from it)");
  run->add_option("--memory", ac.memory, "memory length M");
  run->add_option("--cost", ac.cost, "connection cost in bit/s per 1 Hz channel");
  run->add_option("--max-iters", ac.max_iters, "outer iteration cap");
  run->add_option("--step-exponent", ac.step_exponent, "stepsize decay exponent in (0.5, 1]");
  run->add_option("--inner", inner, "inner solver: siwf|aiwf");
  run->add_option("--area", sc.area_m, "side of the square area in meters");
  run->add_option("--budget", sc.power_budget, "per-CU power budget");
  run->add_option("--noise", sc.noise_floor, "noise power per channel");
  run->add_option("--out", trace_out, "trace CSV path (stdout when omitted)");

  auto* exp = app.add_subcommand("experiment", "Run seeded sweeps, write a summary CSV and plot scripts");
  ExperimentRequest ereq;
  exp->add_option("--config", ereq.config_path, "JSON file with an experiments list");
  exp->add_flag("--large", ereq.large, "100-seed K=128 sweeps (slow)");
  exp->add_option("--out", ereq.out_path, "summary CSV path, '-' for stdout");
  exp->add_option("--plots", ereq.plot_dir, "directory for gnuplot scripts");

  auto* ver = app.add_subcommand("verify", "Run the acceptance suite");
  VerifyRequest vreq;
  ver->add_flag("--quick", vreq.quick, "reduced seed counts");
  ver->add_flag("--mutate", vreq.mutate, "inject a sign error into the potential");
  ver->add_option("--only", vreq.only, "criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (*run) {
    RunRequest req;
    try {
      if (!config_path.empty()) {
        const RunFile rf = load_config(config_path);
        // Flags given on the command line win over the file.
        ScenarioConfig merged = rf.scenario;
        AlgorithmConfig amerged = rf.algorithm;
        if (run->count("--n")) merged.num_cus = sc.num_cus;
        if (run->count("--w")) merged.num_aps = sc.num_aps;
        if (run->count("--k")) merged.num_channels = sc.num_channels;
        if (run->count("--seed")) merged.seed = sc.seed;
        if (run->count("--area")) merged.area_m = sc.area_m;
        if (run->count("--budget")) merged.power_budget = sc.power_budget;
        if (run->count("--noise")) merged.noise_floor = sc.noise_floor;
        if (run->count("--memory")) amerged.memory = ac.memory;
        if (run->count("--cost")) amerged.cost = ac.cost;
        if (run->count("--max-iters")) amerged.max_iters = ac.max_iters;
        if (run->count("--step-exponent")) amerged.step_exponent = ac.step_exponent;
        if (run->count("--algo")) amerged.algo = parse_algo(algo);
        if (run->count("--inner")) amerged.inner = inner == "aiwf" ? InnerSolver::kAveraged : InnerSolver::kSequential;
        sc = merged;
        ac = amerged;
      } else {
        ac.algo = parse_algo(algo);
        ac.inner = inner == "aiwf" ? InnerSolver::kAveraged : InnerSolver::kSequential;
      }
      if (inner != "siwf" && inner != "aiwf") throw ConfigError("inner must be siwf or aiwf");
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
    req.scenario = sc;
    req.algorithm = ac;
    req.out_path = trace_out;
    return cmd_run(req, std::cout, std::cerr);
  }
  if (*exp) return cmd_experiment(ereq, std::cout, std::cerr);
  return cmd_verify(vreq, std::cout);
}
