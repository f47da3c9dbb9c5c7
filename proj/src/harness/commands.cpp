#include "crnsim/harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "crnsim/jjaspa.hpp"
#include "crnsim/oracle.hpp"
#include "crnsim/parallel.hpp"
#include "crnsim/physics.hpp"
#include "crnsim/trace_io.hpp"
#include "crnsim/verify/acceptance.hpp"

namespace crnsim {
namespace {

RunTrace baseline_trace(const NetworkInstance& inst, const BaselineResult& b, std::string algo) {
  RunTrace t;
  t.algo = std::move(algo);
  TraceRow row = detail::make_row(inst, b.assoc, b.powers, 0);
  row.converged = true;
  t.rows.push_back(row);
  t.converged = true;
  t.iterations_to_converge = 0;
  t.iterations_run = 0;
  t.assoc = b.assoc;
  t.powers = b.powers;
  t.sum_rate = row.sum_rate;
  t.potential = row.potential;
  return t;
}

double realized_sep(const NetworkInstance& inst, const Association& assoc) {
  const auto occ = occupants_by_ap(inst, assoc);
  double total = 0.0;
  for (int w = 0; w < inst.num_aps(); ++w) total += equilibrium_potential(inst, w, occ[w]);
  return total;
}

bool oracle_feasible(const NetworkInstance& inst) {
  return std::pow(static_cast<double>(inst.num_aps()), inst.num_cus()) <= kMaxAssociations;
}

std::string label(const std::string& algo, double cost) {
  return cost > 0.0 ? algo + "+c" + format_real(cost) : algo;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t seed) { return mix_seed(seed, 1); }

RunTrace run_algorithm(const NetworkInstance& inst, const AlgorithmConfig& config,
                       std::uint64_t seed) {
  const LearnConfig lc = config.learn_config(inst.num_channels());
  switch (config.algo) {
    case Algo::kJaspa: return run_jaspa(inst, lc, seed);
    case Algo::kSe: return run_se_jaspa(inst, lc, seed);
    case Algo::kSi: return run_si_jaspa(inst, lc, seed);
    case Algo::kJJaspa: return run_jjaspa(inst, lc, seed);
    case Algo::kClosest: return baseline_trace(inst, closest_ap_baseline(inst), "closest");
    case Algo::kMulti: {
      const auto merged = merge_aps(inst);
      return baseline_trace(merged, multi_connectivity_solve(merged, 1e-8, lc.schedule), "multi");
    }
  }
  throw ConfigError("unknown algorithm");
}

int cmd_run(const RunRequest& req, std::ostream& out, std::ostream& err) {
  RunTrace trace;
  try {
    req.scenario.validate();
    req.algorithm.validate();
    const auto inst = generate_snapshot(req.scenario, req.scenario.seed);
    trace = run_algorithm(inst, req.algorithm, run_seed(req.scenario.seed));
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    if (req.out_path.empty())
      out << csv.str();
    else
      write_file(req.out_path, csv.str());
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  for (const auto& w : trace.warnings) err << "warning: " << w << '\n';
  std::ostream& info = req.out_path.empty() ? err : out;
  info << algo_name(req.algorithm.algo) << ": "
       << (trace.converged ? "converged" : "not converged") << " after "
       << (trace.converged ? trace.iterations_to_converge : trace.iterations_run)
       << " iterations, sum rate " << format_real(trace.sum_rate) << ", association "
       << encode_association(trace.assoc) << '\n';
  return trace.converged ? 0 : 2;
}

std::vector<SummaryRow> run_experiments(const std::vector<ExperimentSpec>& specs,
                                        const ScenarioConfig& base,
                                        const AlgorithmConfig& algorithm) {
  struct Task {
    std::size_t spec;
    int n, w, k;
    std::uint64_t seed;
    std::vector<SummaryRow> rows;  // algo-major, then cost
  };
  std::vector<Task> tasks;
  for (std::size_t e = 0; e < specs.size(); ++e) {
    specs[e].validate();
    for (int n : specs[e].n)
      for (int w : specs[e].w)
        for (int k : specs[e].k)
          for (int s = 0; s < specs[e].seeds; ++s)
            tasks.push_back({e, n, w, k, base.seed + specs[e].seed_offset + s, {}});
  }

  parallel_for(tasks.size(), [&](std::size_t idx) {
    Task& task = tasks[idx];
    const ExperimentSpec& spec = specs[task.spec];
    ScenarioConfig sc = base;
    sc.num_cus = task.n;
    sc.num_aps = task.w;
    sc.num_channels = task.k;
    const auto inst = generate_snapshot(sc, task.seed);
    const auto merged = merge_aps(inst);
    std::vector<int> everyone(inst.num_cus());
    for (int i = 0; i < inst.num_cus(); ++i) everyone[i] = i;
    std::optional<double> tstar;
    if (spec.oracle && oracle_feasible(inst)) tstar = max_throughput(inst);
    for (const auto& name : spec.algos) {
      for (double cost : spec.costs) {
        AlgorithmConfig ac = algorithm;
        ac.algo = parse_algo(name);
        ac.cost = cost;
        // Baselines ignore the cost, so one row covers every cost value.
        if (!is_learning(ac.algo) && cost != spec.costs.front()) continue;
        const RunTrace t = run_algorithm(inst, ac, run_seed(task.seed));
        SummaryRow row;
        row.experiment = spec.name;
        row.algo = is_learning(ac.algo) ? label(name, cost) : name;
        row.cost = is_learning(ac.algo) ? cost : 0.0;
        row.n = task.n;
        row.w = task.w;
        row.k = task.k;
        row.seed = task.seed;
        if (is_learning(ac.algo)) row.iters = t.converged ? t.iterations_to_converge : -1;
        row.sum_rate = t.sum_rate;
        row.sep = ac.algo == Algo::kMulti ? equilibrium_potential(merged, 0, everyone)
                                          : realized_sep(inst, t.assoc);
        row.tstar = tstar;
        // T* bounds single-connectivity networks only.
        if (tstar && ac.algo != Algo::kMulti) row.ratio = t.sum_rate / *tstar;
        task.rows.push_back(std::move(row));
      }
    }
  });

  // Deterministic merge: experiment, algo label, cost, n, w, k, seed.
  std::vector<SummaryRow> rows;
  for (std::size_t e = 0; e < specs.size(); ++e) {
    std::vector<std::string> labels;
    for (const auto& t : tasks)
      if (t.spec == e)
        for (const auto& r : t.rows)
          if (std::find(labels.begin(), labels.end(), r.algo) == labels.end())
            labels.push_back(r.algo);
    for (const auto& l : labels)
      for (const auto& t : tasks)
        if (t.spec == e)
          for (const auto& r : t.rows)
            if (r.algo == l) rows.push_back(r);
  }
  return rows;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.algo << ',' << r.n << ',' << r.w << ',' << r.k << ','
       << r.seed << ',';
    if (r.iters) os << *r.iters;
    os << ',' << format_real(r.sum_rate) << ',' << format_real(r.sep) << ',';
    if (r.ratio) os << format_real(*r.ratio);
    os << '\n';
  }
}

std::string plot_script(const ExperimentSpec& spec, const std::vector<SummaryRow>& rows) {
  auto x_of = [&](const SummaryRow& r) -> double {
    if (spec.x == "n") return r.n;
    if (spec.x == "w") return r.w;
    if (spec.x == "k") return r.k;
    return r.cost;
  };
  const bool iters = spec.metric == "iters";
  // Series keyed by algo label, or by algorithm name when cost is the x axis.
  std::vector<std::string> order;
  std::map<std::string, std::map<double, std::pair<double, int>>> series;
  std::map<double, std::pair<double, int>> tstar;
  for (const auto& r : rows) {
    if (r.experiment != spec.name) continue;
    std::string key = r.algo;
    if (spec.x == "cost") key = key.substr(0, key.find('+'));
    if (!series.contains(key)) order.push_back(key);
    auto& cell = series[key][x_of(r)];
    if (iters) {
      if (r.iters && *r.iters >= 0) {
        cell.first += *r.iters;
        ++cell.second;
      }
    } else {
      cell.first += r.sum_rate;
      ++cell.second;
    }
    if (!iters && r.tstar && r.algo == order.front()) {
      tstar[x_of(r)].first += *r.tstar;
      ++tstar[x_of(r)].second;
    }
  }

  std::ostringstream gp;
  gp << "# " << spec.name << ": mean " << (iters ? "iterations to converge" : "sum rate")
     << " vs " << spec.x << "\n";
  gp << "set terminal pngcairo size 800,600\n";
  gp << "set output '" << spec.name << ".png'\n";
  gp << "set xlabel '" << spec.x << "'\n";
  gp << "set ylabel '" << (iters ? "iterations" : "sum rate (bit/s/Hz)") << "'\n";
  gp << "set key top left\nset grid\n";
  std::vector<std::pair<std::string, std::string>> plots;  // block, title
  auto emit = [&](const std::string& block, const std::map<double, std::pair<double, int>>& pts) {
    gp << '$' << block << " << EOD\n";
    for (const auto& [x, acc] : pts)
      if (acc.second > 0) gp << format_real(x) << ' ' << format_real(acc.first / acc.second) << '\n';
    gp << "EOD\n";
  };
  for (std::size_t s = 0; s < order.size(); ++s) {
    const std::string block = "s" + std::to_string(s);
    emit(block, series[order[s]]);
    plots.emplace_back(block, order[s]);
  }
  if (!tstar.empty()) {
    emit("tstar", tstar);
    plots.emplace_back("tstar", "T*");
  }
  gp << "plot ";
  for (std::size_t p = 0; p < plots.size(); ++p)
    gp << (p ? ", \\\n     " : "") << '$' << plots[p].first << " using 1:2 with linespoints title '"
       << plots[p].second << "'";
  gp << '\n';
  return gp.str();
}

int cmd_experiment(const ExperimentRequest& req, std::ostream& out, std::ostream& err) {
  try {
    RunFile rf;
    if (req.config_path) rf = load_config(*req.config_path);
    if (req.large)
      rf.experiments = large_experiments();
    else if (!req.config_path)
      rf.experiments = desk_experiments();

    const auto rows = run_experiments(rf.experiments, rf.scenario, rf.algorithm);
    std::ostringstream csv;
    write_summary_csv(csv, rows);
    std::filesystem::path plot_dir = req.plot_dir;
    if (req.out_path == "-") {
      out << csv.str();
    } else {
      write_file(req.out_path, csv.str());
      if (plot_dir.empty()) plot_dir = std::filesystem::path(req.out_path).parent_path();
      if (plot_dir.empty()) plot_dir = ".";
    }
    if (!plot_dir.empty()) {
      std::filesystem::create_directories(plot_dir);
      for (const auto& spec : rf.experiments)
        write_file(plot_dir / (spec.name + ".gp"), plot_script(spec, rows));
    }
    if (req.out_path != "-")
      out << rows.size() << " rows written to " << req.out_path << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int cmd_verify(const VerifyRequest& req, std::ostream& out) {
  AcceptanceOptions opts;
  opts.quick = req.quick;
  opts.only = req.only;
  if (req.mutate) opts.potential = mutated_potential;
  const auto results = run_acceptance(opts, out);
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  out << passed << '/' << results.size() << " criteria passed\n";
  return passed == static_cast<long>(results.size()) ? 0 : 1;
}

}  // namespace crnsim
