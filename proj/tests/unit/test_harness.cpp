#include <filesystem>
#include <fstream>
#include <sstream>

#include "crnsim/harness/commands.hpp"
#include "crnsim/harness/config.hpp"
#include "crnsim/trace_io.hpp"
#include "doctest.h"

using namespace crnsim;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

RunRequest request(const std::string& algo, int n, int w, int k, std::uint64_t seed) {
  RunRequest r;
  r.scenario.num_cus = n;
  r.scenario.num_aps = w;
  r.scenario.num_channels = k;
  r.scenario.seed = seed;
  r.algorithm.algo = parse_algo(algo);
  return r;
}

}  // namespace

TEST_CASE("run writes a trace with a monotone iteration column") {
  std::ostringstream out, err;
  const int code = cmd_run(request("jaspa", 6, 3, 12, 7), out, err);
  CHECK(code == 0);
  const auto rows = lines(out.str());
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == kTraceHeader);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto f = split(rows[r]);
    CHECK(f.size() == 7);
    CHECK(std::stol(f[0]) == static_cast<long>(r - 1));
  }
}

TEST_CASE("zero APs is a configuration error") {
  std::ostringstream out, err;
  CHECK(cmd_run(request("jaspa", 6, 0, 12, 7), out, err) == 1);
  CHECK(err.str().find("error") != std::string::npos);
}

TEST_CASE("non-convergence exits with 2") {
  auto req = request("si", 6, 3, 12, 7);
  req.algorithm.max_iters = 2;
  std::ostringstream out, err;
  CHECK(cmd_run(req, out, err) == 2);
}

TEST_CASE("identical flags give byte-identical traces for every algorithm") {
  for (const char* algo : {"jaspa", "se", "si", "jjaspa", "closest", "multi"}) {
    std::ostringstream a, b, err;
    auto req = request(algo, 5, 2, 8, 3);
    req.algorithm.cost = 1.0;
    cmd_run(req, a, err);
    cmd_run(req, b, err);
    CHECK(a.str() == b.str());
    CHECK(a.str().size() > std::string(kTraceHeader).size());
  }
}

TEST_CASE("the snapshot seed and the algorithm stream are distinct") {
  CHECK(run_seed(7) != 7);
  CHECK(run_seed(7) == run_seed(7));
}

TEST_CASE("config parsing") {
  const auto rf = parse_config(R"({
    "scenario": {"num_cus": 5, "num_aps": 2, "num_channels": 8, "noise_floor": 0.02},
    "algorithm": {"name": "si", "memory": 4, "cost": 3, "inner": "aiwf"},
    "experiments": [{"name": "x", "algos": ["jaspa"], "n": 4, "w": [1, 2], "k": 8, "seeds": 2}]
  })");
  CHECK(rf.scenario.num_cus == 5);
  CHECK(rf.scenario.noise_floor == 0.02);
  CHECK(rf.algorithm.algo == Algo::kSi);
  CHECK(rf.algorithm.inner == InnerSolver::kAveraged);
  CHECK(rf.algorithm.learn_config(8).cost == doctest::Approx(3.0 / 8));
  REQUIRE(rf.experiments.size() == 1);
  CHECK(rf.experiments[0].n == std::vector<int>{4});
  CHECK(rf.experiments[0].w == std::vector<int>{1, 2});

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": {"num_cu": 3}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": {"num_aps": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"algorithm": {"name": "greedy"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"algorithm": {"step_exponent": 0.4}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiments": [{"name": "e", "algos": []}]})"), ConfigError);
}

TEST_CASE("an empty experiment list writes only the header") {
  const auto rows = run_experiments({}, ScenarioConfig{}, AlgorithmConfig{});
  std::ostringstream os;
  write_summary_csv(os, rows);
  CHECK(os.str() == std::string(kSummaryHeader) + "\n");

  const auto dir = std::filesystem::temp_directory_path() / "crnsim_empty_exp";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "empty.json") << R"({"experiments": []})";
  }
  ExperimentRequest req;
  req.config_path = (dir / "empty.json").string();
  req.out_path = "-";
  std::ostringstream out, err;
  CHECK(cmd_experiment(req, out, err) == 0);
  CHECK(out.str() == std::string(kSummaryHeader) + "\n");
}

TEST_CASE("throughput sweep: ratio to T* never exceeds 1") {
  ExperimentSpec spec;
  spec.name = "throughput";
  spec.algos = {"jaspa", "closest", "multi"};
  spec.n = {8};
  spec.w = {1, 2, 3, 4};
  spec.k = {16};
  spec.seeds = 20;
  spec.oracle = true;
  spec.x = "w";
  spec.metric = "sum_rate";
  const auto rows = run_experiments({spec}, ScenarioConfig{}, AlgorithmConfig{});
  CHECK(rows.size() == 3 * 4 * 20);
  int checked = 0;
  for (const auto& r : rows) {
    if (r.algo == "multi") {
      CHECK_FALSE(r.ratio.has_value());
      continue;
    }
    REQUIRE(r.ratio.has_value());
    CHECK(*r.ratio <= 1.0 + 1e-9);
    ++checked;
  }
  CHECK(checked == 160);
  const auto gp = plot_script(spec, rows);
  CHECK(gp.find("plot ") != std::string::npos);
  CHECK(gp.find("T*") != std::string::npos);
}

TEST_CASE("cost sweep: mean iterations with cost do not exceed those without") {
  ExperimentSpec spec;
  spec.name = "cost";
  spec.algos = {"jaspa"};
  spec.n = {8};
  spec.w = {4};
  spec.k = {16};
  spec.costs = {0.0, 3.0};
  spec.seeds = 20;
  spec.x = "cost";
  const auto rows = run_experiments({spec}, ScenarioConfig{}, AlgorithmConfig{});
  double with = 0, without = 0;
  int nwith = 0, nwithout = 0;
  for (const auto& r : rows) {
    REQUIRE(r.iters.has_value());
    const double it = *r.iters < 0 ? 500.0 : static_cast<double>(*r.iters);
    if (r.algo == "jaspa") {
      without += it;
      ++nwithout;
    } else {
      CHECK(r.algo == "jaspa+c3");
      with += it;
      ++nwith;
    }
  }
  REQUIRE(nwith == 20);
  REQUIRE(nwithout == 20);
  CHECK(with / nwith <= without / nwithout);
}

TEST_CASE("summary rows reproduce through a single run and across pool sizes") {
  ExperimentSpec spec;
  spec.name = "repro";
  spec.algos = {"si", "jjaspa"};
  spec.n = {5};
  spec.w = {2};
  spec.k = {8};
  spec.seeds = 4;
  spec.seed_offset = 40;
  const auto rows = run_experiments({spec}, ScenarioConfig{}, AlgorithmConfig{});
  std::ostringstream first;
  write_summary_csv(first, rows);
  setenv("CRN_THREADS", "1", 1);
  std::ostringstream serial;
  write_summary_csv(serial, run_experiments({spec}, ScenarioConfig{}, AlgorithmConfig{}));
  unsetenv("CRN_THREADS");
  CHECK(first.str() == serial.str());

  // Row order: algorithm-major, then seed.
  CHECK(rows.front().algo == "si");
  CHECK(rows.front().seed == 40);
  CHECK(rows.back().algo == "jjaspa");
  CHECK(rows.back().seed == 43);

  const auto& r = rows[5];
  auto req = request(r.algo, r.n, r.w, r.k, r.seed);
  std::ostringstream out, err;
  cmd_run(req, out, err);
  CHECK(lines(out.str()).size() > 1);
  CHECK(err.str().find("sum rate " + format_real(r.sum_rate) + ",") != std::string::npos);
}

TEST_CASE("plot script inlines one data block per series") {
  SummaryRow a;
  a.experiment = "conv";
  a.algo = "jaspa";
  a.n = 4;
  a.iters = 10;
  SummaryRow b = a;
  b.n = 6;
  b.iters = 20;
  SummaryRow c = a;
  c.algo = "si";
  c.iters = -1;
  ExperimentSpec spec;
  spec.name = "conv";
  const auto gp = plot_script(spec, {a, b, c});
  CHECK(gp.find("$s0 << EOD\n4 10\n6 20\nEOD") != std::string::npos);
  CHECK(gp.find("$s1 << EOD\nEOD") != std::string::npos);
  CHECK(gp.find("title 'si'") != std::string::npos);
}

TEST_CASE("verify runs a selected criterion and the mutation breaks the identity") {
  std::ostringstream ok, bad;
  VerifyRequest req;
  req.only = {1};
  CHECK(cmd_verify(req, ok) == 0);
  CHECK(ok.str().rfind("PASS criterion 1", 0) == 0);
  req.mutate = true;
  CHECK(cmd_verify(req, bad) == 1);
  CHECK(bad.str().rfind("FAIL criterion 1", 0) == 0);
}
