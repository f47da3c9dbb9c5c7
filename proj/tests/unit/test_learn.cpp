#include <cmath>
#include <limits>
#include <numeric>

#include "crnsim/bestresp.hpp"
#include "crnsim/inner.hpp"
#include "crnsim/learn.hpp"
#include "crnsim/oracle.hpp"
#include "crnsim/physics.hpp"
#include "doctest.h"

using namespace crnsim;

namespace {

NetworkInstance instance(int n, int w, int k, std::uint64_t seed) {
  ScenarioConfig sc;
  sc.num_cus = n;
  sc.num_aps = w;
  sc.num_channels = k;
  return generate_snapshot(sc, seed);
}

void check_feasible(const NetworkInstance& inst, const GameState& st) {
  for (int i = 0; i < inst.num_cus(); ++i) CHECK(is_feasible(inst, i, st.assoc[i], st.powers[i]));
}

void check_beta(const ReplyMemory& m) {
  const auto b = m.beta();
  double total = 0.0;
  for (double x : b) {
    CHECK(x >= 0.0);
    total += x;
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

}  // namespace

TEST_CASE("memory filled with one reply gives that elementary vector") {
  ReplyMemory m(3, 4);
  for (int t = 0; t < 4; ++t) m.push(2);
  CHECK(m.beta() == std::vector<double>{0.0, 0.0, 1.0});
  CHECK(m.max_beta() == 1.0);
}

TEST_CASE("beta is the mean of the stored replies") {
  ReplyMemory m(3, 4);
  for (int r : {0, 0, 1, 2}) m = beta_update(m, r);
  const auto b = m.beta();
  CHECK(b[0] == doctest::Approx(0.5));
  CHECK(b[1] == doctest::Approx(0.25));
  CHECK(b[2] == doctest::Approx(0.25));
}

TEST_CASE("pushing onto a full memory evicts the oldest reply") {
  ReplyMemory m(3, 4);
  for (int r : {0, 0, 1, 2}) m.push(r);
  m.push(1);
  CHECK(m.contents().size() == 4);
  const auto b = m.beta();
  CHECK(b[0] == doctest::Approx(0.25));
  CHECK(b[1] == doctest::Approx(0.5));
  check_beta(m);
}

TEST_CASE("a partial memory uses the running mean") {
  ReplyMemory m(2, 10);
  m.push(1);
  CHECK(m.beta() == std::vector<double>{0.0, 1.0});
  m.push(0);
  CHECK(m.beta() == std::vector<double>{0.5, 0.5});
}

TEST_CASE("beta stays a probability vector under random pushes") {
  Rng rng(1);
  ReplyMemory m(4, 7);
  for (int t = 0; t < 500; ++t) {
    m.push(static_cast<int>(rng.index(4)));
    check_beta(m);
  }
}

TEST_CASE("sampling from an elementary vector is deterministic") {
  Rng rng(2);
  const std::vector<double> beta{0.0, 1.0, 0.0};
  for (int t = 0; t < 100; ++t) CHECK(sample_association(beta, rng) == 1);
}

TEST_CASE("sampling frequencies and zero entries") {
  Rng rng(3);
  const int n = 10000;
  int first = 0, third = 0;
  const std::vector<double> half{0.5, 0.5};
  const std::vector<double> zero{0.3, 0.7, 0.0};
  for (int t = 0; t < n; ++t) {
    first += sample_association(half, rng) == 0;
    third += sample_association(zero, rng) == 2;
  }
  CHECK(std::abs(first - n / 2) <= 3.0 * std::sqrt(n * 0.25));
  CHECK(third == 0);
}

TEST_CASE("certificate: single CU at its best AP passes, a perturbed power fails") {
  const auto inst = instance(1, 2, 4, 11);
  const std::vector<double> none(2, 0.0);
  const int best = best_rate_at(inst, 0, 0, none).rate >= best_rate_at(inst, 0, 1, none).rate ? 0 : 1;
  const Association a{best};
  PowerProfile p{waterfill(inst, 0, best, none)};
  const auto ok = certify_jep(inst, a, p, 1e-10);
  CHECK(ok.pass);
  CHECK(ok.gap <= 1e-10);

  p[0][0] *= 0.9;
  p[0][1] += 0.1 * p[0][0] / 0.9;
  const auto bad = certify_jep(inst, a, p, 1e-10);
  CHECK_FALSE(bad.pass);
  CHECK(bad.gap > 0.0);
  CHECK(bad.worst_cu == 0);
}

TEST_CASE("JASPA on one AP converges after one outer iteration") {
  const auto inst = instance(4, 1, 6, 12);
  LearnConfig cfg;
  const auto t = run_jaspa(inst, cfg, 1);
  CHECK(t.converged);
  CHECK(t.iterations_to_converge == 1);
  const std::vector<int> occ{0, 1, 2, 3};
  CHECK(t.potential == doctest::Approx(maximize_potential(inst, 0, occ).value).epsilon(1e-6));
}

TEST_CASE("JASPA with one CU picks the AP with the larger water-filled rate") {
  for (int s = 0; s < 20; ++s) {
    const auto inst = instance(1, 2, 6, 100 + s);
    const std::vector<double> none(3, 0.0);
    const double r0 = best_rate_at(inst, 0, 0, none).rate, r1 = best_rate_at(inst, 0, 1, none).rate;
    LearnConfig cfg;
    const auto t = run_jaspa(inst, cfg, s);
    CHECK(t.converged);
    CHECK(t.assoc[0] == (r0 > r1 ? 0 : 1));
  }
}

TEST_CASE("JASPA converges to certified equilibria with concentrated beta") {
  int good = 0;
  for (int s = 0; s < 20; ++s) {
    const auto inst = instance(6, 3, 12, 1000 + s);
    LearnConfig cfg;
    cfg.memory = 6;
    JaspaRun run(inst, cfg, s);
    for (int t = 0; t < cfg.max_iters && !run.step(); ++t) check_feasible(inst, run.state());
    const bool concentrated = std::all_of(run.state().memory.begin(), run.state().memory.end(),
                                          [](const ReplyMemory& m) { return m.max_beta() >= 1.0 - 1e-9; });
    const auto t = run.finish();
    if (t.converged) {
      CHECK(concentrated);
      CHECK(t.certificate_gap <= 1e-6);
      ++good;
    }
  }
  CHECK(good >= 19);
}

TEST_CASE("a memory shorter than N draws a warning") {
  const auto inst = instance(6, 2, 8, 13);
  LearnConfig cfg;
  cfg.memory = 3;
  const auto t = run_jaspa(inst, cfg, 0);
  CHECK_FALSE(t.warnings.empty());
}

TEST_CASE("infinite connection cost: nobody ever switches") {
  const auto inst = instance(6, 3, 12, 14);
  LearnConfig cfg;
  cfg.cost = std::numeric_limits<double>::infinity();
  cfg.max_iters = 50;
  for (const auto& t : {run_jaspa(inst, cfg, 3), run_si_jaspa(inst, cfg, 3)}) {
    for (const auto& row : t.rows) CHECK(row.num_switchers == 0);
  }
}

TEST_CASE("per-CU costs override the shared cost") {
  LearnConfig cfg;
  cfg.cost = 1.0;
  CHECK(cfg.cost_of(3) == 1.0);
  cfg.costs = {0.5, 2.0};
  CHECK(cfg.cost_of(1) == 2.0);
  CHECK(cfg.max_cost() == 2.0);
}

TEST_CASE("Se-JASPA with one CU: potential constant after the first step") {
  const auto inst = instance(1, 3, 6, 15);
  LearnConfig cfg;
  cfg.max_iters = 20;
  cfg.stop_on_convergence = false;
  SeJaspaRun run(inst, cfg, 4);
  run.step();
  const double first = system_potential(inst, run.state().assoc, run.state().powers);
  for (int t = 0; t < 10; ++t) {
    run.step();
    CHECK(system_potential(inst, run.state().assoc, run.state().powers) == first);
  }
}

TEST_CASE("Se-JASPA potential is nondecreasing on every step") {
  for (int s = 0; s < 30; ++s) {
    const auto inst = instance(8, 3, 12, 2000 + s);
    LearnConfig cfg;
    cfg.max_iters = 200;
    SeJaspaRun run(inst, cfg, s);
    double prev = system_potential(inst, run.state().assoc, run.state().powers);
    for (int t = 0; t < cfg.max_iters; ++t) {
      const bool done = run.step();
      const double now = system_potential(inst, run.state().assoc, run.state().powers);
      CHECK(now >= prev - 1e-9);
      check_feasible(inst, run.state());
      prev = now;
      if (done) break;
    }
    const auto trace = run.finish();
    for (std::size_t r = 1; r < trace.rows.size(); ++r)
      CHECK(trace.rows[r].potential >= trace.rows[r - 1].potential - 1e-9);
  }
}

TEST_CASE("Se-JASPA on N=3, W=2 ends at a certified equilibrium") {
  for (int s = 0; s < 10; ++s) {
    const auto inst = instance(3, 2, 6, 2100 + s);
    LearnConfig cfg;
    const auto t = run_se_jaspa(inst, cfg, s);
    CHECK(t.converged);
    CHECK(certify_jep(inst, t.assoc, t.powers, 1e-6).pass);
  }
}

TEST_CASE("Si-JASPA on one AP reaches the inner equilibrium") {
  for (int s = 0; s < 5; ++s) {
    const auto inst = instance(3, 1, 4, 2200 + s);
    LearnConfig cfg;
    cfg.max_iters = 500000;
    cfg.certify_tol = 1e-9;
    const auto t = run_si_jaspa(inst, cfg, s);
    CHECK(t.converged);
    const std::vector<int> occ{0, 1, 2};
    std::vector<PowerVector> init;
    for (int i : occ) init.push_back(uniform_power(inst, i, 0));
    const auto a = aiwf_solve(inst, 0, occ, init, StepsizeSchedule{}, 1e-10, 500000);
    CHECK(std::abs(t.potential - potential_ap(inst, 0, occ, a.powers)) <= 1e-6);
  }
}

TEST_CASE("Si-JASPA stay steps move powers by at most alpha times the norms") {
  const auto inst = instance(6, 3, 12, 16);
  LearnConfig cfg;
  cfg.stop_on_convergence = false;
  SiJaspaRun run(inst, cfg, 5);
  for (int t = 0; t < 100; ++t) {
    const GameState before = run.state();
    run.step();
    const GameState& after = run.state();
    for (int i = 0; i < inst.num_cus(); ++i) {
      if (after.assoc[i] != before.assoc[i]) {
        CHECK(after.stay[i] == 1);
        continue;
      }
      CHECK(after.stay[i] == before.stay[i] + 1);
      double moved = 0.0, norm = 0.0;
      for (std::size_t k = 0; k < after.powers[i].size(); ++k) {
        moved += std::abs(after.powers[i][k] - before.powers[i][k]);
        norm += before.powers[i][k];
      }
      CHECK(moved <= cfg.schedule.alpha(after.stay[i]) * (inst.budget(i) + norm) + 1e-12);
    }
    check_feasible(inst, after);
  }
}

TEST_CASE("Si-JASPA certifies on most seeds within 2000 iterations") {
  int good = 0;
  for (int s = 0; s < 20; ++s) {
    const auto inst = instance(6, 3, 12, 1000 + s);
    LearnConfig cfg;
    cfg.max_iters = 2000;
    const auto t = run_si_jaspa(inst, cfg, s);
    good += t.converged && t.certificate_gap <= 1e-6;
  }
  CHECK(good >= 18);
}

TEST_CASE("convergence monitor needs a quiet window and a certificate") {
  ConvergenceMonitor m(3);
  m.record(0, false, true, false);
  m.record(1, true, false, true);
  m.record(2, true, false, true);
  CHECK_FALSE(m.converged());
  m.record(3, true, false, true);
  CHECK(m.converged());
  CHECK(m.iterations_to_converge() == 2);

  ConvergenceMonitor late(2);
  late.record(0, true, false, false);
  late.record(1, true, false, false);
  CHECK_FALSE(late.converged());
  late.record(2, true, false, true);
  CHECK(late.converged());
  CHECK(late.iterations_to_converge() == 3);
}

TEST_CASE("runs are reproducible from the seed") {
  const auto inst = instance(6, 3, 12, 17);
  LearnConfig cfg;
  for (int algo = 0; algo < 3; ++algo) {
    auto run = [&](std::uint64_t seed) {
      return algo == 0 ? run_jaspa(inst, cfg, seed)
                       : algo == 1 ? run_se_jaspa(inst, cfg, seed) : run_si_jaspa(inst, cfg, seed);
    };
    const auto a = run(9), b = run(9);
    CHECK(a.assoc == b.assoc);
    CHECK(a.powers == b.powers);
    CHECK(a.rows.size() == b.rows.size());
  }
}

TEST_CASE("trace rows are marked converged from the convergence point on") {
  const auto inst = instance(6, 3, 12, 18);
  LearnConfig cfg;
  const auto t = run_jaspa(inst, cfg, 2);
  REQUIRE(t.converged);
  for (const auto& row : t.rows) CHECK(row.converged == (row.iteration + 1 >= t.iterations_to_converge));
}
