#include "crnsim/verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "crnsim/bestresp.hpp"
#include "crnsim/inner.hpp"
#include "crnsim/jjaspa.hpp"
#include "crnsim/learn.hpp"
#include "crnsim/oracle.hpp"
#include "crnsim/parallel.hpp"
#include "crnsim/physics.hpp"
#include "crnsim/trace_io.hpp"
#include "crnsim/verify/reference.hpp"

namespace crnsim {

double mutated_potential(const NetworkInstance& inst, int w, std::span<const int> occupants,
                         std::span<const PowerVector> powers_w) {
  return -potential_ap(inst, w, occupants, powers_w);
}

namespace {

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

int at_least(int count, double fraction) {
  return static_cast<int>(std::ceil(count * fraction - 1e-9));
}

// 1: unilateral rate changes equal potential changes.
CriterionResult exact_potential(const AcceptanceOptions& opts) {
  const PotentialFn pot = opts.potential ? opts.potential : PotentialFn(potential_ap);
  const int trials = 1000;
  double worst = 0.0;
  for (int s = 0; s < trials; ++s) {
    Rng rng(mix_seed(0xE1, s));
    ScenarioConfig sc;
    sc.num_aps = 1 + static_cast<int>(rng.index(3));
    sc.num_cus = 2 + static_cast<int>(rng.index(5));
    sc.num_channels = sc.num_aps + static_cast<int>(rng.index(6));
    const auto inst = generate_snapshot(sc, mix_seed(0xE2, s));
    const auto assoc = random_association(inst, rng);
    PowerProfile powers(inst.num_cus());
    for (int i = 0; i < inst.num_cus(); ++i) {
      powers[i] = random_power(inst, i, assoc[i], rng);
      const double scale = rng.uniform();
      for (double& x : powers[i]) x *= scale;
    }
    const int i = static_cast<int>(rng.index(inst.num_cus()));
    const int w = assoc[i];
    PowerVector alt = random_power(inst, i, w, rng);
    const double scale = rng.uniform();
    for (double& x : alt) x *= scale;

    const auto interf = interference_at(inst, assoc, powers, i, w);
    const double d_rate = rate(inst, i, w, alt, interf) - rate(inst, i, w, powers[i], interf);
    const auto occ = occupants_by_ap(inst, assoc)[w];
    auto pw = gather_powers(occ, powers);
    const double before = pot(inst, w, occ, pw);
    const auto pos = std::find(occ.begin(), occ.end(), i) - occ.begin();
    pw[pos] = alt;
    const double d_pot = pot(inst, w, occ, pw) - before;
    worst = std::max(worst, std::abs(d_rate - d_pot));
  }
  CriterionResult r;
  r.pass = worst <= 1e-9;
  r.detail = fmt("%d triples, max |dR - dP| = %.3e (tol 1e-9)", trials, worst);
  return r;
}

// 2: closed-form water-filling against a grid search and its KKT system.
CriterionResult waterfill_oracle(const AcceptanceOptions& opts) {
  const int problems = opts.quick ? 50 : 200;
  double worst_gap = -INFINITY, worst_kkt = 0.0;
  for (int s = 0; s < problems; ++s) {
    Rng rng(mix_seed(0xE3, s));
    std::vector<double> gains(3), noise(3);
    for (int k = 0; k < 3; ++k) {
      gains[k] = rng.exponential(1.0);
      noise[k] = rng.uniform(0.01, 1.0);
    }
    const double budget = rng.uniform(0.1, 5.0);
    const NetworkInstance inst(1, 1, 3, {0, 0, 0}, gains, noise, {budget}, {Point{}},
                               {Point{}});
    std::vector<double> interf(3);
    for (double& x : interf) x = rng.uniform(0.0, 2.0);
    const auto p = waterfill(inst, 0, 0, interf);
    const double got = rate(inst, 0, 0, p, interf);
    const double grid = ref::grid_best_rate_3ch(inst, 0, 0, interf, 1e-3);
    worst_gap = std::max(worst_gap, grid - got);
    worst_kkt = std::max(worst_kkt, ref::waterfill_kkt_residual(inst, 0, 0, interf, p));
  }
  CriterionResult r;
  r.pass = worst_gap <= 1e-6 && worst_kkt <= 1e-8;
  r.detail = fmt("%d problems, max(grid - waterfill) = %.3e (tol 1e-6), max KKT residual = %.3e (tol 1e-8)",
                 problems, worst_gap, worst_kkt);
  return r;
}

// 3: both inner solvers reach the maximum of the potential.
CriterionResult inner_optimality(const AcceptanceOptions& opts) {
  const int count = opts.quick ? 10 : 50;
  double worst_a = 0.0, worst_s = 0.0;
  for (int s = 0; s < count; ++s) {
    ScenarioConfig sc;
    sc.num_cus = 3;
    sc.num_aps = 1;
    sc.num_channels = 4;
    const auto inst = generate_snapshot(sc, 3000 + s);
    const std::vector<int> occ{0, 1, 2};
    std::vector<PowerVector> init;
    for (int i : occ) init.push_back(uniform_power(inst, i, 0));
    const auto best = maximize_potential(inst, 0, occ);
    const auto a = aiwf_solve(inst, 0, occ, init, StepsizeSchedule{});
    const auto q = siwf_solve(inst, 0, occ, init);
    worst_a = std::max(worst_a, std::abs(potential_ap(inst, 0, occ, a.powers) - best.value) / best.value);
    worst_s = std::max(worst_s, std::abs(potential_ap(inst, 0, occ, q.powers) - best.value) / best.value);
  }
  CriterionResult r;
  r.pass = worst_a <= 1e-4 && worst_s <= 1e-4;
  r.detail = fmt("%d instances, max rel error A-IWF = %.3e, S-IWF = %.3e (tol 1e-4)", count,
                 worst_a, worst_s);
  return r;
}

// 4: sequential play never lowers the system potential.
CriterionResult se_monotone(const AcceptanceOptions& opts) {
  const int runs = opts.quick ? 20 : 100;
  std::vector<double> worst(runs, 0.0);
  std::vector<long> steps(runs, 0);
  parallel_for(runs, [&](std::size_t s) {
    ScenarioConfig sc;
    sc.num_cus = 8;
    sc.num_aps = 3;
    sc.num_channels = 12;
    const auto inst = generate_snapshot(sc, 4000 + s);
    LearnConfig cfg;
    cfg.max_iters = 300;
    SeJaspaRun run(inst, cfg, s);
    double prev = system_potential(inst, run.state().assoc, run.state().powers);
    for (int t = 0; t < cfg.max_iters; ++t) {
      const bool done = run.step();
      const double now = system_potential(inst, run.state().assoc, run.state().powers);
      worst[s] = std::max(worst[s], prev - now);
      prev = now;
      ++steps[s];
      if (done) break;
    }
  });
  const double w = *std::max_element(worst.begin(), worst.end());
  CriterionResult r;
  r.pass = w <= 1e-9;
  r.detail = fmt("%d runs, %ld steps, largest potential drop = %.3e (tol 1e-9)", runs,
                 std::accumulate(steps.begin(), steps.end(), 0L), std::max(w, 0.0));
  return r;
}

// 5: the SEP maximizer is a joint equilibrium.
CriterionResult sep_is_jep(const AcceptanceOptions& opts) {
  const int count = opts.quick ? 10 : 50;
  std::vector<double> gaps(count, 0.0);
  std::vector<char> ok(count, 0);
  parallel_for(count, [&](std::size_t s) {
    ScenarioConfig sc;
    sc.num_cus = 2 + static_cast<int>(s % 3);
    sc.num_aps = 2;
    sc.num_channels = 4;
    const auto inst = generate_snapshot(sc, 7000 + s);
    const auto sep = exhaustive_sep(inst);
    InnerOptions inner;
    inner.tol = 1e-13;
    inner.max_iters = 200000;
    const auto powers = solve_all_aps(inst, sep.best, uniform_profile(inst, sep.best), inner);
    const auto cert = certify_jep(inst, sep.best, powers, 1e-6);
    gaps[s] = cert.gap;
    ok[s] = cert.pass;
  });
  const int passed = static_cast<int>(std::count(ok.begin(), ok.end(), 1));
  CriterionResult r;
  r.pass = passed == count;
  r.detail = fmt("%d/%d SEP maximizers certified, max gap = %.3e (tol 1e-6)", passed, count,
                 *std::max_element(gaps.begin(), gaps.end()));
  return r;
}

NetworkInstance learning_instance(int s) {
  ScenarioConfig sc;
  sc.num_cus = 6;
  sc.num_aps = 3;
  sc.num_channels = 12;
  return generate_snapshot(sc, 1000 + s);
}

// 6: JASPA with M = N converges to a certified JEP with concentrated beta.
CriterionResult jaspa_converges(const AcceptanceOptions& opts) {
  const int runs = opts.quick ? 20 : 100;
  std::vector<char> good(runs, 0), concentrated(runs, 1);
  std::vector<double> iters(runs, 0.0);
  parallel_for(runs, [&](std::size_t s) {
    const auto inst = learning_instance(static_cast<int>(s));
    LearnConfig cfg;
    cfg.memory = inst.num_cus();
    cfg.max_iters = 500;
    JaspaRun run(inst, cfg, s);
    for (int t = 0; t < cfg.max_iters; ++t)
      if (run.step()) break;
    for (const auto& m : run.state().memory)
      if (m.max_beta() < 1.0 - 1e-9) concentrated[s] = 0;
    const auto trace = run.finish();
    good[s] = trace.converged && trace.certificate_gap <= 1e-6;
    iters[s] = static_cast<double>(trace.iterations_to_converge);
  });
  int converged = 0, beta_ok = 0;
  std::vector<double> conv_iters;
  for (int s = 0; s < runs; ++s) {
    if (!good[s]) continue;
    ++converged;
    beta_ok += concentrated[s];
    conv_iters.push_back(iters[s]);
  }
  CriterionResult r;
  r.pass = converged >= at_least(runs, 0.95) && beta_ok == converged;
  r.detail = fmt("%d/%d converged and certified (need %d), %d/%d with max beta >= 1-1e-9, mean iters %.2f",
                 converged, runs, at_least(runs, 0.95), beta_ok, converged, mean(conv_iters));
  return r;
}

// 7: J-JASPA converges and beats Si-JASPA on paired seeds.
CriterionResult jjaspa_converges(const AcceptanceOptions& opts) {
  const int runs = opts.quick ? 20 : 100;
  const int cap = 2000;
  std::vector<char> good(runs, 0);
  std::vector<double> j_iters(runs), si_iters(runs);
  parallel_for(runs, [&](std::size_t s) {
    const auto inst = learning_instance(static_cast<int>(s));
    LearnConfig cfg;
    cfg.memory = 10;
    cfg.max_iters = cap;
    const auto j = run_jjaspa(inst, cfg, s);
    const auto si = run_si_jaspa(inst, cfg, s);
    good[s] = j.converged && j.certificate_gap <= 1e-6;
    // A run that never converged is charged the full budget.
    j_iters[s] = j.converged ? j.iterations_to_converge : cap;
    si_iters[s] = si.converged ? si.iterations_to_converge : cap;
  });
  const int converged = static_cast<int>(std::count(good.begin(), good.end(), 1));
  const double mj = mean(j_iters), ms = mean(si_iters);
  CriterionResult r;
  r.pass = converged >= at_least(runs, 0.95) && mj < ms;
  r.detail = fmt("%d/%d converged and certified (need %d), mean iters J-JASPA %.2f vs Si-JASPA %.2f",
                 converged, runs, at_least(runs, 0.95), mj, ms);
  return r;
}

// 8: throughput against the exhaustive upper bound and the baselines.
CriterionResult throughput_trend(const AcceptanceOptions& opts) {
  const int seeds = opts.quick ? 5 : 20;
  const int num_w = 4;
  struct Cell {
    double jaspa = 0, tstar = 0, closest = 0, multi = 0;
  };
  std::vector<Cell> cells(num_w * seeds);
  parallel_for(cells.size(), [&](std::size_t idx) {
    const int w = 1 + static_cast<int>(idx) / seeds;
    const int s = static_cast<int>(idx) % seeds;
    ScenarioConfig sc;
    sc.num_cus = 8;
    sc.num_aps = w;
    sc.num_channels = 16;
    const auto inst = generate_snapshot(sc, 5000 + s);
    LearnConfig cfg;
    cfg.max_iters = 500;
    Cell& c = cells[idx];
    c.jaspa = run_jaspa(inst, cfg, s).sum_rate;
    c.tstar = max_throughput(inst);
    c.closest = closest_ap_baseline(inst).sum_rate;
    c.multi = multi_connectivity_baseline(inst);
  });
  int violations = 0;
  double min_ratio = INFINITY;
  std::vector<double> ratios, jaspa, closest, multi;
  for (const auto& c : cells) {
    if (c.jaspa > c.tstar * (1.0 + 1e-9)) ++violations;
    ratios.push_back(c.jaspa / c.tstar);
    min_ratio = std::min(min_ratio, ratios.back());
    jaspa.push_back(c.jaspa);
    closest.push_back(c.closest);
    multi.push_back(c.multi);
  }
  const double mr = mean(ratios);
  CriterionResult r;
  r.pass = violations == 0 && mean(closest) < mean(jaspa);
  r.detail = fmt("%zu rows, %d above T*, ratio to T* mean %.4f min %.4f (soft >= 0.8: %s), "
                 "mean sum rate JASPA %.4f closest-AP %.4f multi-conn %.4f",
                 cells.size(), violations, mr, min_ratio, mr >= 0.8 ? "met" : "missed",
                 mean(jaspa), mean(closest), mean(multi));
  return r;
}

// 9: a connection cost speeds convergence and costs throughput.
CriterionResult cost_trend(const AcceptanceOptions& opts) {
  const int seeds = opts.quick ? 10 : 50;
  const double c = 3.0;
  struct Pair {
    double it0, it3, sr0, sr3;
  };
  // Jaspa and Si-JASPA, each with and without cost on the same seed.
  std::vector<Pair> rows(2 * seeds);
  parallel_for(rows.size(), [&](std::size_t idx) {
    const bool si = idx >= static_cast<std::size_t>(seeds);
    const int s = static_cast<int>(idx % seeds);
    ScenarioConfig sc;
    sc.num_cus = 8;
    sc.num_aps = 4;
    sc.num_channels = 16;
    const auto inst = generate_snapshot(sc, 9000 + s);
    LearnConfig cfg;
    cfg.max_iters = 2000;
    auto run = [&](double cost) {
      cfg.cost = cost / inst.num_channels();
      return si ? run_si_jaspa(inst, cfg, s) : run_jaspa(inst, cfg, s);
    };
    const auto a = run(0.0), b = run(c);
    auto iters = [](const RunTrace& t) {
      return static_cast<double>(t.converged ? t.iterations_to_converge : t.iterations_run);
    };
    rows[idx] = {iters(a), iters(b), a.sum_rate, b.sum_rate};
  });
  bool pass = true;
  std::string detail;
  for (int alg = 0; alg < 2; ++alg) {
    std::vector<double> it0, it3, sr0, sr3;
    for (int s = 0; s < seeds; ++s) {
      const auto& p = rows[alg * seeds + s];
      it0.push_back(p.it0);
      it3.push_back(p.it3);
      sr0.push_back(p.sr0);
      sr3.push_back(p.sr3);
    }
    pass = pass && mean(it3) <= mean(it0) && mean(sr3) <= mean(sr0);
    detail += fmt("%s%s: iters %.2f (c=3) vs %.2f (c=0), sum rate %.4f vs %.4f",
                  alg ? "; " : "", alg ? "Si-JASPA" : "JASPA", mean(it3), mean(it0),
                  mean(sr3), mean(sr0));
  }
  CriterionResult r;
  r.pass = pass;
  r.detail = fmt("%d paired seeds, cost per channel-Hz; ", seeds) + detail;
  return r;
}

// 10: identical inputs give byte-identical traces.
CriterionResult reproducible(const AcceptanceOptions& opts) {
  const int seeds = opts.quick ? 2 : 5;
  const char* names[] = {"jaspa", "se", "si", "jjaspa"};
  int compared = 0, identical = 0;
  for (int s = 0; s < seeds; ++s) {
    ScenarioConfig sc;
    sc.num_cus = 6;
    sc.num_aps = 3;
    sc.num_channels = 12;
    for (int a = 0; a < 4; ++a) {
      auto csv = [&] {
        const auto inst = generate_snapshot(sc, 11000 + s);
        LearnConfig cfg;
        cfg.max_iters = 300;
        const RunTrace t = a == 0   ? run_jaspa(inst, cfg, s)
                           : a == 1 ? run_se_jaspa(inst, cfg, s)
                           : a == 2 ? run_si_jaspa(inst, cfg, s)
                                    : run_jjaspa(inst, cfg, s);
        std::ostringstream os;
        write_trace_csv(os, t);
        return os.str();
      };
      ++compared;
      identical += csv() == csv();
    }
  }
  CriterionResult r;
  r.pass = identical == compared;
  r.detail = fmt("%d/%d (algo, seed) reruns byte-identical over %s/%s/%s/%s", identical,
                 compared, names[0], names[1], names[2], names[3]);
  return r;
}

struct Spec {
  const char* name;
  double limit;
  CriterionResult (*fn)(const AcceptanceOptions&);
};

const Spec kSpecs[kNumCriteria] = {
    {"exact potential identity", 5, exact_potential},
    {"water-filling vs grid oracle", 10, waterfill_oracle},
    {"inner loop reaches potential maximum", 30, inner_optimality},
    {"Se-JASPA potential monotone", 60, se_monotone},
    {"SEP maximizer is a JEP", 120, sep_is_jep},
    {"JASPA convergence with M = N", 300, jaspa_converges},
    {"J-JASPA convergence and speed", 600, jjaspa_converges},
    {"throughput vs T* and baselines", 0, throughput_trend},
    {"connection cost trend", 0, cost_trend},
    {"trace reproducibility", 0, reproducible},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id > kNumCriteria) throw std::invalid_argument("no such criterion");
  const Spec& spec = kSpecs[id - 1];
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = spec.fn(opts);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.id = id;
  r.name = spec.name;
  r.time_limit = spec.limit;
  if (spec.limit > 0 && r.seconds > spec.limit) {
    r.pass = false;
    r.detail += fmt(" [over time limit %.0f s]", spec.limit);
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& out) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kNumCriteria; ++id) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end())
      continue;
    results.push_back(run_criterion(id, opts));
    out << format_result(results.back()) << std::endl;
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  return fmt("%s criterion %d (%s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str()) +
         r.detail + fmt(" [%.2f s]", r.seconds);
}

}  // namespace crnsim
