#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "crnsim/bestresp.hpp"
#include "crnsim/inner.hpp"
#include "crnsim/jjaspa.hpp"
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

}  // namespace

TEST_CASE("coalition keys ignore order") {
  const std::vector<int> a{3, 1, 2}, b{2, 3, 1};
  CHECK(coalition_key(a) == coalition_key(b));
  CHECK(coalition_key(a).members == std::vector<int>{1, 2, 3});
  const std::vector<int> empty;
  CHECK(coalition_key(empty).members.empty());
}

TEST_CASE("coalition keys collide only for equal sets") {
  Rng rng(1);
  std::vector<std::vector<int>> sets;
  for (int t = 0; t < 1000; ++t) {
    std::vector<int> s;
    for (int i = 0; i < 8; ++i)
      if (rng.uniform() < 0.5) s.push_back(i);
    // Shuffle so that equal sets arrive in different orders.
    for (std::size_t j = s.size(); j > 1; --j) std::swap(s[j - 1], s[rng.index(j)]);
    sets.push_back(s);
  }
  for (std::size_t x = 0; x < sets.size(); ++x)
    for (std::size_t y = x + 1; y < sets.size(); ++y) {
      const bool same = std::set<int>(sets[x].begin(), sets[x].end()) ==
                        std::set<int>(sets[y].begin(), sets[y].end());
      CHECK((coalition_key(sets[x]) == coalition_key(sets[y])) == same);
    }
}

TEST_CASE("memories stay aligned, sampling stays in the partial memory, W* holds the sampled AP") {
  const auto inst = instance(6, 3, 12, 10);
  LearnConfig cfg;
  cfg.memory = 5;
  cfg.stop_on_convergence = false;
  JJaspaRun run(inst, cfg, 3);
  std::map<long, Association> assoc_at;
  std::map<long, std::vector<double>> rates_at;
  for (int t = 0; t < 60; ++t) {
    const GameState& st = run.state();
    assoc_at[st.t] = st.assoc;
    rates_at[st.t] = cu_rates(inst, st.assoc, st.powers);
    run.step();
    const auto& mems = run.memories();
    for (int i = 0; i < inst.num_cus(); ++i) {
      const auto& m = mems[i];
      CHECK(m.size() == std::min<std::size_t>(t + 1, 5));
      for (std::size_t j = 0; j < m.size(); ++j) {
        const auto e = m.at(j);
        CHECK(e.ap == assoc_at[e.iteration][i]);
        CHECK(e.rate == doctest::Approx(rates_at[e.iteration][i]).epsilon(1e-12));
        CHECK(e.interference->size() == static_cast<std::size_t>(inst.num_aps()));
        if (j > 0) CHECK(e.iteration == m.at(j - 1).iteration + 1);
      }
      const std::size_t slot = run.last_samples()[i];
      CHECK(slot < m.size());
      const int sampled_ap = m.at(slot).ap;
      const auto& cand = run.last_candidates()[i];
      CHECK(std::find(cand.begin(), cand.end(), sampled_ap) != cand.end());
      CHECK(std::find(cand.begin(), cand.end(), run.state().assoc[i]) != cand.end());
    }
  }
}

TEST_CASE("visit counts match an independent counter") {
  const auto inst = instance(5, 2, 8, 11);
  LearnConfig cfg;
  cfg.stop_on_convergence = false;
  JJaspaRun run(inst, cfg, 4);
  std::vector<std::map<CoalitionKey, long>> counter(inst.num_aps());
  for (int t = 0; t < 150; ++t) {
    const auto occ = occupants_by_ap(inst, run.state().assoc);
    for (int w = 0; w < inst.num_aps(); ++w)
      if (!occ[w].empty()) ++counter[w][coalition_key(occ[w])];
    run.step();
  }
  long total = 0;
  for (int w = 0; w < inst.num_aps(); ++w) {
    CHECK(run.records()[w].size() == counter[w].size());
    for (const auto& [key, rec] : run.records()[w]) {
      CHECK(rec.visits >= 1);
      CHECK(rec.visits == counter[w][key]);
      CHECK(rec.powers.size() == key.members.size());
    }
    total += static_cast<long>(counter[w].size());
  }
  CHECK(run.coalition_count() == total);
}

TEST_CASE("J-JASPA on one AP reduces to the averaged inner solver") {
  for (int s = 0; s < 5; ++s) {
    const auto inst = instance(3, 1, 4, 3000 + s);
    LearnConfig cfg;
    cfg.max_iters = 500000;
    cfg.certify_tol = 1e-9;
    const auto t = run_jjaspa(inst, cfg, s);
    CHECK(t.converged);
    const std::vector<int> occ{0, 1, 2};
    std::vector<PowerVector> init;
    for (int i : occ) init.push_back(uniform_power(inst, i, 0));
    const auto a = aiwf_solve(inst, 0, occ, init, StepsizeSchedule{}, 1e-10, 500000);
    CHECK(std::abs(t.potential - potential_ap(inst, 0, occ, a.powers)) <= 1e-6);
  }
}

TEST_CASE("powers stay feasible and the trace counts coalitions") {
  const auto inst = instance(6, 3, 12, 12);
  LearnConfig cfg;
  cfg.max_iters = 300;
  JJaspaRun run(inst, cfg, 6);
  for (int t = 0; t < cfg.max_iters; ++t) {
    const bool done = run.step();
    for (int i = 0; i < inst.num_cus(); ++i)
      CHECK(is_feasible(inst, i, run.state().assoc[i], run.state().powers[i]));
    if (done) break;
  }
  const auto trace = run.finish();
  for (std::size_t r = 1; r < trace.rows.size(); ++r)
    CHECK(trace.rows[r].coalitions >= trace.rows[r - 1].coalitions);
}

TEST_CASE("recurring associations: per-AP potentials settle and certify") {
  const auto inst = instance(4, 2, 8, 13);
  LearnConfig cfg;
  cfg.stop_on_convergence = false;
  JJaspaRun run(inst, cfg, 7);
  std::map<Association, std::vector<PowerProfile>> visits;
  for (int t = 0; t < 1500; ++t) {
    run.step();
    visits[run.state().assoc].push_back(run.state().powers);
  }
  const auto most = std::max_element(visits.begin(), visits.end(), [](const auto& a, const auto& b) {
    return a.second.size() < b.second.size();
  });
  REQUIRE(most->second.size() >= 200);
  const Association& a = most->first;
  const auto occ = occupants_by_ap(inst, a);
  for (int w = 0; w < inst.num_aps(); ++w) {
    if (occ[w].empty()) continue;
    const auto& snaps = most->second;
    const std::size_t n = snaps.size();
    const double before = potential_ap(inst, w, occ[w], gather_powers(occ[w], snaps[n - 2]));
    const double last = potential_ap(inst, w, occ[w], gather_powers(occ[w], snaps[n - 1]));
    CHECK(std::abs(last - before) < 1e-4);
    for (int i : occ[w]) {
      const auto interf = interference_at(inst, a, snaps[n - 1], i, w);
      CHECK(best_rate_at(inst, i, w, interf).rate - rate(inst, i, w, snaps[n - 1][i], interf) <= 1e-3);
    }
  }
}

TEST_CASE("J-JASPA converges on most seeds and is reproducible") {
  int good = 0;
  for (int s = 0; s < 20; ++s) {
    const auto inst = instance(6, 3, 12, 1000 + s);
    LearnConfig cfg;
    cfg.max_iters = 2000;
    const auto t = run_jjaspa(inst, cfg, s);
    good += t.converged && t.certificate_gap <= 1e-6;
    if (s < 3) {
      const auto again = run_jjaspa(inst, cfg, s);
      CHECK(again.assoc == t.assoc);
      CHECK(again.powers == t.powers);
    }
  }
  CHECK(good >= 19);
}
