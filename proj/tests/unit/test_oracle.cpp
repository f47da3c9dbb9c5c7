#include <cmath>
#include <numeric>

#include "crnsim/bestresp.hpp"
#include "crnsim/inner.hpp"
#include "crnsim/learn.hpp"
#include "crnsim/oracle.hpp"
#include "crnsim/physics.hpp"
#include "crnsim/verify/reference.hpp"
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

// Relabels APs by perm, carrying their channel blocks, gains and noise.
NetworkInstance permute_aps(const NetworkInstance& inst, const std::vector<int>& perm) {
  const int n = inst.num_cus(), w = inst.num_aps(), k = inst.num_channels();
  std::vector<int> owner(k);
  std::vector<double> gains(static_cast<std::size_t>(n) * w * k, 0.0), noise(w * k, 0.0);
  std::vector<Point> aps(w);
  for (int c = 0; c < k; ++c) owner[c] = perm[inst.channel_owner()[c]];
  for (int a = 0; a < w; ++a) {
    aps[perm[a]] = inst.ap_positions()[a];
    for (int c = 0; c < k; ++c) {
      noise[perm[a] * k + c] = inst.noise(a, c);
      for (int i = 0; i < n; ++i) gains[(static_cast<std::size_t>(i) * w + perm[a]) * k + c] = inst.gain(i, a, c);
    }
  }
  return NetworkInstance(n, w, k, owner, gains, noise, inst.budgets(), inst.cu_positions(), aps);
}

}  // namespace

TEST_CASE("capped simplex projection") {
  std::vector<double> inside{0.2, 0.3};
  project_capped_simplex(inside, 1.0);
  CHECK(inside == std::vector<double>{0.2, 0.3});
  std::vector<double> neg{-1.0, 0.5};
  project_capped_simplex(neg, 1.0);
  CHECK(neg == std::vector<double>{0.0, 0.5});
  std::vector<double> big{2.0, 1.0, -3.0};
  project_capped_simplex(big, 1.0);
  CHECK(big[0] == doctest::Approx(1.0));
  CHECK(big[1] == doctest::Approx(0.0));
  CHECK(big[2] == 0.0);
  std::vector<double> even{3.0, 3.0};
  project_capped_simplex(even, 2.0);
  CHECK(even[0] == doctest::Approx(1.0));
  CHECK(even[1] == doctest::Approx(1.0));
}

TEST_CASE("equilibrium potential: empty AP and single occupant") {
  const auto inst = instance(2, 2, 6, 1);
  const std::vector<int> none;
  CHECK(equilibrium_potential(inst, 0, none) == 0.0);
  const std::vector<int> one{1};
  const auto br = best_rate_at(inst, 1, 1, std::vector<double>(3, 0.0));
  CHECK(equilibrium_potential(inst, 1, one) == doctest::Approx(br.rate).epsilon(1e-9));
}

TEST_CASE("equilibrium potential matches a 2-D grid for N=2, K=2") {
  for (int s = 0; s < 10; ++s) {
    const auto inst = instance(2, 1, 2, 100 + s);
    const std::vector<int> occ{0, 1};
    const auto grid = ref::grid_potential_2x2(inst, 0, 0, 1, 500);
    CHECK(std::abs(equilibrium_potential(inst, 0, occ) - grid.value) <= 1e-4);
  }
}

TEST_CASE("equilibrium potential agrees with the averaged inner solver") {
  for (int s = 0; s < 20; ++s) {
    const auto inst = instance(3 + s % 3, 1, 4 + s % 4, 200 + s);
    std::vector<int> occ(inst.num_cus());
    std::iota(occ.begin(), occ.end(), 0);
    std::vector<PowerVector> init;
    for (int i : occ) init.push_back(uniform_power(inst, i, 0));
    const auto a = aiwf_solve(inst, 0, occ, init, StepsizeSchedule{}, 1e-10, 500000);
    const double ep = equilibrium_potential(inst, 0, occ);
    CHECK(std::abs(ep - potential_ap(inst, 0, occ, a.powers)) <= 1e-4 * ep);
    const auto pm = maximize_potential(inst, 0, occ);
    for (std::size_t m = 0; m < occ.size(); ++m) CHECK(is_feasible(inst, occ[m], 0, pm.powers[m]));
  }
}

TEST_CASE("exhaustive search with one CU picks the better AP") {
  for (int s = 0; s < 10; ++s) {
    const auto inst = instance(1, 2, 4, 300 + s);
    const std::vector<double> none(2, 0.0);
    const double r0 = best_rate_at(inst, 0, 0, none).rate, r1 = best_rate_at(inst, 0, 1, none).rate;
    const auto res = exhaustive_sep(inst);
    CHECK(res.best[0] == (r0 >= r1 ? 0 : 1));
    CHECK(res.table.size() == 2);
    CHECK(max_throughput(inst) == doctest::Approx(std::max(r0, r1)).epsilon(1e-9));
  }
}

TEST_CASE("symmetric instance: mirrored profiles tie and the smaller one wins") {
  const NetworkInstance inst(2, 2, 2, {0, 1}, {1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0},
                             {0.01, 0.01, 0.01, 0.01}, {1.0, 1.0}, {Point{}, Point{}},
                             {Point{}, Point{}});
  const auto res = exhaustive_sep(inst);
  REQUIRE(res.table.size() == 4);
  // Lexicographic order: 0-0, 0-1, 1-0, 1-1.
  CHECK(std::abs(res.table[1].sep - res.table[2].sep) <= 1e-9);
  CHECK(std::abs(res.table[0].sep - res.table[3].sep) <= 1e-9);
  CHECK(res.best == Association{0, 1});
}

TEST_CASE("the SEP maximizer passes the equilibrium certificate") {
  for (int s = 0; s < 15; ++s) {
    const auto inst = instance(2 + s % 3, 2, 4, 400 + s);
    const auto res = exhaustive_sep(inst);
    InnerOptions opts;
    opts.tol = 1e-13;
    opts.max_iters = 200000;
    const auto p = solve_all_aps(inst, res.best, uniform_profile(inst, res.best), opts);
    CHECK(certify_jep(inst, res.best, p, 1e-6).pass);
  }
}

TEST_CASE("T* bounds every SEP and every JASPA outcome") {
  for (int s = 0; s < 10; ++s) {
    const auto inst = instance(5, 3, 9, 500 + s);
    const auto res = exhaustive_sep(inst);
    const double tstar = max_throughput(inst);
    CHECK(tstar == doctest::Approx(res.sep));
    for (const auto& row : res.table) {
      CHECK(row.sep <= tstar + 1e-12);
      double total = 0.0;
      for (double e : row.ep) total += e;
      CHECK(row.sep == doctest::Approx(total));
    }
    LearnConfig cfg;
    CHECK(run_jaspa(inst, cfg, s).sum_rate <= tstar + 1e-9);
  }
}

TEST_CASE("T* is invariant under AP relabeling") {
  for (int s = 0; s < 5; ++s) {
    const auto inst = instance(4, 3, 9, 600 + s);
    const auto swapped = permute_aps(inst, {2, 0, 1});
    CHECK(max_throughput(swapped) == doctest::Approx(max_throughput(inst)).epsilon(1e-8));
  }
}

TEST_CASE("oversized searches are refused") {
  const auto inst = instance(21, 2, 4, 1);
  CHECK_THROWS_AS(exhaustive_sep(inst), std::invalid_argument);
}

TEST_CASE("closest AP: ties go to the lower index, co-located CUs pick that AP") {
  // AP 0 at (0,0), AP 1 at (2,0); CU 0 halfway, CU 1 sitting on AP 1.
  const NetworkInstance inst(2, 2, 2, {0, 1}, {1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0},
                             {0.01, 0.01, 0.01, 0.01}, {1.0, 1.0}, {Point{1, 0}, Point{2, 0}},
                             {Point{0, 0}, Point{2, 0}});
  const auto b = closest_ap_baseline(inst);
  CHECK(b.assoc == Association{0, 1});
  CHECK(b.sum_rate == doctest::Approx(sum_rate(inst, b.assoc, b.powers)));
}

TEST_CASE("closest AP trails JASPA on average") {
  double closest = 0.0, jaspa = 0.0;
  for (int s = 0; s < 10; ++s) {
    const auto inst = instance(8, 4, 16, 700 + s);
    closest += closest_ap_baseline(inst).sum_rate;
    LearnConfig cfg;
    jaspa += run_jaspa(inst, cfg, s).sum_rate;
  }
  CHECK(closest <= jaspa);
}

TEST_CASE("multi-connectivity with one AP is the normal game") {
  const auto inst = instance(4, 1, 6, 8);
  const std::vector<int> occ{0, 1, 2, 3};
  std::vector<PowerVector> init;
  for (int i : occ) init.push_back(uniform_power(inst, i, 0));
  const auto a = aiwf_solve(inst, 0, occ, init, StepsizeSchedule{});
  const Association all(4, 0);
  PowerProfile p(a.powers.begin(), a.powers.end());
  CHECK(multi_connectivity_baseline(inst) == doctest::Approx(sum_rate(inst, all, p)).epsilon(1e-12));
  CHECK(merge_aps(inst).gains() == inst.gains());
}

TEST_CASE("multi-connectivity with one CU beats its best single AP") {
  for (int s = 0; s < 10; ++s) {
    const auto inst = instance(1, 3, 9, 800 + s);
    const std::vector<double> none(3, 0.0);
    double best = 0.0;
    for (int w = 0; w < 3; ++w) best = std::max(best, best_rate_at(inst, 0, w, none).rate);
    CHECK(multi_connectivity_baseline(inst) >= best - 1e-12);
  }
}

TEST_CASE("merged instance keeps every gain on one AP") {
  const auto inst = instance(3, 3, 9, 9);
  const auto m = merge_aps(inst);
  CHECK(m.num_aps() == 1);
  CHECK(m.channel_count(0) == 9);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 9; ++k) CHECK(m.gain(i, 0, k) == inst.gain(i, inst.channel_owner()[k], k));
}
