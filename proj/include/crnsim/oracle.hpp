#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "crnsim/inner.hpp"
#include "crnsim/model.hpp"

namespace crnsim {

struct PotentialMax {
  double value = 0.0;
  std::vector<PowerVector> powers;  // aligned with occupants
  int iterations = 0;
  double stationarity = 0.0;
};

/// Maximizes P_w over the product of the occupants' feasible sets with
/// spectral projected gradient ascent (Barzilai-Borwein steps, Armijo
/// backtracking). Stops when |proj(x + grad) - x|_inf < tol.
PotentialMax maximize_potential(const NetworkInstance& inst, int w,
                                std::span<const int> occupants, double tol = 1e-9,
                                int max_iters = 20000);

/// Equilibrium potential of AP w for the given occupant set (0 if empty).
double equilibrium_potential(const NetworkInstance& inst, int w,
                             std::span<const int> occupants, double tol = 1e-9);

/// Euclidean projection onto {p >= 0, sum p <= cap}.
void project_capped_simplex(std::span<double> v, double cap);

struct SepRow {
  Association assoc;
  double sep = 0.0;
  std::vector<double> ep;  // per AP
};

struct SepResult {
  Association best;
  double sep = 0.0;
  std::vector<SepRow> table;  // lexicographic order of associations
};

/// Largest number of association profiles exhaustive_sep accepts.
inline constexpr double kMaxAssociations = 1e6;

/// Exhaustive maximization of the system equilibrium potential over all
/// W^N associations. Ties resolve to the lexicographically smallest
/// profile. Throws std::invalid_argument above kMaxAssociations profiles.
SepResult exhaustive_sep(const NetworkInstance& inst, double tol = 1e-9);

/// Maximum network throughput: the best sum over APs of multiple-access
/// sum capacity, which coincides with the best SEP.
double max_throughput(const NetworkInstance& inst);

struct BaselineResult {
  Association assoc;
  PowerProfile powers;
  double sum_rate = 0.0;
};

/// Each CU joins its nearest AP (ties to the lower index); powers from the
/// inner equilibrium of every AP.
BaselineResult closest_ap_baseline(const NetworkInstance& inst, double tol = 1e-10);

/// Every channel of every AP merged into one virtual AP.
NetworkInstance merge_aps(const NetworkInstance& inst);

/// Inner equilibrium of a merged instance; assoc is all zeros and powers
/// span all K channels.
BaselineResult multi_connectivity_solve(const NetworkInstance& merged, double tol = 1e-8,
                                        const StepsizeSchedule& schedule = StepsizeSchedule{},
                                        int max_iters = 5000);

/// Sum rate when every CU may spread its budget over all K channels.
double multi_connectivity_baseline(const NetworkInstance& inst, double tol = 1e-8,
                                   const StepsizeSchedule& schedule = StepsizeSchedule{},
                                   int max_iters = 5000);

/// CSV dump: association, sep, ep_0..ep_{W-1}.
void write_sep_table(std::ostream& os, const SepResult& result, int num_aps);

}  // namespace crnsim
