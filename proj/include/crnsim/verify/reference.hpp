#pragma once

#include <span>
#include <vector>

#include "crnsim/model.hpp"

// Slow, independently coded versions of the core formulas. They share no
// code with the library beyond the NetworkInstance accessors.
namespace crnsim::ref {

/// Rate by direct summation over global channel indices, log via log2/log.
double rate(const NetworkInstance& inst, int i, int w, std::span<const double> p,
            std::span<const double> interference);

/// I_{i,w}(k) by a double loop over all CUs and all K channels.
/// Result[i][w] is laid out over channels_of(w).
std::vector<std::vector<std::vector<double>>> interference(const NetworkInstance& inst,
                                                           const Association& assoc,
                                                           const PowerProfile& powers);

/// P_w as log(n + S) - log(n), occupants read straight from assoc.
double potential(const NetworkInstance& inst, const Association& assoc,
                 const PowerProfile& powers, int w);

double system_potential(const NetworkInstance& inst, const Association& assoc,
                        const PowerProfile& powers);

/// Best rate of CU i at AP w over a grid of the budget face, for APs that
/// own exactly three channels. step is a fraction of the budget.
double grid_best_rate_3ch(const NetworkInstance& inst, int i, int w,
                          std::span<const double> interference, double step);

/// Largest violation of the water-filling optimality conditions: equal
/// levels p + floor on active channels, floors above the level elsewhere,
/// and a saturated budget.
double waterfill_kkt_residual(const NetworkInstance& inst, int i, int w,
                              std::span<const double> interference,
                              std::span<const double> p);

struct GridMax {
  double value = 0.0;
  double x0 = 0.0;  // CU 0 power on the AP's first channel
  double x1 = 0.0;  // CU 1 power on the AP's first channel
};

/// Maximum of P_w for two occupants of a two-channel AP, each on its budget
/// face, over an (m+1) x (m+1) grid.
GridMax grid_potential_2x2(const NetworkInstance& inst, int w, int cu0, int cu1, int m);

}  // namespace crnsim::ref
