#pragma once

#include <span>
#include <vector>

#include "crnsim/model.hpp"
#include "crnsim/physics.hpp"
#include "crnsim/rng.hpp"

namespace crnsim {

/// Single-CU best response at AP w: the maximizer of rate(i, w, ., I) over
/// the feasible set. Active channels share one water level; channels with
/// zero gain get nothing, and an AP with no usable channel yields zeros.
PowerVector waterfill(const NetworkInstance& inst, int i, int w,
                      std::span<const double> interference);

struct BestRate {
  double rate = 0.0;
  PowerVector power;
};

/// What CU i would earn at w against the given interference, and the
/// power that achieves it.
BestRate best_rate_at(const NetworkInstance& inst, int i, int w,
                      std::span<const double> interference);

/// AP choice with the strict-improvement rule: candidates are the APs other
/// than current_ap whose rate exceeds current_rate + cost; the CU stays when
/// there is none, otherwise picks uniformly among the best candidates.
/// rates_per_ap[current_ap] is ignored.
int select_best_ap(int current_ap, std::span<const double> rates_per_ap,
                   double current_rate, double cost, Rng& rng);

/// Uniform pick among the exact maximizers of values.
int argmax_random_tie(std::span<const double> values, Rng& rng);

}  // namespace crnsim
