#pragma once

#include <span>
#include <vector>

#include "crnsim/model.hpp"

namespace crnsim {

/// Default decay exponent of the averaging stepsizes.
inline constexpr double kDefaultStepExponent = 0.6;

/// alpha_t = (t + 1)^(-exponent) for t >= 1, so every step lies in (0, 1).
/// Exponents in (0.5, 1] give sum alpha = inf and sum alpha^2 < inf.
class StepsizeSchedule {
 public:
  explicit StepsizeSchedule(double exponent = kDefaultStepExponent);
  double exponent() const { return exponent_; }
  double alpha(long t) const;

 private:
  double exponent_;
};

struct InnerResult {
  std::vector<PowerVector> powers;  // aligned with the occupant list
  int iterations = 0;
  bool converged = false;
};

enum class InnerSolver { kAveraged, kSequential };

struct InnerOptions {
  InnerSolver solver = InnerSolver::kSequential;
  StepsizeSchedule schedule{};
  double tol = 1e-8;
  int max_iters = 5000;
};

/// Averaged simultaneous iterative water-filling on one AP:
/// p_i <- (1 - alpha_t) p_i + alpha_t * waterfill_i(I_i) for all occupants
/// at once. Stops once every occupant is within tol (sup norm) of its own
/// best response.
InnerResult aiwf_solve(const NetworkInstance& inst, int w, std::span<const int> occupants,
                       std::span<const PowerVector> init_powers,
                       const StepsizeSchedule& schedule, double tol = 1e-8,
                       int max_iters = 5000);

/// Sequential (round-robin) iterative water-filling on one AP. One
/// iteration is a full pass over the occupants.
InnerResult siwf_solve(const NetworkInstance& inst, int w, std::span<const int> occupants,
                       std::span<const PowerVector> init_powers, double tol = 1e-8,
                       int max_iters = 5000);

InnerResult inner_solve(const NetworkInstance& inst, int w, std::span<const int> occupants,
                        std::span<const PowerVector> init_powers, const InnerOptions& opts);

/// Solves every occupied AP of assoc from the given per-CU start powers.
/// Returns the per-CU profile; converged is false if any AP hit max_iters.
PowerProfile solve_all_aps(const NetworkInstance& inst, const Association& assoc,
                           const PowerProfile& start, const InnerOptions& opts,
                           bool* converged = nullptr);

/// Uniform-split start for every CU of assoc.
PowerProfile uniform_profile(const NetworkInstance& inst, const Association& assoc);

}  // namespace crnsim
