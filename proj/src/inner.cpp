#include "crnsim/inner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crnsim/bestresp.hpp"
#include "crnsim/physics.hpp"

namespace crnsim {

StepsizeSchedule::StepsizeSchedule(double exponent) : exponent_(exponent) {
  if (!(exponent > 0.5 && exponent <= 1.0))
    throw ConfigError("stepsize exponent must lie in (0.5, 1]");
}

double StepsizeSchedule::alpha(long t) const {
  if (t < 1) t = 1;
  return std::pow(static_cast<double>(t + 1), -exponent_);
}

namespace {

// Interference at w on each channel from every occupant except position q.
std::vector<double> interference_except(const NetworkInstance& inst, int w,
                                        std::span<const int> occupants,
                                        std::span<const PowerVector> powers, std::size_t q) {
  const auto& chans = inst.channels_of(w);
  std::vector<double> out(chans.size(), 0.0);
  for (std::size_t j = 0; j < occupants.size(); ++j) {
    if (j == q) continue;
    for (std::size_t m = 0; m < chans.size(); ++m)
      out[m] += inst.gain(occupants[j], w, chans[m]) * powers[j][m];
  }
  return out;
}

void check_inputs(const NetworkInstance& inst, int w, std::span<const int> occupants,
                  std::span<const PowerVector> init) {
  if (occupants.empty()) throw std::invalid_argument("inner solver: no occupants");
  if (init.size() != occupants.size()) throw std::invalid_argument("inner solver: init size");
  for (std::size_t q = 0; q < occupants.size(); ++q)
    if (!is_feasible(inst, occupants[q], w, init[q]))
      throw std::invalid_argument("inner solver: infeasible start");
}

double sup_diff(const PowerVector& a, const PowerVector& b) {
  double d = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) d = std::max(d, std::abs(a[m] - b[m]));
  return d;
}

}  // namespace

InnerResult aiwf_solve(const NetworkInstance& inst, int w, std::span<const int> occupants,
                       std::span<const PowerVector> init_powers,
                       const StepsizeSchedule& schedule, double tol, int max_iters) {
  check_inputs(inst, w, occupants, init_powers);
  InnerResult res;
  res.powers.assign(init_powers.begin(), init_powers.end());
  std::vector<PowerVector> next(res.powers.size());
  for (int t = 1; t <= max_iters; ++t) {
    const double a = schedule.alpha(t);
    // Distance to the undamped best response; the damped step itself
    // shrinks with alpha and would stop the loop early.
    double residual = 0.0;
    for (std::size_t q = 0; q < occupants.size(); ++q) {
      const auto interference = interference_except(inst, w, occupants, res.powers, q);
      const auto target = waterfill(inst, occupants[q], w, interference);
      next[q].resize(target.size());
      for (std::size_t m = 0; m < target.size(); ++m)
        next[q][m] = (1.0 - a) * res.powers[q][m] + a * target[m];
      residual = std::max(residual, sup_diff(target, res.powers[q]));
    }
    std::swap(res.powers, next);
    res.iterations = t;
    if (residual < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

InnerResult siwf_solve(const NetworkInstance& inst, int w, std::span<const int> occupants,
                       std::span<const PowerVector> init_powers, double tol, int max_iters) {
  check_inputs(inst, w, occupants, init_powers);
  InnerResult res;
  res.powers.assign(init_powers.begin(), init_powers.end());
  for (int t = 1; t <= max_iters; ++t) {
    double change = 0.0;
    for (std::size_t q = 0; q < occupants.size(); ++q) {
      const auto interference = interference_except(inst, w, occupants, res.powers, q);
      auto target = waterfill(inst, occupants[q], w, interference);
      change = std::max(change, sup_diff(target, res.powers[q]));
      res.powers[q] = std::move(target);
    }
    res.iterations = t;
    if (change < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

InnerResult inner_solve(const NetworkInstance& inst, int w, std::span<const int> occupants,
                        std::span<const PowerVector> init_powers, const InnerOptions& opts) {
  if (opts.solver == InnerSolver::kAveraged)
    return aiwf_solve(inst, w, occupants, init_powers, opts.schedule, opts.tol, opts.max_iters);
  return siwf_solve(inst, w, occupants, init_powers, opts.tol, opts.max_iters);
}

PowerProfile solve_all_aps(const NetworkInstance& inst, const Association& assoc,
                           const PowerProfile& start, const InnerOptions& opts, bool* converged) {
  const auto occupants = occupants_by_ap(inst, assoc);
  PowerProfile out = start;
  bool all = true;
  for (int w = 0; w < inst.num_aps(); ++w) {
    if (occupants[w].empty()) continue;
    const auto init = gather_powers(occupants[w], start);
    auto res = inner_solve(inst, w, occupants[w], init, opts);
    all = all && res.converged;
    for (std::size_t q = 0; q < occupants[w].size(); ++q) out[occupants[w][q]] = std::move(res.powers[q]);
  }
  if (converged) *converged = all;
  return out;
}

PowerProfile uniform_profile(const NetworkInstance& inst, const Association& assoc) {
  PowerProfile out(inst.num_cus());
  for (int i = 0; i < inst.num_cus(); ++i) out[i] = uniform_power(inst, i, assoc[i]);
  return out;
}

}  // namespace crnsim
