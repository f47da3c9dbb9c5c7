#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "crnsim/model.hpp"

namespace crnsim {

/// Signature of potential_ap; the suite evaluates potentials through this
/// so a deliberately broken version can be injected.
using PotentialFn = std::function<double(const NetworkInstance&, int, std::span<const int>,
                                         std::span<const PowerVector>)>;

/// potential_ap with its sign flipped, for mutation testing.
double mutated_potential(const NetworkInstance& inst, int w, std::span<const int> occupants,
                         std::span<const PowerVector> powers_w);

struct AcceptanceOptions {
  bool quick = false;     // reduced seed counts
  PotentialFn potential;  // empty selects potential_ap
  std::vector<int> only;  // criterion ids to run; empty runs all
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 when unbounded
};

inline constexpr int kNumCriteria = 10;

CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// Runs the selected criteria, printing one PASS/FAIL line per criterion to
/// out as each finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& out);

std::string format_result(const CriterionResult& r);

}  // namespace crnsim
