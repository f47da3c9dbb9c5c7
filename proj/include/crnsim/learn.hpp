#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "crnsim/inner.hpp"
#include "crnsim/model.hpp"
#include "crnsim/rng.hpp"

namespace crnsim {

/// FIFO of the last M best replies of one CU. A best reply is an elementary
/// vector e_w, stored by its index; beta is the mean of the stored replies.
class ReplyMemory {
 public:
  ReplyMemory() = default;
  ReplyMemory(int num_aps, int capacity);

  void push(int best_reply);
  std::vector<double> beta() const;
  /// Largest entry of beta (1 when every stored reply agrees).
  double max_beta() const;

  int capacity() const { return capacity_; }
  int num_aps() const { return num_aps_; }
  const std::deque<int>& contents() const { return replies_; }

 private:
  int num_aps_ = 0;
  int capacity_ = 0;
  std::deque<int> replies_;
  std::vector<int> counts_;
};

/// Pushes b_new (evicting the oldest entry when full) and returns the result.
ReplyMemory beta_update(ReplyMemory mem, int best_reply);

/// AP index drawn with probabilities beta.
int sample_association(std::span<const double> beta, Rng& rng);

struct GameState {
  Association assoc;
  PowerProfile powers;
  std::vector<ReplyMemory> memory;
  std::vector<long> stay;  // duration of stay T_i
  long t = 0;
};

struct JepCertificate {
  bool pass = false;
  double gap = 0.0;    // largest unilateral improvement over all CUs
  int worst_cu = -1;
};

/// Checks that no CU can raise its rate by more than tol by changing its
/// AP, its power, or both, with everyone else fixed.
JepCertificate certify_jep(const NetworkInstance& inst, const Association& assoc,
                           const PowerProfile& powers, double tol);

struct LearnConfig {
  int memory = 10;               // M
  double cost = 0.0;             // connection cost shared by every CU
  std::vector<double> costs;     // per-CU override when non-empty
  int max_iters = 500;
  int stop_window = 0;           // 0 selects the per-algorithm default
  StepsizeSchedule schedule{};
  InnerOptions inner{};
  double certify_tol = 1e-6;
  bool stop_on_convergence = true;

  double cost_of(int i) const;
  double max_cost() const;
};

struct TraceRow {
  long iteration = 0;
  double sum_rate = 0.0;
  double potential = 0.0;
  int num_switchers = 0;
  double max_beta_gap = 0.0;
  bool converged = false;
  long coalitions = 0;
};

struct RunTrace {
  std::string algo;
  std::vector<TraceRow> rows;
  bool converged = false;
  /// Iterations until the run settled on a certified equilibrium (see
  /// ConvergenceMonitor); -1 when it did not converge.
  long iterations_to_converge = -1;
  long iterations_run = 0;
  Association assoc;
  PowerProfile powers;
  double sum_rate = 0.0;
  double potential = 0.0;
  double certificate_gap = 0.0;
  std::vector<std::string> warnings;
};

/// Convergence bookkeeping shared by the iterative algorithms.
///
/// A run converges once the last `window` iterations were quiet (nobody
/// switched and, where the algorithm keeps beta vectors, all of them are
/// concentrated) and the current state passes the JEP certificate. The
/// reported iteration count is the first iteration since the last switch
/// from which the certificate kept passing.
class ConvergenceMonitor {
 public:
  explicit ConvergenceMonitor(int window) : window_(window) {}

  /// Records iteration t (0-based). certified is only consulted when
  /// nobody switched.
  void record(long t, bool quiet, bool switched, bool certified);
  bool converged() const { return quiet_run_ >= window_ && certified_since_ >= 0; }
  /// Whether the caller needs a certificate for the upcoming record().
  bool wants_certificate(bool switched) const { return !switched; }
  long iterations_to_converge() const { return certified_since_ + 1; }
  int window() const { return window_; }

 private:
  int window_;
  long quiet_run_ = 0;
  long certified_since_ = -1;
};

/// JASPA: inner equilibrium per AP, strict best-reply selection, beta
/// update from the reply memory, multinomial AP sampling.
class JaspaRun {
 public:
  JaspaRun(const NetworkInstance& inst, LearnConfig config, std::uint64_t seed);
  JaspaRun(const NetworkInstance& inst, LearnConfig config, std::uint64_t seed,
           Association initial);

  /// One outer iteration. Returns true once convergence has been declared.
  bool step();
  const GameState& state() const { return state_; }
  const RunTrace& trace() const { return trace_; }
  /// Best reply of each CU from the most recent iteration.
  const std::vector<int>& last_best_replies() const { return best_replies_; }
  RunTrace finish();

 private:
  const NetworkInstance& inst_;
  LearnConfig config_;
  Rng rng_;
  GameState state_;
  RunTrace trace_;
  ConvergenceMonitor monitor_;
  std::vector<int> best_replies_;
  bool done_ = false;
};

/// Se-JASPA: one CU acts per iteration in round-robin order.
class SeJaspaRun {
 public:
  SeJaspaRun(const NetworkInstance& inst, LearnConfig config, std::uint64_t seed);
  bool step();
  const GameState& state() const { return state_; }
  const RunTrace& trace() const { return trace_; }
  RunTrace finish();

 private:
  const NetworkInstance& inst_;
  LearnConfig config_;
  Rng rng_;
  GameState state_;
  RunTrace trace_;
  ConvergenceMonitor monitor_;
  bool done_ = false;
};

/// Si-JASPA: all CUs select, sample and update powers simultaneously; stays
/// are damped with alpha of the duration of stay.
class SiJaspaRun {
 public:
  SiJaspaRun(const NetworkInstance& inst, LearnConfig config, std::uint64_t seed);
  bool step();
  const GameState& state() const { return state_; }
  const RunTrace& trace() const { return trace_; }
  RunTrace finish();

 private:
  const NetworkInstance& inst_;
  LearnConfig config_;
  Rng rng_;
  GameState state_;
  RunTrace trace_;
  ConvergenceMonitor monitor_;
  bool done_ = false;
};

RunTrace run_jaspa(const NetworkInstance& inst, const LearnConfig& config, std::uint64_t seed);
RunTrace run_se_jaspa(const NetworkInstance& inst, const LearnConfig& config, std::uint64_t seed);
RunTrace run_si_jaspa(const NetworkInstance& inst, const LearnConfig& config, std::uint64_t seed);

/// Random start shared by the algorithms: uniform AP per CU.
Association random_association(const NetworkInstance& inst, Rng& rng);
/// Flat-Dirichlet power over the channels of w, scaled to the full budget.
PowerVector random_power(const NetworkInstance& inst, int i, int w, Rng& rng);

namespace detail {
void finalize_trace(const NetworkInstance& inst, const Association& assoc,
                    const PowerProfile& powers, double tol, RunTrace& trace);
TraceRow make_row(const NetworkInstance& inst, const Association& assoc,
                  const PowerProfile& powers, long t);
}  // namespace detail

}  // namespace crnsim
