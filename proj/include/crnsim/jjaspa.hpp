#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <vector>

#include "crnsim/learn.hpp"
#include "crnsim/physics.hpp"

namespace crnsim {

/// Order-independent identity of a set of CUs (sorted index list).
struct CoalitionKey {
  std::vector<int> members;
  auto operator<=>(const CoalitionKey&) const = default;
  bool operator==(const CoalitionKey&) const = default;
};

CoalitionKey coalition_key(std::span<const int> occupants);

/// Per-AP interference seen by one CU in one iteration, indexed by AP.
using InterferenceSnapshot = std::vector<std::vector<double>>;

/// Association, interference and rate memories of one CU. The three FIFOs
/// move together, so position m of each refers to the same iteration.
class CuMemories {
 public:
  struct Entry {
    int ap;
    const InterferenceSnapshot* interference;
    double rate;
    long iteration;
  };

  explicit CuMemories(int capacity = 1) : capacity_(capacity) {}

  void push(int ap, InterferenceSnapshot interference, double rate, long iteration);
  std::size_t size() const { return am_.size(); }
  int capacity() const { return capacity_; }
  Entry at(std::size_t m) const { return {am_[m], &im_[m], rm_[m], stamp_[m]}; }

 private:
  int capacity_;
  std::deque<int> am_;
  std::deque<InterferenceSnapshot> im_;
  std::deque<double> rm_;
  std::deque<long> stamp_;
};

/// What an AP remembers about one coalition: the occupants' powers and
/// interference at its last visit and the number of visits. Vectors are
/// aligned with the key's sorted member list.
struct ApCoalitionRecord {
  std::vector<PowerVector> powers;
  std::vector<std::vector<double>> interference;
  long visits = 0;
  long last_visit = -1;
};

using CoalitionTable = std::map<CoalitionKey, ApCoalitionRecord>;

/// Joint-strategy JASPA. CUs pick APs from a uniformly sampled memory slot;
/// powers follow the coalition record of the AP they land on.
class JJaspaRun {
 public:
  static constexpr std::size_t kMaxCoalitionsPerAp = 4096;

  JJaspaRun(const NetworkInstance& inst, LearnConfig config, std::uint64_t seed);

  bool step();
  const GameState& state() const { return state_; }
  const RunTrace& trace() const { return trace_; }
  const std::vector<CuMemories>& memories() const { return memories_; }
  const std::vector<CoalitionTable>& records() const { return records_; }
  /// Memory slot (oldest first) each CU sampled in the latest iteration.
  const std::vector<std::size_t>& last_samples() const { return last_samples_; }
  /// Candidate AP sets W*_i from the latest iteration.
  const std::vector<std::vector<int>>& last_candidates() const { return last_candidates_; }
  long coalition_count() const;
  RunTrace finish();

 private:
  void update_records(const InterferenceMap& imap, long t);

  const NetworkInstance& inst_;
  LearnConfig config_;
  Rng rng_;
  GameState state_;
  RunTrace trace_;
  ConvergenceMonitor monitor_;
  std::vector<CuMemories> memories_;
  std::vector<CoalitionTable> records_;
  std::vector<std::size_t> last_samples_;
  std::vector<std::vector<int>> last_candidates_;
  bool evicted_ = false;
  bool done_ = false;
};

RunTrace run_jjaspa(const NetworkInstance& inst, const LearnConfig& config, std::uint64_t seed);

}  // namespace crnsim
