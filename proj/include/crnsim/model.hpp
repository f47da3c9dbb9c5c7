#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnsim/rng.hpp"

namespace crnsim {

/// Raised on invalid configuration or malformed inputs.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

/// AP index per CU (single connectivity).
using Association = std::vector<int>;
/// Power of one CU over the channels of its AP, in the AP's channel order.
using PowerVector = std::vector<double>;
/// Indexed by CU; entry i is laid out over the channels of assoc[i].
using PowerProfile = std::vector<PowerVector>;

struct ScenarioConfig {
  int num_cus = 8;
  int num_aps = 2;
  int num_channels = 16;
  double area_m = 10.0;
  double power_budget = 1.0;
  double noise_floor = 0.01;
  std::uint64_t seed = 0;
  double d_min = 0.1;

  /// Throws ConfigError when any field is out of range.
  void validate() const;
};

/// Immutable network snapshot: geometry, channel partition and gains.
///
/// Channel k belongs to AP channel_owner[k]; channels_of(w) lists the owned
/// channels in increasing order and fixes the layout of every per-AP vector
/// (powers, interference). Gains for channels outside K_w are stored as zero.
class NetworkInstance {
 public:
  NetworkInstance() = default;
  NetworkInstance(int num_cus, int num_aps, int num_channels,
                  std::vector<int> channel_owner, std::vector<double> gains,
                  std::vector<double> noise, std::vector<double> budgets,
                  std::vector<Point> cu_positions,
                  std::vector<Point> ap_positions, std::uint64_t rng_seed = 0,
                  double log_base = 2.0);

  int num_cus() const { return num_cus_; }
  int num_aps() const { return num_aps_; }
  int num_channels() const { return num_channels_; }
  std::uint64_t rng_seed() const { return rng_seed_; }
  /// Base of the logarithm in every rate; 2 reports bits.
  double log_base() const { return log_base_; }

  const std::vector<int>& channel_owner() const { return channel_owner_; }
  const std::vector<int>& channels_of(int w) const { return channels_[w]; }
  std::size_t channel_count(int w) const { return channels_[w].size(); }

  /// |h_{i,w}(k)|^2 with k a global channel index.
  double gain(int i, int w, int k) const {
    return gains_[(static_cast<std::size_t>(i) * num_aps_ + w) * num_channels_ + k];
  }
  double noise(int w, int k) const {
    return noise_[static_cast<std::size_t>(w) * num_channels_ + k];
  }
  double budget(int i) const { return budgets_[i]; }

  const std::vector<double>& gains() const { return gains_; }
  const std::vector<double>& noise() const { return noise_; }
  const std::vector<double>& budgets() const { return budgets_; }
  const std::vector<Point>& cu_positions() const { return cu_pos_; }
  const std::vector<Point>& ap_positions() const { return ap_pos_; }

  /// Same network with rates measured in another logarithm base.
  NetworkInstance with_log_base(double base) const;

  bool operator==(const NetworkInstance&) const = default;

 private:
  int num_cus_ = 0;
  int num_aps_ = 0;
  int num_channels_ = 0;
  std::vector<int> channel_owner_;
  std::vector<std::vector<int>> channels_;
  std::vector<double> gains_;
  std::vector<double> noise_;
  std::vector<double> budgets_;
  std::vector<Point> cu_pos_;
  std::vector<Point> ap_pos_;
  std::uint64_t rng_seed_ = 0;
  double log_base_ = 2.0;
};

/// Contiguous blocks of size K/W in index order; the remainder goes to the
/// last AP. Throws ConfigError when K < W.
std::vector<int> assign_channels(int num_channels, int num_aps);

/// One Rayleigh power gain: exponential with mean 1/d^2.
double sample_channel_gain(Rng& rng, double distance_m);

/// Random snapshot: AP positions, then CU positions, uniform in the square
/// [0, area]^2; then gains in (CU, AP, owned channel) order. Distances are
/// floored at d_min. Deterministic in (config, seed).
NetworkInstance generate_snapshot(const ScenarioConfig& config, std::uint64_t seed);

/// True iff p is non-negative and sums to at most the CU's budget (1e-12
/// slack). Throws std::invalid_argument when p does not match |K_w|.
bool is_feasible(const NetworkInstance& inst, int i, int w,
                 std::span<const double> p);

/// Equal split of the budget over the channels of w.
PowerVector uniform_power(const NetworkInstance& inst, int i, int w);

/// Occupant lists per AP, in increasing CU order.
std::vector<std::vector<int>> occupants_by_ap(const NetworkInstance& inst,
                                              const Association& assoc);

/// Throws std::invalid_argument when assoc has a bad size or AP index.
void check_association(const NetworkInstance& inst, const Association& assoc);

/// "0-2-1" style encoding used in CSV output.
std::string encode_association(const Association& assoc);

}  // namespace crnsim
