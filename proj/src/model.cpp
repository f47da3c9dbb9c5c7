#include "crnsim/model.hpp"

#include <cmath>
#include <numeric>

namespace crnsim {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void ScenarioConfig::validate() const {
  if (num_cus < 1) throw ConfigError("num_cus must be >= 1");
  if (num_aps < 1) throw ConfigError("num_aps must be >= 1");
  if (num_channels < 1) throw ConfigError("num_channels must be >= 1");
  if (num_channels < num_aps)
    throw ConfigError("num_channels must be >= num_aps (an AP would own no channel)");
  if (!(area_m > 0.0)) throw ConfigError("area_m must be > 0");
  if (!(power_budget > 0.0)) throw ConfigError("power_budget must be > 0");
  if (!(noise_floor > 0.0)) throw ConfigError("noise_floor must be > 0");
  if (!(d_min > 0.0)) throw ConfigError("d_min must be > 0");
}

NetworkInstance::NetworkInstance(int num_cus, int num_aps, int num_channels,
                                 std::vector<int> channel_owner,
                                 std::vector<double> gains,
                                 std::vector<double> noise,
                                 std::vector<double> budgets,
                                 std::vector<Point> cu_positions,
                                 std::vector<Point> ap_positions,
                                 std::uint64_t rng_seed, double log_base)
    : num_cus_(num_cus),
      num_aps_(num_aps),
      num_channels_(num_channels),
      channel_owner_(std::move(channel_owner)),
      gains_(std::move(gains)),
      noise_(std::move(noise)),
      budgets_(std::move(budgets)),
      cu_pos_(std::move(cu_positions)),
      ap_pos_(std::move(ap_positions)),
      rng_seed_(rng_seed),
      log_base_(log_base) {
  if (num_cus_ < 1 || num_aps_ < 1 || num_channels_ < 1)
    throw ConfigError("NetworkInstance: N, W, K must be positive");
  const auto n = static_cast<std::size_t>(num_cus_);
  const auto w = static_cast<std::size_t>(num_aps_);
  const auto k = static_cast<std::size_t>(num_channels_);
  if (channel_owner_.size() != k) throw ConfigError("NetworkInstance: channel_owner size");
  if (gains_.size() != n * w * k) throw ConfigError("NetworkInstance: gains size");
  if (noise_.size() != w * k) throw ConfigError("NetworkInstance: noise size");
  if (budgets_.size() != n) throw ConfigError("NetworkInstance: budgets size");
  if (!cu_pos_.empty() && cu_pos_.size() != n) throw ConfigError("NetworkInstance: cu positions size");
  if (!ap_pos_.empty() && ap_pos_.size() != w) throw ConfigError("NetworkInstance: ap positions size");
  if (!(log_base_ > 0.0) || log_base_ == 1.0) throw ConfigError("NetworkInstance: bad log base");

  channels_.assign(w, {});
  for (int c = 0; c < num_channels_; ++c) {
    const int owner = channel_owner_[c];
    if (owner < 0 || owner >= num_aps_) throw ConfigError("NetworkInstance: channel owner out of range");
    channels_[owner].push_back(c);
  }
  for (double g : gains_)
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("NetworkInstance: gains must be >= 0");
  for (int ap = 0; ap < num_aps_; ++ap)
    for (int c : channels_[ap])
      if (!(this->noise(ap, c) > 0.0)) throw ConfigError("NetworkInstance: noise must be > 0");
  for (double b : budgets_)
    if (!(b > 0.0)) throw ConfigError("NetworkInstance: budgets must be > 0");
}

NetworkInstance NetworkInstance::with_log_base(double base) const {
  NetworkInstance copy = *this;
  if (!(base > 0.0) || base == 1.0) throw ConfigError("NetworkInstance: bad log base");
  copy.log_base_ = base;
  return copy;
}

std::vector<int> assign_channels(int num_channels, int num_aps) {
  if (num_aps < 1 || num_channels < 1) throw ConfigError("assign_channels: N, K must be positive");
  if (num_channels < num_aps)
    throw ConfigError("assign_channels: fewer channels than APs");
  const int block = num_channels / num_aps;
  std::vector<int> owner(num_channels);
  for (int k = 0; k < num_channels; ++k) owner[k] = std::min(k / block, num_aps - 1);
  return owner;
}

double sample_channel_gain(Rng& rng, double distance_m) {
  return rng.exponential(1.0 / (distance_m * distance_m));
}

NetworkInstance generate_snapshot(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const int n = config.num_cus;
  const int w = config.num_aps;
  const int k = config.num_channels;
  Rng rng(seed);

  std::vector<Point> aps(w);
  for (auto& p : aps) {
    p.x = rng.uniform(0.0, config.area_m);
    p.y = rng.uniform(0.0, config.area_m);
  }
  std::vector<Point> cus(n);
  for (auto& p : cus) {
    p.x = rng.uniform(0.0, config.area_m);
    p.y = rng.uniform(0.0, config.area_m);
  }

  auto owner = assign_channels(k, w);
  std::vector<double> gains(static_cast<std::size_t>(n) * w * k, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int ap = 0; ap < w; ++ap) {
      const double d = std::max(distance(cus[i], aps[ap]), config.d_min);
      for (int c = 0; c < k; ++c) {
        if (owner[c] != ap) continue;
        gains[(static_cast<std::size_t>(i) * w + ap) * k + c] = sample_channel_gain(rng, d);
      }
    }
  }
  std::vector<double> noise(static_cast<std::size_t>(w) * k, config.noise_floor);
  std::vector<double> budgets(n, config.power_budget);
  return NetworkInstance(n, w, k, std::move(owner), std::move(gains), std::move(noise),
                         std::move(budgets), std::move(cus), std::move(aps), seed);
}

bool is_feasible(const NetworkInstance& inst, int i, int w, std::span<const double> p) {
  if (p.size() != inst.channel_count(w))
    throw std::invalid_argument("is_feasible: power vector does not match |K_w|");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) return false;
    total += v;
  }
  return total <= inst.budget(i) + 1e-12;
}

PowerVector uniform_power(const NetworkInstance& inst, int i, int w) {
  const auto m = inst.channel_count(w);
  return PowerVector(m, inst.budget(i) / static_cast<double>(m));
}

std::vector<std::vector<int>> occupants_by_ap(const NetworkInstance& inst,
                                              const Association& assoc) {
  std::vector<std::vector<int>> out(inst.num_aps());
  for (int i = 0; i < static_cast<int>(assoc.size()); ++i) out[assoc[i]].push_back(i);
  return out;
}

void check_association(const NetworkInstance& inst, const Association& assoc) {
  if (static_cast<int>(assoc.size()) != inst.num_cus())
    throw std::invalid_argument("association size differs from num_cus");
  for (int a : assoc)
    if (a < 0 || a >= inst.num_aps()) throw std::invalid_argument("association has an invalid AP index");
}

std::string encode_association(const Association& assoc) {
  std::string out;
  for (std::size_t i = 0; i < assoc.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(assoc[i]);
  }
  return out;
}

}  // namespace crnsim
