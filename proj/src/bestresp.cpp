#include "crnsim/bestresp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace crnsim {

PowerVector waterfill(const NetworkInstance& inst, int i, int w,
                      std::span<const double> interference) {
  const auto& chans = inst.channels_of(w);
  const std::size_t m = chans.size();
  if (interference.size() != m) throw std::invalid_argument("waterfill: interference size");
  PowerVector p(m, 0.0);

  // floor[c] = (n + I) / |h|^2: the power needed before channel c is worth using.
  std::vector<double> floor(m);
  std::vector<std::size_t> usable;
  usable.reserve(m);
  for (std::size_t c = 0; c < m; ++c) {
    if (interference[c] < 0.0) throw std::invalid_argument("waterfill: negative interference");
    const double g = inst.gain(i, w, chans[c]);
    if (g > 0.0) {
      floor[c] = (inst.noise(w, chans[c]) + interference[c]) / g;
      usable.push_back(c);
    }
  }
  if (usable.empty()) return p;
  std::stable_sort(usable.begin(), usable.end(),
                   [&](std::size_t a, std::size_t b) { return floor[a] < floor[b]; });

  const double budget = inst.budget(i);
  double prefix = 0.0;
  double level = 0.0;
  std::size_t active = 0;
  for (std::size_t r = 0; r < usable.size(); ++r) {
    const double candidate = (budget + prefix + floor[usable[r]]) / static_cast<double>(r + 1);
    if (r > 0 && candidate <= floor[usable[r]]) break;
    prefix += floor[usable[r]];
    level = candidate;
    active = r + 1;
  }
  double total = 0.0;
  for (std::size_t r = 0; r < active; ++r) {
    const std::size_t c = usable[r];
    p[c] = std::max(0.0, level - floor[c]);
    total += p[c];
  }
  // Rounding can push the sum a hair over the budget; rescale into the set.
  if (total > budget) {
    const double s = budget / total;
    for (auto& v : p) v *= s;
  }
  return p;
}

BestRate best_rate_at(const NetworkInstance& inst, int i, int w,
                      std::span<const double> interference) {
  BestRate out;
  out.power = waterfill(inst, i, w, interference);
  out.rate = rate(inst, i, w, out.power, interference);
  return out;
}

int argmax_random_tie(std::span<const double> values, Rng& rng) {
  if (values.empty()) throw std::invalid_argument("argmax_random_tie: empty");
  const double best = *std::max_element(values.begin(), values.end());
  std::vector<int> ties;
  for (std::size_t w = 0; w < values.size(); ++w)
    if (values[w] == best) ties.push_back(static_cast<int>(w));
  if (ties.size() == 1) return ties.front();
  return ties[rng.index(ties.size())];
}

int select_best_ap(int current_ap, std::span<const double> rates_per_ap,
                   double current_rate, double cost, Rng& rng) {
  const double threshold = current_rate + cost;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> ties;
  for (int w = 0; w < static_cast<int>(rates_per_ap.size()); ++w) {
    if (w == current_ap) continue;
    const double r = rates_per_ap[w];
    if (!(r > threshold)) continue;
    if (r > best) {
      best = r;
      ties.assign(1, w);
    } else if (r == best) {
      ties.push_back(w);
    }
  }
  if (ties.empty()) return current_ap;
  if (ties.size() == 1) return ties.front();
  return ties[rng.index(ties.size())];
}

}  // namespace crnsim
