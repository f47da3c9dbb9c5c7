#include "crnsim/verify/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crnsim::ref {
namespace {

double log_b(const NetworkInstance& inst, double x) {
  return inst.log_base() == 2.0 ? std::log2(x) : std::log(x) / std::log(inst.log_base());
}

// Position of global channel k inside the layout of AP w, or -1.
int slot_of(const NetworkInstance& inst, int w, int k) {
  const auto& ch = inst.channels_of(w);
  for (std::size_t s = 0; s < ch.size(); ++s)
    if (ch[s] == k) return static_cast<int>(s);
  return -1;
}

}  // namespace

double rate(const NetworkInstance& inst, int i, int w, std::span<const double> p,
            std::span<const double> interference) {
  double total = 0.0;
  for (int k = 0; k < inst.num_channels(); ++k) {
    const int s = slot_of(inst, w, k);
    if (s < 0) continue;
    const double sinr = inst.gain(i, w, k) * p[s] / (inst.noise(w, k) + interference[s]);
    total += log_b(inst, 1.0 + sinr);
  }
  return total / inst.num_channels();
}

std::vector<std::vector<std::vector<double>>> interference(const NetworkInstance& inst,
                                                           const Association& assoc,
                                                           const PowerProfile& powers) {
  const int n = inst.num_cus();
  std::vector<std::vector<std::vector<double>>> out(n);
  for (int i = 0; i < n; ++i) {
    out[i].resize(inst.num_aps());
    for (int w = 0; w < inst.num_aps(); ++w) {
      out[i][w].assign(inst.channel_count(w), 0.0);
      for (int k = 0; k < inst.num_channels(); ++k) {
        const int s = slot_of(inst, w, k);
        if (s < 0) continue;
        for (int j = 0; j < n; ++j) {
          if (j == i || assoc[j] != w) continue;
          out[i][w][s] += inst.gain(j, w, k) * powers[j][s];
        }
      }
    }
  }
  return out;
}

double potential(const NetworkInstance& inst, const Association& assoc,
                 const PowerProfile& powers, int w) {
  double total = 0.0;
  for (int k = 0; k < inst.num_channels(); ++k) {
    const int s = slot_of(inst, w, k);
    if (s < 0) continue;
    double received = inst.noise(w, k);
    for (int j = 0; j < inst.num_cus(); ++j)
      if (assoc[j] == w) received += inst.gain(j, w, k) * powers[j][s];
    total += log_b(inst, received) - log_b(inst, inst.noise(w, k));
  }
  return total / inst.num_channels();
}

double system_potential(const NetworkInstance& inst, const Association& assoc,
                        const PowerProfile& powers) {
  double total = 0.0;
  for (int w = 0; w < inst.num_aps(); ++w) total += potential(inst, assoc, powers, w);
  return total;
}

double grid_best_rate_3ch(const NetworkInstance& inst, int i, int w,
                          std::span<const double> interference, double step) {
  const auto& ch = inst.channels_of(w);
  if (ch.size() != 3) throw std::invalid_argument("grid oracle needs exactly 3 channels");
  const int m = static_cast<int>(std::lround(1.0 / step));
  const double unit = inst.budget(i) / m;
  // Per-channel tables turn the 2-D scan into additions.
  std::vector<std::vector<double>> table(3, std::vector<double>(m + 1));
  for (int s = 0; s < 3; ++s) {
    const double g = inst.gain(i, w, ch[s]) / (inst.noise(w, ch[s]) + interference[s]);
    for (int j = 0; j <= m; ++j) table[s][j] = log_b(inst, 1.0 + g * unit * j);
  }
  double best = 0.0;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; a + b <= m; ++b)
      best = std::max(best, table[0][a] + table[1][b] + table[2][m - a - b]);
  return best / inst.num_channels();
}

double waterfill_kkt_residual(const NetworkInstance& inst, int i, int w,
                              std::span<const double> interference,
                              std::span<const double> p) {
  const auto& ch = inst.channels_of(w);
  std::vector<double> floor(ch.size());
  double level = -1.0, used = 0.0;
  for (std::size_t s = 0; s < ch.size(); ++s) {
    const double g = inst.gain(i, w, ch[s]);
    floor[s] = g > 0.0 ? (inst.noise(w, ch[s]) + interference[s]) / g : INFINITY;
    used += p[s];
    if (p[s] > 0.0) level = std::max(level, p[s] + floor[s]);
  }
  double residual = std::abs(used - inst.budget(i));
  for (std::size_t s = 0; s < ch.size(); ++s) {
    if (p[s] < 0.0) residual = std::max(residual, -p[s]);
    if (p[s] > 0.0)
      residual = std::max(residual, std::abs(p[s] + floor[s] - level));
    else if (level >= 0.0)
      residual = std::max(residual, level - floor[s]);
  }
  return residual;
}

GridMax grid_potential_2x2(const NetworkInstance& inst, int w, int cu0, int cu1, int m) {
  const auto& ch = inst.channels_of(w);
  if (ch.size() != 2) throw std::invalid_argument("grid oracle needs exactly 2 channels");
  Association assoc(inst.num_cus(), -1);
  assoc[cu0] = w;
  assoc[cu1] = w;
  // Unused CUs sit on no AP, so potential() never reads their powers.
  PowerProfile powers(inst.num_cus(), PowerVector(2, 0.0));
  GridMax best{-INFINITY, 0.0, 0.0};
  for (int a = 0; a <= m; ++a) {
    for (int b = 0; b <= m; ++b) {
      const double x0 = inst.budget(cu0) * a / m;
      const double x1 = inst.budget(cu1) * b / m;
      powers[cu0] = {x0, inst.budget(cu0) - x0};
      powers[cu1] = {x1, inst.budget(cu1) - x1};
      const double v = potential(inst, assoc, powers, w);
      if (v > best.value) best = {v, x0, x1};
    }
  }
  return best;
}

}  // namespace crnsim::ref
