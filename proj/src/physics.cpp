#include "crnsim/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace crnsim {

double rate(const NetworkInstance& inst, int i, int w, std::span<const double> p,
            std::span<const double> interference) {
  const auto& chans = inst.channels_of(w);
  if (p.size() != chans.size() || interference.size() != chans.size())
    throw std::invalid_argument("rate: vector size does not match |K_w|");
  double acc = 0.0;
  for (std::size_t m = 0; m < chans.size(); ++m) {
    const int k = chans[m];
    const double signal = inst.gain(i, w, k) * p[m];
    if (signal <= 0.0) continue;
    acc += std::log1p(signal / (inst.noise(w, k) + interference[m]));
  }
  return acc / (std::log(inst.log_base()) * inst.num_channels());
}

std::vector<double> received_power(const NetworkInstance& inst, int w,
                                   std::span<const int> cus, const PowerProfile& powers) {
  const auto& chans = inst.channels_of(w);
  std::vector<double> total(chans.size(), 0.0);
  for (int j : cus) {
    const auto& pj = powers[j];
    for (std::size_t m = 0; m < chans.size(); ++m) total[m] += inst.gain(j, w, chans[m]) * pj[m];
  }
  return total;
}

std::vector<double> interference_at(const NetworkInstance& inst, const Association& assoc,
                                    const PowerProfile& powers, int i, int w) {
  const auto& chans = inst.channels_of(w);
  std::vector<double> out(chans.size(), 0.0);
  for (int j = 0; j < inst.num_cus(); ++j) {
    if (j == i || assoc[j] != w) continue;
    for (std::size_t m = 0; m < chans.size(); ++m) out[m] += inst.gain(j, w, chans[m]) * powers[j][m];
  }
  return out;
}

InterferenceMap interference_map(const NetworkInstance& inst, const Association& assoc,
                                 const PowerProfile& powers) {
  check_association(inst, assoc);
  const auto occupants = occupants_by_ap(inst, assoc);
  std::vector<std::vector<double>> totals(inst.num_aps());
  for (int w = 0; w < inst.num_aps(); ++w) totals[w] = received_power(inst, w, occupants[w], powers);

  InterferenceMap map(inst.num_cus(), inst.num_aps());
  for (int i = 0; i < inst.num_cus(); ++i) {
    for (int w = 0; w < inst.num_aps(); ++w) {
      if (assoc[i] == w)
        map.mutable_at(i, w) = interference_at(inst, assoc, powers, i, w);
      else
        map.mutable_at(i, w) = totals[w];
    }
  }
  return map;
}

double potential_ap(const NetworkInstance& inst, int w, std::span<const int> occupants,
                    std::span<const PowerVector> powers_w) {
  if (occupants.size() != powers_w.size())
    throw std::invalid_argument("potential_ap: occupants and powers differ in length");
  const auto& chans = inst.channels_of(w);
  double acc = 0.0;
  for (std::size_t m = 0; m < chans.size(); ++m) {
    const int k = chans[m];
    double received = 0.0;
    for (std::size_t q = 0; q < occupants.size(); ++q)
      received += inst.gain(occupants[q], w, k) * powers_w[q][m];
    if (received > 0.0) acc += std::log1p(received / inst.noise(w, k));
  }
  return acc / (std::log(inst.log_base()) * inst.num_channels());
}

std::vector<PowerVector> gather_powers(std::span<const int> occupants, const PowerProfile& powers) {
  std::vector<PowerVector> out;
  out.reserve(occupants.size());
  for (int i : occupants) out.push_back(powers[i]);
  return out;
}

double system_potential(const NetworkInstance& inst, const Association& assoc,
                        const PowerProfile& powers) {
  const auto occupants = occupants_by_ap(inst, assoc);
  double total = 0.0;
  for (int w = 0; w < inst.num_aps(); ++w)
    total += potential_ap(inst, w, occupants[w], gather_powers(occupants[w], powers));
  return total;
}

std::vector<double> cu_rates(const NetworkInstance& inst, const Association& assoc,
                             const PowerProfile& powers) {
  std::vector<double> out(inst.num_cus());
  for (int i = 0; i < inst.num_cus(); ++i)
    out[i] = rate(inst, i, assoc[i], powers[i], interference_at(inst, assoc, powers, i, assoc[i]));
  return out;
}

double sum_rate(const NetworkInstance& inst, const Association& assoc, const PowerProfile& powers) {
  double total = 0.0;
  for (double r : cu_rates(inst, assoc, powers)) total += r;
  return total;
}

}  // namespace crnsim
