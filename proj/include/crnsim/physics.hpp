#pragma once

#include <span>
#include <vector>

#include "crnsim/model.hpp"

namespace crnsim {

/// Interference I_{i,w}(k) for every CU and every AP.
///
/// At the CU's own AP the sum excludes the CU itself; at every other AP it
/// is the full received power there, i.e. what the CU would face after a
/// switch.
class InterferenceMap {
 public:
  InterferenceMap() = default;
  InterferenceMap(int num_cus, int num_aps) : num_aps_(num_aps), data_(num_cus * num_aps) {}

  std::span<const double> at(int i, int w) const { return data_[index(i, w)]; }
  std::vector<double>& mutable_at(int i, int w) { return data_[index(i, w)]; }

 private:
  std::size_t index(int i, int w) const { return static_cast<std::size_t>(i) * num_aps_ + w; }
  int num_aps_ = 0;
  std::vector<std::vector<double>> data_;
};

/// R_i = (1/K) sum_k log(1 + |h|^2 p(k) / (n(k) + I(k))) over the channels of w.
double rate(const NetworkInstance& inst, int i, int w, std::span<const double> p,
            std::span<const double> interference);

/// Aggregate received power per channel of w from the listed CUs.
std::vector<double> received_power(const NetworkInstance& inst, int w,
                                   std::span<const int> cus, const PowerProfile& powers);

InterferenceMap interference_map(const NetworkInstance& inst, const Association& assoc,
                                 const PowerProfile& powers);

/// Interference CU i would see at AP w: every CU associated with w except i.
std::vector<double> interference_at(const NetworkInstance& inst, const Association& assoc,
                                    const PowerProfile& powers, int i, int w);

/// P_w = (1/K) sum_k [log(n + sum_i |h|^2 p_i(k)) - log n]. powers_w is
/// aligned with occupants.
double potential_ap(const NetworkInstance& inst, int w, std::span<const int> occupants,
                    std::span<const PowerVector> powers_w);

/// Sum of potential_ap over all APs. powers is indexed by CU.
double system_potential(const NetworkInstance& inst, const Association& assoc,
                        const PowerProfile& powers);

/// Rate of every CU at its current AP under the current profile.
std::vector<double> cu_rates(const NetworkInstance& inst, const Association& assoc,
                             const PowerProfile& powers);

double sum_rate(const NetworkInstance& inst, const Association& assoc,
                const PowerProfile& powers);

/// Gathers the occupants' power vectors out of a per-CU profile.
std::vector<PowerVector> gather_powers(std::span<const int> occupants, const PowerProfile& powers);

}  // namespace crnsim
