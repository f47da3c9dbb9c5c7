#include "crnsim/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace crnsim {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::index: empty range");
  const std::uint64_t range = n;
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % range);
}

double Rng::exponential(double mean) {
  return -mean * std::log1p(-uniform());
}

std::size_t Rng::categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("Rng::categorical: no mass");
  const double target = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last_positive = k;
    if (target < acc) return k;
  }
  // Rounding in the running sum can leave target == acc at the end.
  return last_positive;
}

std::vector<double> Rng::dirichlet_flat(std::size_t dim) {
  std::vector<double> x(dim);
  double total = 0.0;
  for (auto& v : x) {
    v = exponential(1.0);
    total += v;
  }
  if (total <= 0.0) {
    std::fill(x.begin(), x.end(), 1.0 / static_cast<double>(dim));
    return x;
  }
  for (auto& v : x) v /= total;
  return x;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace crnsim
