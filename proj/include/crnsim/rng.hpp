#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace crnsim {

/// Seeded random source used by every stochastic operation.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not (their algorithms differ
/// between library vendors), so all variates are derived here from raw
/// 64-bit draws. Same seed, same stream, on any conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Exponential with the given mean (inverse-CDF method).
  double exponential(double mean);

  /// Index drawn with the given (not necessarily normalized) weights.
  std::size_t categorical(std::span<const double> weights);

  /// Symmetric Dirichlet(1, ..., 1) sample of the given dimension.
  std::vector<double> dirichlet_flat(std::size_t dim);

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; derives independent sub-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace crnsim
