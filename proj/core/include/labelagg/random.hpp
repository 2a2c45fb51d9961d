#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace labelagg {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stable seed derived from a tuple of integers. Order-sensitive; adding a
/// new tuple never changes the seed of an existing one.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> fields) noexcept;

/// Portable random stream. The standard distributions are implementation
/// defined, so the draws are done by hand on top of mt19937_64 to keep
/// results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform on the open interval (0, 1).
  double uniform_open01();

  /// Uniform integer in [0, n). Unbiased (rejection on the top range).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace labelagg
