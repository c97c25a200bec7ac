#pragma once

#include <complex>
#include <cstdint>

namespace latsim {

/// Counter-based random stream. The n-th output is a pure function of
/// (seed, stream_index, n), so per-trial streams indexed by trial number
/// give results that do not depend on thread scheduling or worker count.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53 random bits.
  double uniform();

  /// Unbiased uniform integer in [0, n). Requires n >= 1.
  std::uint64_t uniform_below(std::uint64_t n);

  /// Standard normal via the Marsaglia polar method (second value cached).
  double normal();

  /// Circular complex Gaussian with total variance 1: real and imaginary
  /// parts independent N(0, 1/2).
  std::complex<double> complex_gaussian();

 private:
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Derives a child seed for a tagged sub-experiment (one per SNR point,
/// per meta-trial, ...) so sub-experiments never share trial streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace latsim
