#include "latsim/rng.hpp"

#include <cmath>

#include "latsim/errors.hpp"

namespace latsim {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : counter_(mix64(mix64(seed + kGamma) ^ mix64(stream_index + 0x6A09E667F3BCC909ull))) {}

std::uint64_t RngStream::next_u64() {
  counter_ += kGamma;
  return mix64(counter_);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw InvalidArgumentError("uniform_below: n must be >= 1");
  // Reject the short final partial block so every residue is equally likely.
  const std::uint64_t threshold = (0ull - n) % n;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::complex<double> RngStream::complex_gaussian() {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  const double re = normal() * kInvSqrt2;
  const double im = normal() * kInvSqrt2;
  return {re, im};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed + 0xA5A5A5A5A5A5A5A5ull) ^ mix64(tag + kGamma));
}

}  // namespace latsim
