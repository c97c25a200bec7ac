#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latsim/lattice.hpp"
#include "latsim/matrix.hpp"

namespace latsim {

/// Allowed values per realified coefficient coordinate: the centered
/// odd-integer QAM alphabet {min, min+step, ..., max}. For sqrt(q)-PAM per
/// real dimension this is {-(sqrt(q)-1), ..., -1, 1, ..., sqrt(q)-1} with
/// step 2, so e.g. a decoded 0 falls outside the 4-QAM region.
struct CoeffRange {
  int min_value = -1;
  int max_value = 1;
  int step = 2;

  int size() const { return (max_value - min_value) / step + 1; }
  bool contains(long long c) const {
    return c >= min_value && c <= max_value && (c - min_value) % step == 0;
  }
};

/// Space-time lattice code: an MT-dimensional complex lattice of unit volume,
/// a hypercube coefficient region carving the finite codebook out of it, and
/// a power scale mapping lattice units to transmit amplitude.
class SpaceTimeCode {
 public:
  SpaceTimeCode(std::string name, int m, int t, int qam, double power,
                ComplexMatrix unit_volume_generator);

  const std::string& name() const { return name_; }
  int m() const { return m_; }
  int t() const { return t_; }
  int qam() const { return qam_; }
  double power() const { return power_; }
  double power_scale() const { return power_scale_; }
  double rate_bits() const { return rate_bits_; }
  const CoeffRange& coeff_range() const { return range_; }
  int coeff_count() const { return 2 * m_ * t_; }
  std::uint64_t codebook_size() const;

  /// Unit-volume complex generator (MT x MT), before power scaling.
  const ComplexMatrix& generator() const { return gen_; }

  /// Same code re-normalized to a different transmit power (for SNR sweeps;
  /// only the power scale changes).
  SpaceTimeCode with_power(double power) const;

  /// Lexicographic codeword index -> coefficient vector (coordinate 0 most
  /// significant, alphabet values ascending).
  std::vector<long long> coeffs_at(std::uint64_t index) const;

  /// vec(X) = power_scale * generator * coeffs, length MT.
  std::vector<cplx> vec_signal(std::span<const long long> coeffs) const;

  /// M x T signal matrix (columns are channel uses).
  ComplexMatrix signal(std::span<const long long> coeffs) const;

 private:
  std::string name_;
  int m_, t_, qam_;
  double power_;
  ComplexMatrix gen_;
  CoeffRange range_;
  double power_scale_;
  double rate_bits_;
};

struct Codeword {
  std::vector<long long> coeffs;  // realified, length 2MT
  ComplexMatrix signal;           // M x T, power scale applied
};

/// Uncoded spatial multiplexing: one QAM symbol per antenna per use, lattice
/// Z[i]^(MT) with identity generator before scaling.
SpaceTimeCode vblast_code(int m, int t, int qam_order, double power);

/// The 2x2 Golden code with the standard generator built on
/// theta = (1+sqrt(5))/2, alpha = 1 + i(1-theta). qam_order in {4, 16}.
SpaceTimeCode golden_code(int qam_order, double power);

/// All codewords in lexicographic coefficient order. Budget 10^6.
std::vector<Codeword> enumerate_codebook(const SpaceTimeCode& code);

/// True iff every coefficient lies in the code's alphabet.
bool in_region(const SpaceTimeCode& code, std::span<const long long> coeffs);

}  // namespace latsim
