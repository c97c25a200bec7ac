#include "latsim/stcodes.hpp"

#include <cmath>
#include <limits>

#include "latsim/errors.hpp"

namespace latsim {

namespace {

bool is_supported_qam(int qam) {
  const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(qam))));
  return qam >= 4 && root * root == qam && root % 2 == 0;
}

CoeffRange qam_range(int qam) {
  const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(qam))));
  return CoeffRange{-(root - 1), root - 1, 2};
}

// Mean square of the odd alphabet {+-1, +-3, ..., +-(root-1)}: (q - 1) / 3.
double alphabet_mean_square(int qam) { return (static_cast<double>(qam) - 1.0) / 3.0; }

// Exact codebook-average energy per block for a hypercube coefficient
// region: cross terms vanish by the alphabet's symmetry, leaving
// E||G c||^2 = msq * ||G_real||_F^2 (identical to the exhaustive average).
double average_block_energy(const ComplexMatrix& gen, int qam) {
  const double f2 = 2.0 * gen.frobenius_norm() * gen.frobenius_norm();
  return alphabet_mean_square(qam) * f2;
}

constexpr std::uint64_t kCodebookBudget = 1'000'000ull;

}  // namespace

SpaceTimeCode::SpaceTimeCode(std::string name, int m, int t, int qam, double power,
                             ComplexMatrix unit_volume_generator)
    : name_(std::move(name)),
      m_(m),
      t_(t),
      qam_(qam),
      power_(power),
      gen_(std::move(unit_volume_generator)),
      range_(qam_range(qam)) {
  if (m_ < 1 || t_ < 1) throw InvalidArgumentError("SpaceTimeCode: M, T must be >= 1");
  if (!(power_ > 0.0)) throw InvalidArgumentError("SpaceTimeCode: power must be > 0");
  if (gen_.rows() != m_ * t_ || gen_.cols() != m_ * t_)
    throw InvalidArgumentError("SpaceTimeCode: generator must be MT x MT");

  // Pin the lattice volume to exactly 1 before power scaling.
  const double vol = volume(LatticeBasis(gen_));
  gen_ *= cplx(std::pow(vol, -1.0 / (m_ * t_)), 0.0);

  // E||x||^2 per channel use equals the power constraint.
  power_scale_ = std::sqrt(power_ * t_ / average_block_energy(gen_, qam_));
  rate_bits_ = coeff_count() * std::log2(static_cast<double>(range_.size()));
}

std::uint64_t SpaceTimeCode::codebook_size() const {
  const std::uint64_t base = static_cast<std::uint64_t>(range_.size());
  std::uint64_t size = 1;
  for (int i = 0; i < coeff_count(); ++i) {
    // Saturate instead of wrapping; oversized books only feed budget checks.
    if (size > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    size *= base;
  }
  return size;
}

SpaceTimeCode SpaceTimeCode::with_power(double power) const {
  return SpaceTimeCode(name_, m_, t_, qam_, power, gen_);
}

std::vector<long long> SpaceTimeCode::coeffs_at(std::uint64_t index) const {
  const int n = coeff_count();
  const std::uint64_t base = static_cast<std::uint64_t>(range_.size());
  std::vector<long long> c(n);
  for (int i = n - 1; i >= 0; --i) {
    c[i] = range_.min_value + static_cast<long long>(index % base) * range_.step;
    index /= base;
  }
  return c;
}

std::vector<cplx> SpaceTimeCode::vec_signal(std::span<const long long> coeffs) const {
  if (static_cast<int>(coeffs.size()) != coeff_count())
    throw InvalidArgumentError("vec_signal: coefficient length mismatch");
  const int mt = m_ * t_;
  std::vector<cplx> x(mt, cplx(0.0, 0.0));
  for (int j = 0; j < mt; ++j) {
    const cplx z(static_cast<double>(coeffs[2 * j]), static_cast<double>(coeffs[2 * j + 1]));
    if (z == cplx(0.0, 0.0)) continue;
    for (int i = 0; i < mt; ++i) x[i] += gen_(i, j) * z;
  }
  for (auto& v : x) v *= power_scale_;
  return x;
}

ComplexMatrix SpaceTimeCode::signal(std::span<const long long> coeffs) const {
  const auto x = vec_signal(coeffs);
  ComplexMatrix s(m_, t_);
  for (int use = 0; use < t_; ++use)
    for (int i = 0; i < m_; ++i) s(i, use) = x[use * m_ + i];
  return s;
}

SpaceTimeCode vblast_code(int m, int t, int qam_order, double power) {
  if (!is_supported_qam(qam_order))
    throw InvalidArgumentError("vblast_code: qam_order must be a perfect even square (4, 16, 64)");
  if (m < 1 || t < 1) throw InvalidArgumentError("vblast_code: M, T must be >= 1");
  return SpaceTimeCode("vblast", m, t, qam_order, power, ComplexMatrix::identity(m * t));
}

SpaceTimeCode golden_code(int qam_order, double power) {
  if (qam_order != 4 && qam_order != 16)
    throw InvalidArgumentError("golden_code: qam_order must be 4 or 16");

  const double sqrt5 = std::sqrt(5.0);
  const double theta = (1.0 + sqrt5) / 2.0;
  const double theta_bar = (1.0 - sqrt5) / 2.0;
  const cplx alpha(1.0, 1.0 - theta);
  const cplx alpha_bar(1.0, 1.0 - theta_bar);
  const cplx i_unit(0.0, 1.0);
  const double inv = 1.0 / sqrt5;

  // vec(X) ordering (x11, x21, x12, x22) against symbols (a, b, c, d) for
  // X = (1/sqrt(5)) [[alpha(a + b theta), alpha(c + d theta)],
  //                  [i conj_emb(alpha)(c + d theta_bar), conj_emb(alpha)(a + b theta_bar)]].
  ComplexMatrix g(4, 4);
  g(0, 0) = alpha * inv;
  g(0, 1) = alpha * theta * inv;
  g(1, 2) = i_unit * alpha_bar * inv;
  g(1, 3) = i_unit * alpha_bar * theta_bar * inv;
  g(2, 2) = alpha * inv;
  g(2, 3) = alpha * theta * inv;
  g(3, 0) = alpha_bar * inv;
  g(3, 1) = alpha_bar * theta_bar * inv;

  SpaceTimeCode code("golden", 2, 2, qam_order, power, std::move(g));

  // Spot-check the non-vanishing determinant on the 4-QAM difference set.
  const CoeffRange diff{-2, 2, 2};
  std::vector<long long> d(8, diff.min_value);
  double min_det = std::numeric_limits<double>::infinity();
  for (;;) {
    bool zero = true;
    for (const auto v : d) zero = zero && v == 0;
    if (!zero) {
      std::vector<cplx> x(4, cplx(0, 0));
      for (int j = 0; j < 4; ++j) {
        const cplx z(static_cast<double>(d[2 * j]), static_cast<double>(d[2 * j + 1]));
        for (int i = 0; i < 4; ++i) x[i] += code.generator()(i, j) * z;
      }
      const double det = std::abs(x[0] * x[3] - x[1] * x[2]);
      min_det = std::min(min_det, det);
    }
    int k = 7;
    while (k >= 0 && d[k] == diff.max_value) d[k--] = diff.min_value;
    if (k < 0) break;
    d[k] += diff.step;
  }
  if (!(min_det > 1e-9))
    throw InvalidArgumentError("golden_code: generator failed the non-vanishing determinant check");
  return code;
}

std::vector<Codeword> enumerate_codebook(const SpaceTimeCode& code) {
  const std::uint64_t size = code.codebook_size();
  if (size > kCodebookBudget)
    throw BudgetExceededError("enumerate_codebook: codebook size exceeds budget");
  std::vector<Codeword> book;
  book.reserve(size);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    auto coeffs = code.coeffs_at(idx);
    auto sig = code.signal(coeffs);
    book.push_back(Codeword{std::move(coeffs), std::move(sig)});
  }
  return book;
}

bool in_region(const SpaceTimeCode& code, std::span<const long long> coeffs) {
  if (static_cast<int>(coeffs.size()) != code.coeff_count())
    throw InvalidArgumentError("in_region: coefficient length mismatch");
  for (const auto c : coeffs)
    if (!code.coeff_range().contains(c)) return false;
  return true;
}

}  // namespace latsim
