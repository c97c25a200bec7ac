#include "latsim/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latsim/errors.hpp"

namespace latsim {

namespace {

constexpr std::uint64_t kMlBudget = 1'000'000ull;

bool coeffs_equal(std::span<const long long> a, std::span<const long long> b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

const char* decoder_name(DecoderId id) {
  switch (id) {
    case DecoderId::ml:
      return "ml";
    case DecoderId::nld:
      return "nld";
    case DecoderId::lll_aided:
      return "lll";
  }
  return "?";
}

DecoderId decoder_from_name(const std::string& name) {
  if (name == "ml") return DecoderId::ml;
  if (name == "nld") return DecoderId::nld;
  if (name == "lll") return DecoderId::lll_aided;
  throw InvalidArgumentError("unknown decoder id '" + name + "' (valid: ml, nld, lll)");
}

DecodeOutcome ml_decode(const SpaceTimeCode& code, const ChannelRealization& chan,
                        std::span<const cplx> y, std::span<const long long> transmitted) {
  const std::uint64_t size = code.codebook_size();
  if (size > kMlBudget) throw BudgetExceededError("ml_decode: codebook exceeds budget");
  const int mt = code.m() * code.t();
  const int nt = chan.h_t.rows();
  if (static_cast<int>(y.size()) != nt)
    throw InvalidArgumentError("ml_decode: received vector length mismatch");

  // Faded codeword map: candidate = W * c with W = H_T * (s * G), flattened
  // to real/imaginary planes to keep the scan loop in plain arithmetic.
  ComplexMatrix w = chan.h_t * code.generator();
  w *= cplx(code.power_scale(), 0.0);
  std::vector<double> wr(static_cast<std::size_t>(nt) * mt), wi(wr.size());
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < mt; ++j) {
      wr[static_cast<std::size_t>(i) * mt + j] = w(i, j).real();
      wi[static_cast<std::size_t>(i) * mt + j] = w(i, j).imag();
    }
  std::vector<double> yr(nt), yi(nt);
  for (int i = 0; i < nt; ++i) {
    yr[i] = y[i].real();
    yi[i] = y[i].imag();
  }

  const CoeffRange range = code.coeff_range();
  const int n = code.coeff_count();
  std::vector<long long> c(n, range.min_value);
  std::vector<long long> best;
  double best2 = std::numeric_limits<double>::infinity();

  // Walk the codebook in lexicographic coefficient order; keeping the first
  // of any distance tie then realizes the lexicographic tie rule.
  for (;;) {
    double d2 = 0.0;
    for (int i = 0; i < nt; ++i) {
      double vr = 0.0, vi_ = 0.0;
      const double* rrow = wr.data() + static_cast<std::size_t>(i) * mt;
      const double* irow = wi.data() + static_cast<std::size_t>(i) * mt;
      for (int j = 0; j < mt; ++j) {
        const double a = static_cast<double>(c[2 * j]);
        const double b = static_cast<double>(c[2 * j + 1]);
        vr += rrow[j] * a - irow[j] * b;
        vi_ += irow[j] * a + rrow[j] * b;
      }
      const double dr = yr[i] - vr, di = yi[i] - vi_;
      d2 += dr * dr + di * di;
    }
    if (best.empty() || d2 < best2 - 1e-12 * (1.0 + best2)) {
      best2 = d2;
      best = c;
    }

    int k = n - 1;
    while (k >= 0 && c[k] == range.max_value) c[k--] = range.min_value;
    if (k < 0) break;
    c[k] += range.step;
  }

  DecodeOutcome out;
  out.decoder = DecoderId::ml;
  out.coeffs = std::move(best);
  out.out_of_region = false;
  out.is_error = !coeffs_equal(out.coeffs, transmitted);
  return out;
}

DecodeOutcome naive_lattice_decode(const SpaceTimeCode& code, const ChannelRealization& chan,
                                   std::span<const cplx> y,
                                   std::span<const long long> transmitted,
                                   const EnumOptions& opts) {
  const LatticeBasis basis = received_lattice(code, chan);
  const auto target = to_real_vector(y);
  const auto cvp = closest_vector(basis, target, opts);

  DecodeOutcome out;
  out.decoder = DecoderId::nld;
  out.coeffs = cvp.point.coeffs;
  out.out_of_region = !in_region(code, out.coeffs);
  out.is_error = out.out_of_region || !coeffs_equal(out.coeffs, transmitted);
  return out;
}

DecodeOutcome lll_aided_decode(const SpaceTimeCode& code, const ChannelRealization& chan,
                               std::span<const cplx> y,
                               std::span<const long long> transmitted) {
  const LatticeBasis basis = received_lattice(code, chan);
  const auto target = to_real_vector(y);
  const auto red = lll_reduce(basis);
  const auto point = babai_nearest_plane(red.reduced, target);

  DecodeOutcome out;
  out.decoder = DecoderId::lll_aided;
  out.coeffs = red.transform * std::span<const long long>(point.coeffs);
  out.out_of_region = !in_region(code, out.coeffs);
  out.is_error = out.out_of_region || !coeffs_equal(out.coeffs, transmitted);
  return out;
}

}  // namespace latsim
