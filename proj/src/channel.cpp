#include "latsim/channel.hpp"

#include <cmath>

#include "latsim/errors.hpp"

namespace latsim {

SnrPoint snr_from_db(double snr_db, int m, double noise_var) {
  if (m < 1) throw InvalidArgumentError("snr_from_db: M must be >= 1");
  if (!(noise_var > 0.0)) throw InvalidArgumentError("snr_from_db: noise_var must be > 0");
  const double rho = std::pow(10.0, snr_db / 10.0);
  return SnrPoint{rho, rho * noise_var / m, noise_var};
}

ChannelRealization draw_channel(int m, int n, int t, RngStream& stream) {
  if (m < 1 || n < 1 || t < 1) throw InvalidArgumentError("draw_channel: M, N, T must be >= 1");
  if (m > n) throw InvalidArgumentError("draw_channel: M > N is outside the modeled scope");
  ChannelRealization chan;
  chan.h = sample_gaussian_matrix(n, m, stream);
  chan.h_t = block_diagonal_lift(chan.h, t);
  chan.sigma = singular_values(chan.h);
  return chan;
}

std::vector<cplx> transmit(const SpaceTimeCode& code, std::span<const long long> coeffs,
                           const ChannelRealization& chan, const SnrPoint& snr,
                           RngStream& stream) {
  const auto x = code.vec_signal(coeffs);
  if (chan.h_t.cols() != static_cast<int>(x.size()))
    throw InvalidArgumentError("transmit: channel and code dimensions do not match");
  std::vector<cplx> y = chan.h_t * std::span<const cplx>(x);
  const double noise_std = std::sqrt(snr.noise_var);
  for (auto& v : y) v += noise_std * stream.complex_gaussian();
  return y;
}

LatticeBasis received_lattice(const SpaceTimeCode& code, const ChannelRealization& chan) {
  if (chan.sigma.min() <= 1e-12 * chan.sigma.max())
    throw SingularMatrixError("received_lattice: channel matrix is numerically singular");
  ComplexMatrix w = chan.h_t * code.generator();
  w *= cplx(code.power_scale(), 0.0);
  return LatticeBasis(to_real_matrix(w));
}

}  // namespace latsim
