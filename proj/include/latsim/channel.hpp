#pragma once

#include <span>
#include <vector>

#include "latsim/lattice.hpp"
#include "latsim/linalg.hpp"
#include "latsim/rng.hpp"
#include "latsim/stcodes.hpp"

namespace latsim {

/// One Rayleigh channel draw with its block-diagonal lift over T uses and
/// singular values (ascending).
struct ChannelRealization {
  ComplexMatrix h;    // N x M
  ComplexMatrix h_t;  // NT x MT
  SingularValues sigma;
};

/// SNR bookkeeping: rho = M * P / noise_var, exactly.
struct SnrPoint {
  double rho;
  double power;
  double noise_var;
};

/// SNR point at the given dB value with noise variance fixed to 1, so the
/// sweep moves only the transmit power (rho = M * P).
SnrPoint snr_from_db(double snr_db, int m, double noise_var = 1.0);

/// Quasi-static Rayleigh draw: H has i.i.d. unit-variance complex Gaussian
/// entries (row-major draw order). Requires M <= N.
ChannelRealization draw_channel(int m, int n, int t, RngStream& stream);

/// y = H_T vec(X) + w with w i.i.d. complex Gaussian, variance noise_var per
/// receive coordinate. Length NT.
std::vector<cplx> transmit(const SpaceTimeCode& code, std::span<const long long> coeffs,
                           const ChannelRealization& chan, const SnrPoint& snr,
                           RngStream& stream);

/// Realified basis of the power-scaled received lattice H_T * (s * L).
/// Throws SingularMatrixError if H is numerically singular.
LatticeBasis received_lattice(const SpaceTimeCode& code, const ChannelRealization& chan);

}  // namespace latsim
