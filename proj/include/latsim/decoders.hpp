#pragma once

#include <span>
#include <string>
#include <vector>

#include "latsim/channel.hpp"
#include "latsim/lattice.hpp"
#include "latsim/stcodes.hpp"

namespace latsim {

enum class DecoderId { ml, nld, lll_aided };

const char* decoder_name(DecoderId id);
DecoderId decoder_from_name(const std::string& name);  // "ml" | "nld" | "lll"

/// Block decode outcome. out_of_region marks an infinite-lattice decode that
/// landed outside the constellation region; such outcomes always count as
/// errors. is_error compares against the transmitted coefficients at block
/// level.
struct DecodeOutcome {
  DecoderId decoder;
  std::vector<long long> coeffs;
  bool out_of_region = false;
  bool is_error = false;
};

/// Exact maximum likelihood over the finite codebook: argmin over all
/// codewords of ||y - H_T x||, ties to the lexicographically smallest
/// coefficient vector. Never out of region.
DecodeOutcome ml_decode(const SpaceTimeCode& code, const ChannelRealization& chan,
                        std::span<const cplx> y, std::span<const long long> transmitted);

/// Naive lattice decoding: exact closest point of the infinite received
/// lattice, then the region rule.
DecodeOutcome naive_lattice_decode(const SpaceTimeCode& code, const ChannelRealization& chan,
                                   std::span<const cplx> y,
                                   std::span<const long long> transmitted,
                                   const EnumOptions& opts = {});

/// LLL-aided decoding: Babai nearest-plane on the LLL-reduced received
/// lattice, mapped back through the unimodular transform, then the region
/// rule.
DecodeOutcome lll_aided_decode(const SpaceTimeCode& code, const ChannelRealization& chan,
                               std::span<const cplx> y,
                               std::span<const long long> transmitted);

}  // namespace latsim
