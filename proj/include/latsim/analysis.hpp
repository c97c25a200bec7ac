#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "latsim/channel.hpp"
#include "latsim/decoders.hpp"
#include "latsim/lattice.hpp"
#include "latsim/stcodes.hpp"

namespace latsim {

/// Monte Carlo probability estimate with a 95% Clopper-Pearson interval.
/// `starved` marks a nonzero estimate that stayed under the rare-event floor
/// (fewer than 20 successes) even after trial extension; such points carry
/// intervals too wide to be useful and are excluded from slope fits.
struct EstimateWithCI {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  bool starved = false;
};

/// Exact binomial (Clopper-Pearson) interval via beta quantiles.
EstimateWithCI clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                               double confidence = 0.95);

/// Least-squares fit in log-log coordinates; residual is the maximum
/// absolute log-domain deviation.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  std::vector<std::pair<double, double>> points;  // raw (scale, value) pairs
};

/// Fit log(value) against log(scale). Requires >= 3 points, all positive.
SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

/// Monte Carlo execution policy. Estimators whose success count lands in
/// [1, min_successes) extend the trial count in batches of the base size (up
/// to max_extension_factor times the request) before flagging the estimate
/// as starved. Extensions use absolute trial indices, so results stay
/// deterministic across worker counts.
struct McPolicy {
  std::uint64_t min_successes = 20;
  std::uint64_t max_extension_factor = 8;
  int threads = 0;  // 0 = hardware concurrency
};

/// Pr{ d(H_T L) <= epsilon } over Rayleigh draws of H (N x M), evaluated for
/// every epsilon on a shared set of channel draws (the per-trial minimum
/// distance does not depend on epsilon). Requires every epsilon below the
/// minimum distance of the code lattice itself.
std::vector<EstimateWithCI> estimate_short_vector_probs(
    int m, int n, int t, const LatticeBasis& code_lattice, std::span<const double> epsilons,
    std::uint64_t trials, std::uint64_t seed, const McPolicy& policy = {});

EstimateWithCI estimate_short_vector_prob(int m, int n, int t, const LatticeBasis& code_lattice,
                                          double epsilon, std::uint64_t trials,
                                          std::uint64_t seed, const McPolicy& policy = {});

/// Pr{ sigma_1 <= t_1, ..., sigma_M <= t_M } for Rayleigh H (N x M);
/// thresholds are matched against the ascending singular values.
EstimateWithCI estimate_sigma_tail(int m, int n, std::span<const double> thresholds,
                                   std::uint64_t trials, std::uint64_t seed,
                                   const McPolicy& policy = {});

/// Pr{ sigma_1 <= eps } for every eps on one shared set of channel draws;
/// entry i equals estimate_sigma_tail with thresholds (eps_i, inf, ...) at
/// the same seed.
std::vector<EstimateWithCI> estimate_sigma1_tail_curve(int m, int n,
                                                       std::span<const double> epsilons,
                                                       std::uint64_t trials,
                                                       std::uint64_t seed,
                                                       const McPolicy& policy = {});

/// One SER curve: block-error rate per SNR point for one decoder.
struct SerCurve {
  DecoderId decoder;
  std::vector<SnrPoint> snr;
  std::vector<EstimateWithCI> est;
};

/// Paired-trial SER sweep. Noise variance is fixed to 1 and the transmit
/// power moves with rho. Trial streams depend only on (seed, point, trial),
/// so every decoder - and any rerun with the same seed - consumes identical
/// channel and noise realizations.
std::vector<SerCurve> estimate_ser_multi(const SpaceTimeCode& code, int n_rx,
                                         std::span<const DecoderId> decoders,
                                         std::span<const double> snr_db,
                                         std::uint64_t trials_per_point, std::uint64_t seed,
                                         const McPolicy& policy = {});

SerCurve estimate_ser(const SpaceTimeCode& code, int n_rx, DecoderId decoder,
                      std::span<const double> snr_db, std::uint64_t trials_per_point,
                      std::uint64_t seed, const McPolicy& policy = {});

/// One reconstructed SER trial (exactly the recipe estimate_ser uses), for
/// independent re-decoding of the same realizations in tests.
struct SerTrial {
  ChannelRealization chan;
  std::vector<long long> tx_coeffs;
  std::vector<cplx> y;
};
SerTrial ser_trial(const SpaceTimeCode& point_code, int n_rx, const SnrPoint& snr,
                   std::uint64_t point_seed, std::uint64_t trial_index);

std::uint64_t ser_point_seed(std::uint64_t seed, std::size_t point_index);

/// Diversity slope: slope of -log10(SER) against log10(rho). Zero-success
/// and starved points are excluded; fewer than 3 remaining points raises
/// InsufficientDataError.
SlopeFit diversity_slope(std::span<const SnrPoint> snr, std::span<const EstimateWithCI> est);

/// Conditional NLD error rate among trials whose received lattice has
/// minimum distance at or below dist_threshold. The threshold is exposed as
/// a parameter (sigma/sqrt(M) reproduces the error-floor event).
struct ConditionalErrorEstimate {
  EstimateWithCI conditional;       // error rate among conditioned trials
  EstimateWithCI condition_prob;    // fraction of trials conditioned
};
ConditionalErrorEstimate estimate_nld_conditional_error(const SpaceTimeCode& code, int n_rx,
                                                        double snr_db, double dist_threshold,
                                                        std::uint64_t trials,
                                                        std::uint64_t seed,
                                                        const McPolicy& policy = {});

enum class DmtKind { nld_bound, vblast, optimal };

struct DmtCurve {
  int m = 0;
  int n = 0;
  std::vector<std::pair<double, double>> points;  // (r, d)
};

/// Closed-form trade-off reference curves on an r grid in [0, M].
DmtCurve dmt_reference(int m, int n, DmtKind kind, std::span<const double> r_grid);

/// Exact number of integer vectors z with 2^(k-1) < ||z||_inf <= 2^k whose
/// entries have no nontrivial common divisor.
std::uint64_t count_primitive_vectors(int dim, int k,
                                      std::uint64_t point_budget = 100'000'000ull);

/// Analytical sandwich for Pr{ ||v_b|| <= eps }, v_b a CN(0, ||b||^2 I_M)
/// vector, with the exact ball-volume constants c6 = c7 = 1/M!.
std::pair<double, double> gaussian_ball_bounds(double b_norm, double epsilon, int m);

/// Assembled analytical lower bound on Pr{ d(H) <= eps } for M x M Rayleigh
/// H: shell-counted primitive vectors, ball lower bounds, and the pairwise
/// term, all with explicit constants. Valid direction for M >= 2, eps < 1;
/// may be vacuously negative at moderate eps.
double bonferroni_lower_bound(int m, double epsilon);

/// Largest epsilon at which the assembled bound is still positive.
double bonferroni_positivity_threshold(int m);

/// Reference envelope C * eps^(2M) * ln(1/eps)^(M-1) for short-vector
/// probability curves (C is fit to data, not derived).
double short_vector_envelope(int m, double epsilon, double big_c);

/// Horizontal dB gaps between two SER curves at target error rates, with
/// CI-propagated bounds. Targets outside either curve's span are skipped.
struct GapPoint {
  double target_ser;
  double gap_db;
  double gap_low_db;
  double gap_high_db;
};
struct GapResult {
  std::vector<GapPoint> gaps;
  std::vector<double> skipped_targets;
};
GapResult gap_analysis(const SerCurve& ml, const SerCurve& nld,
                       std::span<const double> target_ser);

/// Gaussian tail Q(x).
double gaussian_q(double x);

}  // namespace latsim
