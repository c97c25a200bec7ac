#include "latsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "latsim/errors.hpp"
#include "latsim/parallel.hpp"

namespace latsim {

namespace {

// --- regularized incomplete beta (continued fraction, Lentz) -------------

double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                    b * std::log(1.0 - x);
  const double bt = std::exp(ln);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

// Deterministic bisection inverse (120 halvings reach double resolution).
double inv_reg_inc_beta(double a, double b, double p) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 120; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (reg_inc_beta(a, b, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// --- shared Monte Carlo machinery ----------------------------------------

struct CountVec {
  std::vector<std::uint64_t> c;
  CountVec& operator+=(const CountVec& o) {
    if (c.size() < o.c.size()) c.resize(o.c.size(), 0);
    for (std::size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
    return *this;
  }
};

// Runs base_trials, then keeps extending in base-sized batches while any
// counter sits in [1, min_successes) and the extension cap allows. Absolute
// trial indices keep the result independent of batching and workers.
template <class Fn>
CountVec run_extended(std::uint64_t base_trials, std::size_t n_counters, const McPolicy& policy,
                      std::uint64_t* total_trials, Fn&& per_trial) {
  if (base_trials == 0) throw InvalidArgumentError("monte carlo: trials must be >= 1");
  CountVec total;
  total.c.assign(n_counters, 0);
  std::uint64_t done = 0;
  const std::uint64_t cap = base_trials * std::max<std::uint64_t>(policy.max_extension_factor, 1);
  for (;;) {
    const std::uint64_t batch = std::min(base_trials, cap - done);
    const std::uint64_t offset = done;
    CountVec got = run_trials<CountVec>(batch, policy.threads, [&](std::uint64_t i, CountVec& acc) {
      if (acc.c.size() != n_counters) acc.c.assign(n_counters, 0);
      try {
        per_trial(offset + i, acc);
      } catch (const BudgetExceededError& e) {
        throw BudgetExceededError(std::string(e.what()) + " (trial " +
                                  std::to_string(offset + i) + ")");
      }
    });
    total += got;
    done += batch;
    if (done >= cap) break;
    bool wants_more = false;
    for (const auto v : total.c)
      if (v >= 1 && v < policy.min_successes) wants_more = true;
    if (!wants_more) break;
  }
  *total_trials = done;
  return total;
}

EstimateWithCI finish_estimate(std::uint64_t successes, std::uint64_t trials,
                               const McPolicy& policy) {
  EstimateWithCI est = clopper_pearson(successes, trials);
  est.starved = successes >= 1 && successes < policy.min_successes;
  return est;
}

double log10_rho(const SnrPoint& p) { return std::log10(p.rho); }

DecodeOutcome dispatch_decode(DecoderId id, const SpaceTimeCode& code,
                              const ChannelRealization& chan, std::span<const cplx> y,
                              std::span<const long long> tx) {
  switch (id) {
    case DecoderId::ml:
      return ml_decode(code, chan, y, tx);
    case DecoderId::nld:
      return naive_lattice_decode(code, chan, y, tx);
    case DecoderId::lll_aided:
      return lll_aided_decode(code, chan, y, tx);
  }
  throw InvalidArgumentError("unknown decoder id");
}

}  // namespace

EstimateWithCI clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0) throw InvalidArgumentError("clopper_pearson: trials must be >= 1");
  if (successes > trials) throw InvalidArgumentError("clopper_pearson: successes > trials");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw InvalidArgumentError("clopper_pearson: confidence must be in (0, 1)");
  const double alpha = 1.0 - confidence;
  const double k = static_cast<double>(successes);
  const double n = static_cast<double>(trials);

  EstimateWithCI est;
  est.trials = trials;
  est.successes = successes;
  est.value = k / n;
  est.ci_low = successes == 0 ? 0.0 : inv_reg_inc_beta(k, n - k + 1.0, alpha / 2.0);
  est.ci_high = successes == trials ? 1.0 : inv_reg_inc_beta(k + 1.0, n - k, 1.0 - alpha / 2.0);
  return est;
}

SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw InsufficientDataError("fit_loglog_slope: need at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [scale, value] : points) {
    if (!(scale > 0.0) || !(value > 0.0))
      throw InvalidArgumentError("fit_loglog_slope: scales and values must be positive");
    const double x = std::log(scale), y = std::log(value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InvalidArgumentError("fit_loglog_slope: degenerate abscissae");

  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.residual = 0.0;
  for (const auto& [scale, value] : points) {
    const double dev = std::abs(std::log(value) - (fit.intercept + fit.slope * std::log(scale)));
    fit.residual = std::max(fit.residual, dev);
  }
  fit.points.assign(points.begin(), points.end());
  return fit;
}

std::vector<EstimateWithCI> estimate_short_vector_probs(
    int m, int n, int t, const LatticeBasis& code_lattice, std::span<const double> epsilons,
    std::uint64_t trials, std::uint64_t seed, const McPolicy& policy) {
  if (epsilons.empty()) throw InvalidArgumentError("estimate_short_vector_probs: empty epsilon list");
  if (2 * m * t > 12)
    throw InvalidArgumentError("estimate_short_vector_probs: realified dimension exceeds 12");
  if (code_lattice.is_real() || code_lattice.rank() != m * t ||
      code_lattice.ambient_dim() != m * t)
    throw InvalidArgumentError("estimate_short_vector_probs: code lattice must be complex MT x MT");

  const double d_code = shortest_vector(realify(code_lattice)).dist;
  for (const double e : epsilons) {
    if (!(e > 0.0)) throw InvalidArgumentError("estimate_short_vector_probs: epsilon must be > 0");
    if (e >= d_code)
      throw InvalidArgumentError(
          "estimate_short_vector_probs: epsilon must be below the code lattice minimum distance");
  }

  const ComplexMatrix& gen = code_lattice.complex_generator();
  std::uint64_t total = 0;
  CountVec counts =
      run_extended(trials, epsilons.size(), policy, &total, [&](std::uint64_t idx, CountVec& acc) {
        RngStream stream(seed, idx);
        const auto chan = draw_channel(m, n, t, stream);
        const ComplexMatrix w = chan.h_t * gen;
        const LatticeBasis received(to_real_matrix(w));
        const double d = shortest_vector(received).dist;
        for (std::size_t i = 0; i < epsilons.size(); ++i)
          if (d <= epsilons[i]) ++acc.c[i];
      });

  std::vector<EstimateWithCI> out;
  out.reserve(epsilons.size());
  for (std::size_t i = 0; i < epsilons.size(); ++i)
    out.push_back(finish_estimate(counts.c[i], total, policy));
  return out;
}

EstimateWithCI estimate_short_vector_prob(int m, int n, int t, const LatticeBasis& code_lattice,
                                          double epsilon, std::uint64_t trials,
                                          std::uint64_t seed, const McPolicy& policy) {
  const double eps[1] = {epsilon};
  return estimate_short_vector_probs(m, n, t, code_lattice, eps, trials, seed, policy)[0];
}

EstimateWithCI estimate_sigma_tail(int m, int n, std::span<const double> thresholds,
                                   std::uint64_t trials, std::uint64_t seed,
                                   const McPolicy& policy) {
  if (static_cast<int>(thresholds.size()) != m)
    throw InvalidArgumentError("estimate_sigma_tail: need one threshold per singular value");
  for (const double t : thresholds)
    if (!(t > 0.0)) throw InvalidArgumentError("estimate_sigma_tail: thresholds must be positive");
  if (m > n) throw InvalidArgumentError("estimate_sigma_tail: M > N is outside the modeled scope");

  std::uint64_t total = 0;
  CountVec counts = run_extended(trials, 1, policy, &total, [&](std::uint64_t idx, CountVec& acc) {
    RngStream stream(seed, idx);
    const ComplexMatrix h = sample_gaussian_matrix(n, m, stream);
    const SingularValues sv = singular_values(h);
    bool ok = true;
    for (int i = 0; i < m; ++i) ok = ok && sv.values[i] <= thresholds[i];
    if (ok) ++acc.c[0];
  });
  return finish_estimate(counts.c[0], total, policy);
}

std::vector<EstimateWithCI> estimate_sigma1_tail_curve(int m, int n,
                                                       std::span<const double> epsilons,
                                                       std::uint64_t trials,
                                                       std::uint64_t seed,
                                                       const McPolicy& policy) {
  if (epsilons.empty()) throw InvalidArgumentError("estimate_sigma1_tail_curve: empty list");
  for (const double e : epsilons)
    if (!(e > 0.0))
      throw InvalidArgumentError("estimate_sigma1_tail_curve: thresholds must be positive");
  if (m > n)
    throw InvalidArgumentError("estimate_sigma1_tail_curve: M > N is outside the modeled scope");

  std::uint64_t total = 0;
  CountVec counts =
      run_extended(trials, epsilons.size(), policy, &total, [&](std::uint64_t idx, CountVec& acc) {
        RngStream stream(seed, idx);
        const ComplexMatrix h = sample_gaussian_matrix(n, m, stream);
        const double s1 = singular_values(h).values.front();
        for (std::size_t i = 0; i < epsilons.size(); ++i)
          if (s1 <= epsilons[i]) ++acc.c[i];
      });
  std::vector<EstimateWithCI> out;
  out.reserve(epsilons.size());
  for (std::size_t i = 0; i < epsilons.size(); ++i)
    out.push_back(finish_estimate(counts.c[i], total, policy));
  return out;
}

std::uint64_t ser_point_seed(std::uint64_t seed, std::size_t point_index) {
  return derive_seed(seed, static_cast<std::uint64_t>(point_index));
}

SerTrial ser_trial(const SpaceTimeCode& point_code, int n_rx, const SnrPoint& snr,
                   std::uint64_t point_seed, std::uint64_t trial_index) {
  RngStream stream(point_seed, trial_index);
  SerTrial tr;
  tr.chan = draw_channel(point_code.m(), n_rx, point_code.t(), stream);
  tr.tx_coeffs = point_code.coeffs_at(stream.uniform_below(point_code.codebook_size()));
  tr.y = transmit(point_code, tr.tx_coeffs, tr.chan, snr, stream);
  return tr;
}

std::vector<SerCurve> estimate_ser_multi(const SpaceTimeCode& code, int n_rx,
                                         std::span<const DecoderId> decoders,
                                         std::span<const double> snr_db,
                                         std::uint64_t trials_per_point, std::uint64_t seed,
                                         const McPolicy& policy) {
  if (decoders.empty()) throw InvalidArgumentError("estimate_ser: no decoders given");
  if (snr_db.empty()) throw InvalidArgumentError("estimate_ser: empty SNR list");
  if (trials_per_point < 1000)
    throw InvalidArgumentError("estimate_ser: trials_per_point must be >= 1000");

  std::vector<SerCurve> curves(decoders.size());
  for (std::size_t d = 0; d < decoders.size(); ++d) curves[d].decoder = decoders[d];

  for (std::size_t p = 0; p < snr_db.size(); ++p) {
    const SnrPoint snr = snr_from_db(snr_db[p], code.m());
    const SpaceTimeCode point_code = code.with_power(snr.power);
    const std::uint64_t point_seed = ser_point_seed(seed, p);

    std::uint64_t total = 0;
    CountVec counts = run_extended(
        trials_per_point, decoders.size(), policy, &total, [&](std::uint64_t idx, CountVec& acc) {
          const SerTrial tr = ser_trial(point_code, n_rx, snr, point_seed, idx);
          for (std::size_t d = 0; d < decoders.size(); ++d) {
            const auto outcome =
                dispatch_decode(decoders[d], point_code, tr.chan, tr.y, tr.tx_coeffs);
            if (outcome.is_error) ++acc.c[d];
          }
        });

    for (std::size_t d = 0; d < decoders.size(); ++d) {
      curves[d].snr.push_back(snr);
      curves[d].est.push_back(finish_estimate(counts.c[d], total, policy));
    }
  }
  return curves;
}

SerCurve estimate_ser(const SpaceTimeCode& code, int n_rx, DecoderId decoder,
                      std::span<const double> snr_db, std::uint64_t trials_per_point,
                      std::uint64_t seed, const McPolicy& policy) {
  const DecoderId ids[1] = {decoder};
  return estimate_ser_multi(code, n_rx, ids, snr_db, trials_per_point, seed, policy)[0];
}

SlopeFit diversity_slope(std::span<const SnrPoint> snr, std::span<const EstimateWithCI> est) {
  if (snr.size() != est.size())
    throw InvalidArgumentError("diversity_slope: mismatched curve lengths");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < snr.size(); ++i) {
    if (est[i].successes == 0 || est[i].starved) continue;
    pts.emplace_back(snr[i].rho, est[i].value);
  }
  if (pts.size() < 3)
    throw InsufficientDataError("diversity_slope: fewer than 3 usable SNR points");
  SlopeFit raw = fit_loglog_slope(pts);

  constexpr double kLn10 = 2.302585092994046;
  SlopeFit out;
  out.slope = -raw.slope;
  out.intercept = -raw.intercept / kLn10;
  out.residual = raw.residual / kLn10;
  out.points = std::move(raw.points);
  return out;
}

ConditionalErrorEstimate estimate_nld_conditional_error(const SpaceTimeCode& code, int n_rx,
                                                        double snr_db, double dist_threshold,
                                                        std::uint64_t trials,
                                                        std::uint64_t seed,
                                                        const McPolicy& policy) {
  if (!(dist_threshold > 0.0))
    throw InvalidArgumentError("estimate_nld_conditional_error: threshold must be > 0");
  const SnrPoint snr = snr_from_db(snr_db, code.m());
  const SpaceTimeCode point_code = code.with_power(snr.power);
  const std::uint64_t point_seed = ser_point_seed(seed, 0);

  McPolicy one_shot = policy;
  one_shot.max_extension_factor = 1;
  std::uint64_t total = 0;
  CountVec counts =
      run_extended(trials, 2, one_shot, &total, [&](std::uint64_t idx, CountVec& acc) {
        const SerTrial tr = ser_trial(point_code, n_rx, snr, point_seed, idx);
        const LatticeBasis received = received_lattice(point_code, tr.chan);
        const double d = shortest_vector(received).dist;
        if (d > dist_threshold) return;
        ++acc.c[0];
        const auto outcome = naive_lattice_decode(point_code, tr.chan, tr.y, tr.tx_coeffs);
        if (outcome.is_error) ++acc.c[1];
      });

  ConditionalErrorEstimate out;
  out.condition_prob = finish_estimate(counts.c[0], total, policy);
  if (counts.c[0] == 0)
    throw InsufficientDataError("estimate_nld_conditional_error: no conditioned trials");
  out.conditional = finish_estimate(counts.c[1], counts.c[0], policy);
  return out;
}

DmtCurve dmt_reference(int m, int n, DmtKind kind, std::span<const double> r_grid) {
  if (m < 1 || n < m) throw InvalidArgumentError("dmt_reference: need 1 <= M <= N");
  if (r_grid.empty()) throw InvalidArgumentError("dmt_reference: empty r grid");
  DmtCurve curve;
  curve.m = m;
  curve.n = n;
  for (const double r : r_grid) {
    if (r < 0.0 || r > static_cast<double>(m))
      throw InvalidArgumentError("dmt_reference: multiplexing gain outside [0, M]");
    double d = 0.0;
    switch (kind) {
      case DmtKind::nld_bound:
        d = m * (n - m + 1) - r * (n - m + 1);
        break;
      case DmtKind::vblast:
        d = m - r;
        break;
      case DmtKind::optimal: {
        const int k = std::min(static_cast<int>(std::floor(r)), m - 1);
        const double d0 = static_cast<double>((m - k) * (n - k));
        const double d1 = static_cast<double>((m - k - 1) * (n - k - 1));
        d = d0 + (r - k) * (d1 - d0);
        break;
      }
    }
    curve.points.emplace_back(r, d);
  }
  return curve;
}

std::uint64_t count_primitive_vectors(int dim, int k, std::uint64_t point_budget) {
  if (dim < 1 || k < 0) throw InvalidArgumentError("count_primitive_vectors: bad arguments");
  const long long hi = 1ll << k;
  const long long lo = k == 0 ? 0 : (1ll << (k - 1));
  const double cube = std::pow(2.0 * static_cast<double>(hi) + 1.0, dim);
  if (cube > static_cast<double>(point_budget))
    throw BudgetExceededError("count_primitive_vectors: shell enumeration exceeds budget");

  std::vector<long long> z(dim, -hi);
  std::uint64_t count = 0;
  for (;;) {
    long long max_abs = 0, g = 0;
    for (const auto v : z) {
      max_abs = std::max(max_abs, std::llabs(v));
      g = std::gcd(g, std::llabs(v));
    }
    if (max_abs > lo && max_abs <= hi && g == 1) ++count;
    int i = dim - 1;
    while (i >= 0 && z[i] == hi) z[i--] = -hi;
    if (i < 0) break;
    ++z[i];
  }
  return count;
}

std::pair<double, double> gaussian_ball_bounds(double b_norm, double epsilon, int m) {
  if (!(b_norm > 0.0) || !(epsilon > 0.0) || m < 1)
    throw InvalidArgumentError("gaussian_ball_bounds: bad arguments");
  double factorial = 1.0;
  for (int i = 2; i <= m; ++i) factorial *= i;
  const double x = (epsilon * epsilon) / (b_norm * b_norm);
  const double upper = std::pow(x, m) / factorial;
  const double lower = upper * std::exp(-x);
  return {lower, upper};
}

double bonferroni_lower_bound(int m, double epsilon) {
  if (m < 2) throw InvalidArgumentError("bonferroni_lower_bound: M must be >= 2");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidArgumentError("bonferroni_lower_bound: epsilon must lie in (0, 1)");
  double factorial = 1.0;
  for (int i = 2; i <= m; ++i) factorial *= i;
  const double two_m_pow = std::pow(2.0 * m, m);

  // Shells k = 0 .. floor(log2(eps^(-1/2M))); each contributes at least
  // 2^(2kM) primitive vectors whose ball lower bound is c9 * eps^(2M).
  const int shells = static_cast<int>(std::floor(-std::log2(epsilon) / (2.0 * m))) + 1;
  const double c9 = std::exp(-1.0) / (factorial * two_m_pow);
  const double first_term = shells * c9 * std::pow(epsilon, 2.0 * m);

  // Pairwise term: at most (3^(2M) eps^-1)^2 pairs, each below c8 eps^(4M-1).
  const double c8 = two_m_pow / (factorial * factorial);
  const double second_term = std::pow(3.0, 4.0 * m) * c8 * std::pow(epsilon, 4.0 * m - 3.0);

  return first_term - second_term;
}

double bonferroni_positivity_threshold(int m) {
  if (m < 2) throw InvalidArgumentError("bonferroni_positivity_threshold: M must be >= 2");
  // Bracket the sign change on a descending log grid, then bisect
  // geometrically. The bound is positive only for tiny epsilon.
  double lo_pos = -1.0, hi_neg = -1.0, prev = -1.0;
  for (double e = 0.999; e > 1e-12; e *= 0.5) {
    if (bonferroni_lower_bound(m, e) > 0.0) {
      lo_pos = e;
      hi_neg = prev;
      break;
    }
    prev = e;
  }
  if (lo_pos < 0.0) return 0.0;   // never positive above the scan floor
  if (hi_neg < 0.0) return lo_pos;  // positive already at the top of the grid
  double lo = lo_pos, hi = hi_neg;
  for (int i = 0; i < 120; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (bonferroni_lower_bound(m, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double short_vector_envelope(int m, double epsilon, double big_c) {
  if (m < 1) throw InvalidArgumentError("short_vector_envelope: M must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidArgumentError("short_vector_envelope: epsilon must lie in (0, 1)");
  return big_c * std::pow(epsilon, 2.0 * m) * std::pow(std::log(1.0 / epsilon), m - 1);
}

namespace {

struct Polyline {
  std::vector<double> snr_db;
  std::vector<double> log10v;
};

Polyline make_polyline(const SerCurve& curve, double (*pick)(const EstimateWithCI&)) {
  Polyline pl;
  for (std::size_t i = 0; i < curve.est.size(); ++i) {
    const auto& e = curve.est[i];
    if (e.successes == 0 || e.starved) continue;
    const double v = pick(e);
    if (!(v > 0.0)) continue;
    pl.snr_db.push_back(10.0 * log10_rho(curve.snr[i]));
    pl.log10v.push_back(std::log10(v));
  }
  return pl;
}

// SNR (dB) at which the polyline crosses the target level; last crossing
// wins if sampling noise makes the curve wiggle.
std::optional<double> crossing_db(const Polyline& pl, double target_log10) {
  std::optional<double> found;
  for (std::size_t i = 0; i + 1 < pl.snr_db.size(); ++i) {
    const double a = pl.log10v[i] - target_log10;
    const double b = pl.log10v[i + 1] - target_log10;
    if (a == 0.0) found = pl.snr_db[i];
    if (a * b < 0.0 || (a != 0.0 && b == 0.0)) {
      const double f = a / (a - b);
      found = pl.snr_db[i] + f * (pl.snr_db[i + 1] - pl.snr_db[i]);
    }
  }
  return found;
}

double clamp_crossing(const std::optional<double>& c, const Polyline& pl, bool to_upper_end) {
  if (c) return *c;
  if (pl.snr_db.empty()) return 0.0;
  return to_upper_end ? pl.snr_db.back() : pl.snr_db.front();
}

}  // namespace

GapResult gap_analysis(const SerCurve& ml, const SerCurve& nld,
                       std::span<const double> target_ser) {
  const Polyline ml_val = make_polyline(ml, [](const EstimateWithCI& e) { return e.value; });
  const Polyline ml_lo = make_polyline(ml, [](const EstimateWithCI& e) { return e.ci_low; });
  const Polyline ml_hi = make_polyline(ml, [](const EstimateWithCI& e) { return e.ci_high; });
  const Polyline nld_val = make_polyline(nld, [](const EstimateWithCI& e) { return e.value; });
  const Polyline nld_lo = make_polyline(nld, [](const EstimateWithCI& e) { return e.ci_low; });
  const Polyline nld_hi = make_polyline(nld, [](const EstimateWithCI& e) { return e.ci_high; });

  GapResult out;
  for (const double target : target_ser) {
    if (!(target > 0.0)) throw InvalidArgumentError("gap_analysis: targets must be positive");
    const double t = std::log10(target);
    const auto ml_cross = crossing_db(ml_val, t);
    const auto nld_cross = crossing_db(nld_val, t);
    if (!ml_cross || !nld_cross) {
      out.skipped_targets.push_back(target);
      continue;
    }
    GapPoint gp;
    gp.target_ser = target;
    gp.gap_db = *nld_cross - *ml_cross;
    // Bound-curve crossings outside the measured span are clamped to the
    // range ends, so the propagated interval never extrapolates.
    gp.gap_low_db = clamp_crossing(crossing_db(nld_lo, t), nld_lo, false) -
                    clamp_crossing(crossing_db(ml_hi, t), ml_hi, true);
    gp.gap_high_db = clamp_crossing(crossing_db(nld_hi, t), nld_hi, true) -
                     clamp_crossing(crossing_db(ml_lo, t), ml_lo, false);
    out.gaps.push_back(gp);
  }
  return out;
}

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace latsim
