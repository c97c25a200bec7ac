#include "latsim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "latsim/errors.hpp"

namespace latsim {

namespace {

// Householder triangularization without Q assembly. When a target is given
// the reflectors are applied to it as well, yielding y = Q^T t and the
// squared norm of the component of t orthogonal to the column span.
struct TriSystem {
  RealMatrix r;           // n x n, upper triangular, positive diagonal
  std::vector<double> y;  // Q^T target (length n), empty without a target
  double residual2 = 0.0;
};

TriSystem triangularize(const RealMatrix& b, std::span<const double> target) {
  const int m = b.rows(), n = b.cols();
  if (m < n) throw InvalidArgumentError("lattice: ambient dimension below rank");
  const bool with_target = !target.empty();
  if (with_target && static_cast<int>(target.size()) != m)
    throw InvalidArgumentError("lattice: target length does not match ambient dimension");

  RealMatrix work = b;
  std::vector<double> t(target.begin(), target.end());
  const double scale = b.frobenius_norm();

  std::vector<double> v(m);
  for (int k = 0; k < n; ++k) {
    double col_norm2 = 0.0;
    for (int i = k; i < m; ++i) col_norm2 += work(i, k) * work(i, k);
    const double col_norm = std::sqrt(col_norm2);
    const double alpha = work(k, k) >= 0.0 ? -col_norm : col_norm;
    v[k] = work(k, k) - alpha;
    for (int i = k + 1; i < m; ++i) v[i] = work(i, k);
    double vnorm2 = 0.0;
    for (int i = k; i < m; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 > 0.0) {
      for (int j = k; j < n; ++j) {
        double w = 0.0;
        for (int i = k; i < m; ++i) w += v[i] * work(i, j);
        w *= 2.0 / vnorm2;
        for (int i = k; i < m; ++i) work(i, j) -= w * v[i];
      }
      if (with_target) {
        double w = 0.0;
        for (int i = k; i < m; ++i) w += v[i] * t[i];
        w *= 2.0 / vnorm2;
        for (int i = k; i < m; ++i) t[i] -= w * v[i];
      }
    }
  }

  TriSystem sys;
  sys.r = RealMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    const double d = work(k, k);
    if (std::abs(d) <= 1e-12 * (scale > 0.0 ? scale : 1.0))
      throw RankDeficiencyError("lattice: generator is numerically rank deficient");
    const double sign = d >= 0.0 ? 1.0 : -1.0;
    for (int j = k; j < n; ++j) sys.r(k, j) = sign * work(k, j);
    if (with_target) sys.y.push_back(sign * t[k]);
  }
  if (with_target) {
    for (int i = n; i < m; ++i) sys.residual2 += t[i] * t[i];
  }
  return sys;
}

const RealMatrix& working_generator(const LatticeBasis& basis,
                                    std::optional<LatticeBasis>& storage) {
  if (basis.is_real()) return basis.real_generator();
  storage.emplace(realify(basis));
  return storage->real_generator();
}

std::vector<long long> map_coeffs(const IntMatrix& u, std::span<const long long> x) {
  return u * x;
}

bool lex_less(std::span<const long long> a, std::span<const long long> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct EnumOutcome {
  std::vector<long long> reduced_coeffs;
  std::vector<long long> orig_coeffs;
  double dist2 = 0.0;
  bool found = false;
};

// Schnorr-Euchner depth-first enumeration over the triangular system
// ||y - R x||^2, zig-zagging each level around its conditional center so the
// per-level cost is nondecreasing and subtrees can be cut at the first
// violation. Candidates within a tiny slack of the best distance are tie
// broken on the lexicographically smallest original-basis coefficients.
EnumOutcome se_enumerate(const RealMatrix& r, std::span<const double> y, bool exclude_zero,
                         double init_bound2, std::uint64_t node_budget, const IntMatrix& to_orig) {
  const int n = r.rows();
  std::vector<long long> x(n, 0), step(n, 1);
  std::vector<double> center(n, 0.0), pc(n, 0.0);

  EnumOutcome best;
  double best2 = init_bound2;
  auto slack_for = [](double b2) {
    return 1e-9 * (1.0 + (std::isfinite(b2) ? b2 : 0.0));
  };
  double slack = slack_for(best2);
  double bound = std::isfinite(best2) ? best2 + slack : best2;

  std::uint64_t nodes = 0;
  auto descend_init = [&](int i) {
    double inner = 0.0;
    for (int j = i + 1; j < n; ++j) inner += r(i, j) * x[j];
    center[i] = (y[i] - inner) / r(i, i);
    x[i] = std::llround(center[i]);
    step[i] = center[i] >= static_cast<double>(x[i]) ? 1 : -1;
  };
  auto advance = [&](int i) {
    x[i] += step[i];
    step[i] = -step[i] - (step[i] > 0 ? 1 : -1);
  };

  int i = n - 1;
  pc[i] = 0.0;
  descend_init(i);

  for (;;) {
    if (++nodes > node_budget)
      throw BudgetExceededError("lattice enumeration: node budget exceeded");
    const double diff = r(i, i) * (center[i] - static_cast<double>(x[i]));
    const double cost = pc[i] + diff * diff;
    if (cost > bound) {
      // Schnorr-Euchner order: every further x[i] at this level costs more.
      ++i;
      if (i == n) break;
      advance(i);
      continue;
    }
    if (i > 0) {
      pc[i - 1] = cost;
      --i;
      descend_init(i);
      continue;
    }
    // Leaf.
    const bool is_zero = std::all_of(x.begin(), x.end(), [](long long v) { return v == 0; });
    if (!(exclude_zero && is_zero)) {
      if (!best.found || cost < best2 - slack) {
        best.found = true;
        best.reduced_coeffs = x;
        best.orig_coeffs = map_coeffs(to_orig, x);
        best2 = cost;
        slack = slack_for(best2);
        bound = best2 + slack;
      } else if (cost <= best2 + slack) {
        auto orig = map_coeffs(to_orig, x);
        if (lex_less(orig, best.orig_coeffs)) {
          best.reduced_coeffs = x;
          best.orig_coeffs = std::move(orig);
        }
        if (cost < best2) {
          best2 = cost;
          slack = slack_for(best2);
          bound = best2 + slack;
        }
      }
    }
    advance(0);
  }

  best.dist2 = best2;
  return best;
}

std::vector<double> embed(const RealMatrix& gen, std::span<const long long> coeffs) {
  std::vector<double> e(gen.rows(), 0.0);
  for (int j = 0; j < gen.cols(); ++j) {
    const double c = static_cast<double>(coeffs[j]);
    if (c == 0.0) continue;
    for (int i = 0; i < gen.rows(); ++i) e[i] += gen(i, j) * c;
  }
  return e;
}

// Classic LLL with incrementally maintained Gram-Schmidt data (Cohen's
// formulation) and an integer transform kept alongside the basis.
struct LllWork {
  RealMatrix b;
  IntMatrix u;
  std::vector<std::vector<double>> mu;  // mu[i][j] for j < i
  std::vector<double> bs;               // squared Gram-Schmidt norms
};

void compute_gram_schmidt(LllWork& w) {
  const int m = w.b.rows(), n = w.b.cols();
  std::vector<std::vector<double>> star(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) star[i][k] = w.b(k, i);
    for (int j = 0; j < i; ++j) {
      double num = 0.0;
      for (int k = 0; k < m; ++k) num += w.b(k, i) * star[j][k];
      const double mu = w.bs[j] > 0.0 ? num / w.bs[j] : 0.0;
      w.mu[i][j] = mu;
      for (int k = 0; k < m; ++k) star[i][k] -= mu * star[j][k];
    }
    double nrm = 0.0;
    for (int k = 0; k < m; ++k) nrm += star[i][k] * star[i][k];
    w.bs[i] = nrm;
  }
}

void size_reduce(LllWork& w, int k, int l) {
  if (std::abs(w.mu[k][l]) <= 0.5) return;
  const long long q = std::llround(w.mu[k][l]);
  const int m = w.b.rows(), n = w.b.cols();
  for (int i = 0; i < m; ++i) w.b(i, k) -= static_cast<double>(q) * w.b(i, l);
  for (int i = 0; i < n; ++i) w.u(i, k) -= q * w.u(i, l);
  for (int j = 0; j < l; ++j) w.mu[k][j] -= static_cast<double>(q) * w.mu[l][j];
  w.mu[k][l] -= static_cast<double>(q);
}

void swap_columns(LllWork& w, int k) {
  const int m = w.b.rows(), n = w.b.cols();
  for (int i = 0; i < m; ++i) std::swap(w.b(i, k), w.b(i, k - 1));
  for (int i = 0; i < n; ++i) std::swap(w.u(i, k), w.u(i, k - 1));

  const double mu = w.mu[k][k - 1];
  const double big = w.bs[k] + mu * mu * w.bs[k - 1];
  w.mu[k][k - 1] = mu * w.bs[k - 1] / big;
  w.bs[k] = w.bs[k - 1] * w.bs[k] / big;
  w.bs[k - 1] = big;
  for (int j = 0; j < k - 1; ++j) std::swap(w.mu[k][j], w.mu[k - 1][j]);
  for (int i = k + 1; i < n; ++i) {
    const double t = w.mu[i][k];
    w.mu[i][k] = w.mu[i][k - 1] - mu * t;
    w.mu[i][k - 1] = t + w.mu[k][k - 1] * w.mu[i][k];
  }
}

}  // namespace

LatticeBasis::LatticeBasis(RealMatrix generator) : gen_(std::move(generator)) {
  const auto& g = std::get<RealMatrix>(gen_);
  if (!g.all_finite()) throw InvalidArgumentError("LatticeBasis: non-finite entries");
  triangularize(g, {});  // full-rank check
}

LatticeBasis::LatticeBasis(ComplexMatrix generator) : gen_(std::move(generator)) {
  const auto& g = std::get<ComplexMatrix>(gen_);
  if (!g.all_finite()) throw InvalidArgumentError("LatticeBasis: non-finite entries");
  triangularize(to_real_matrix(g), {});
}

int LatticeBasis::ambient_dim() const {
  return is_real() ? std::get<RealMatrix>(gen_).rows() : std::get<ComplexMatrix>(gen_).rows();
}

int LatticeBasis::rank() const {
  return is_real() ? std::get<RealMatrix>(gen_).cols() : std::get<ComplexMatrix>(gen_).cols();
}

const RealMatrix& LatticeBasis::real_generator() const {
  if (!is_real()) throw InvalidArgumentError("LatticeBasis: real generator requested from complex basis");
  return std::get<RealMatrix>(gen_);
}

const ComplexMatrix& LatticeBasis::complex_generator() const {
  if (is_real())
    throw InvalidArgumentError("LatticeBasis: complex generator requested from real basis");
  return std::get<ComplexMatrix>(gen_);
}

LatticeBasis realify(const LatticeBasis& basis) {
  if (basis.is_real()) throw InvalidArgumentError("realify: basis is already real");
  return LatticeBasis(to_real_matrix(basis.complex_generator()));
}

double volume(const LatticeBasis& basis) {
  if (basis.is_real()) {
    const auto sys = triangularize(basis.real_generator(), {});
    double v = 1.0;
    for (int k = 0; k < sys.r.rows(); ++k) v *= sys.r(k, k);
    return v;
  }
  const auto qr = qr_decompose(basis.complex_generator());
  double v = 1.0;
  for (int k = 0; k < qr.r.rows(); ++k) v *= qr.r(k, k).real();
  return v;
}

LllResult lll_reduce(const LatticeBasis& basis, double delta) {
  if (!(delta > 0.25 && delta < 1.0))
    throw InvalidArgumentError("lll_reduce: delta must lie in (0.25, 1)");
  std::optional<LatticeBasis> storage;
  const RealMatrix& gen = working_generator(basis, storage);
  const int n = gen.cols();

  LllWork w{gen, IntMatrix::identity(n),
            std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)),
            std::vector<double>(n, 0.0)};
  compute_gram_schmidt(w);

  int k = 1;
  std::uint64_t guard = 0;
  while (k < n) {
    if (++guard > 10'000'000ull)
      throw BudgetExceededError("lll_reduce: iteration guard tripped");
    size_reduce(w, k, k - 1);
    const double mu = w.mu[k][k - 1];
    if (w.bs[k] < (delta - mu * mu) * w.bs[k - 1]) {
      swap_columns(w, k);
      k = std::max(k - 1, 1);
    } else {
      for (int l = k - 2; l >= 0; --l) size_reduce(w, k, l);
      ++k;
    }
  }

  return LllResult{LatticeBasis(w.b), std::move(w.u)};
}

SvpResult shortest_vector(const LatticeBasis& basis, const EnumOptions& opts) {
  std::optional<LatticeBasis> storage;
  const RealMatrix& gen = working_generator(basis, storage);
  auto red = lll_reduce(basis.is_real() ? basis : *storage);
  const RealMatrix& rg = red.reduced.real_generator();
  const int n = rg.cols();

  const auto sys = triangularize(rg, {});
  std::vector<double> zero_target(n, 0.0);

  // Seed with the shortest reduced basis vector.
  int best_col = 0;
  double best_norm2 = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < rg.rows(); ++i) s += rg(i, j) * rg(i, j);
    if (s < best_norm2) {
      best_norm2 = s;
      best_col = j;
    }
  }

  auto out = se_enumerate(sys.r, zero_target, /*exclude_zero=*/true,
                          best_norm2 * (1.0 + 1e-9), opts.node_budget, red.transform);
  std::vector<long long> coeffs;
  double dist2;
  if (out.found) {
    coeffs = std::move(out.orig_coeffs);
    dist2 = out.dist2;
  } else {
    std::vector<long long> e(n, 0);
    e[best_col] = 1;
    coeffs = red.transform * std::span<const long long>(e);
    dist2 = best_norm2;
  }
  LatticePoint p{coeffs, embed(gen, coeffs)};
  return SvpResult{std::move(p), std::sqrt(dist2)};
}

CvpResult closest_vector(const LatticeBasis& basis, std::span<const double> target,
                         const EnumOptions& opts) {
  std::optional<LatticeBasis> storage;
  const RealMatrix& gen = working_generator(basis, storage);
  if (static_cast<int>(target.size()) != gen.rows())
    throw InvalidArgumentError("closest_vector: target length does not match ambient dimension");

  auto red = lll_reduce(basis.is_real() ? basis : *storage);
  const auto sys = triangularize(red.reduced.real_generator(), target);

  auto out = se_enumerate(sys.r, sys.y, /*exclude_zero=*/false,
                          std::numeric_limits<double>::infinity(), opts.node_budget,
                          red.transform);
  LatticePoint p{out.orig_coeffs, embed(gen, out.orig_coeffs)};
  return CvpResult{std::move(p), std::sqrt(out.dist2 + sys.residual2)};
}

LatticePoint babai_nearest_plane(const LatticeBasis& reduced_basis,
                                 std::span<const double> target) {
  std::optional<LatticeBasis> storage;
  const RealMatrix& gen = working_generator(reduced_basis, storage);
  if (static_cast<int>(target.size()) != gen.rows())
    throw InvalidArgumentError("babai_nearest_plane: target length mismatch");
  const auto sys = triangularize(gen, target);
  const int n = sys.r.rows();
  std::vector<long long> x(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    double inner = 0.0;
    for (int j = i + 1; j < n; ++j) inner += sys.r(i, j) * static_cast<double>(x[j]);
    x[i] = std::llround((sys.y[i] - inner) / sys.r(i, i));
  }
  return LatticePoint{x, embed(gen, x)};
}

std::uint64_t count_points_in_ball(const LatticeBasis& basis, double radius,
                                   const EnumOptions& opts) {
  if (!(radius > 0.0)) throw InvalidArgumentError("count_points_in_ball: radius must be > 0");
  std::optional<LatticeBasis> storage;
  const RealMatrix& gen = working_generator(basis, storage);
  const auto sys = triangularize(gen, {});
  const int n = sys.r.rows();
  const double bound = radius * radius * (1.0 + 1e-12);
  constexpr std::uint64_t kCountBudget = 10'000'000ull;

  std::vector<long long> x(n, 0), step(n, 1);
  std::vector<double> center(n, 0.0), pc(n, 0.0);
  std::uint64_t nodes = 0, count = 0;

  auto descend_init = [&](int i) {
    double inner = 0.0;
    for (int j = i + 1; j < n; ++j) inner += sys.r(i, j) * x[j];
    center[i] = -inner / sys.r(i, i);
    x[i] = std::llround(center[i]);
    step[i] = center[i] >= static_cast<double>(x[i]) ? 1 : -1;
  };
  auto advance = [&](int i) {
    x[i] += step[i];
    step[i] = -step[i] - (step[i] > 0 ? 1 : -1);
  };

  int i = n - 1;
  descend_init(i);
  for (;;) {
    if (++nodes > opts.node_budget)
      throw BudgetExceededError("count_points_in_ball: node budget exceeded");
    const double diff = sys.r(i, i) * (center[i] - static_cast<double>(x[i]));
    const double cost = pc[i] + diff * diff;
    if (cost > bound) {
      ++i;
      if (i == n) break;
      advance(i);
      continue;
    }
    if (i > 0) {
      pc[i - 1] = cost;
      --i;
      descend_init(i);
      continue;
    }
    if (++count > kCountBudget)
      throw BudgetExceededError("count_points_in_ball: count budget exceeded");
    advance(0);
  }
  return count;
}

}  // namespace latsim
