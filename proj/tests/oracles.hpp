#pragma once

// Brute-force test oracles, deliberately written as plain box scans that are
// independent of the Schnorr-Euchner enumeration they check. The coefficient
// boxes come from Gram-Schmidt bounds, so on reduced bases they provably
// contain every lattice point within the search radius.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "latsim/matrix.hpp"

namespace oracles {

using latsim::RealMatrix;

struct GramSchmidt {
  std::vector<std::vector<double>> mu;  // mu[i][j], j < i
  std::vector<double> bstar_norm;
};

inline GramSchmidt gram_schmidt(const RealMatrix& b) {
  const int m = b.rows(), n = b.cols();
  GramSchmidt gs;
  gs.mu.assign(n, std::vector<double>(n, 0.0));
  gs.bstar_norm.assign(n, 0.0);
  std::vector<std::vector<double>> star(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) star[i][k] = b(k, i);
    for (int j = 0; j < i; ++j) {
      double num = 0.0;
      for (int k = 0; k < m; ++k) num += b(k, i) * star[j][k];
      const double mu = num / (gs.bstar_norm[j] * gs.bstar_norm[j]);
      gs.mu[i][j] = mu;
      for (int k = 0; k < m; ++k) star[i][k] -= mu * star[j][k];
    }
    double nrm = 0.0;
    for (int k = 0; k < m; ++k) nrm += star[i][k] * star[i][k];
    gs.bstar_norm[i] = std::sqrt(nrm);
  }
  return gs;
}

// Least squares through the normal equations with plain Gaussian elimination.
inline std::vector<double> least_squares(const RealMatrix& b, std::span<const double> t) {
  const int m = b.rows(), n = b.cols();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < m; ++k) a[i][j] += b(k, i) * b(k, j);
    for (int k = 0; k < m; ++k) a[i][n] += b(k, i) * t[k];
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
    std::swap(a[col], a[piv]);
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const double f = a[row][col] / a[col][col];
      for (int j = col; j <= n; ++j) a[row][j] -= f * a[col][j];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
  return x;
}

inline double dist2_to(const RealMatrix& b, std::span<const long long> coeffs,
                       std::span<const double> t) {
  double d2 = 0.0;
  for (int k = 0; k < b.rows(); ++k) {
    double v = 0.0;
    for (int j = 0; j < b.cols(); ++j) v += b(k, j) * static_cast<double>(coeffs[j]);
    const double diff = (t.empty() ? 0.0 : t[k]) - v;
    d2 += diff * diff;
  }
  return d2;
}

struct OracleResult {
  std::vector<long long> coeffs;
  double dist2 = 0.0;
  std::uint64_t box_points = 0;
};

// Exhaustive scan of the coefficient box around the least-squares solution,
// sized per level by |d_i + sum_{j>i} mu_ji d_j| <= R / ||b*_i||.
inline OracleResult brute_force_cvp(const RealMatrix& b, std::span<const double> t) {
  const int n = b.cols();
  const auto ls = least_squares(b, t);

  std::vector<long long> center(n);
  for (int i = 0; i < n; ++i) center[i] = std::llround(ls[i]);
  double radius2 = dist2_to(b, center, t);

  const auto gs = gram_schmidt(b);
  const double radius = std::sqrt(radius2) * (1.0 + 1e-9) + 1e-12;
  std::vector<double> width(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    width[i] = radius / gs.bstar_norm[i];
    for (int j = i + 1; j < n; ++j) width[i] += std::abs(gs.mu[j][i]) * width[j];
  }

  std::vector<long long> lo(n), hi(n), x(n);
  double box = 1.0;
  for (int i = 0; i < n; ++i) {
    lo[i] = static_cast<long long>(std::ceil(ls[i] - width[i] - 1e-9));
    hi[i] = static_cast<long long>(std::floor(ls[i] + width[i] + 1e-9));
    box *= static_cast<double>(hi[i] - lo[i] + 1);
    x[i] = lo[i];
  }
  if (box > 2e8) throw std::runtime_error("oracle cvp: coefficient box too large");

  OracleResult best;
  bool have = false;
  std::uint64_t points = 0;
  for (;;) {
    ++points;
    const double d2 = dist2_to(b, x, t);
    const double slack = 1e-9 * (1.0 + best.dist2);
    if (!have || d2 < best.dist2 - slack) {
      best.coeffs = x;
      best.dist2 = d2;
      have = true;
    } else if (d2 <= best.dist2 + slack &&
               std::lexicographical_compare(x.begin(), x.end(), best.coeffs.begin(),
                                            best.coeffs.end())) {
      best.coeffs = x;
      best.dist2 = std::min(best.dist2, d2);
    }
    int i = n - 1;
    while (i >= 0 && x[i] == hi[i]) {
      x[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++x[i];
  }
  best.box_points = points;
  return best;
}

// Exhaustive scan for the shortest nonzero vector; box from the same
// Gram-Schmidt recursion with radius = shortest column norm.
inline OracleResult brute_force_svp(const RealMatrix& b) {
  const int n = b.cols();
  double radius2 = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int k = 0; k < b.rows(); ++k) s += b(k, j) * b(k, j);
    radius2 = std::min(radius2, s);
  }
  const auto gs = gram_schmidt(b);
  const double radius = std::sqrt(radius2) * (1.0 + 1e-9);
  std::vector<double> width(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    width[i] = radius / gs.bstar_norm[i];
    for (int j = i + 1; j < n; ++j) width[i] += std::abs(gs.mu[j][i]) * width[j];
  }

  std::vector<long long> lo(n), hi(n), x(n);
  double box = 1.0;
  for (int i = 0; i < n; ++i) {
    lo[i] = static_cast<long long>(std::ceil(-width[i] - 1e-9));
    hi[i] = static_cast<long long>(std::floor(width[i] + 1e-9));
    box *= static_cast<double>(hi[i] - lo[i] + 1);
    x[i] = lo[i];
  }
  if (box > 2e8) throw std::runtime_error("oracle svp: coefficient box too large");

  OracleResult best;
  bool have = false;
  std::uint64_t points = 0;
  for (;;) {
    ++points;
    const bool zero = std::all_of(x.begin(), x.end(), [](long long v) { return v == 0; });
    if (!zero) {
      const double d2 = dist2_to(b, x, {});
      if (!have || d2 < best.dist2) {
        best.coeffs = x;
        best.dist2 = d2;
        have = true;
      }
    }
    int i = n - 1;
    while (i >= 0 && x[i] == hi[i]) {
      x[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++x[i];
  }
  best.box_points = points;
  return best;
}

}  // namespace oracles
