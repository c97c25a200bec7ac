#include "latsim/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "latsim/errors.hpp"

namespace latsim {

ComplexMatrix sample_gaussian_matrix(int rows, int cols, RngStream& stream) {
  ComplexMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = stream.complex_gaussian();
  return a;
}

namespace {

// One-sided Jacobi on columns: rotate column pairs until every Gram
// off-diagonal is negligible, then read singular values off column norms.
// Works on a tall copy; wide inputs are transposed first (same spectrum).
template <class T>
SingularValues jacobi_singular_values(const Mat<T>& input) {
  if (input.rows() == 0 || input.cols() == 0)
    throw InvalidArgumentError("singular_values: empty matrix");
  Mat<T> a = input.rows() >= input.cols() ? input : input.adjoint();
  const int m = a.rows(), n = a.cols();

  // Relative tolerance chosen so the remaining off-diagonal Frobenius mass
  // of the Gram matrix is <= ~1e-24 of its squared norm.
  constexpr double kTol = 1e-13;
  constexpr int kMaxSweeps = 60;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool converged = true;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0;
        T apq(0);
        for (int i = 0; i < m; ++i) {
          app += abs2(a(i, p));
          aqq += abs2(a(i, q));
          apq += conj_val(a(i, p)) * a(i, q);
        }
        const double off = std::abs(apq);
        if (off <= kTol * std::sqrt(app * aqq) || off == 0.0) continue;
        converged = false;

        // Unitary 2x2 rotation diagonalizing [[app, apq], [conj(apq), aqq]].
        const T phase = apq / T(off);
        const double zeta = (aqq - app) / (2.0 * off);
        const double sgn = zeta >= 0.0 ? 1.0 : -1.0;
        const double t = sgn / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (int i = 0; i < m; ++i) {
          const T vp = a(i, p);
          const T vq = a(i, q);
          a(i, p) = T(cs) * vp - T(sn) * conj_val(phase) * vq;
          a(i, q) = T(sn) * phase * vp + T(cs) * vq;
        }
      }
    }
    if (converged) break;
  }

  SingularValues sv;
  sv.values.resize(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += abs2(a(i, j));
    sv.values[j] = std::sqrt(s);
  }
  std::sort(sv.values.begin(), sv.values.end());
  return sv;
}

template <class T>
QrResult<T> householder_qr(const Mat<T>& input) {
  const int m = input.rows(), n = input.cols();
  if (m < n) throw InvalidArgumentError("qr_decompose: requires rows >= cols");

  Mat<T> r = input;
  std::vector<std::vector<T>> reflectors;
  reflectors.reserve(n);
  const double scale = input.frobenius_norm();

  for (int k = 0; k < n; ++k) {
    // Householder vector annihilating r(k+1.., k).
    double col_norm2 = 0.0;
    for (int i = k; i < m; ++i) col_norm2 += abs2(r(i, k));
    const double col_norm = std::sqrt(col_norm2);

    std::vector<T> v(m - k, T(0));
    const T rkk = r(k, k);
    const double rkk_abs = std::abs(rkk);
    // alpha = -sign(rkk) * ||col||; for complex, the phase of rkk.
    T alpha;
    if (rkk_abs > 0.0)
      alpha = -(rkk / T(rkk_abs)) * T(col_norm);
    else
      alpha = T(-col_norm);
    v[0] = rkk - alpha;
    for (int i = k + 1; i < m; ++i) v[i - k] = r(i, k);
    const double vnorm2 = vec_norm2(std::span<const T>(v));
    if (vnorm2 > 0.0) {
      // Apply I - 2 v v^H / ||v||^2 to the trailing block.
      for (int j = k; j < n; ++j) {
        T w(0);
        for (int i = k; i < m; ++i) w += conj_val(v[i - k]) * r(i, j);
        w *= T(2.0 / vnorm2);
        for (int i = k; i < m; ++i) r(i, j) -= w * v[i - k];
      }
    }
    reflectors.push_back(std::move(v));
  }

  // Assemble the thin Q by applying the reflectors in reverse to I(:, 0..n).
  Mat<T> q(m, n);
  for (int j = 0; j < n; ++j) q(j, j) = T(1);
  for (int k = n - 1; k >= 0; --k) {
    const auto& v = reflectors[k];
    const double vnorm2 = vec_norm2(std::span<const T>(v));
    if (vnorm2 == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      T w(0);
      for (int i = k; i < m; ++i) w += conj_val(v[i - k]) * q(i, j);
      w *= T(2.0 / vnorm2);
      for (int i = k; i < m; ++i) q(i, j) -= w * v[i - k];
    }
  }

  // Force a real positive diagonal on R, absorbing phases into Q, and zero
  // out the strictly lower triangle left behind by roundoff.
  for (int k = 0; k < n; ++k) {
    const T d = r(k, k);
    const double dabs = std::abs(d);
    if (dabs <= 1e-12 * (scale > 0.0 ? scale : 1.0))
      throw RankDeficiencyError("qr_decompose: matrix is rank deficient");
    const T phase = d / T(dabs);
    for (int j = k; j < n; ++j) r(k, j) *= conj_val(phase);
    for (int i = 0; i < m; ++i) q(i, k) *= phase;
    for (int i = k + 1; i < n; ++i) r(i, k) = T(0);
  }

  QrResult<T> out;
  out.q = std::move(q);
  Mat<T> rr(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rr(i, j) = j >= i ? r(i, j) : T(0);
  out.r = std::move(rr);
  return out;
}

template <class T>
T lu_determinant(const Mat<T>& input) {
  if (input.rows() != input.cols())
    throw InvalidArgumentError("determinant: matrix must be square");
  Mat<T> a = input;
  const int n = a.rows();
  T det(1);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return T(0);
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const T f = a(i, k) / a(k, k);
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

}  // namespace

SingularValues singular_values(const ComplexMatrix& a) { return jacobi_singular_values(a); }
SingularValues singular_values(const RealMatrix& a) { return jacobi_singular_values(a); }

QrResult<cplx> qr_decompose(const ComplexMatrix& a) { return householder_qr(a); }
QrResult<double> qr_decompose(const RealMatrix& a) { return householder_qr(a); }

ComplexMatrix block_diagonal_lift(const ComplexMatrix& h, int t) {
  if (t < 1) throw InvalidArgumentError("block_diagonal_lift: T must be >= 1");
  ComplexMatrix out(h.rows() * t, h.cols() * t);
  for (int b = 0; b < t; ++b)
    for (int i = 0; i < h.rows(); ++i)
      for (int j = 0; j < h.cols(); ++j) out(b * h.rows() + i, b * h.cols() + j) = h(i, j);
  return out;
}

cplx determinant(const ComplexMatrix& a) { return lu_determinant(a); }
double determinant(const RealMatrix& a) { return lu_determinant(a); }

}  // namespace latsim
