#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "latsim/errors.hpp"

namespace latsim {

using cplx = std::complex<double>;

inline double conj_val(double x) { return x; }
inline cplx conj_val(const cplx& x) { return std::conj(x); }
inline double abs2(double x) { return x * x; }
inline double abs2(const cplx& x) { return std::norm(x); }

/// Dense row-major matrix. Value type, immutable-by-convention once built;
/// all operations return fresh matrices.
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 1 || cols < 1) throw InvalidArgumentError("Mat: dimensions must be >= 1");
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  std::span<const T> data() const { return data_; }

  std::vector<T> col(int j) const {
    std::vector<T> c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Mat operator*(const Mat& other) const {
    if (cols_ != other.rows_) throw InvalidArgumentError("Mat::operator*: dimension mismatch");
    Mat out(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int k = 0; k < cols_; ++k) {
        const T a = (*this)(i, k);
        if (a == T(0)) continue;
        for (int j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
      }
    }
    return out;
  }

  std::vector<T> operator*(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != cols_)
      throw InvalidArgumentError("Mat::operator*: vector length mismatch");
    std::vector<T> y(rows_, T(0));
    for (int i = 0; i < rows_; ++i) {
      T acc(0);
      for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

  Mat operator+(const Mat& other) const {
    require_same_shape(other, "operator+");
    Mat out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
  }

  Mat operator-(const Mat& other) const {
    require_same_shape(other, "operator-");
    Mat out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
    return out;
  }

  Mat& operator*=(T s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  Mat scaled(T s) const {
    Mat out = *this;
    out *= s;
    return out;
  }

  /// Conjugate transpose (plain transpose for real T).
  Mat adjoint() const {
    Mat out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = conj_val((*this)(i, j));
    return out;
  }

  Mat transpose() const {
    Mat out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += abs2(v);
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (const auto& v : data_) {
      if constexpr (std::is_same_v<T, cplx>) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
      } else {
        if (!std::isfinite(static_cast<double>(v))) return false;
      }
    }
    return true;
  }

 private:
  void require_same_shape(const Mat& other, const char* op) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
      throw InvalidArgumentError(std::string("Mat::") + op + ": shape mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Mat<double>;
using ComplexMatrix = Mat<cplx>;
using IntMatrix = Mat<long long>;

inline ComplexMatrix to_complex(const RealMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = cplx(a(i, j), 0.0);
  return out;
}

/// Real representation of a complex linear map: complex coordinate k becomes
/// real coordinates (2k, 2k+1) = (Re, Im), and each complex column yields the
/// two real columns corresponding to multiplication by 1 and by i. This is
/// exactly the generator realification for complex lattices over Z[i].
inline RealMatrix to_real_matrix(const ComplexMatrix& a) {
  RealMatrix out(2 * a.rows(), 2 * a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const cplx z = a(i, j);
      out(2 * i, 2 * j) = z.real();
      out(2 * i + 1, 2 * j) = z.imag();
      out(2 * i, 2 * j + 1) = -z.imag();
      out(2 * i + 1, 2 * j + 1) = z.real();
    }
  }
  return out;
}

inline std::vector<double> to_real_vector(std::span<const cplx> v) {
  std::vector<double> out(2 * v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
  return out;
}

inline std::vector<cplx> to_complex_vector(std::span<const double> v) {
  if (v.size() % 2 != 0) throw InvalidArgumentError("to_complex_vector: odd length");
  std::vector<cplx> out(v.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cplx(v[2 * i], v[2 * i + 1]);
  return out;
}

template <class T>
double vec_norm2(std::span<const T> v) {
  double s = 0.0;
  for (const auto& x : v) s += abs2(x);
  return s;
}

template <class T>
double vec_norm(std::span<const T> v) {
  return std::sqrt(vec_norm2(v));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace latsim
