#pragma once

#include <vector>

#include "latsim/matrix.hpp"
#include "latsim/rng.hpp"

namespace latsim {

/// Singular values sorted ascending, all >= 0.
struct SingularValues {
  std::vector<double> values;

  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

/// Matrix with i.i.d. zero-mean unit-variance circular complex Gaussian
/// entries (real and imaginary parts each N(0, 1/2)). Entries are drawn in
/// row-major order, so a given (seed, stream) pair is bit-reproducible.
ComplexMatrix sample_gaussian_matrix(int rows, int cols, RngStream& stream);

/// Singular values by one-sided Jacobi column rotations. Accurate at desk
/// scale (dimension <= ~32); zero singular values are allowed.
SingularValues singular_values(const ComplexMatrix& a);
SingularValues singular_values(const RealMatrix& a);

template <class T>
struct QrResult {
  Mat<T> q;  // orthonormal columns, rows(a) x cols(a)
  Mat<T> r;  // upper triangular with real positive diagonal, cols x cols
};

/// Householder QR of a full-column-rank matrix (rows >= cols). The diagonal
/// of R is made real and positive by phase absorption into Q.
/// Throws RankDeficiencyError when a diagonal entry underflows the rank
/// tolerance.
QrResult<cplx> qr_decompose(const ComplexMatrix& a);
QrResult<double> qr_decompose(const RealMatrix& a);

/// NT x MT block-diagonal matrix repeating H (N x M) T times, modelling a
/// quasi-static channel over T uses.
ComplexMatrix block_diagonal_lift(const ComplexMatrix& h, int t);

/// Determinant by LU with partial pivoting (square, desk scale).
cplx determinant(const ComplexMatrix& a);
double determinant(const RealMatrix& a);

}  // namespace latsim
