#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "latsim/linalg.hpp"
#include "latsim/matrix.hpp"

namespace latsim {

/// Full-column-rank generator of a real or complex lattice. Columns are the
/// basis vectors. Immutable after construction; construction validates
/// finiteness and numerical full rank.
class LatticeBasis {
 public:
  explicit LatticeBasis(RealMatrix generator);
  explicit LatticeBasis(ComplexMatrix generator);

  bool is_real() const { return std::holds_alternative<RealMatrix>(gen_); }
  int ambient_dim() const;
  int rank() const;

  const RealMatrix& real_generator() const;
  const ComplexMatrix& complex_generator() const;

 private:
  std::variant<RealMatrix, ComplexMatrix> gen_;
};

/// Lattice point as integer coefficients over a basis plus its embedding
/// (embedding = generator * coeffs). For realified complex lattices the
/// coefficients are the (Re, Im) pairs of the Gaussian-integer coordinates.
struct LatticePoint {
  std::vector<long long> coeffs;
  std::vector<double> embedding;
};

/// Real basis of dimension 2*rank embedding the same point set as a complex
/// basis: each complex column becomes the two real columns for multiplication
/// by 1 and by i, with (Re, Im) interleaved per coordinate.
LatticeBasis realify(const LatticeBasis& basis);

/// det(L* L)^(1/2): the volume of the fundamental region.
double volume(const LatticeBasis& basis);

struct LllResult {
  LatticeBasis reduced;
  IntMatrix transform;  // unimodular; reduced = basis * transform
};

/// LLL reduction with parameter delta in (0.25, 1). Complex bases are
/// realified first, so the transform then acts on realified coefficients.
LllResult lll_reduce(const LatticeBasis& basis, double delta = 0.75);

struct EnumOptions {
  std::uint64_t node_budget = 100'000'000;
};

struct SvpResult {
  LatticePoint point;
  double dist;
};

struct CvpResult {
  LatticePoint point;
  double dist;
};

/// Exact shortest nonzero vector by Schnorr-Euchner enumeration on the
/// LLL-reduced basis, radius seeded with the shortest reduced basis vector.
/// Coefficients are reported over the *input* basis.
SvpResult shortest_vector(const LatticeBasis& basis, const EnumOptions& opts = {});

/// Exact closest lattice point to target, Schnorr-Euchner enumeration seeded
/// by the Babai point on the internally LLL-reduced basis. Ties are broken by
/// the lexicographically smallest coefficient vector over the input basis.
/// The target may live in an ambient space larger than the lattice rank; the
/// orthogonal residual is accounted for in the reported distance.
CvpResult closest_vector(const LatticeBasis& basis, std::span<const double> target,
                         const EnumOptions& opts = {});

/// Babai nearest-plane point. The basis is expected to be LLL-reduced
/// already (the standard 2^(n/2) approximation guarantee assumes it).
LatticePoint babai_nearest_plane(const LatticeBasis& reduced_basis,
                                 std::span<const double> target);

/// Exact number of lattice points with norm <= radius (the origin counts).
std::uint64_t count_points_in_ball(const LatticeBasis& basis, double radius,
                                   const EnumOptions& opts = {});

}  // namespace latsim
