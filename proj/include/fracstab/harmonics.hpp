#pragma once

// Band-limited spectral representation on S^N in an orthonormal real
// spherical-harmonic basis, and the diagonal action of the conformal
// fractional Laplacian A_s (eigenvalue alpha(l) on degree l).

#include <Eigen/Core>

#include <set>

#include "fracstab/constants.hpp"
#include "fracstab/sphere.hpp"

namespace fracstab {

/// Band-limited function on S^N as real spherical-harmonic coefficients,
/// orthonormal in L^2(S^N, dS). Coefficients are packed densely by degree:
/// N=1 stores {Y_0, cos(l th)/sqrt(pi), sin(l th)/sqrt(pi)} (sizes 1,2,2,...),
/// N=2 stores 2l+1 coefficients per degree (m = 0, then cos/sin pairs).
struct SphereField {
  int N = 2;
  int Lmax = 0;
  Eigen::VectorXd coeffs;

  SphereField() = default;
  SphereField(int N, int Lmax);

  static int coeffCount(int N, int Lmax);
  static int degreeOffset(int N, int l);
  static int degreeSize(int N, int l);

  double coeff(int l, int j) const;
  double& coeff(int l, int j);

  /// View of the coefficients of one degree.
  Eigen::VectorBlock<const Eigen::VectorXd> degreeBlock(int l) const;
  Eigen::VectorBlock<Eigen::VectorXd> degreeBlock(int l);

  /// Sum of squared coefficients of degree l (L^2 energy by Parseval).
  double degreeEnergy(int l) const;

  /// Total squared-coefficient sum = L^2(S^N) norm squared.
  double l2NormSq() const { return coeffs.squaredNorm(); }

  /// Copy zero-padded or truncated to a new band limit.
  SphereField withLmax(int newLmax) const;
};

SphereField operator+(const SphereField& a, const SphereField& b);
SphereField operator-(const SphereField& a, const SphereField& b);
SphereField operator*(double scale, const SphereField& f);

/// Selects which spherical-harmonic degrees pass through `project`.
struct DegreeProjector {
  std::set<int> degrees;

  static DegreeProjector single(int l) { return {{l}}; }
  static DegreeProjector range(int lo, int hi);
  /// Degrees {0, 1}: the tangent block of the standard bubble.
  static DegreeProjector tangent() { return {{0, 1}}; }

  bool passes(int l) const { return degrees.count(l) > 0; }
};

/// Expand grid values in the orthonormal basis by quadrature.
/// Requires grid.degreeBound >= Lmax (ResolutionError otherwise).
SphereField analyze(const Eigen::VectorXd& values, const QuadratureGrid& grid,
                    int Lmax);

/// Pointwise sum of coefficients times basis values at the grid nodes.
Eigen::VectorXd synthesize(const SphereField& field, const QuadratureGrid& grid);

/// Evaluate the field at one arbitrary sphere point.
double synthesize_at(const SphereField& field, const SpherePoint& point);

/// Multiply each degree-l coefficient by alpha(l).
SphereField apply_As(const SphereField& field, const ProblemParams& params);

/// Exact inverse of apply_As (divide by alpha(l)).
SphereField apply_As_inv(const SphereField& field, const ProblemParams& params);

/// Zero all coefficients whose degree is not selected.
SphereField project(const SphereField& field, const DegreeProjector& projector);

}  // namespace fracstab
