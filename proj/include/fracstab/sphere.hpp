#pragma once

// Stereographic projection, conformal weights, and quadrature grids on S^N
// (N = 1, 2) linking the flat R^N picture to the sphere picture.

#include <Eigen/Core>

#include <functional>
#include <string>

#include "fracstab/constants.hpp"

namespace fracstab {

/// A point on S^N, stored as a unit vector in R^{N+1}.
struct SpherePoint {
  Eigen::VectorXd coords;

  /// Validates |coords| = 1 to 1e-12; throws ValidationError otherwise.
  explicit SpherePoint(Eigen::VectorXd c);

  /// Intrinsic sphere dimension N.
  int dim() const { return static_cast<int>(coords.size()) - 1; }
};

/// Quadrature rule on S^N. Nodes never coincide with the projection pole
/// (0, ..., 0, 1): Gauss-Legendre nodes exclude the poles of S^2 by
/// construction, and circle nodes are offset by half a spacing.
struct QuadratureGrid {
  int N = 0;            ///< sphere dimension (1 or 2)
  int degreeBound = 0;  ///< products of harmonics up to this degree are exact
  Eigen::MatrixXd nodes;    ///< size x (N+1), unit rows
  Eigen::VectorXd weights;  ///< positive, summing to |S^N|
  std::string resolutionTag;

  // Separable structure consumed by the spherical-harmonic transforms.
  Eigen::VectorXd polarNodes;    ///< N=2: Gauss-Legendre nodes in cos(theta);
                                 ///< N=1: the circle angles theta_j
  Eigen::VectorXd polarWeights;  ///< N=2: Gauss-Legendre weights
  int azimuthCount = 0;          ///< N=2: uniform azimuth count per ring

  int size() const { return static_cast<int>(weights.size()); }
};

/// Surface measure |S^N| (2*pi for N=1, 4*pi for N=2, general closed form).
double sphere_surface(int N);

/// Gauss-Legendre nodes and weights on [-1, 1] (ascending nodes).
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Stereographic chart S(x) = (2x/(1+|x|^2), (|x|^2-1)/(1+|x|^2)).
/// Maps R^N bijectively onto S^N minus the pole (0, ..., 0, 1).
SpherePoint stereo(const Eigen::VectorXd& x);

/// Inverse chart; throws ValidationError on the pole.
Eigen::VectorXd inverse_stereo(const SpherePoint& omega);

/// (2/(1+|x|^2))^{(N-2s)/2}, the 1/twoStar power of the Jacobian
/// determinant (2/(1+|x|^2))^N of the stereographic chart.
double conformal_factor(const Eigen::VectorXd& x, const ProblemParams& params);

/// Conformal pull-back of u: R^N -> R to values at the grid nodes:
/// V(omega) = u(inverse_stereo(omega)) / conformal_factor(...).
Eigen::VectorXd pull_to_sphere(
    const std::function<double(const Eigen::VectorXd&)>& u,
    const QuadratureGrid& grid, const ProblemParams& params);

/// Build a grid exact for products of spherical harmonics up to degreeBound.
/// N=1: uniform offset nodes on the circle; N=2: Gauss-Legendre in the polar
/// direction (degreeBound+1 nodes) times uniform azimuth (2*degreeBound+1).
QuadratureGrid build_quadrature(int N, int degreeBound);

}  // namespace fracstab
