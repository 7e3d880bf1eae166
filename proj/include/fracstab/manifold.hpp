#pragma once

// Talenti bubbles, their pulled-back sphere fields, the tangent space of the
// bubble manifold, and the Hs-distance projection with its
// beta / tangential / orthogonal decomposition.

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "fracstab/constants.hpp"
#include "fracstab/harmonics.hpp"
#include "fracstab/sphere.hpp"

namespace fracstab {

/// Coordinates (z, lambda) on the bubble manifold.
struct BubbleParams {
  Eigen::VectorXd z;
  double lambda = 1.0;

  BubbleParams() = default;
  BubbleParams(Eigen::VectorXd z, double lambda);
};

/// Result of projecting a field onto the bubble manifold. With T0 the
/// pulled-back bubble at the minimizer and T1..T_{N+1} its lambda- and
/// z-derivative fields, the field splits exactly as
///   V = beta * T0 + tangential + orthogonal,
/// with orthogonal Hs-perpendicular to the whole tangent span. The variant
/// decomposition of V - T0 uses vTotal = (beta - 1) * T0 + tangential.
struct Decomposition {
  BubbleParams bubble;
  double beta = 0.0;
  SphereField tangential;
  SphereField orthogonal;
  /// Hs distance to the manifold within V's band limit (the bubble is
  /// analyzed onto the same basis, so on-manifold fields give an exact
  /// zero; the resolution check bounds the neglected spectral tail).
  double dist = 0.0;
  /// Max normalized Hs inner product of V - T0 against the derivative
  /// tangent fields; small values certify stationarity of the minimizer.
  double orthoResidual = 0.0;
  /// Set when dist exceeds 90% of the bubble norm, outside the regime where
  /// the projection is meaningful.
  bool farFromManifold = false;
};

/// Closed-form bubble value c_{N,s} (lambda / (1 + lambda^2 |x-z|^2))^{(N-2s)/2}.
double bubble_eval(const BubbleParams& b, const Eigen::VectorXd& x,
                   const ProblemParams& params);

/// The bubble divided by the conformal factor, evaluated directly on the
/// sphere through its closed form (finite at the projection pole).
double bubble_sphere_value(const BubbleParams& b, const Eigen::VectorXd& omega,
                           const ProblemParams& params);

/// Pulled-back bubble analyzed to Lmax. Throws ResolutionError when the top
/// decile of degrees holds more than 1e-4 of the total energy (the grid can
/// no longer resolve the concentration scale).
SphereField bubble_field(const BubbleParams& b, const QuadratureGrid& grid,
                         int Lmax, const ProblemParams& params);

/// The N+2 pulled-back tangent fields [U, dU/dlambda, dU/dz_1, .., dU/dz_N]
/// from analytic derivatives of the closed form. Same tail check as
/// bubble_field.
std::vector<SphereField> tangent_fields(const BubbleParams& b,
                                        const QuadratureGrid& grid, int Lmax,
                                        const ProblemParams& params);

/// Hs inner product of two fields (diagonal in the harmonic basis).
double hs_inner(const SphereField& a, const SphereField& b,
                const ProblemParams& params);

/// Minimize ||V - U[z,lambda]||_{Hs} over the manifold by Nelder-Mead in
/// (z, log lambda), then decompose V against the tangent span at the
/// minimizer. initGuess seeds the optimizer (warm start); by default the
/// start is read off the degree-1 coefficients of V.
Decomposition dist_to_manifold(
    const SphereField& V, const ProblemParams& params,
    const QuadratureGrid& grid,
    const std::optional<BubbleParams>& initGuess = std::nullopt);

}  // namespace fracstab
