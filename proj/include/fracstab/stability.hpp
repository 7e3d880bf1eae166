#pragma once

// Stability-quotient experiments: the ratio of the dual residual norm to the
// manifold distance, its small-perturbation limits, and the third-order
// strictness expansion of the squared quotient.

#include <limits>
#include <vector>

#include "fracstab/constants.hpp"
#include "fracstab/functional.hpp"
#include "fracstab/harmonics.hpp"
#include "fracstab/manifold.hpp"
#include "fracstab/sphere.hpp"

namespace fracstab {

/// One evaluation of the (unsquared) stability quotient.
struct QuotientReport {
  /// Perturbation size label supplied by the caller (NaN for a bare field).
  double epsilon = 0.0;
  /// hnegNorm of the residual divided by dist to the manifold.
  double quotient = 0.0;
  double beta = 0.0;
  double distVal = 0.0;
  /// Hs norm of the orthogonal component rho.
  double rhoNorm = 0.0;
  /// Squared coefficient energy of rho per degree (index = degree).
  std::vector<double> perDegreeEnergies;
};

/// Results of the third-order expansion of the squared quotient
/// q(eps)^2 = gamma^2 + K * eps + o(eps) along V = U + eps * rho.
struct ExpansionReport {
  /// Constant recovered by an exact quadratic fit through the three smallest
  /// epsilon values; expected gamma^2.
  double quadraticTerm = 0.0;
  /// Fitted leading coefficient K of q^2 - gamma^2 (basis {eps, eps^2});
  /// this is the cubic-order coefficient of the squared-numerator expansion
  /// divided by the exact quadratic denominator.
  double cubicCoefficient = 0.0;
  /// Closed form p(p-1)(mu(2)^{-1} - 1) * integral of W^{p-2} rho^3.
  double predictedCubic = 0.0;
  /// Quadrature moment: integral of omega_1^2 omega_2^2 omega_3^2 over S^2
  /// (set for N = 2, zero otherwise); exact value 4*pi/105.
  double momentIntegral = 0.0;
};

/// Evaluate the stability quotient of one field. epsLabel is copied into the
/// report for experiment bookkeeping. Throws DegenerateQuotientError when the
/// field is on the manifold (dist below 1e-9).
QuotientReport stability_quotient(
    const SphereField& V, const ProblemParams& params,
    const QuadratureGrid& grid,
    double epsLabel = std::numeric_limits<double>::quiet_NaN());

/// The designed strictness witness on S^2: the field with point values
/// v(omega) = omega_1 omega_2 + omega_2 omega_3 + omega_3 omega_1,
/// pure degree 2 with a nonvanishing cubic self-interaction.
SphereField strictness_test_field(const ProblemParams& params,
                                  const QuadratureGrid& grid, int Lmax);

/// Evaluate the squared quotient along U + eps * rho for each eps (rho pure
/// degree 2; it is Hs-normalized internally) and fit the linear-in-eps
/// correction to gamma^2. Throws PositivityError when some eps pushes the
/// field below a tenth of the bubble minimum (shrink epsilon).
ExpansionReport expansion_experiment(const SphereField& rho,
                                     const std::vector<double>& epsList,
                                     const ProblemParams& params,
                                     const QuadratureGrid& grid);

}  // namespace fracstab
