#pragma once

// Norms, energies, residuals, and bilinear forms on S^N, realized spectrally:
// the Hs/H^{-s} pair through the diagonal operator A_s, Lebesgue norms through
// quadrature, and the stationary-equation residual A_s V - V^p with its dual
// norm, critical-dual norm, and entropy dissipation.

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "fracstab/constants.hpp"
#include "fracstab/harmonics.hpp"
#include "fracstab/sphere.hpp"

namespace fracstab {

/// Diagnostics of the residual A_s V - V^p of one field.
struct ResidualReport {
  /// Band-limited spectral residual apply_As(V) - analyze(values^p).
  SphereField residualField;
  /// H^{-s} norm of residualField.
  double hnegNorm = 0.0;
  /// L^q norm of the pointwise residual with the dual critical exponent
  /// q = twoStarDual.
  double deltaNorm = 0.0;
  /// Weighted dissipation (1/p) * integral of residual^2 / V^{p-1}; absent
  /// when the field is not safely positive on the grid.
  std::optional<double> dissipation;
};

/// Result of one interpolation-inequality measurement.
struct InterpReport {
  double supNorm = 0.0;
  double lpNorm = 0.0;
  /// supNorm / lpNorm^{2/(N+2-2s)}; 0 by convention when the field vanishes.
  double ratio = 0.0;
};

/// One member of the geodesic-cap family f = (delta - 2M dist)_+.
struct CapFamilyEntry {
  double delta = 0.0;
  double supNorm = 0.0;
  double lpNorm = 0.0;
  double ratio = 0.0;
};

/// Squared Hs norm: sum over degrees of alpha(l) times coefficient energy.
double hs_norm_sq(const SphereField& V, const ProblemParams& params);

/// H^{-s} norm: sqrt of sum of coefficient energy / alpha(l).
double hneg_norm(const SphereField& F, const ProblemParams& params);

/// L^q norm of grid values by quadrature.
double lp_norm(const Eigen::VectorXd& values, double q,
               const QuadratureGrid& grid);

/// L^q norm of the synthesized field.
double lp_norm(const SphereField& V, double q, const QuadratureGrid& grid);

/// Energy functional J(V) = hs_norm_sq/2 - lp_norm(V, 2*_s)^{2*_s} / 2*_s.
double j_functional(const SphereField& V, const ProblemParams& params,
                    const QuadratureGrid& grid);

/// Pointwise signed power |v|^{p-1} v evaluated on grid values.
Eigen::VectorXd signed_power(const Eigen::VectorXd& values, double p);

/// Residual report of A_s V - V^p. Nonlinear powers are evaluated on an
/// oversampled grid (degree bound at least 4 * V.Lmax); when the passed grid
/// is coarser, an internal grid of that size is built and used for all
/// quadrature in the report.
ResidualReport residual(const SphereField& V, const ProblemParams& params,
                        const QuadratureGrid& grid);

/// Symmetric bilinear form [v, w] = sum over degrees of
/// (alpha(l) - alpha(1)) * (degree-l coefficient dot product).
/// Nonnegative on fields supported on degrees >= 1, with spectral gap
/// gamma at degree 2 and gammaPlus at degree 3.
double coercivity_form(const SphereField& v, const SphereField& w,
                       const ProblemParams& params);

/// Sup norm over the grid, critical L^{2*_s} norm, and their interpolation
/// ratio supNorm / lpNorm^{2/(N+2-2s)}.
InterpReport interp_check(const SphereField& V, const ProblemParams& params,
                          const QuadratureGrid& grid);

/// The cap family of tent functions f = (delta - 2M dist(., pole))_+ on
/// geodesic caps, reduced to one polar integral per entry. supNorm = delta
/// exactly; lpNorm is the critical norm computed by 1-D quadrature.
std::vector<CapFamilyEntry> cap_family_study(const ProblemParams& params,
                                             double lipschitzM,
                                             const std::vector<double>& deltas);

}  // namespace fracstab
