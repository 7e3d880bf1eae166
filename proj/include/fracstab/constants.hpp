#pragma once

// Closed-form constants of the fractional Sobolev stability theory:
// critical exponents, the sharp constant S_{N,s}, the bubble amplitude,
// the Funk-Hecke eigenvalues alpha(k) of the conformal fractional
// Laplacian on S^N, the normalized eigenvalues mu(k) of the linearized
// operator, and the spectral-gap / decay-rate constants derived from them.

namespace fracstab {

/// Dimension, fractional order, and every exponent derived from them.
///
/// Validation is strict at construction: 0 < 2s < N is required, with no
/// silent clamping. (The fast-diffusion simulator additionally requires
/// s < 1; that is enforced where simulations are configured.)
struct ProblemParams {
  int N;               ///< spatial dimension, >= 1
  double s;            ///< fractional order, 0 < 2s < N
  double p;            ///< critical exponent (N+2s)/(N-2s)
  double m;            ///< fast-diffusion exponent 1/p
  double twoStar;      ///< critical Sobolev exponent 2N/(N-2s)
  double twoStarDual;  ///< dual exponent 2N/(N+2s)

  ProblemParams(int N, double s);
};

/// Every closed-form constant of the stability and decay-rate theory.
struct ConstantTable {
  double sobolev;    ///< sharp Sobolev constant S_{N,s}
  double bubbleAmp;  ///< bubble amplitude c_{N,s}
  double gamma;      ///< spectral gap 4s/(N+2s+2) = 1 - alpha(1)/alpha(2)
  double gammaPlus;  ///< gap on degrees >= 3: 1 - alpha(1)/alpha(3)
  double kappa1;     ///< gamma^{-2}
  double kappa2;     ///< 1/(2 kappa1 p) = gamma^2/(2p)
  double kappa3;     ///< 2 kappa2 / (N+2-2s)
  double kappaFDE;   ///< gamma^2 / ((N+2-2s)(p-1)) = (p/(p-1)) kappa3
};

/// Natural logarithm of the Gamma function, Lanczos approximation.
/// Relative error below 1e-13 on (0, 50]. Throws ValidationError for
/// non-positive or non-finite arguments.
double log_gamma(double x);

/// Sharp fractional Sobolev constant
/// S_{N,s} = 2^{2s} pi^s Gamma((N+2s)/2)/Gamma((N-2s)/2)
///           * (Gamma(N/2)/Gamma(N))^{2s/N}.
double sobolev_constant(const ProblemParams& params);

/// Amplitude c_{N,s} of the extremal bubble
/// U[z,lambda](x) = c_{N,s} (lambda/(1+lambda^2|x-z|^2))^{(N-2s)/2},
/// normalized so that (-Delta)^s U = U^p:
/// c_{N,s} = 2^{(N-2s)/2} (Gamma((N+2s)/2)/Gamma((N-2s)/2))^{(N-2s)/(4s)}.
double bubble_amplitude(const ProblemParams& params);

/// Funk-Hecke eigenvalue of the conformal fractional Laplacian on the
/// degree-k spherical harmonics: alpha(k) = Gamma(k+N/2+s)/Gamma(k+N/2-s).
/// Strictly increasing in k.
double alpha(int k, const ProblemParams& params);

/// Eigenvalue of the linearized operator on degree-k harmonics:
/// mu(k) = alpha(k)/alpha(1), with mu(0) = 1/p and mu(1) = 1.
double mu(int k, const ProblemParams& params);

/// Populate the full constant table for the given parameters.
ConstantTable constant_table(const ProblemParams& params);

}  // namespace fracstab
