#include "fracstab/constants.hpp"

#include <cmath>
#include <string>

#include "fracstab/errors.hpp"

namespace fracstab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kHalfLogTwoPi = 0.918938533204672741780329736405617639;

// Lanczos coefficients for g = 7, n = 9 (Godfrey's table), giving close to
// full double precision on the positive real axis.
constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoef[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Core Lanczos evaluation, valid for x >= 0.5.
double log_gamma_lanczos(double x) {
  const double z = x - 1.0;
  double series = kLanczosCoef[0];
  for (int i = 1; i < 9; ++i) series += kLanczosCoef[i] / (z + i);
  const double t = z + kLanczosG + 0.5;
  return kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

ProblemParams::ProblemParams(int N, double s) : N(N), s(s) {
  if (N < 1) {
    throw ValidationError("ProblemParams: dimension N must be >= 1, got " +
                          std::to_string(N));
  }
  if (!std::isfinite(s) || s <= 0.0 || 2.0 * s >= static_cast<double>(N)) {
    throw ValidationError("ProblemParams: require 0 < 2s < N, got N = " +
                          std::to_string(N) + ", s = " + std::to_string(s));
  }
  const double n = static_cast<double>(N);
  p = (n + 2.0 * s) / (n - 2.0 * s);
  m = 1.0 / p;
  twoStar = 2.0 * n / (n - 2.0 * s);
  twoStarDual = 2.0 * n / (n + 2.0 * s);
}

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw ValidationError("log_gamma: argument must be positive and finite");
  }
  // For small arguments use Gamma(x) = Gamma(x+1)/x, which keeps the Lanczos
  // kernel in its well-conditioned range.
  if (x < 0.5) return log_gamma_lanczos(x + 1.0) - std::log(x);
  return log_gamma_lanczos(x);
}

double sobolev_constant(const ProblemParams& params) {
  const double n = static_cast<double>(params.N);
  const double s = params.s;
  const double logRatio = log_gamma((n + 2.0 * s) / 2.0) -
                          log_gamma((n - 2.0 * s) / 2.0);
  const double logTalenti = log_gamma(n / 2.0) - log_gamma(n);
  return std::exp(2.0 * s * std::log(2.0) + s * std::log(kPi) + logRatio +
                  (2.0 * s / n) * logTalenti);
}

double bubble_amplitude(const ProblemParams& params) {
  const double n = static_cast<double>(params.N);
  const double s = params.s;
  const double logRatio = log_gamma((n + 2.0 * s) / 2.0) -
                          log_gamma((n - 2.0 * s) / 2.0);
  return std::exp((n - 2.0 * s) / 2.0 * std::log(2.0) +
                  (n - 2.0 * s) / (4.0 * s) * logRatio);
}

double alpha(int k, const ProblemParams& params) {
  if (k < 0) throw ValidationError("alpha: degree k must be >= 0");
  const double base = k + static_cast<double>(params.N) / 2.0;
  if (base - params.s <= 0.0) {
    throw ValidationError("alpha: k + N/2 - s must be positive");
  }
  return std::exp(log_gamma(base + params.s) - log_gamma(base - params.s));
}

double mu(int k, const ProblemParams& params) {
  if (k < 0) throw ValidationError("mu: degree k must be >= 0");
  if (k == 1) return 1.0;
  const double base = k + static_cast<double>(params.N) / 2.0;
  const double base1 = 1.0 + static_cast<double>(params.N) / 2.0;
  return std::exp(log_gamma(base + params.s) - log_gamma(base - params.s) -
                  log_gamma(base1 + params.s) + log_gamma(base1 - params.s));
}

ConstantTable constant_table(const ProblemParams& params) {
  const double n = static_cast<double>(params.N);
  const double s = params.s;
  ConstantTable table;
  table.sobolev = sobolev_constant(params);
  table.bubbleAmp = bubble_amplitude(params);
  table.gamma = 4.0 * s / (n + 2.0 * s + 2.0);
  table.gammaPlus = 1.0 - alpha(1, params) / alpha(3, params);
  table.kappa1 = 1.0 / (table.gamma * table.gamma);
  table.kappa2 = 1.0 / (2.0 * table.kappa1 * params.p);
  table.kappa3 = 2.0 * table.kappa2 / (n + 2.0 - 2.0 * s);
  table.kappaFDE =
      table.gamma * table.gamma / ((n + 2.0 - 2.0 * s) * (params.p - 1.0));
  return table;
}

}  // namespace fracstab
