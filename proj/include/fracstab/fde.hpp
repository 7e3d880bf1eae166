#pragma once

// Pseudospectral simulator for the rescaled fast-diffusion flow
//   d/dtau W = (1/p) W^{1-p} (W^p - A_s W)
// on S^N, with energy-dissipation diagnostics, extinction-rate fitting, and
// the change of variables back to the extinguishing solution.

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracstab/constants.hpp"
#include "fracstab/harmonics.hpp"
#include "fracstab/manifold.hpp"
#include "fracstab/sphere.hpp"

namespace fracstab {

/// Treatment of the linearly unstable constant mode (its deviation grows like
/// exp((1 - 1/p) tau) and corresponds to extinction-time mismatch, not to
/// instability of the profile). projectOut re-pins the degree-0 coefficient
/// to the stationary value after every step.
enum class UnstableModeControl { none, projectOut };

struct DtPolicy {
  /// When positive, a fixed step; otherwise the step adapts as
  /// safety * p * (min grid value of W)^{p-1} / alpha(Lmax).
  double fixedDt = 0.0;
  double safety = 0.5;
};

/// Spectral description of the initial perturbation: a seeded random
/// direction on the given degrees, Hs-normalized, scaled by amplitude.
struct InitSpec {
  std::vector<int> degrees{2};
  double amplitude = 1e-3;
  std::uint64_t seed = 1;
};

struct SimConfig {
  ProblemParams params;
  int Lmax = 16;
  /// 0 selects the default 4 * Lmax (headroom for the nonlinear powers).
  int gridDegreeBound = 0;
  DtPolicy dtPolicy;
  double tauEnd = 10.0;
  InitSpec initSpec;
  UnstableModeControl unstableModeControl = UnstableModeControl::projectOut;
  double sampleInterval = 0.1;

  explicit SimConfig(const ProblemParams& p) : params(p) {}
};

/// Time series sampled along one flow, plus a plain-scalar echo of the
/// configuration so traces can round-trip through CSV.
struct SimTrace {
  int N = 0;
  double s = 0.0;
  int Lmax = 0;
  int gridDegreeBound = 0;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> degrees;
  double tauEnd = 0.0;
  double dtSafety = 0.0;
  double fixedDt = 0.0;
  std::string control;
  double sampleInterval = 0.0;
  /// J of the stationary constant on the same grid; reference for J-gap fits.
  double jStationary = 0.0;

  std::vector<double> tau;
  std::vector<double> J;
  std::vector<double> R;
  std::vector<double> delta;
  std::vector<double> dist;
  std::vector<double> hsError;
  /// Chain diagnostics (exported to JSON, not part of the CSV schema):
  /// H^{-s} norm of the spectral residual and the critical mass
  /// integral of W^{2*_s}.
  std::vector<double> hnegResidual;
  std::vector<double> massCritical;
  /// Per-degree squared coefficient energies of W - W0 (CSV columns E0..).
  std::vector<std::vector<double>> degreeEnergies;
};

enum class RateMetric { hsError, dist, Jgap };

struct RateComparisons {
  double mu2minus1 = 0.0;
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  double kappaFDE = 0.0;
};

struct RateFit {
  /// Fitted decay exponent of the metric in tau (positive = decay).
  double kappaHat = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  /// Root-mean-square residual of the log-linear fit.
  double rmsResidual = 0.0;
  RateComparisons comparisons;
};

/// The constant equilibrium W0 = alpha(0)^{1/(p-1)} as a band-limited field.
SphereField stationary_field(const ProblemParams& params, int Lmax);

/// Right-hand side (1/p) W^{1-p} (W^p - A_s W), evaluated pointwise on the
/// grid and re-analyzed to W's band limit. Throws PositivityError when the
/// synthesized field is not strictly positive.
SphereField flow_rhs(const SphereField& W, const ProblemParams& params,
                     const QuadratureGrid& grid);

/// Integrate the flow with classic 4-stage Runge-Kutta and sample the trace
/// at fixed tau intervals.
SimTrace simulate(const SimConfig& config);

/// Log-linear least-squares decay rate of one metric over a tau window.
/// Default window discards the first 20% and last 10% of the samples.
RateFit rate_fit(const SimTrace& trace, RateMetric metric,
                 std::optional<std::pair<double, double>> window = std::nullopt);

/// Original time from flow time: t = Tbar (1 - exp(-(p-1) tau / p)).
double time_map(double tauVal, double Tbar, const ProblemParams& params);

/// Inverse of time_map on [0, Tbar).
double time_map_inverse(double t, double Tbar, const ProblemParams& params);

/// Separated-variables extinguishing solution
/// ((p-1)/p)^{p/(p-1)} (Tbar - t)^{p/(p-1)} U[z, lambda](x)^p.
double extinction_profile(double Tbar, const BubbleParams& b, double t,
                          const Eigen::VectorXd& x,
                          const ProblemParams& params);

/// CSV export: '#schema=' line, '#key=value' config echo, fixed header
/// tau,J,R,delta,dist,hsError,E0,...,ELmax. Deterministic formatting.
void write_trace_csv(const SimTrace& trace, std::ostream& out);

/// JSON export with the same series plus chain diagnostics and config echo.
void write_trace_json(const SimTrace& trace, std::ostream& out);

/// Parse a trace written by write_trace_csv.
SimTrace read_trace_csv(std::istream& in);

std::string metric_name(RateMetric metric);
RateMetric parse_metric(const std::string& name);

}  // namespace fracstab
