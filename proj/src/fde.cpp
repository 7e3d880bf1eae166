#include "fracstab/fde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fracstab/errors.hpp"
#include "fracstab/functional.hpp"
#include "fracstab/random.hpp"

namespace fracstab {

namespace {

constexpr double kPositivityFloor = 1e-10;
constexpr double kMinDt = 1e-8;
constexpr long kMaxSteps = 5000000;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Eigen::ArrayXd power_p(const Eigen::ArrayXd& v, double p) {
  if (p == 3.0) return v.cube();
  if (p == 2.0) return v.square();
  return v.pow(p);
}

}  // namespace

SphereField stationary_field(const ProblemParams& params, int Lmax) {
  SphereField field(params.N, Lmax);
  const double w0 = std::pow(alpha(0, params), 1.0 / (params.p - 1.0));
  field.coeff(0, 0) = w0 * std::sqrt(sphere_surface(params.N));
  return field;
}

SphereField flow_rhs(const SphereField& W, const ProblemParams& params,
                     const QuadratureGrid& grid) {
  if (W.N != params.N || grid.N != params.N) {
    throw ValidationError("flow_rhs: dimensions differ");
  }
  const Eigen::ArrayXd values = synthesize(W, grid).array();
  if (!(values.minCoeff() > kPositivityFloor)) {
    throw PositivityError(
        "flow_rhs: field is not strictly positive on the grid");
  }
  const Eigen::ArrayXd asVals =
      synthesize(apply_As(W, params), grid).array();
  const Eigen::ArrayXd powers = power_p(values, params.p);
  Eigen::ArrayXd rhs;
  if (params.p == 3.0) {
    rhs = (powers - asVals) / (3.0 * values.square());
  } else {
    rhs = (powers - asVals) * power_p(values, 1.0 - params.p) / params.p;
  }
  return analyze(rhs.matrix(), grid, W.Lmax);
}

namespace {

/// One trace sample's worth of diagnostics.
void record_sample(SimTrace& trace, double tauNow, const SphereField& W,
                   const SphereField& base, const ProblemParams& params,
                   const QuadratureGrid& grid,
                   std::optional<BubbleParams>& warmStart) {
  trace.tau.push_back(tauNow);
  trace.J.push_back(j_functional(W, params, grid));

  const ResidualReport res = residual(W, params, grid);
  trace.R.push_back(res.dissipation ? *res.dissipation
                                    : std::numeric_limits<double>::quiet_NaN());
  trace.delta.push_back(res.deltaNorm);
  trace.hnegResidual.push_back(res.hnegNorm);
  trace.massCritical.push_back(
      std::pow(lp_norm(W, params.twoStar, grid), params.twoStar));

  const Decomposition dcmp = dist_to_manifold(W, params, grid, warmStart);
  warmStart = dcmp.bubble;
  trace.dist.push_back(dcmp.dist);

  const SphereField deviation = W - base;
  trace.hsError.push_back(
      std::sqrt(std::max(0.0, hs_norm_sq(deviation, params))));
  std::vector<double> energies(W.Lmax + 1);
  for (int l = 0; l <= W.Lmax; ++l) energies[l] = deviation.degreeEnergy(l);
  trace.degreeEnergies.push_back(std::move(energies));
}

}  // namespace

SimTrace simulate(const SimConfig& config) {
  const ProblemParams& params = config.params;
  if (!(params.s < 1.0)) {
    throw ValidationError("simulate: the flow requires s < 1");
  }
  if (config.Lmax < 1) {
    throw ValidationError("simulate: Lmax must be >= 1");
  }
  const int gridDegree =
      config.gridDegreeBound > 0 ? config.gridDegreeBound : 4 * config.Lmax;
  if (gridDegree < 2 * config.Lmax) {
    throw ValidationError(
        "simulate: gridDegreeBound must be at least 2 * Lmax to control "
        "aliasing of the nonlinear terms");
  }
  if (!(config.tauEnd > 0.0) || !(config.sampleInterval > 0.0)) {
    throw ValidationError(
        "simulate: tauEnd and sampleInterval must be positive");
  }
  if (config.dtPolicy.fixedDt == 0.0 && !(config.dtPolicy.safety > 0.0)) {
    throw ValidationError("simulate: adaptive safety factor must be positive");
  }
  if (config.initSpec.amplitude < 0.0) {
    throw ValidationError("simulate: amplitude must be nonnegative");
  }

  const QuadratureGrid grid = build_quadrature(params.N, gridDegree);
  const SphereField base = stationary_field(params, config.Lmax);

  SphereField W = base;
  if (config.initSpec.amplitude > 0.0 && !config.initSpec.degrees.empty()) {
    SphereField noise = random_field(params.N, config.Lmax,
                                     config.initSpec.degrees,
                                     config.initSpec.seed);
    const double norm = std::sqrt(hs_norm_sq(noise, params));
    if (!(norm > 0.0)) {
      throw ValidationError("simulate: empty initial perturbation");
    }
    W = base + (config.initSpec.amplitude / norm) * noise;
  }

  SimTrace trace;
  trace.N = params.N;
  trace.s = params.s;
  trace.Lmax = config.Lmax;
  trace.gridDegreeBound = gridDegree;
  trace.amplitude = config.initSpec.amplitude;
  trace.seed = config.initSpec.seed;
  trace.degrees = config.initSpec.degrees;
  trace.tauEnd = config.tauEnd;
  trace.dtSafety = config.dtPolicy.safety;
  trace.fixedDt = config.dtPolicy.fixedDt;
  trace.control = config.unstableModeControl == UnstableModeControl::projectOut
                      ? "projectOut"
                      : "none";
  trace.sampleInterval = config.sampleInterval;
  trace.jStationary = j_functional(base, params, grid);

  const double alphaTop = alpha(config.Lmax, params);
  const double pinned = base.coeff(0, 0);
  std::optional<BubbleParams> warmStart;

  double tauNow = 0.0;
  record_sample(trace, tauNow, W, base, params, grid, warmStart);
  long sampleCount = 1;
  double nextSample = config.sampleInterval;

  long steps = 0;
  while (tauNow < config.tauEnd - 1e-12) {
    if (++steps > kMaxSteps) {
      throw StiffnessError("simulate: step budget exhausted");
    }
    double dt = config.dtPolicy.fixedDt;
    if (dt <= 0.0) {
      const double minW = synthesize(W, grid).minCoeff();
      if (!(minW > kPositivityFloor)) {
        throw PositivityError("simulate: field lost positivity");
      }
      dt = config.dtPolicy.safety * params.p *
           std::pow(minW, params.p - 1.0) / alphaTop;
    }
    if (!(dt >= kMinDt)) {
      throw StiffnessError("simulate: step underflow (dt = " +
                           std::to_string(dt) + ")");
    }
    // Clip to land exactly on the next sample time or the final time; the
    // underflow check above applies to the raw step only.
    const double target = std::min(nextSample, config.tauEnd);
    if (tauNow + dt >= target - 1e-12) dt = target - tauNow;

    const SphereField k1 = flow_rhs(W, params, grid);
    const SphereField k2 = flow_rhs(W + (0.5 * dt) * k1, params, grid);
    const SphereField k3 = flow_rhs(W + (0.5 * dt) * k2, params, grid);
    const SphereField k4 = flow_rhs(W + dt * k3, params, grid);
    W = W + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (config.unstableModeControl == UnstableModeControl::projectOut) {
      W.coeff(0, 0) = pinned;
    }
    tauNow += dt;

    if (std::abs(tauNow - target) < 1e-12) {
      tauNow = target;
      if (std::abs(tauNow - nextSample) < 1e-12) {
        record_sample(trace, tauNow, W, base, params, grid, warmStart);
        nextSample = config.sampleInterval * static_cast<double>(++sampleCount);
      }
    }
  }
  return trace;
}

RateFit rate_fit(const SimTrace& trace, RateMetric metric,
                 std::optional<std::pair<double, double>> window) {
  if (trace.tau.size() < 4) {
    throw DegenerateFitError("rate_fit: trace has too few samples");
  }
  const std::vector<double>* series = nullptr;
  std::vector<double> gap;
  switch (metric) {
    case RateMetric::hsError:
      series = &trace.hsError;
      break;
    case RateMetric::dist:
      series = &trace.dist;
      break;
    case RateMetric::Jgap:
      gap.resize(trace.J.size());
      for (std::size_t i = 0; i < trace.J.size(); ++i) {
        gap[i] = trace.J[i] - trace.jStationary;
      }
      series = &gap;
      break;
  }
  if (series->size() != trace.tau.size()) {
    throw DegenerateFitError("rate_fit: metric series length mismatch");
  }

  double lo, hi;
  if (window) {
    lo = window->first;
    hi = window->second;
    if (!(hi > lo)) {
      throw ValidationError("rate_fit: window must satisfy tau0 < tau1");
    }
  } else {
    const double span = trace.tau.back() - trace.tau.front();
    lo = trace.tau.front() + 0.2 * span;
    hi = trace.tau.back() - 0.1 * span;
  }

  std::vector<double> ts, logs;
  for (std::size_t i = 0; i < trace.tau.size(); ++i) {
    if (trace.tau[i] < lo - 1e-12 || trace.tau[i] > hi + 1e-12) continue;
    const double y = (*series)[i];
    if (!(y > 0.0) || !std::isfinite(y)) {
      throw DegenerateFitError(
          "rate_fit: metric is not strictly positive inside the window");
    }
    ts.push_back(trace.tau[i]);
    logs.push_back(std::log(y));
  }
  if (ts.size() < 2) {
    throw DegenerateFitError("rate_fit: window contains fewer than 2 samples");
  }

  const double n = static_cast<double>(ts.size());
  double meanT = 0.0, meanY = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    meanT += ts[i];
    meanY += logs[i];
  }
  meanT /= n;
  meanY /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    cov += (ts[i] - meanT) * (logs[i] - meanY);
    var += (ts[i] - meanT) * (ts[i] - meanT);
  }
  if (!(var > 0.0)) {
    throw DegenerateFitError("rate_fit: degenerate tau window");
  }
  const double slope = cov / var;

  double rss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double fitVal = meanY + slope * (ts[i] - meanT);
    rss += (logs[i] - fitVal) * (logs[i] - fitVal);
  }

  const ProblemParams params(trace.N, trace.s);
  const ConstantTable table = constant_table(params);

  RateFit fit;
  fit.kappaHat = -slope;
  fit.window = {lo, hi};
  fit.rmsResidual = std::sqrt(rss / n);
  fit.comparisons.mu2minus1 = mu(2, params) - 1.0;
  fit.comparisons.kappa2 = table.kappa2;
  fit.comparisons.kappa3 = table.kappa3;
  fit.comparisons.kappaFDE = table.kappaFDE;
  return fit;
}

double time_map(double tauVal, double Tbar, const ProblemParams& params) {
  if (!(tauVal >= 0.0)) throw ValidationError("time_map: tau must be >= 0");
  if (!(Tbar > 0.0)) throw ValidationError("time_map: Tbar must be > 0");
  const double rate = (params.p - 1.0) / params.p;
  return Tbar * (-std::expm1(-rate * tauVal));
}

double time_map_inverse(double t, double Tbar, const ProblemParams& params) {
  if (!(Tbar > 0.0)) {
    throw ValidationError("time_map_inverse: Tbar must be > 0");
  }
  if (!(t >= 0.0) || !(t < Tbar)) {
    throw ValidationError("time_map_inverse: t must lie in [0, Tbar)");
  }
  const double rate = (params.p - 1.0) / params.p;
  return -std::log1p(-t / Tbar) / rate;
}

double extinction_profile(double Tbar, const BubbleParams& b, double t,
                          const Eigen::VectorXd& x,
                          const ProblemParams& params) {
  if (!(Tbar > 0.0)) {
    throw ValidationError("extinction_profile: Tbar must be > 0");
  }
  if (!(t >= 0.0) || !(t < Tbar)) {
    throw ValidationError("extinction_profile: t must lie in [0, Tbar)");
  }
  const double expo = params.p / (params.p - 1.0);
  return std::pow((params.p - 1.0) / params.p, expo) *
         std::pow(Tbar - t, expo) *
         std::pow(bubble_eval(b, x, params), params.p);
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  out << "#schema=fracstab-trace-v1\n";
  out << "#N=" << trace.N << "\n";
  out << "#s=" << fmt(trace.s) << "\n";
  out << "#Lmax=" << trace.Lmax << "\n";
  out << "#gridDegreeBound=" << trace.gridDegreeBound << "\n";
  out << "#amplitude=" << fmt(trace.amplitude) << "\n";
  out << "#seed=" << trace.seed << "\n";
  out << "#degrees=";
  for (std::size_t i = 0; i < trace.degrees.size(); ++i) {
    if (i) out << ' ';
    out << trace.degrees[i];
  }
  out << "\n";
  out << "#tauEnd=" << fmt(trace.tauEnd) << "\n";
  out << "#dtSafety=" << fmt(trace.dtSafety) << "\n";
  out << "#fixedDt=" << fmt(trace.fixedDt) << "\n";
  out << "#control=" << trace.control << "\n";
  out << "#sampleInterval=" << fmt(trace.sampleInterval) << "\n";
  out << "#jStationary=" << fmt(trace.jStationary) << "\n";

  out << "tau,J,R,delta,dist,hsError";
  for (int l = 0; l <= trace.Lmax; ++l) out << ",E" << l;
  out << "\n";
  for (std::size_t i = 0; i < trace.tau.size(); ++i) {
    out << fmt(trace.tau[i]) << ',' << fmt(trace.J[i]) << ','
        << fmt(trace.R[i]) << ',' << fmt(trace.delta[i]) << ','
        << fmt(trace.dist[i]) << ',' << fmt(trace.hsError[i]);
    for (const double e : trace.degreeEnergies[i]) out << ',' << fmt(e);
    out << "\n";
  }
}

void write_trace_json(const SimTrace& trace, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["schema"] = "fracstab-trace-v1";
  nlohmann::ordered_json cfg;
  cfg["N"] = trace.N;
  cfg["s"] = trace.s;
  cfg["Lmax"] = trace.Lmax;
  cfg["gridDegreeBound"] = trace.gridDegreeBound;
  cfg["amplitude"] = trace.amplitude;
  cfg["seed"] = trace.seed;
  cfg["degrees"] = trace.degrees;
  cfg["tauEnd"] = trace.tauEnd;
  cfg["dtSafety"] = trace.dtSafety;
  cfg["fixedDt"] = trace.fixedDt;
  cfg["control"] = trace.control;
  cfg["sampleInterval"] = trace.sampleInterval;
  doc["config"] = cfg;
  doc["jStationary"] = trace.jStationary;
  doc["tau"] = trace.tau;
  doc["J"] = trace.J;
  doc["R"] = trace.R;
  doc["delta"] = trace.delta;
  doc["dist"] = trace.dist;
  doc["hsError"] = trace.hsError;
  doc["hnegResidual"] = trace.hnegResidual;
  doc["massCritical"] = trace.massCritical;
  doc["degreeEnergies"] = trace.degreeEnergies;
  out << doc.dump(2) << "\n";
}

SimTrace read_trace_csv(std::istream& in) {
  SimTrace trace;
  std::string line;
  bool sawHeader = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.back() == '\r') line.pop_back();
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(1, eq - 1);
      const std::string value = line.substr(eq + 1);
      if (key == "N") trace.N = std::stoi(value);
      else if (key == "s") trace.s = std::stod(value);
      else if (key == "Lmax") trace.Lmax = std::stoi(value);
      else if (key == "gridDegreeBound") trace.gridDegreeBound = std::stoi(value);
      else if (key == "amplitude") trace.amplitude = std::stod(value);
      else if (key == "seed") trace.seed = std::stoull(value);
      else if (key == "degrees") {
        std::istringstream parts(value);
        int d;
        while (parts >> d) trace.degrees.push_back(d);
      } else if (key == "tauEnd") trace.tauEnd = std::stod(value);
      else if (key == "dtSafety") trace.dtSafety = std::stod(value);
      else if (key == "fixedDt") trace.fixedDt = std::stod(value);
      else if (key == "control") trace.control = value;
      else if (key == "sampleInterval") trace.sampleInterval = std::stod(value);
      else if (key == "jStationary") trace.jStationary = std::stod(value);
      continue;
    }
    if (!sawHeader) {
      if (line.rfind("tau,J,R,delta,dist,hsError", 0) != 0) {
        throw IoError("read_trace_csv: unrecognized header row");
      }
      sawHeader = true;
      continue;
    }
    std::istringstream parts(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(parts, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() < 6) throw IoError("read_trace_csv: short data row");
    trace.tau.push_back(row[0]);
    trace.J.push_back(row[1]);
    trace.R.push_back(row[2]);
    trace.delta.push_back(row[3]);
    trace.dist.push_back(row[4]);
    trace.hsError.push_back(row[5]);
    trace.degreeEnergies.emplace_back(row.begin() + 6, row.end());
  }
  if (!sawHeader) throw IoError("read_trace_csv: no header row found");
  return trace;
}

std::string metric_name(RateMetric metric) {
  switch (metric) {
    case RateMetric::hsError: return "hsError";
    case RateMetric::dist: return "dist";
    case RateMetric::Jgap: return "Jgap";
  }
  return "hsError";
}

RateMetric parse_metric(const std::string& name) {
  if (name == "hsError") return RateMetric::hsError;
  if (name == "dist") return RateMetric::dist;
  if (name == "Jgap") return RateMetric::Jgap;
  throw ValidationError("unknown rate metric: " + name +
                        " (expected hsError, dist, or Jgap)");
}

}  // namespace fracstab
