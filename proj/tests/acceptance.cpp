// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria. Each criterion is a self-contained numerical experiment
// against closed-form oracles; tolerances are stated inline.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "fracstab/constants.hpp"
#include "fracstab/errors.hpp"
#include "fracstab/fde.hpp"
#include "fracstab/functional.hpp"
#include "fracstab/harmonics.hpp"
#include "fracstab/manifold.hpp"
#include "fracstab/random.hpp"
#include "fracstab/sphere.hpp"
#include "fracstab/stability.hpp"

using namespace fracstab;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

bool close_rel(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::abs(want);
}

SphereField hs_unit(SphereField f, const ProblemParams& params) {
  return (1.0 / std::sqrt(hs_norm_sq(f, params))) * f;
}

// --------------------------------------------------------------- criterion 1
Outcome criterion1() {
  Outcome out;
  double worst = 0.0;
  for (int N = 1; N <= 10; ++N) {
    for (double frac : {0.05, 0.15, 0.25, 0.35, 0.45}) {
      const ProblemParams params(N, frac * N);
      const ConstantTable table = constant_table(params);
      const double e1 = std::abs(mu(0, params) * params.p - 1.0);
      const double gammaClosed =
          4.0 * params.s / (N + 2.0 * params.s + 2.0);
      const double e2 =
          std::abs(1.0 - alpha(1, params) / alpha(2, params) - gammaClosed) /
          gammaClosed;
      const double e3 = std::abs(params.p / (params.p - 1.0) * table.kappa3 -
                                 table.kappaFDE) /
                        table.kappaFDE;
      worst = std::max({worst, e1, e2, e3});
    }
  }
  out.ok = worst <= 1e-13;
  const ConstantTable t31 = constant_table(ProblemParams(3, 1.0));
  out.ok = out.ok && close_rel(t31.gamma, 4.0 / 7.0, 1e-14) &&
           close_rel(t31.kappaFDE, 4.0 / 147.0, 1e-14);
  out.detail = "identity grid worst rel err " + num(worst) +
               ", gamma(3,1)=" + num(t31.gamma) +
               ", kappa(3,1)=" + num(t31.kappaFDE);
  return out;
}

// --------------------------------------------------------------- criterion 2
Outcome criterion2() {
  Outcome out;
  double worst = 0.0;
  for (int N = 3; N <= 8; ++N) {
    const double talenti =
        kPi * N * (N - 2.0) *
        std::pow(std::exp(std::lgamma(N / 2.0) - std::lgamma(double(N))),
                 2.0 / N);
    const double got = sobolev_constant(ProblemParams(N, 1.0));
    worst = std::max(worst, std::abs(got - talenti) / talenti);
  }
  out.ok = worst <= 1e-12;
  out.detail = "classical-constant worst rel err " + num(worst);
  return out;
}

// --------------------------------------------------------------- criterion 3
Outcome criterion3() {
  Outcome out;
  const QuadratureGrid grid = build_quadrature(2, 128);
  double worstResidual = 0.0;
  double worstQuotient = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    const ProblemParams params(2, s);
    const SphereField U = bubble_field(
        BubbleParams(Eigen::VectorXd::Zero(2), 1.0), grid, 32, params);
    const ResidualReport rep = residual(U, params, grid);
    worstResidual = std::max(
        worstResidual, rep.hnegNorm / std::sqrt(hs_norm_sq(U, params)));
    const double lp = lp_norm(U, params.twoStar, grid);
    const double quotient = hs_norm_sq(U, params) / (lp * lp);
    worstQuotient =
        std::max(worstQuotient,
                 std::abs(quotient - constant_table(params).sobolev) /
                     constant_table(params).sobolev);
  }
  out.ok = worstResidual <= 1e-8 && worstQuotient <= 1e-6;
  out.detail = "relative residual " + num(worstResidual) +
               ", quotient rel err " + num(worstQuotient);
  return out;
}

// --------------------------------------------------------------- criterion 4
Outcome criterion4() {
  Outcome out;
  const ProblemParams params(2, 0.5);
  const ConstantTable table = constant_table(params);
  const int Lmax = 16;
  std::vector<int> allDegrees;
  for (int l = 2; l <= Lmax; ++l) allDegrees.push_back(l);

  double minSlack = 1e300;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const SphereField rho =
        hs_unit(random_field(2, Lmax, allDegrees, seed), params);
    const double form = coercivity_form(rho, rho, params);
    minSlack = std::min(minSlack, form - table.gamma);
  }
  const double pure2 = coercivity_form(
      hs_unit(random_field(2, Lmax, {2}, 7), params),
      hs_unit(random_field(2, Lmax, {2}, 7), params), params);
  const double pure3 = coercivity_form(
      hs_unit(random_field(2, Lmax, {3}, 7), params),
      hs_unit(random_field(2, Lmax, {3}, 7), params), params);

  out.ok = minSlack >= -1e-10 && std::abs(pure2 - table.gamma) <= 1e-10 &&
           std::abs(pure3 - table.gammaPlus) <= 1e-10;
  out.detail = "min slack " + num(minSlack) + ", degree-2 gap err " +
               num(std::abs(pure2 - table.gamma)) + ", degree-3 gap err " +
               num(std::abs(pure3 - table.gammaPlus));
  return out;
}

// --------------------------------------------------------------- criterion 5
Outcome criterion5() {
  Outcome out;
  const ProblemParams params(2, 0.5);
  const ConstantTable table = constant_table(params);
  const QuadratureGrid grid = build_quadrature(2, 64);
  const int Lmax = 16;
  const SphereField U = bubble_field(
      BubbleParams(Eigen::VectorXd::Zero(2), 1.0), grid, Lmax, params);
  const SphereField rho = hs_unit(random_field(2, Lmax, {2}, 1), params);

  const std::vector<double> epsList = {0.04, 0.02, 0.01};
  std::vector<double> qDeg2, qBeta;
  for (double eps : epsList) {
    qDeg2.push_back(
        stability_quotient(U + eps * rho, params, grid, eps).quotient);
    qBeta.push_back(
        stability_quotient((1.0 + eps) * U, params, grid, eps).quotient);
  }
  // Linear extrapolation to eps = 0 from the two smallest sizes.
  const auto extrapolate = [&](const std::vector<double>& q) {
    const double e1 = epsList[1], e2 = epsList[2];
    return q[2] + (q[1] - q[2]) / (e1 - e2) * (0.0 - e2);
  };
  const double limitDeg2 = extrapolate(qDeg2);
  const double limitBeta = extrapolate(qBeta);

  out.ok = close_rel(limitDeg2, table.gamma, 0.01) &&
           close_rel(limitBeta, params.p - 1.0, 0.02);
  out.detail = "degree-2 limit " + num(limitDeg2) + " vs gamma " +
               num(table.gamma) + "; amplitude-ray limit " + num(limitBeta) +
               " vs p-1 " + num(params.p - 1.0);
  return out;
}

// --------------------------------------------------------------- criterion 6
Outcome criterion6() {
  Outcome out;
  const ProblemParams params(2, 0.5);
  const QuadratureGrid grid = build_quadrature(2, 32);
  const SphereField witness = strictness_test_field(params, grid, 8);
  const ExpansionReport rep =
      expansion_experiment(witness, {0.05, 0.025, 0.0125}, params, grid);

  const bool sign = rep.cubicCoefficient < 0.0;
  const bool match = std::abs(rep.cubicCoefficient - rep.predictedCubic) <=
                     0.05 * std::abs(rep.predictedCubic);
  const bool moment =
      std::abs(rep.momentIntegral - 4.0 * kPi / 105.0) <= 1e-10;
  out.ok = sign && match && moment;
  out.detail = "fitted " + num(rep.cubicCoefficient) + ", predicted " +
               num(rep.predictedCubic) + ", moment err " +
               num(std::abs(rep.momentIntegral - 4.0 * kPi / 105.0));
  return out;
}

// --------------------------------------------------------- criteria 7 and 8
SimTrace& shared_trace() {
  static SimTrace trace = [] {
    SimConfig config(ProblemParams(2, 0.5));
    config.Lmax = 24;
    config.tauEnd = 10.0;
    config.sampleInterval = 0.1;
    config.initSpec.degrees = {2};
    config.initSpec.amplitude = 1e-3;
    config.initSpec.seed = 7;
    return simulate(config);
  }();
  return trace;
}

Outcome criterion7() {
  Outcome out;
  const ProblemParams params(2, 0.5);
  const ConstantTable table = constant_table(params);
  const SimTrace& trace = shared_trace();
  const std::size_t n = trace.tau.size();
  if (n < 2) return {false, "trace too short"};

  double maxAbsJ = 0.0;
  for (double j : trace.J) maxAbsJ = std::max(maxAbsJ, std::abs(j));

  bool monotone = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (trace.J[i] > trace.J[i - 1] + 1e-12) monotone = false;
  }

  // Energy-dissipation identity, cumulatively over every prefix.
  double integral = 0.0;
  double worstBalance = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    integral += 0.5 * (trace.R[i] + trace.R[i - 1]) *
                (trace.tau[i] - trace.tau[i - 1]);
    const double err = std::abs(trace.J[i] - trace.J[0] + integral);
    const double budget = 1e-6 * maxAbsJ * std::max(trace.tau[i], 1.0);
    worstBalance = std::max(worstBalance, err / budget);
  }

  // Dissipation chain at every sample: R >= (1/p) delta^2 M^{-2s/N} and
  // hneg <= delta / sqrt(S).
  bool chain = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double lower = (1.0 / params.p) * trace.delta[i] * trace.delta[i] *
                         std::pow(trace.massCritical[i],
                                  -2.0 * params.s / params.N);
    if (trace.R[i] < lower * (1.0 - 1e-9) - 1e-30) chain = false;
    const double upper =
        trace.delta[i] / std::sqrt(table.sobolev) * (1.0 + 1e-9) + 1e-14;
    if (trace.hnegResidual[i] > upper) chain = false;
  }

  out.ok = monotone && worstBalance <= 1.0 && chain;
  out.detail = std::string("monotone=") + (monotone ? "yes" : "no") +
               ", balance err/budget " + num(worstBalance) +
               ", chain=" + (chain ? "holds" : "violated");
  return out;
}

Outcome criterion8() {
  Outcome out;
  const ProblemParams params(2, 0.5);
  const SimTrace& trace = shared_trace();

  const RateFit hs = rate_fit(trace, RateMetric::hsError);
  const RateFit jgap = rate_fit(trace, RateMetric::Jgap);
  const double target = mu(2, params) - 1.0;

  const bool hsOk = close_rel(hs.kappaHat, target, 0.05);
  const bool jOk = close_rel(jgap.kappaHat, 2.0 * target, 0.10);
  const bool beatGuarantee = hs.kappaHat > hs.comparisons.kappa3 &&
                             jgap.kappaHat > 2.0 * jgap.comparisons.kappa2;

  // Translate the flow-time rate to the original-time extinction rate via
  // the time map d tau / d t relation: kappa_orig = kappa * p / (p - 1).
  const double kappaOriginal = hs.kappaHat * params.p / (params.p - 1.0);

  out.ok = hsOk && jOk && beatGuarantee;
  out.detail = "hsError rate " + num(hs.kappaHat) + " vs " + num(target) +
               ", J-gap rate " + num(jgap.kappaHat) + " vs " +
               num(2.0 * target) + ", original-time translation " +
               num(kappaOriginal) + " (guaranteed " +
               num(hs.comparisons.kappaFDE) + ")";
  return out;
}

// --------------------------------------------------------------- criterion 9
Outcome criterion9() {
  Outcome out;
  const ProblemParams params(2, 0.5);
  const auto entries = cap_family_study(params, 1.0, {0.1, 0.05, 0.01});
  double lo = 1e300, hi = 0.0;
  for (const auto& e : entries) {
    lo = std::min(lo, e.ratio);
    hi = std::max(hi, e.ratio);
  }
  const double drift = hi / lo - 1.0;
  out.ok = entries.size() == 3 && drift <= 0.10;
  out.detail = "ratio drift " + num(drift) + " across caps";
  return out;
}

// -------------------------------------------------------------- criterion 10
int run_cli(const std::string& args) {
  const std::string cmd = std::string(FRACSTAB_CLI_PATH) + " " + args;
  const int raw = std::system(cmd.c_str());
  if (raw == -1 || !WIFEXITED(raw)) return -1;
  return WEXITSTATUS(raw);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Outcome criterion10() {
  Outcome out;
  const std::string a = "/tmp/fracstab_acceptance_a.csv";
  const std::string b = "/tmp/fracstab_acceptance_b.csv";
  const std::string common =
      "simulate --lmax 8 --grid-degree 32 --tau-end 1 --seed 42 --output ";
  const int codeA = run_cli(common + a);
  const int codeB = run_cli(common + b);
  const std::string textA = slurp(a);
  const std::string textB = slurp(b);
  std::remove(a.c_str());
  std::remove(b.c_str());

  out.ok = codeA == 0 && codeB == 0 && !textA.empty() && textA == textB;
  out.detail = "exit codes " + std::to_string(codeA) + "/" +
               std::to_string(codeB) + ", " +
               (textA == textB ? "byte-identical traces"
                               : "trace files differ");
  return out;
}

}  // namespace

int main() {
  int failures = 0;
  const auto run = [&failures](int n, Outcome (*fn)()) {
    Outcome result;
    try {
      result = fn();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::cout << (result.ok ? "[PASS]" : "[FAIL]") << " criterion " << n;
    if (!result.detail.empty()) std::cout << " (" << result.detail << ")";
    std::cout << std::endl;
    if (!result.ok) ++failures;
  };

  run(1, criterion1);
  run(2, criterion2);
  run(3, criterion3);
  run(4, criterion4);
  run(5, criterion5);
  run(6, criterion6);
  run(7, criterion7);
  run(8, criterion8);
  run(9, criterion9);
  run(10, criterion10);
  return failures;
}
