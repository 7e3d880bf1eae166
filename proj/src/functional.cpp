#include "fracstab/functional.hpp"

#include <cmath>
#include <string>

#include "fracstab/errors.hpp"

namespace fracstab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kPositivityFloor = 1e-10;

void check_dimension(int fieldN, int paramsN, const char* what) {
  if (fieldN != paramsN) {
    throw ValidationError(std::string(what) +
                          ": field and params dimensions differ");
  }
}

}  // namespace

double hs_norm_sq(const SphereField& V, const ProblemParams& params) {
  check_dimension(V.N, params.N, "hs_norm_sq");
  double total = 0.0;
  for (int l = 0; l <= V.Lmax; ++l) {
    total += alpha(l, params) * V.degreeEnergy(l);
  }
  return total;
}

double hneg_norm(const SphereField& F, const ProblemParams& params) {
  check_dimension(F.N, params.N, "hneg_norm");
  double total = 0.0;
  for (int l = 0; l <= F.Lmax; ++l) {
    total += F.degreeEnergy(l) / alpha(l, params);
  }
  return std::sqrt(total);
}

double lp_norm(const Eigen::VectorXd& values, double q,
               const QuadratureGrid& grid) {
  if (!(q >= 1.0)) throw ValidationError("lp_norm: exponent must be >= 1");
  if (values.size() != grid.size()) {
    throw ValidationError("lp_norm: values length does not match grid size");
  }
  const double total =
      grid.weights.dot(values.array().abs().pow(q).matrix());
  return std::pow(total, 1.0 / q);
}

double lp_norm(const SphereField& V, double q, const QuadratureGrid& grid) {
  return lp_norm(synthesize(V, grid), q, grid);
}

double j_functional(const SphereField& V, const ProblemParams& params,
                    const QuadratureGrid& grid) {
  check_dimension(V.N, params.N, "j_functional");
  const double lp = lp_norm(V, params.twoStar, grid);
  return 0.5 * hs_norm_sq(V, params) -
         std::pow(lp, params.twoStar) / params.twoStar;
}

Eigen::VectorXd signed_power(const Eigen::VectorXd& values, double p) {
  if (p == 3.0) return values.array().cube();
  if (p == 2.0) return (values.array() * values.array().abs()).matrix();
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    out[i] = std::copysign(std::pow(std::abs(values[i]), p), values[i]);
  }
  return out;
}

ResidualReport residual(const SphereField& V, const ProblemParams& params,
                        const QuadratureGrid& grid) {
  check_dimension(V.N, params.N, "residual");
  check_dimension(V.N, grid.N, "residual");

  const int wanted = std::max(4 * V.Lmax, 4);
  QuadratureGrid internal;
  const QuadratureGrid* work = &grid;
  if (grid.degreeBound < wanted) {
    internal = build_quadrature(V.N, wanted);
    work = &internal;
  }

  const Eigen::VectorXd values = synthesize(V, *work);
  const Eigen::VectorXd powers = signed_power(values, params.p);
  const SphereField asV = apply_As(V, params);
  const Eigen::VectorXd pointResidual = synthesize(asV, *work) - powers;

  ResidualReport report;
  report.residualField = asV - analyze(powers, *work, V.Lmax);
  report.hnegNorm = hneg_norm(report.residualField, params);
  report.deltaNorm = lp_norm(pointResidual, params.twoStarDual, *work);
  if (values.minCoeff() > kPositivityFloor) {
    const Eigen::ArrayXd weight =
        values.array().pow(params.p - 1.0).inverse();
    report.dissipation =
        work->weights.dot(
            (pointResidual.array().square() * weight).matrix()) /
        params.p;
  }
  return report;
}

double coercivity_form(const SphereField& v, const SphereField& w,
                       const ProblemParams& params) {
  check_dimension(v.N, params.N, "coercivity_form");
  if (v.N != w.N) {
    throw ValidationError("coercivity_form: fields live on different spheres");
  }
  const double alphaOne = alpha(1, params);
  double total = 0.0;
  for (int l = 0; l <= std::min(v.Lmax, w.Lmax); ++l) {
    total += (alpha(l, params) - alphaOne) * v.degreeBlock(l).dot(w.degreeBlock(l));
  }
  return total;
}

InterpReport interp_check(const SphereField& V, const ProblemParams& params,
                          const QuadratureGrid& grid) {
  check_dimension(V.N, params.N, "interp_check");
  const Eigen::VectorXd values = synthesize(V, grid);
  InterpReport report;
  report.supNorm = values.size() == 0 ? 0.0 : values.array().abs().maxCoeff();
  report.lpNorm = lp_norm(values, params.twoStar, grid);
  if (report.lpNorm > 0.0) {
    report.ratio = report.supNorm /
                   std::pow(report.lpNorm, 2.0 / (params.N + 2.0 - 2.0 * params.s));
  }
  return report;
}

std::vector<CapFamilyEntry> cap_family_study(
    const ProblemParams& params, double lipschitzM,
    const std::vector<double>& deltas) {
  if (!(lipschitzM > 0.0)) {
    throw ValidationError("cap_family_study: Lipschitz constant must be > 0");
  }
  const double q = params.twoStar;
  const double interpPow = 2.0 / (params.N + 2.0 - 2.0 * params.s);

  Eigen::VectorXd nodes, weights;
  gauss_legendre(128, nodes, weights);

  std::vector<CapFamilyEntry> out;
  out.reserve(deltas.size());
  for (const double delta : deltas) {
    if (!(delta > 0.0)) {
      throw ValidationError("cap_family_study: delta must be > 0");
    }
    const double thetaStar = delta / (2.0 * lipschitzM);
    if (thetaStar > kPi) {
      throw ValidationError(
          "cap_family_study: cap radius exceeds the sphere diameter");
    }
    // Map [-1, 1] quadrature nodes to theta in [0, thetaStar] and integrate
    // f^q against the polar surface measure.
    double integral = 0.0;
    for (int i = 0; i < nodes.size(); ++i) {
      const double theta = 0.5 * thetaStar * (nodes[i] + 1.0);
      const double f = delta - 2.0 * lipschitzM * theta;
      const double measure = params.N == 1 ? 2.0 : 2.0 * kPi * std::sin(theta);
      integral += weights[i] * std::pow(f, q) * measure;
    }
    integral *= 0.5 * thetaStar;

    CapFamilyEntry entry;
    entry.delta = delta;
    entry.supNorm = delta;
    entry.lpNorm = std::pow(integral, 1.0 / q);
    entry.ratio = entry.supNorm / std::pow(entry.lpNorm, interpPow);
    out.push_back(entry);
  }
  return out;
}

}  // namespace fracstab
