#include "fracstab/stability.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "fracstab/errors.hpp"

namespace fracstab {

namespace {

/// Energy fraction outside one degree.
double off_degree_fraction(const SphereField& f, int degree) {
  const double total = f.coeffs.squaredNorm();
  if (total <= 0.0) return 0.0;
  return (total - f.degreeEnergy(degree)) / total;
}

}  // namespace

QuotientReport stability_quotient(const SphereField& V,
                                  const ProblemParams& params,
                                  const QuadratureGrid& grid,
                                  double epsLabel) {
  const Decomposition dcmp = dist_to_manifold(V, params, grid);
  if (!(dcmp.dist > 1e-9)) {
    throw DegenerateQuotientError(
        "stability_quotient: field is on the manifold (dist = " +
        std::to_string(dcmp.dist) + "); the quotient is degenerate");
  }
  const ResidualReport res = residual(V, params, grid);

  QuotientReport report;
  report.epsilon = epsLabel;
  report.quotient = res.hnegNorm / dcmp.dist;
  report.beta = dcmp.beta;
  report.distVal = dcmp.dist;
  report.rhoNorm = std::sqrt(hs_norm_sq(dcmp.orthogonal, params));
  report.perDegreeEnergies.resize(V.Lmax + 1);
  for (int l = 0; l <= V.Lmax; ++l) {
    report.perDegreeEnergies[l] = dcmp.orthogonal.degreeEnergy(l);
  }
  return report;
}

SphereField strictness_test_field(const ProblemParams& params,
                                  const QuadratureGrid& grid, int Lmax) {
  if (params.N != 2 || grid.N != 2) {
    throw UnsupportedDimensionError(
        "strictness_test_field: the witness lives on S^2");
  }
  if (Lmax < 2) {
    throw ValidationError("strictness_test_field: Lmax must be >= 2");
  }
  const auto& n = grid.nodes;
  const Eigen::VectorXd values =
      (n.col(0).array() * n.col(1).array() +
       n.col(1).array() * n.col(2).array() +
       n.col(2).array() * n.col(0).array())
          .matrix();
  SphereField field = analyze(values, grid, Lmax);
  if (off_degree_fraction(field, 2) > 1e-10) {
    throw ResolutionError(
        "strictness_test_field: analyzed field is not pure degree 2; "
        "the grid aliases the quadratic harmonics");
  }
  return field;
}

ExpansionReport expansion_experiment(const SphereField& rho,
                                     const std::vector<double>& epsList,
                                     const ProblemParams& params,
                                     const QuadratureGrid& grid) {
  if (rho.N != params.N || grid.N != params.N) {
    throw ValidationError("expansion_experiment: dimensions differ");
  }
  if (rho.Lmax < 2 || off_degree_fraction(rho, 2) > 1e-10) {
    throw ValidationError(
        "expansion_experiment: rho must be pure degree 2");
  }
  if (epsList.size() < 3) {
    throw ValidationError(
        "expansion_experiment: need at least three epsilon values");
  }
  for (std::size_t i = 0; i < epsList.size(); ++i) {
    if (!(epsList[i] > 0.0) ||
        (i + 1 < epsList.size() && !(epsList[i + 1] < epsList[i]))) {
      throw ValidationError(
          "expansion_experiment: epsilon ladder must be positive and "
          "strictly decreasing");
    }
  }

  const double rhoNorm = std::sqrt(hs_norm_sq(rho, params));
  if (!(rhoNorm > 0.0)) {
    throw ValidationError("expansion_experiment: rho vanishes");
  }
  const SphereField rhoHat = (1.0 / rhoNorm) * rho;

  const BubbleParams standard{Eigen::VectorXd::Zero(params.N), 1.0};
  const SphereField bubble = bubble_field(standard, grid, rho.Lmax, params);
  const Eigen::VectorXd bubbleVals = synthesize(bubble, grid);
  const Eigen::VectorXd rhoVals = synthesize(rhoHat, grid);
  const double minBubble = bubbleVals.minCoeff();

  for (const double eps : epsList) {
    if ((bubbleVals + eps * rhoVals).minCoeff() < 0.1 * minBubble) {
      throw PositivityError(
          "expansion_experiment: perturbed field loses positivity margin at "
          "epsilon = " +
          std::to_string(eps) + "; shrink epsilon");
    }
  }

  const double gamma = constant_table(params).gamma;
  const int count = static_cast<int>(epsList.size());
  Eigen::VectorXd squared(count);
  for (int i = 0; i < count; ++i) {
    const SphereField V = bubble + epsList[i] * rhoHat;
    const QuotientReport q = stability_quotient(V, params, grid, epsList[i]);
    squared[i] = q.quotient * q.quotient;
  }

  ExpansionReport report;

  // Leading correction: least squares for q^2 - gamma^2 = c1 eps + c2 eps^2.
  Eigen::MatrixXd basis(count, 2);
  for (int i = 0; i < count; ++i) {
    basis(i, 0) = epsList[i];
    basis(i, 1) = epsList[i] * epsList[i];
  }
  const Eigen::VectorXd shifted =
      squared.array() - gamma * gamma;
  const Eigen::VectorXd fit = basis.colPivHouseholderQr().solve(shifted);
  report.cubicCoefficient = fit[0];

  // Constant recovered from the three smallest epsilon values by an exact
  // quadratic interpolation of q^2 itself.
  Eigen::MatrixXd vander(3, 3);
  Eigen::VectorXd tail(3);
  for (int i = 0; i < 3; ++i) {
    const int idx = count - 3 + i;
    vander(i, 0) = 1.0;
    vander(i, 1) = epsList[idx];
    vander(i, 2) = epsList[idx] * epsList[idx];
    tail[i] = squared[idx];
  }
  report.quadraticTerm = vander.colPivHouseholderQr().solve(tail)[0];

  const Eigen::ArrayXd weight =
      params.p == 3.0 ? Eigen::ArrayXd(bubbleVals.array())
                      : Eigen::ArrayXd(bubbleVals.array().pow(params.p - 2.0));
  const double cubicIntegral =
      grid.weights.dot((weight * rhoVals.array().cube()).matrix());
  report.predictedCubic =
      params.p * (params.p - 1.0) * (1.0 / mu(2, params) - 1.0) *
      cubicIntegral;

  if (params.N == 2) {
    const auto& n = grid.nodes;
    report.momentIntegral = grid.weights.dot(
        (n.col(0).array() * n.col(1).array() * n.col(2).array())
            .square()
            .matrix());
  }
  return report;
}

}  // namespace fracstab
