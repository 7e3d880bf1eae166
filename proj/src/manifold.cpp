#include "fracstab/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "fracstab/errors.hpp"
#include "fracstab/functional.hpp"
#include "fracstab/nelder_mead.hpp"

namespace fracstab {

namespace {

double nu_exponent(const ProblemParams& params) {
  return 0.5 * (params.N - 2.0 * params.s);
}

Eigen::ArrayXd pow_array(const Eigen::ArrayXd& base, double e) {
  if (e == 0.5) return base.sqrt();
  if (e == 1.0) return base;
  return base.pow(e);
}

/// Per-grid geometry for evaluating pulled-back bubbles in closed form.
/// With omega = (omega', omegaLast) the bubble divided by the conformal
/// factor is c lambda^nu / D^nu where
///   D = (1 + lambda^2 |z|^2)(1 - omegaLast) + lambda^2 (1 + omegaLast)
///       - 2 lambda^2 <omega', z>,
/// which is smooth and strictly positive on the whole sphere.
struct BubbleGeometry {
  Eigen::ArrayXd oneMinus;
  Eigen::ArrayXd onePlus;
  Eigen::MatrixXd omegaPrime;

  explicit BubbleGeometry(const QuadratureGrid& grid) {
    const Eigen::VectorXd last = grid.nodes.col(grid.N);
    oneMinus = (1.0 - last.array()).max(0.0);
    onePlus = (1.0 + last.array()).max(0.0);
    omegaPrime = grid.nodes.leftCols(grid.N);
  }

  Eigen::ArrayXd denom(const BubbleParams& b) const {
    const double lamSq = b.lambda * b.lambda;
    return (1.0 + lamSq * b.z.squaredNorm()) * oneMinus + lamSq * onePlus -
           2.0 * lamSq * (omegaPrime * b.z).array();
  }
};

void check_bubble_args(const BubbleParams& b, const ProblemParams& params,
                       const char* what) {
  if (b.z.size() != params.N) {
    throw ValidationError(std::string(what) +
                          ": bubble center length must equal N");
  }
}

/// Throws when the top decile of degrees carries a non-negligible energy
/// fraction: the band limit is too small for the concentration scale.
void check_tail(const SphereField& f, const char* what) {
  const int from = std::max(2, (9 * f.Lmax + 9) / 10);
  if (from > f.Lmax) return;
  const double total = f.coeffs.squaredNorm();
  if (total <= 0.0) return;
  double tail = 0.0;
  for (int l = from; l <= f.Lmax; ++l) tail += f.degreeEnergy(l);
  if (tail > 1e-4 * total) {
    throw ResolutionError(
        std::string(what) +
        ": tail energy fraction beyond nine tenths of the band limit is " +
        std::to_string(tail / total) + "; increase Lmax or moderate lambda");
  }
}

/// Pointwise values of [U, dU/dlambda, dU/dz_1, .., dU/dz_N] pulled to the
/// sphere, as columns.
Eigen::MatrixXd tangent_value_grids(const BubbleParams& b,
                                    const BubbleGeometry& geom,
                                    const ProblemParams& params) {
  const double nu = nu_exponent(params);
  const double amp = bubble_amplitude(params);
  const double lam = b.lambda;
  const double lamSq = lam * lam;

  const Eigen::ArrayXd denom = geom.denom(b);
  const Eigen::ArrayXd values = amp * pow_array(lam / denom, nu);
  const Eigen::ArrayXd dLambdaDenom =
      2.0 * lam * b.z.squaredNorm() * geom.oneMinus +
      2.0 * lam * geom.onePlus - 4.0 * lam * (geom.omegaPrime * b.z).array();

  Eigen::MatrixXd out(values.size(), params.N + 2);
  out.col(0) = values.matrix();
  out.col(1) = (values * nu * (1.0 / lam - dLambdaDenom / denom)).matrix();
  for (int i = 0; i < params.N; ++i) {
    const Eigen::ArrayXd dzDenom =
        2.0 * lamSq * b.z[i] * geom.oneMinus -
        2.0 * lamSq * geom.omegaPrime.col(i).array();
    out.col(2 + i) = (-values * nu * dzDenom / denom).matrix();
  }
  return out;
}

}  // namespace

BubbleParams::BubbleParams(Eigen::VectorXd zIn, double lambdaIn)
    : z(std::move(zIn)), lambda(lambdaIn) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("BubbleParams: lambda must be positive and finite");
  }
  if (!z.allFinite()) {
    throw ValidationError("BubbleParams: center must be finite");
  }
}

double bubble_eval(const BubbleParams& b, const Eigen::VectorXd& x,
                   const ProblemParams& params) {
  check_bubble_args(b, params, "bubble_eval");
  if (x.size() != params.N) {
    throw ValidationError("bubble_eval: point length must equal N");
  }
  const double rSq = (x - b.z).squaredNorm();
  return bubble_amplitude(params) *
         std::pow(b.lambda / (1.0 + b.lambda * b.lambda * rSq),
                  nu_exponent(params));
}

double bubble_sphere_value(const BubbleParams& b, const Eigen::VectorXd& omega,
                           const ProblemParams& params) {
  check_bubble_args(b, params, "bubble_sphere_value");
  if (omega.size() != params.N + 1) {
    throw ValidationError("bubble_sphere_value: point must lie in R^{N+1}");
  }
  const double last = omega[params.N];
  const double lamSq = b.lambda * b.lambda;
  const double denom = (1.0 + lamSq * b.z.squaredNorm()) * (1.0 - last) +
                       lamSq * (1.0 + last) -
                       2.0 * lamSq * omega.head(params.N).dot(b.z);
  return bubble_amplitude(params) *
         std::pow(b.lambda / denom, nu_exponent(params));
}

SphereField bubble_field(const BubbleParams& b, const QuadratureGrid& grid,
                         int Lmax, const ProblemParams& params) {
  check_bubble_args(b, params, "bubble_field");
  if (grid.N != params.N) {
    throw ValidationError("bubble_field: grid and params dimensions differ");
  }
  const BubbleGeometry geom(grid);
  const Eigen::ArrayXd denom = geom.denom(b);
  const Eigen::VectorXd values =
      (bubble_amplitude(params) *
       pow_array(b.lambda / denom, nu_exponent(params)))
          .matrix();
  SphereField field = analyze(values, grid, Lmax);
  check_tail(field, "bubble_field");
  return field;
}

std::vector<SphereField> tangent_fields(const BubbleParams& b,
                                        const QuadratureGrid& grid, int Lmax,
                                        const ProblemParams& params) {
  check_bubble_args(b, params, "tangent_fields");
  if (grid.N != params.N) {
    throw ValidationError("tangent_fields: grid and params dimensions differ");
  }
  const BubbleGeometry geom(grid);
  const Eigen::MatrixXd values = tangent_value_grids(b, geom, params);
  std::vector<SphereField> fields;
  fields.reserve(params.N + 2);
  for (int j = 0; j < values.cols(); ++j) {
    fields.push_back(analyze(values.col(j), grid, Lmax));
    check_tail(fields.back(), "tangent_fields");
  }
  return fields;
}

double hs_inner(const SphereField& a, const SphereField& b,
                const ProblemParams& params) {
  if (a.N != b.N || a.N != params.N) {
    throw ValidationError("hs_inner: dimensions differ");
  }
  double total = 0.0;
  for (int l = 0; l <= std::min(a.Lmax, b.Lmax); ++l) {
    total += alpha(l, params) * a.degreeBlock(l).dot(b.degreeBlock(l));
  }
  return total;
}

Decomposition dist_to_manifold(const SphereField& V,
                               const ProblemParams& params,
                               const QuadratureGrid& grid,
                               const std::optional<BubbleParams>& initGuess) {
  if (V.N != params.N || grid.N != params.N) {
    throw ValidationError("dist_to_manifold: dimensions differ");
  }
  if (grid.degreeBound < V.Lmax) {
    throw ResolutionError(
        "dist_to_manifold: grid cannot resolve the field's band limit");
  }
  const int N = params.N;
  const BubbleGeometry geom(grid);
  const double nu = nu_exponent(params);
  const double amp = bubble_amplitude(params);

  const auto objective = [&](const Eigen::VectorXd& x) -> double {
    if (!x.allFinite() || std::abs(x[N]) > 8.0 || x.head(N).norm() > 50.0) {
      return 1e30;
    }
    const BubbleParams b{x.head(N).eval(), std::exp(x[N])};
    const Eigen::VectorXd values =
        (amp * pow_array(b.lambda / geom.denom(b), nu)).matrix();
    const SphereField diff = V - analyze(values, grid, V.Lmax);
    return hs_norm_sq(diff, params);
  };

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(N + 1);
  if (initGuess) {
    if (initGuess->z.size() != N) {
      throw ValidationError("dist_to_manifold: init guess center length");
    }
    x0.head(N) = initGuess->z;
    x0[N] = std::log(initGuess->lambda);
  } else if (V.Lmax >= 1) {
    // First-order read-off: the degree-1 coefficients of V respond linearly
    // to (z, log lambda) displacements of the bubble; solve against the
    // responses of the derivative fields at the standard bubble.
    const BubbleParams standard{Eigen::VectorXd::Zero(N), 1.0};
    const Eigen::MatrixXd values =
        tangent_value_grids(standard, geom, params);
    const int blockSize = SphereField::degreeSize(N, 1);
    Eigen::MatrixXd responses(blockSize, N + 1);
    for (int i = 0; i < N; ++i) {
      responses.col(i) =
          analyze(values.col(2 + i), grid, 1).degreeBlock(1);
    }
    responses.col(N) = analyze(values.col(1), grid, 1).degreeBlock(1);
    x0 = responses.colPivHouseholderQr().solve(
        Eigen::VectorXd(V.degreeBlock(1)));
    if (!x0.allFinite()) x0.setZero();
    if (x0.norm() > 1.0) x0 /= x0.norm();
  }

  NelderMeadOptions options;
  options.initialStep = 0.05;
  NelderMeadResult run = nelder_mead(objective, x0, options);
  if (!run.converged) {
    NelderMeadOptions retry = options;
    retry.initialStep = 0.02;
    const NelderMeadResult second = nelder_mead(objective, run.x, retry);
    if (!second.converged) {
      throw OptimizationError(
          "dist_to_manifold: simplex search did not converge within budget",
          std::min(run.value, second.value));
    }
    run = second;
  }

  const BubbleParams best{run.x.head(N).eval(), std::exp(run.x[N])};
  const std::vector<SphereField> tangents =
      tangent_fields(best, grid, V.Lmax, params);
  const SphereField& bubble = tangents[0];

  const int span = N + 2;
  Eigen::MatrixXd gram(span, span);
  Eigen::VectorXd rhs(span);
  for (int i = 0; i < span; ++i) {
    rhs[i] = hs_inner(V, tangents[i], params);
    for (int j = i; j < span; ++j) {
      gram(i, j) = hs_inner(tangents[i], tangents[j], params);
      gram(j, i) = gram(i, j);
    }
  }
  const Eigen::VectorXd coef = gram.ldlt().solve(rhs);

  Decomposition result;
  result.bubble = best;
  result.beta = coef[0];
  result.tangential = SphereField(V.N, V.Lmax);
  for (int j = 1; j < span; ++j) {
    result.tangential = result.tangential + coef[j] * tangents[j];
  }
  result.orthogonal = V - result.beta * bubble - result.tangential;
  result.dist = std::sqrt(std::max(0.0, hs_norm_sq(V - bubble, params)));

  const SphereField deviation = V - bubble;
  double ortho = 0.0;
  for (int j = 1; j < span; ++j) {
    const double norm = std::sqrt(hs_norm_sq(tangents[j], params));
    if (norm > 0.0) {
      ortho = std::max(ortho,
                       std::abs(hs_inner(deviation, tangents[j], params)) / norm);
    }
  }
  result.orthoResidual = ortho;

  const double bubbleNorm =
      std::sqrt(std::pow(sobolev_constant(params),
                         params.N / (2.0 * params.s)));
  result.farFromManifold = result.dist > 0.9 * bubbleNorm;
  return result;
}

}  // namespace fracstab
