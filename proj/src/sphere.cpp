#include "fracstab/sphere.hpp"

#include <cmath>
#include <string>

#include "fracstab/errors.hpp"

namespace fracstab {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

SpherePoint::SpherePoint(Eigen::VectorXd c) : coords(std::move(c)) {
  if (coords.size() < 2) {
    throw ValidationError("SpherePoint: need at least 2 coordinates");
  }
  if (std::abs(coords.norm() - 1.0) > 1e-12) {
    throw ValidationError("SpherePoint: coordinates must have unit norm");
  }
}

double sphere_surface(int N) {
  if (N < 1) throw ValidationError("sphere_surface: N must be >= 1");
  // |S^N| = 2 pi^{(N+1)/2} / Gamma((N+1)/2)
  return 2.0 * std::exp(0.5 * (N + 1) * std::log(kPi) -
                        log_gamma(0.5 * (N + 1)));
}

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw ValidationError("gauss_legendre: need n >= 1");
  nodes.resize(n);
  weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;  // ascending order: the guesses start near +1
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

SpherePoint stereo(const Eigen::VectorXd& x) {
  if (!x.allFinite()) throw ValidationError("stereo: input must be finite");
  const int n = static_cast<int>(x.size());
  const double r2 = x.squaredNorm();
  Eigen::VectorXd c(n + 1);
  c.head(n) = 2.0 * x / (1.0 + r2);
  c[n] = (r2 - 1.0) / (1.0 + r2);
  // Renormalize to absorb the last bits of rounding.
  c /= c.norm();
  return SpherePoint(std::move(c));
}

Eigen::VectorXd inverse_stereo(const SpherePoint& omega) {
  const int n = omega.dim();
  const double last = omega.coords[n];
  if (last >= 1.0 - 1e-15) {
    throw ValidationError("inverse_stereo: the pole (0,...,0,1) is not in "
                          "the image of the chart");
  }
  return omega.coords.head(n) / (1.0 - last);
}

double conformal_factor(const Eigen::VectorXd& x, const ProblemParams& params) {
  if (x.size() != params.N) {
    throw ValidationError("conformal_factor: x must have length N");
  }
  const double q = 2.0 / (1.0 + x.squaredNorm());
  return std::pow(q, 0.5 * (params.N - 2.0 * params.s));
}

Eigen::VectorXd pull_to_sphere(
    const std::function<double(const Eigen::VectorXd&)>& u,
    const QuadratureGrid& grid, const ProblemParams& params) {
  if (grid.N != params.N) {
    throw ValidationError("pull_to_sphere: grid and params dimensions differ");
  }
  Eigen::VectorXd values(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const SpherePoint omega{grid.nodes.row(i).transpose()};
    const Eigen::VectorXd x = inverse_stereo(omega);
    values[i] = u(x) / conformal_factor(x, params);
  }
  return values;
}

QuadratureGrid build_quadrature(int N, int degreeBound) {
  if (N != 1 && N != 2) {
    throw UnsupportedDimensionError(
        "build_quadrature: supported dimensions are N = 1 and N = 2, got " +
        std::to_string(N));
  }
  if (degreeBound < 4) {
    throw ValidationError("build_quadrature: degreeBound must be >= 4");
  }

  QuadratureGrid grid;
  grid.N = N;
  grid.degreeBound = degreeBound;

  if (N == 1) {
    // Uniform offset nodes integrate trig polynomials of degree < n exactly;
    // products of harmonics need degree 2*degreeBound. A multiple of 4 keeps
    // the node set away from the pole angle pi/2.
    int n = 2 * degreeBound + 1;
    n += (4 - n % 4) % 4;
    grid.nodes.resize(n, 2);
    grid.weights = Eigen::VectorXd::Constant(n, 2.0 * kPi / n);
    grid.polarNodes.resize(n);
    grid.azimuthCount = n;
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * kPi * (j + 0.5) / n;
      grid.polarNodes[j] = theta;
      grid.nodes(j, 0) = std::cos(theta);
      grid.nodes(j, 1) = std::sin(theta);
    }
    grid.resolutionTag = "circle(n=" + std::to_string(n) + ")";
    return grid;
  }

  // N = 2: Gauss-Legendre in cos(theta) x uniform azimuth.
  const int nPolar = degreeBound + 1;
  const int nAz = 2 * degreeBound + 1;
  gauss_legendre(nPolar, grid.polarNodes, grid.polarWeights);
  grid.azimuthCount = nAz;
  grid.nodes.resize(nPolar * nAz, 3);
  grid.weights.resize(nPolar * nAz);
  const double wAz = 2.0 * kPi / nAz;
  for (int i = 0; i < nPolar; ++i) {
    const double x = grid.polarNodes[i];
    const double sinTheta = std::sqrt(1.0 - x * x);
    for (int j = 0; j < nAz; ++j) {
      const double phi = 2.0 * kPi * j / nAz;
      const int row = i * nAz + j;
      grid.nodes(row, 0) = sinTheta * std::cos(phi);
      grid.nodes(row, 1) = sinTheta * std::sin(phi);
      grid.nodes(row, 2) = x;
      grid.weights[row] = grid.polarWeights[i] * wAz;
    }
  }
  grid.resolutionTag = "gl" + std::to_string(nPolar) + "x" + std::to_string(nAz);
  return grid;
}

}  // namespace fracstab
