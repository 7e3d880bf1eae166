#pragma once

// Header-only derivative-free simplex minimizer for the small smooth
// objectives of the manifold projection (2 or 3 parameters).

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace fracstab {

struct NelderMeadOptions {
  double initialStep = 0.1;
  /// Converged when the simplex diameter falls below this (relative to
  /// 1 + |best point|).
  double simplexTol = 1e-10;
  /// ... or when the value spread falls below this fraction of |best value|
  /// (pure relative, so near-zero optima are resolved by the diameter test).
  double valueTol = 1e-11;
  int maxEvaluations = 2000;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

inline NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const NelderMeadOptions& options = {}) {
  const int n = static_cast<int>(start.size());
  const double reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;

  std::vector<Eigen::VectorXd> pts(n + 1, start);
  std::vector<double> vals(n + 1);
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return objective(x);
  };
  for (int i = 1; i <= n; ++i) pts[i][i - 1] += options.initialStep;
  for (int i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<int> order(n + 1);
  NelderMeadResult result;
  while (true) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];

    double diameter = 0.0;
    for (int i = 1; i <= n; ++i) {
      diameter = std::max(diameter, (pts[order[i]] - pts[best]).norm());
    }
    const double spread = vals[worst] - vals[best];
    if (diameter <= options.simplexTol * (1.0 + pts[best].norm()) ||
        spread <= options.valueTol * std::abs(vals[best])) {
      result.converged = true;
      break;
    }
    if (evals >= options.maxEvaluations) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[order[i]];
    centroid /= n;

    const Eigen::VectorXd xr = centroid + reflect * (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = centroid + expand * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd base = outside ? xr : pts[worst];
    const Eigen::VectorXd xc = centroid + contract * (base - centroid);
    const double fc = eval(xc);
    if (fc < std::min(fr, vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      pts[order[i]] = pts[best] + shrink * (pts[order[i]] - pts[best]);
      vals[order[i]] = eval(pts[order[i]]);
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i) {
    if (vals[i] < vals[best]) best = i;
  }
  result.x = pts[best];
  result.value = vals[best];
  result.evaluations = evals;
  return result;
}

}  // namespace fracstab
