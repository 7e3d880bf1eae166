#include <doctest.h>

#include <cmath>

#include "fracstab/constants.hpp"
#include "fracstab/errors.hpp"

using namespace fracstab;

namespace {
constexpr double kPi = 3.14159265358979323846;

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}
}  // namespace

TEST_CASE("log_gamma agrees with std::lgamma across the working range") {
  for (double x = 0.05; x <= 45.0; x += 0.173) {
    CAPTURE(x);
    CHECK(rel_err(log_gamma(x), std::lgamma(x)) < 1e-13);
  }
  // Integer and half-integer arguments in closed form.
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rel_err(log_gamma(0.5), 0.5 * std::log(kPi)) < 1e-14);
  CHECK(rel_err(log_gamma(6.0), std::log(120.0)) < 1e-14);
}

TEST_CASE("log_gamma rejects invalid arguments") {
  CHECK_THROWS_AS(log_gamma(0.0), ValidationError);
  CHECK_THROWS_AS(log_gamma(-1.5), ValidationError);
  CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::infinity()),
                  ValidationError);
}

TEST_CASE("ProblemParams derived exponents and validation") {
  const ProblemParams params(2, 0.5);
  CHECK(params.p == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(params.m == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(params.twoStar == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(params.twoStarDual == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  CHECK_THROWS_AS(ProblemParams(0, 0.2), ValidationError);
  CHECK_THROWS_AS(ProblemParams(1, 0.6), ValidationError);
  CHECK_THROWS_AS(ProblemParams(3, 0.0), ValidationError);
  CHECK_THROWS_AS(ProblemParams(3, 1.5), ValidationError);
}

TEST_CASE("sobolev_constant reproduces classical values") {
  // s = 1 reduces to pi N (N-2) (Gamma(N/2)/Gamma(N))^{2/N}.
  for (int N = 3; N <= 8; ++N) {
    CAPTURE(N);
    const double classical =
        kPi * N * (N - 2) *
        std::exp(2.0 / N * (std::lgamma(N / 2.0) - std::lgamma(double(N))));
    CHECK(rel_err(sobolev_constant(ProblemParams(N, 1.0)), classical) < 1e-13);
  }
  // N = 4, s = 1: 8 pi / sqrt(6).
  CHECK(rel_err(sobolev_constant(ProblemParams(4, 1.0)),
                8.0 * kPi / std::sqrt(6.0)) < 1e-13);
  // N = 2, s = 1/2: sqrt(pi).
  CHECK(rel_err(sobolev_constant(ProblemParams(2, 0.5)), std::sqrt(kPi)) <
        1e-13);
}

TEST_CASE("bubble_amplitude closed forms and criticality") {
  CHECK(rel_err(bubble_amplitude(ProblemParams(2, 0.5)), 1.0) < 1e-13);
  CHECK(rel_err(bubble_amplitude(ProblemParams(3, 1.0)),
                std::pow(3.0, 0.25)) < 1e-13);
  CHECK(rel_err(bubble_amplitude(ProblemParams(4, 1.0)),
                2.0 * std::sqrt(2.0)) < 1e-13);

  // The amplitude is pinned by criticality: the sphere-side constant value
  // c * 2^{-(N-2s)/2} must equal the equilibrium alpha(0)^{1/(p-1)}.
  for (const auto& [N, s] : {std::pair<int, double>{2, 0.5},
                             {2, 0.25},
                             {2, 0.75},
                             {3, 1.0},
                             {3, 0.7},
                             {4, 1.0},
                             {5, 1.3}}) {
    CAPTURE(N);
    CAPTURE(s);
    const ProblemParams params(N, s);
    const double w0 =
        bubble_amplitude(params) * std::pow(2.0, -(N - 2.0 * s) / 2.0);
    const double equilibrium =
        std::pow(alpha(0, params), 1.0 / (params.p - 1.0));
    CHECK(rel_err(w0, equilibrium) < 1e-13);
  }
}

TEST_CASE("alpha eigenvalues: half-integer ladder and integer-s products") {
  const ProblemParams half(2, 0.5);
  // N = 2, s = 1/2: alpha(k) = k + 1/2.
  for (int k = 0; k <= 30; ++k) {
    CAPTURE(k);
    CHECK(rel_err(alpha(k, half), k + 0.5) < 1e-13);
  }
  // s = 1: alpha(k) = (k + N/2)(k + N/2 - 1).
  for (int N : {3, 4, 5}) {
    const ProblemParams params(N, 1.0);
    for (int k = 0; k <= 12; ++k) {
      CAPTURE(N);
      CAPTURE(k);
      const double want = (k + N / 2.0) * (k + N / 2.0 - 1.0);
      CHECK(rel_err(alpha(k, params), want) < 1e-13);
    }
  }
  CHECK_THROWS_AS(alpha(-1, half), ValidationError);
}

TEST_CASE("mu spot values") {
  const ProblemParams params(2, 0.5);
  CHECK(rel_err(mu(0, params), 1.0 / 3.0) < 1e-13);
  CHECK(mu(1, params) == 1.0);  // exact by definition
  CHECK(rel_err(mu(2, params), 5.0 / 3.0) < 1e-13);
  CHECK(rel_err(mu(3, params), 7.0 / 3.0) < 1e-13);
}

TEST_CASE("constant_table identities on a parameter sweep") {
  for (int N = 1; N <= 8; ++N) {
    for (double frac : {0.1, 0.2, 0.3, 0.4, 0.45}) {
      const double s = frac * N;
      CAPTURE(N);
      CAPTURE(s);
      const ProblemParams params(N, s);
      const ConstantTable table = constant_table(params);

      CHECK(rel_err(table.gamma, 4.0 * s / (N + 2.0 * s + 2.0)) < 1e-13);
      CHECK(rel_err(table.gamma, 1.0 - alpha(1, params) / alpha(2, params)) <
            1e-13);
      CHECK(rel_err(table.gammaPlus,
                    1.0 - alpha(1, params) / alpha(3, params)) < 1e-13);
      CHECK(rel_err(table.kappa1, 1.0 / (table.gamma * table.gamma)) < 1e-13);
      CHECK(rel_err(table.kappa2, 1.0 / (2.0 * table.kappa1 * params.p)) <
            1e-13);
      CHECK(rel_err(table.kappa3,
                    2.0 * table.kappa2 / (N + 2.0 - 2.0 * s)) < 1e-13);
      CHECK(rel_err(table.kappaFDE,
                    params.p / (params.p - 1.0) * table.kappa3) < 1e-13);
      CHECK(rel_err(mu(0, params), 1.0 / params.p) < 1e-13);
    }
  }
}

TEST_CASE("constant_table spot values at (3, 1)") {
  const ConstantTable table = constant_table(ProblemParams(3, 1.0));
  CHECK(rel_err(table.gamma, 4.0 / 7.0) < 1e-14);
  CHECK(rel_err(table.kappaFDE, 4.0 / 147.0) < 1e-14);
}

TEST_CASE("constant_table spot values at (2, 1/2)") {
  const ConstantTable table = constant_table(ProblemParams(2, 0.5));
  CHECK(rel_err(table.gamma, 0.4) < 1e-14);
  CHECK(rel_err(table.gammaPlus, 4.0 / 7.0) < 1e-14);
  CHECK(rel_err(table.kappa1, 6.25) < 1e-14);
  CHECK(rel_err(table.kappa2, 1.0 / 37.5) < 1e-14);
  CHECK(rel_err(table.kappa3, 2.0 / 112.5) < 1e-14);
  CHECK(rel_err(table.kappaFDE, 1.0 / 37.5) < 1e-14);
  CHECK(rel_err(table.sobolev, std::sqrt(kPi)) < 1e-13);
  CHECK(rel_err(table.bubbleAmp, 1.0) < 1e-13);
}
