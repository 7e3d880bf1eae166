#include <doctest.h>

#include <cmath>

#include "fracstab/errors.hpp"
#include "fracstab/functional.hpp"
#include "fracstab/harmonics.hpp"
#include "fracstab/manifold.hpp"
#include "fracstab/random.hpp"
#include "fracstab/sphere.hpp"

using namespace fracstab;

namespace {
constexpr double kPi = 3.14159265358979323846;

const ProblemParams& half_params() {
  static const ProblemParams params(2, 0.5);
  return params;
}

SphereField standard_bubble(const QuadratureGrid& grid, int Lmax) {
  return bubble_field(BubbleParams(Eigen::VectorXd::Zero(2), 1.0), grid, Lmax,
                      half_params());
}
}  // namespace

TEST_CASE("hs_norm_sq of the standard bubble is S^{N/2s}") {
  const QuadratureGrid grid = build_quadrature(2, 32);
  const SphereField bubble = standard_bubble(grid, 8);
  CHECK(hs_norm_sq(bubble, half_params()) ==
        doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("hs and hneg norms on pure-degree fields") {
  const ProblemParams& params = half_params();
  for (int l : {0, 1, 2, 5}) {
    SphereField f(2, 6);
    f.degreeBlock(l).setConstant(2.0);
    const double energy = f.degreeEnergy(l);
    CAPTURE(l);
    CHECK(hs_norm_sq(f, params) ==
          doctest::Approx(alpha(l, params) * energy).epsilon(1e-14));
    CHECK(hneg_norm(f, params) ==
          doctest::Approx(std::sqrt(energy / alpha(l, params)))
              .epsilon(1e-14));
  }
}

TEST_CASE("lp_norm basics and validation") {
  const QuadratureGrid grid = build_quadrature(2, 8);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(grid.size());
  CHECK(lp_norm(ones, 4.0, grid) ==
        doctest::Approx(std::pow(4.0 * kPi, 0.25)).epsilon(1e-13));
  CHECK(lp_norm(ones, 1.0, grid) == doctest::Approx(4.0 * kPi).epsilon(1e-13));
  CHECK_THROWS_AS(lp_norm(ones, 0.5, grid), ValidationError);

  // L2 by quadrature equals the coefficient norm.
  const SphereField f = random_field(2, 3, {0, 1, 2, 3}, 2);
  CHECK(lp_norm(f, 2.0, grid) ==
        doctest::Approx(std::sqrt(f.l2NormSq())).epsilon(1e-12));
}

TEST_CASE("signed_power preserves sign for non-integer exponents") {
  Eigen::VectorXd v(4);
  v << -2.0, -0.5, 0.0, 3.0;
  const Eigen::VectorXd cubed = signed_power(v, 3.0);
  CHECK(cubed[0] == doctest::Approx(-8.0));
  CHECK(cubed[3] == doctest::Approx(27.0));
  const Eigen::VectorXd squared = signed_power(v, 2.0);
  CHECK(squared[0] == doctest::Approx(-4.0));  // v |v|, odd extension
  const Eigen::VectorXd frac = signed_power(v, 2.5);
  CHECK(frac[0] == doctest::Approx(-std::pow(2.0, 2.5)));
  CHECK(frac[2] == 0.0);
}

TEST_CASE("j_functional of the bubble") {
  const QuadratureGrid grid = build_quadrature(2, 32);
  const SphereField bubble = standard_bubble(grid, 8);
  // S^{N/2s} (1/2 - 1/2*) = pi (1/2 - 1/4) = pi/4.
  CHECK(j_functional(bubble, half_params(), grid) ==
        doctest::Approx(kPi / 4.0).epsilon(1e-12));
}

TEST_CASE("residual scaling on the amplitude ray") {
  const QuadratureGrid grid = build_quadrature(2, 32);
  const SphereField bubble = standard_bubble(grid, 8);
  const ProblemParams& params = half_params();
  const ResidualReport res = residual(2.0 * bubble, params, grid);

  // A_s(2U) - (2U)^3 = (2 - 8) U^p: dual norm 6 ||U||_{Hs} = 6 sqrt(pi).
  CHECK(res.hnegNorm == doctest::Approx(6.0 * std::sqrt(kPi)).epsilon(1e-10));
  // Pointwise residual is the constant -6 alpha(0) W0.
  const double w0 = std::sqrt(0.5);
  const double constant = 6.0 * 0.5 * w0;
  CHECK(res.deltaNorm ==
        doctest::Approx(constant * std::pow(4.0 * kPi, 0.75)).epsilon(1e-10));
  // The bubble itself has negligible residual.
  const ResidualReport at = residual(bubble, params, grid);
  CHECK(at.hnegNorm < 1e-12);
  CHECK(at.deltaNorm < 1e-12);
}

TEST_CASE("residual dissipation: present only on positive fields") {
  const QuadratureGrid grid = build_quadrature(2, 32);
  const ProblemParams& params = half_params();
  const SphereField bubble = standard_bubble(grid, 8);
  SphereField noise = random_field(2, 8, {2, 3}, 4);
  noise = (1e-2 / std::sqrt(hs_norm_sq(noise, params))) * noise;

  const ResidualReport positive = residual(bubble + noise, params, grid);
  REQUIRE(positive.dissipation.has_value());
  CHECK(*positive.dissipation > 0.0);

  // Sign-changing field: no dissipation value.
  const ResidualReport indefinite = residual(noise, params, grid);
  CHECK_FALSE(indefinite.dissipation.has_value());
}

TEST_CASE("dissipation chain inequality at a perturbed bubble") {
  const QuadratureGrid grid = build_quadrature(2, 32);
  const ProblemParams& params = half_params();
  const SphereField bubble = standard_bubble(grid, 8);
  for (const std::uint64_t seed : {1, 2, 3}) {
    SphereField noise = random_field(2, 8, {2, 3, 4}, seed);
    noise = (1e-3 / std::sqrt(hs_norm_sq(noise, params))) * noise;
    const SphereField V = bubble + noise;
    const ResidualReport res = residual(V, params, grid);
    REQUIRE(res.dissipation.has_value());

    const double mass =
        (grid.weights.array() *
         synthesize(V, grid).array().abs().pow(params.twoStar))
            .sum();
    const double lower = (1.0 / params.p) * res.deltaNorm * res.deltaNorm *
                         std::pow(mass, -2.0 * params.s / params.N);
    CAPTURE(seed);
    CHECK(*res.dissipation >= lower * (1.0 - 1e-9));

    // Dual Sobolev bound: hneg of the band-limited residual is controlled
    // by the critical-dual Lebesgue norm.
    const double sBound =
        res.deltaNorm / std::sqrt(sobolev_constant(params));
    CHECK(res.hnegNorm <= sBound * (1.0 + 1e-9) + 1e-14);
  }
}

TEST_CASE("coercivity_form: bilinearity and spectral values") {
  const ProblemParams& params = half_params();
  const ConstantTable table = constant_table(params);

  auto normalized = [&](int l) {
    SphereField f = random_field(2, 6, {l}, 13);
    return (1.0 / std::sqrt(hs_norm_sq(f, params))) * f;
  };
  const SphereField d2 = normalized(2);
  const SphereField d3 = normalized(3);

  CHECK(coercivity_form(d2, d2, params) ==
        doctest::Approx(table.gamma).epsilon(1e-13));
  CHECK(coercivity_form(d3, d3, params) ==
        doctest::Approx(table.gammaPlus).epsilon(1e-13));
  // Distinct degrees are orthogonal for the form.
  CHECK(coercivity_form(d2, d3, params) ==
        doctest::Approx(0.0).epsilon(1e-13).scale(1.0));
  // Bilinearity.
  const SphereField mix = d2 + d3;
  const double direct = coercivity_form(mix, mix, params);
  const double expanded = coercivity_form(d2, d2, params) +
                          2.0 * coercivity_form(d2, d3, params) +
                          coercivity_form(d3, d3, params);
  CHECK(direct == doctest::Approx(expanded).epsilon(1e-13));
  // The tangent block contributes nonpositively, orthogonal block >= gamma.
  SphereField d1 = normalized(1);
  CHECK(coercivity_form(d1, d1, params) ==
        doctest::Approx(0.0).epsilon(1e-13).scale(1.0));
}

TEST_CASE("coercivity gap over random high-degree fields") {
  const ProblemParams& params = half_params();
  const ConstantTable table = constant_table(params);
  std::vector<int> degrees;
  for (int l = 2; l <= 16; ++l) degrees.push_back(l);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SphereField rho = random_field(2, 16, degrees, seed);
    rho = (1.0 / std::sqrt(hs_norm_sq(rho, params))) * rho;
    CAPTURE(seed);
    CHECK(coercivity_form(rho, rho, params) >= table.gamma - 1e-10);
  }
}

TEST_CASE("interp_check closed forms") {
  const QuadratureGrid grid = build_quadrature(2, 16);
  const ProblemParams& params = half_params();

  SphereField constant(2, 0);
  constant.coeff(0, 0) = std::sqrt(4.0 * kPi);  // the constant 1
  const InterpReport rep = interp_check(constant, params, grid);
  CHECK(rep.supNorm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.lpNorm == doctest::Approx(std::pow(4.0 * kPi, 0.25)).epsilon(1e-12));
  // ratio = sup / lp^{2/(N+2-2s)} with exponent 2/3 here.
  CHECK(rep.ratio ==
        doctest::Approx(std::pow(4.0 * kPi, -1.0 / 6.0)).epsilon(1e-12));

  const InterpReport zero = interp_check(SphereField(2, 3), params, grid);
  CHECK(zero.ratio == 0.0);
}

TEST_CASE("cap family: small-delta asymptote and drift") {
  const ProblemParams& params = half_params();
  // Leading order: lp^4 = pi delta^6 / (60 M^2), so the ratio tends to
  // (60 M^2 / pi)^{1/6}.
  const double limit = std::pow(60.0 / kPi, 1.0 / 6.0);
  const auto fine = cap_family_study(params, 1.0, {1e-3});
  REQUIRE(fine.size() == 1);
  CHECK(fine[0].supNorm == doctest::Approx(1e-3).epsilon(1e-13));
  CHECK(fine[0].ratio == doctest::Approx(limit).epsilon(1e-6));

  const auto family = cap_family_study(params, 1.0, {0.1, 0.05, 0.01});
  REQUIRE(family.size() == 3);
  double lo = family[0].ratio, hi = family[0].ratio;
  for (const auto& e : family) {
    lo = std::min(lo, e.ratio);
    hi = std::max(hi, e.ratio);
  }
  CHECK(hi / lo - 1.0 < 0.01);

  // Lipschitz scaling: lp ~ M^{-1/2}, ratio ~ M^{1/3} at fixed delta.
  const auto stiff = cap_family_study(params, 4.0, {0.01});
  CHECK(stiff[0].ratio / family[2].ratio ==
        doctest::Approx(std::pow(4.0, 1.0 / 3.0)).epsilon(1e-4));
}

TEST_CASE("cap family validation") {
  const ProblemParams& params = half_params();
  CHECK_THROWS_AS(cap_family_study(params, 0.0, {0.1}), ValidationError);
  CHECK_THROWS_AS(cap_family_study(params, 1.0, {-0.1}), ValidationError);
  // Cap radius delta/(2M) beyond pi is geometrically meaningless.
  CHECK_THROWS_AS(cap_family_study(params, 0.01, {1.0}), ValidationError);
}
