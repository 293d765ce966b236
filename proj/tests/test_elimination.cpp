#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rrp3ss/elimination.hpp"
#include "rrp3ss/errors.hpp"
#include "rrp3ss/oracle.hpp"
#include "reference_cases.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace rrp3ss;

namespace {

constexpr double kDeg = M_PI / 180.0;

RationalizedCoefficients scaled_coefficients(const MechanismGeometry& geom,
                                             double* scale_out = nullptr) {
  const double scale = 0.5 * length_scale(geom);
  if (scale_out) *scale_out = scale;
  return rationalize(
      extract_trig_coefficients(scale_lengths(geom, 1.0 / scale)));
}

}  // namespace

TEST_CASE("matrix rows annihilate the monomial vector of a known solution") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  double scale = 1.0;
  const RationalizedCoefficients rc = scaled_coefficients(geom, &scale);
  for (const auto& ref : refcase::sample1_configurations()) {
    const double t1 = std::tan(0.5 * ref.theta1_deg * kDeg);
    const double t2 = std::tan(0.5 * ref.theta2_deg * kDeg);
    const Mat24 mat = build_elimination_matrix(rc, ref.sigma / scale);
    const Vec24 tau = monomial_vector(t1, t2);
    CHECK((mat * tau).norm() <= 1e-8 * mat.norm() * tau.norm());
  }
}

TEST_CASE("matrix layout: rows carry the coefficients in shifted columns") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  const RationalizedCoefficients rc = scaled_coefficients(geom);
  const double sigma = 0.0;
  const Mat24 mat = build_elimination_matrix(rc, sigma);
  // Row (j=0, u=0, v=0): entries f[0][p][q](0) in columns 6q + p.
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 4; ++q) {
      const double expected =
          (p < 3 && q < 3) ? rc.f[0][p][q](sigma) : 0.0;
      CHECK(mat(0, 6 * q + p) == expected);
    }
  // Row (j=1, u=2, v=1) = 8 + 5: entries shifted by (2, 1).
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      CHECK(mat(13, 6 * (q + 1) + (p + 2)) == rc.f[1][p][q](sigma));
  // Column count of nonzeros per row never exceeds nine.
  for (int r = 0; r < kEliminationSize; ++r) {
    int nonzeros = 0;
    for (int c = 0; c < kEliminationSize; ++c)
      if (mat(r, c) != 0.0) ++nonzeros;
    CHECK(nonzeros <= 9);
  }
}

TEST_CASE("all-zero coefficients produce the zero matrix") {
  RationalizedCoefficients rc;
  const Mat24 mat = build_elimination_matrix(rc, 1.3);
  CHECK(mat.norm() == 0.0);
}

TEST_CASE("derivative matrix matches a finite difference") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  const RationalizedCoefficients rc = scaled_coefficients(geom);
  const std::complex<double> sigma(0.37, -0.21);
  const std::complex<double> h(1e-6, 0.0);
  const Mat24c plus = build_elimination_matrix(rc, sigma + h);
  const Mat24c minus = build_elimination_matrix(rc, sigma - h);
  const Mat24c deriv = build_elimination_matrix_derivative(rc, sigma);
  CHECK(((plus - minus) / (2.0 * h) - deriv).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("sample 1: the determinant polynomial has full degree and no "
          "vanishing coefficient") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  const RationalizedCoefficients rc = scaled_coefficients(geom);
  EliminationDiagnostics diag;
  const UnivariatePolynomial poly = det_polynomial(rc, &diag);
  CHECK(poly.degree() == 28);
  for (double c : poly.coeffs) CHECK(std::abs(c) > 1e-16);
  for (double ratio : diag.collapse_ratios) CHECK(ratio <= kCollapseTol);
  CHECK(diag.imag_leak < 1e-9);
}

TEST_CASE("sample 2: the determinant polynomial is even") {
  const MechanismGeometry geom = to_general(refcase::sample2_geometry());
  const RationalizedCoefficients rc = scaled_coefficients(geom);
  const UnivariatePolynomial poly = det_polynomial(rc);
  CHECK(poly.degree() == 28);
  double max_abs = 0.0;
  for (double c : poly.coeffs) max_abs = std::max(max_abs, std::abs(c));
  for (std::size_t w = 1; w < poly.coeffs.size(); w += 2)
    CHECK(std::abs(poly.coeffs[w]) <= 1e-8 * max_abs);
}

TEST_CASE("scaling the coefficients leaves the normalized polynomial fixed") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  RationalizedCoefficients rc = scaled_coefficients(geom);
  const UnivariatePolynomial base = det_polynomial(rc);
  for (int j = 0; j < 3; ++j)
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) rc.f[j][p][q] *= 1.7;
  const UnivariatePolynomial scaled = det_polynomial(rc);
  REQUIRE(scaled.degree() == base.degree());
  for (int w = 0; w <= base.degree(); ++w)
    CHECK(std::abs(scaled.coeffs[w] - base.coeffs[w]) < 1e-10);
}

TEST_CASE("degree collapse holds on random geometries") {
  testutil::Rng rng(101);
  for (int i = 0; i < 100; ++i) {
    const MechanismGeometry geom = testutil::random_geometry(rng);
    const RationalizedCoefficients rc = scaled_coefficients(geom);
    EliminationDiagnostics diag;
    try {
      det_polynomial(rc, &diag);
    } catch (const SingularGeometry&) {
      continue;  // architecturally singular draw; no degree claim to test
    }
    for (double ratio : diag.collapse_ratios) CHECK(ratio <= 1e-8);
  }
}

TEST_CASE("every oracle-found slide value is a root of the polynomial") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  double scale = 1.0;
  const RationalizedCoefficients rc = scaled_coefficients(geom, &scale);
  const UnivariatePolynomial poly = det_polynomial(rc);
  for (const PoseParams& pose : multistart(geom)) {
    const double sigma = pose.sigma / scale;
    CHECK(std::abs(poly(sigma)) <= 1e-6 * poly.magnitude(std::abs(sigma)));
  }
}

TEST_CASE("interpolant agrees with direct determinants at held-out nodes") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  const RationalizedCoefficients rc = scaled_coefficients(geom);
  EliminationDiagnostics diag;
  det_polynomial(rc, &diag);

  // Held-out circle: rotated off the interpolation grid, slightly inside.
  const double radius = 0.9 * diag.node_radius;
  for (int k = 0; k < 7; ++k) {
    const std::complex<double> z =
        std::polar(radius, 2.0 * M_PI * (k + 0.37) / 7.0);
    const std::complex<double> direct =
        evaluate_determinant_nodes(rc, {z})[0];
    std::complex<double> value = 0.0;
    for (int w = static_cast<int>(diag.raw_coefficients.size()) - 1; w >= 0;
         --w)
      value = value * z + diag.raw_coefficients[w];
    double scale = 0.0;
    for (int w = static_cast<int>(diag.raw_coefficients.size()) - 1; w >= 0;
         --w)
      scale = scale * std::abs(z) + std::abs(diag.raw_coefficients[w]);
    CHECK(std::abs(value - direct) <= 1e-8 * scale);
  }
}

TEST_CASE("proportional rows make the instance architecturally singular") {
  // With every anchor at the origin, the second and third reduced equations
  // are proportional constants, so the determinant vanishes identically.
  MechanismGeometry geom = refcase::sample1_geometry();
  for (int j = 0; j < 3; ++j) {
    geom.base_anchors[j].setZero();
    geom.platform_anchors[j].setZero();
  }
  const RationalizedCoefficients rc = scaled_coefficients(geom);
  CHECK_THROWS_AS(det_polynomial(rc), SingularGeometry);
}

TEST_CASE("random dense coefficients do not collapse and are rejected") {
  // Structure-free coefficients give a genuine degree-32 determinant.
  testutil::Rng rng(102);
  RationalizedCoefficients rc;
  rc.sigma_radius = 2.0;
  for (int j = 0; j < 3; ++j)
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        for (int w = 0; w <= rc.sigma_degree(j); ++w)
          rc.f[j][p][q].c[w] = testutil::uniform(rng, -1.0, 1.0);
  CHECK_THROWS_AS(det_polynomial(rc), CollapseFailure);
}

TEST_CASE("variable rescaling maps the roots exactly") {
  UnivariatePolynomial poly =
      UnivariatePolynomial::from_coefficients({-6.0, 1.0, 1.0});  // roots 2, -3
  const UnivariatePolynomial wide = rescale_variable(poly, 0.5);
  // q(y) = p(y/2): roots at 4 and -6.
  CHECK(std::abs(wide(4.0)) < 1e-14);
  CHECK(std::abs(wide(-6.0)) < 1e-14);
}

TEST_CASE("polynomial normalization and trimming") {
  const UnivariatePolynomial poly =
      UnivariatePolynomial::from_coefficients({2.0, -8.0, 4.0, 1e-12}, 1e-8);
  CHECK(poly.degree() == 2);
  CHECK(poly.coeffs[1] == 1.0);  // largest magnitude pinned to +1
  CHECK(poly.coeffs[0] == -0.25);
  CHECK_THROWS_AS(UnivariatePolynomial::from_coefficients({0.0, 0.0}),
                  std::invalid_argument);
}
