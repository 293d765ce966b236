#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rrp3ss/compat.hpp"
#include "reference_cases.hpp"
#include "test_helpers.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace rrp3ss;

namespace {

constexpr double kDeg = M_PI / 180.0;

// Independent route to the expanded closure residual: quaternion-oracle
// rotations and plain vector algebra on the squared-length defect.
double oracle_canonical(const PoseParams& pose, const MechanismGeometry& geom,
                        int leg) {
  const AxisVectors av = axis_vectors(geom);
  const Mat3 r1 = testutil::quaternion_rotation(av.n1, pose.theta1);
  const Mat3 r2 = testutil::quaternion_rotation(av.n2, pose.theta2);
  const Vec3 b_world = geom.zeta * (r1 * Vec3::UnitZ()) +
                       r1 * (r2 * (pose.sigma * av.m +
                                   geom.platform_anchors[leg - 1]));
  const Vec3 d = b_world - geom.base_anchors[leg - 1];
  const double length = geom.leg_lengths[leg - 1];
  return -0.5 * (d.squaredNorm() - length * length);
}

}  // namespace

TEST_CASE("residual_squared vanishes on every reference configuration") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  for (const auto& ref : refcase::sample1_configurations()) {
    const PoseParams pose{ref.theta1_deg * kDeg, ref.theta2_deg * kDeg,
                          ref.sigma};
    for (int leg = 1; leg <= 3; ++leg)
      CHECK(std::abs(residual_squared(pose, geom, leg)) < 1e-8);
  }
}

TEST_CASE("residual_squared: collapsed anchor pair computed by hand") {
  MechanismGeometry geom = refcase::sample1_geometry();
  geom.zeta = 0.0;
  geom.base_anchors[0] = Vec3(2.0, 0.0, 0.0);
  geom.platform_anchors[0] = Vec3(2.0, 0.0, 0.0);
  geom.leg_lengths[0] = 3.0;
  // Identity pose: B1 lands on A1, so the defect is exactly -L1^2.
  CHECK(residual_squared({0, 0, 0}, geom, 1) == doctest::Approx(-9.0));
}

TEST_CASE("residual_squared matches a direct norm oracle") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  testutil::Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const PoseParams pose = testutil::random_pose(rng, 6.0);
    for (int leg = 1; leg <= 3; ++leg) {
      const double direct = -2.0 * oracle_canonical(pose, geom, leg);
      const double got = residual_squared(pose, geom, leg);
      CHECK(std::abs(got - direct) < 1e-10 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("residual index bounds") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  CHECK_THROWS_AS(residual_squared({0, 0, 0}, geom, 0), std::invalid_argument);
  CHECK_THROWS_AS(residual_canonical({0, 0, 0}, geom, 4),
                  std::invalid_argument);
}

TEST_CASE("canonical residual is minus half the squared defect") {
  testutil::Rng rng(32);
  for (int i = 0; i < 1000; ++i) {
    const MechanismGeometry geom = testutil::random_geometry(rng);
    const PoseParams pose = testutil::random_pose(rng, 4.0);
    for (int leg = 1; leg <= 3; ++leg) {
      const double squared = residual_squared(pose, geom, leg);
      const double canonical = residual_canonical(pose, geom, leg);
      CHECK(std::abs(canonical + 0.5 * squared) <
            1e-10 * (1.0 + std::abs(squared)));
    }
  }
}

TEST_CASE("canonical residual vanishes on a reference configuration") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  const auto ref = refcase::sample1_configurations()[0];
  const PoseParams pose{ref.theta1_deg * kDeg, ref.theta2_deg * kDeg,
                        ref.sigma};
  for (int leg = 1; leg <= 3; ++leg)
    CHECK(std::abs(residual_canonical(pose, geom, leg)) < 1e-8);
}

TEST_CASE("canonical residual matches the independent expansion oracle") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  testutil::Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    const PoseParams pose = testutil::random_pose(rng, 6.0);
    for (int leg = 1; leg <= 3; ++leg) {
      const double oracle = oracle_canonical(pose, geom, leg);
      const double got = residual_canonical(pose, geom, leg);
      CHECK(std::abs(got - oracle) < 1e-10 * (1.0 + std::abs(oracle)));
    }
  }
}

TEST_CASE("trig coefficients: degree structure is exact") {
  testutil::Rng rng(34);
  for (int i = 0; i < 20; ++i) {
    const MechanismGeometry geom = testutil::random_geometry(rng);
    const TrigCoefficients tc = extract_trig_coefficients(geom);
    for (int m1 = 0; m1 < 3; ++m1)
      for (int m2 = 0; m2 < 3; ++m2) {
        // Subtracting the first equation cancels the common quadratic term.
        CHECK(tc.e[1][m1][m2].c[2] == 0.0);
        CHECK(tc.e[2][m1][m2].c[2] == 0.0);
        if (m1 != 0 || m2 != 0) CHECK(tc.e[0][m1][m2].c[2] == 0.0);
      }
    CHECK(tc.e[0][0][0].c[2] == -0.5);
  }
}

TEST_CASE("trig coefficients reconstruct the reduced residuals") {
  const MechanismGeometry geom = refcase::sample1_geometry();
  const TrigCoefficients tc = extract_trig_coefficients(geom);
  testutil::Rng rng(35);
  for (int i = 0; i < 20; ++i) {
    const PoseParams pose = testutil::random_pose(rng, 6.0);
    const auto reduced = reduced_residuals(pose, geom);
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(tc.evaluate(pose, j) - reduced[j]) <
            1e-10 * (1.0 + std::abs(reduced[j])));
  }
}

TEST_CASE("trig coefficients: zero base anchors kill the angle-1 terms") {
  testutil::Rng rng(36);
  MechanismGeometry geom = testutil::random_geometry(rng);
  for (int j = 0; j < 3; ++j) geom.base_anchors[j].setZero();
  const TrigCoefficients tc = extract_trig_coefficients(geom);
  for (int j = 0; j < 3; ++j)
    for (int m1 = 1; m1 < 3; ++m1)
      for (int m2 = 0; m2 < 3; ++m2) {
        CHECK(tc.e[j][m1][m2].c[0] == 0.0);
        CHECK(tc.e[j][m1][m2].c[1] == 0.0);
      }
}

TEST_CASE("trig coefficients agree with a numeric probing cross-check") {
  // Recover the nine sigma-0 coefficients of each reduced equation from
  // sampled residuals (a small linear solve) and compare.
  const MechanismGeometry geom = refcase::sample1_geometry();
  const TrigCoefficients tc = extract_trig_coefficients(geom);
  const double angles[3] = {0.3, 1.9, -2.4};
  for (double sigma : {0.0, 0.7, -1.3}) {
    Eigen::MatrixXd system(9, 9);
    Eigen::MatrixXd rhs(9, 3);
    int row = 0;
    for (double theta1 : angles)
      for (double theta2 : angles) {
        const double b1[3] = {1.0, std::sin(theta1), std::cos(theta1)};
        const double b2[3] = {1.0, std::sin(theta2), std::cos(theta2)};
        for (int m1 = 0; m1 < 3; ++m1)
          for (int m2 = 0; m2 < 3; ++m2)
            system(row, 3 * m1 + m2) = b1[m1] * b2[m2];
        const auto reduced = reduced_residuals({theta1, theta2, sigma}, geom);
        for (int j = 0; j < 3; ++j) rhs(row, j) = reduced[j];
        ++row;
      }
    const Eigen::MatrixXd solved = system.fullPivLu().solve(rhs);
    for (int j = 0; j < 3; ++j)
      for (int m1 = 0; m1 < 3; ++m1)
        for (int m2 = 0; m2 < 3; ++m2)
          CHECK(std::abs(solved(3 * m1 + m2, j) - tc.e[j][m1][m2](sigma)) <
                1e-9);
  }
}

TEST_CASE("rationalized form matches the cleared trig form") {
  testutil::Rng rng(37);
  for (int i = 0; i < 1000; ++i) {
    const MechanismGeometry geom = testutil::random_geometry(rng);
    const TrigCoefficients tc = extract_trig_coefficients(geom);
    const RationalizedCoefficients rc = rationalize(tc);
    const PoseParams pose = testutil::random_pose(rng, 4.0);
    const double t1 = std::tan(0.5 * pose.theta1);
    const double t2 = std::tan(0.5 * pose.theta2);
    const double clear = (1.0 + t1 * t1) * (1.0 + t2 * t2);
    for (int j = 0; j < 3; ++j) {
      const double lhs = rc.evaluate(t1, t2, pose.sigma, j);
      const double rhs = clear * tc.evaluate(pose, j);
      double scale = 1.0;
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
          scale += std::abs(rc.f[j][p][q](pose.sigma) *
                            std::pow(t1, p) * std::pow(t2, q));
      CHECK(std::abs(lhs - rhs) < 1e-9 * scale);
    }
  }
}

TEST_CASE("rationalizing a pure constant replays the clearing factor") {
  TrigCoefficients tc;
  tc.e[0][0][0].c[0] = 1.0;
  const RationalizedCoefficients rc = rationalize(tc);
  // (1 + t1^2)(1 + t2^2) has unit coefficients on the four even corners.
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      const double expected = (p != 1 && q != 1) ? 1.0 : 0.0;
      CHECK(rc.f[0][p][q].c[0] == expected);
    }
}

TEST_CASE("rationalized degrees: quadratic only in the first row, on the "
          "even corners") {
  testutil::Rng rng(38);
  for (int i = 0; i < 20; ++i) {
    const MechanismGeometry geom = testutil::random_geometry(rng);
    const RationalizedCoefficients rc =
        rationalize(extract_trig_coefficients(geom));
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        CHECK(rc.f[1][p][q].c[2] == 0.0);
        CHECK(rc.f[2][p][q].c[2] == 0.0);
        if (p == 1 || q == 1) CHECK(rc.f[0][p][q].c[2] == 0.0);
      }
    // The quadratic term survives exactly on the four corners.
    for (int p : {0, 2})
      for (int q : {0, 2}) CHECK(rc.f[0][p][q].c[2] == -0.5);
  }
}

TEST_CASE("rationalized coefficients match a value-fit oracle") {
  // Fit the 27 unknown coefficients of each equation to sampled values of
  // the cleared trig form and compare against the closed-form extraction.
  const MechanismGeometry geom = refcase::sample1_geometry();
  const TrigCoefficients tc = extract_trig_coefficients(geom);
  const RationalizedCoefficients rc = rationalize(tc);
  testutil::Rng rng(39);

  const int samples = 81;
  Eigen::MatrixXd system(samples, 27);
  Eigen::MatrixXd rhs(samples, 3);
  for (int s = 0; s < samples; ++s) {
    const double t1 = testutil::uniform(rng, -2.0, 2.0);
    const double t2 = testutil::uniform(rng, -2.0, 2.0);
    const double sigma = testutil::uniform(rng, -3.0, 3.0);
    const PoseParams pose{2.0 * std::atan(t1), 2.0 * std::atan(t2), sigma};
    const double clear = (1.0 + t1 * t1) * (1.0 + t2 * t2);
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        for (int w = 0; w < 3; ++w)
          system(s, 9 * w + 3 * p + q) =
              std::pow(t1, p) * std::pow(t2, q) * std::pow(sigma, w);
    for (int j = 0; j < 3; ++j) rhs(s, j) = clear * tc.evaluate(pose, j);
  }
  const Eigen::MatrixXd fitted =
      system.colPivHouseholderQr().solve(rhs);
  for (int j = 0; j < 3; ++j)
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        for (int w = 0; w < 3; ++w)
          CHECK(std::abs(fitted(9 * w + 3 * p + q, j) - rc.f[j][p][q].c[w]) <
                1e-8);
}
