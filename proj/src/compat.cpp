#include "rrp3ss/compat.hpp"

#include <cmath>
#include <stdexcept>

namespace rrp3ss {

namespace {

void check_leg(int leg) {
  if (leg < 1 || leg > 3)
    throw std::invalid_argument("leg index must be 1, 2, or 3");
}

Mat3 skew(const Vec3& n) {
  Mat3 s;
  s << 0.0, -n.z(), n.y(),
       n.z(), 0.0, -n.x(),
      -n.y(), n.x(), 0.0;
  return s;
}

// R_i = basis[0] + sin(theta) * basis[1] + cos(theta) * basis[2].
std::array<Mat3, 3> rotation_basis(const Vec3& n) {
  const Mat3 outer = n * n.transpose();
  return {outer, skew(n), Mat3::Identity() - outer};
}

}  // namespace

double TrigCoefficients::evaluate(const PoseParams& pose, int j) const {
  const double s1 = std::sin(pose.theta1), c1 = std::cos(pose.theta1);
  const double s2 = std::sin(pose.theta2), c2 = std::cos(pose.theta2);
  const double b1[3] = {1.0, s1, c1};
  const double b2[3] = {1.0, s2, c2};
  double value = 0.0;
  for (int m1 = 0; m1 < 3; ++m1)
    for (int m2 = 0; m2 < 3; ++m2)
      value += e[j][m1][m2](pose.sigma) * b1[m1] * b2[m2];
  return value;
}

double RationalizedCoefficients::evaluate(double t1, double t2, double sigma,
                                          int j) const {
  const double p1[3] = {1.0, t1, t1 * t1};
  const double p2[3] = {1.0, t2, t2 * t2};
  double value = 0.0;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      value += f[j][p][q](sigma) * p1[p] * p2[q];
  return value;
}

double residual_squared(const PoseParams& pose, const MechanismGeometry& geom,
                        int leg) {
  check_leg(leg);
  const auto points = platform_points(pose, geom);
  const Vec3 d = points[leg - 1] - geom.base_anchors[leg - 1];
  const double length = geom.leg_lengths[leg - 1];
  return d.squaredNorm() - length * length;
}

double residual_canonical(const PoseParams& pose, const MechanismGeometry& geom,
                          int leg) {
  check_leg(leg);
  const int j = leg - 1;
  const AxisVectors av = axis_vectors(geom);
  const Mat3 r1 = rodrigues(av.n1, pose.theta1);
  const Mat3 r2 = rodrigues(av.n2, pose.theta2);
  const Vec3 a = geom.base_anchors[j];
  const Vec3 b = geom.platform_anchors[j];
  const Vec3 w = pose.sigma * av.m + b;
  const double length = geom.leg_lengths[j];
  const Vec3 k = Vec3::UnitZ();
  return a.dot(r1 * (r2 * w)) + geom.zeta * a.dot(r1 * k) -
         geom.zeta * k.dot(r2 * w) - pose.sigma * av.m.dot(b) -
         0.5 * (pose.sigma * pose.sigma + a.squaredNorm() + b.squaredNorm() +
                geom.zeta * geom.zeta - length * length);
}

std::array<double, 3> reduced_residuals(const PoseParams& pose,
                                        const MechanismGeometry& geom) {
  const double e1 = residual_canonical(pose, geom, 1);
  const double e2 = residual_canonical(pose, geom, 2);
  const double e3 = residual_canonical(pose, geom, 3);
  return {e1, e2 - e1, e3 - e1};
}

TrigCoefficients extract_trig_coefficients(const MechanismGeometry& geom) {
  geom.validate();
  const AxisVectors av = axis_vectors(geom);
  const auto basis1 = rotation_basis(av.n1);
  const auto basis2 = rotation_basis(av.n2);
  const Vec3 k = Vec3::UnitZ();

  // Unreduced coefficients of the three closure equations.
  std::array<std::array<std::array<SigmaPoly, 3>, 3>, 3> raw{};
  for (int j = 0; j < 3; ++j) {
    const Vec3 a = geom.base_anchors[j];
    const Vec3 b = geom.platform_anchors[j];
    const double length = geom.leg_lengths[j];

    for (int m1 = 0; m1 < 3; ++m1) {
      for (int m2 = 0; m2 < 3; ++m2) {
        const Mat3 g = basis1[m1] * basis2[m2];
        raw[j][m1][m2].c[0] += a.dot(g * b);
        raw[j][m1][m2].c[1] += a.dot(g * av.m);
      }
      raw[j][m1][0].c[0] += geom.zeta * a.dot(basis1[m1] * k);
    }
    for (int m2 = 0; m2 < 3; ++m2) {
      raw[j][0][m2].c[0] -= geom.zeta * k.dot(basis2[m2] * b);
      raw[j][0][m2].c[1] -= geom.zeta * k.dot(basis2[m2] * av.m);
    }
    raw[j][0][0].c[1] -= av.m.dot(b);
    raw[j][0][0].c[2] -= 0.5;
    raw[j][0][0].c[0] -= 0.5 * (a.squaredNorm() + b.squaredNorm() +
                                geom.zeta * geom.zeta - length * length);
  }

  TrigCoefficients tc;
  tc.sigma_radius = length_scale(geom);
  for (int m1 = 0; m1 < 3; ++m1)
    for (int m2 = 0; m2 < 3; ++m2) {
      tc.e[0][m1][m2] = raw[0][m1][m2];
      for (int j = 1; j < 3; ++j) {
        tc.e[j][m1][m2] = raw[j][m1][m2];
        tc.e[j][m1][m2] -= raw[0][m1][m2];
      }
    }
  return tc;
}

RationalizedCoefficients rationalize(const TrigCoefficients& tc) {
  // Numerators of {1, sin, cos} after multiplying by (1 + t^2), as
  // polynomials in t: 1 -> 1 + t^2, sin -> 2t, cos -> 1 - t^2.
  static constexpr double kWeight[3][3] = {
      {1.0, 0.0, 1.0}, {0.0, 2.0, 0.0}, {1.0, 0.0, -1.0}};

  RationalizedCoefficients rc;
  rc.sigma_radius = tc.sigma_radius;
  for (int j = 0; j < 3; ++j)
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        SigmaPoly acc;
        for (int m1 = 0; m1 < 3; ++m1) {
          if (kWeight[m1][p] == 0.0) continue;
          for (int m2 = 0; m2 < 3; ++m2) {
            if (kWeight[m2][q] == 0.0) continue;
            SigmaPoly term = tc.e[j][m1][m2];
            term *= kWeight[m1][p] * kWeight[m2][q];
            acc += term;
          }
        }
        rc.f[j][p][q] = acc;
      }
  return rc;
}

}  // namespace rrp3ss
