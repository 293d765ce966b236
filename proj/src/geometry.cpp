#include "rrp3ss/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace rrp3ss {

namespace {

bool finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

}  // namespace

void MechanismGeometry::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(zeta))
    throw std::invalid_argument("geometry: non-finite angle or slide offset");
  if (!(beta > -M_PI && beta <= M_PI))
    throw std::invalid_argument("geometry: beta must lie in (-pi, pi]");
  for (int j = 0; j < 3; ++j) {
    if (!finite(base_anchors[j]) || !finite(platform_anchors[j]))
      throw std::invalid_argument("geometry: non-finite anchor coordinate");
    if (!(leg_lengths[j] > 0.0) || !std::isfinite(leg_lengths[j]))
      throw std::invalid_argument("geometry: leg lengths must be positive");
  }
}

double MechanismGeometry::max_leg_length() const {
  return std::max({leg_lengths[0], leg_lengths[1], leg_lengths[2]});
}

void PoseParams::validate() const {
  if (!std::isfinite(theta1) || !std::isfinite(theta2) || !std::isfinite(sigma))
    throw std::invalid_argument("pose: non-finite parameter");
}

AxisVectors axis_vectors(const MechanismGeometry& geom) {
  const double ca = std::cos(geom.alpha), sa = std::sin(geom.alpha);
  const double cb = std::cos(geom.beta), sb = std::sin(geom.beta);
  AxisVectors av;
  av.n1 = Vec3(1.0, 0.0, 0.0);
  av.n2 = Vec3(ca, sa, 0.0);
  av.m = Vec3(ca * cb, sa * cb, sb);
  return av;
}

Mat3 rodrigues(const Vec3& n, double theta) {
  if (std::abs(n.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("rodrigues: axis must be unit length");
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 skew;
  skew << 0.0, -n.z(), n.y(),
          n.z(), 0.0, -n.x(),
         -n.y(), n.x(), 0.0;
  return c * Mat3::Identity() + (1.0 - c) * (n * n.transpose()) + s * skew;
}

Mat3 pose_rotation(const PoseParams& pose, const MechanismGeometry& geom) {
  const AxisVectors av = axis_vectors(geom);
  return rodrigues(av.n1, pose.theta1) * rodrigues(av.n2, pose.theta2);
}

Vec3 point_q(const PoseParams& pose, const MechanismGeometry& geom) {
  const AxisVectors av = axis_vectors(geom);
  const Mat3 r1 = rodrigues(av.n1, pose.theta1);
  const Mat3 r2 = rodrigues(av.n2, pose.theta2);
  return geom.zeta * (r1 * Vec3::UnitZ()) + pose.sigma * (r1 * (r2 * av.m));
}

std::array<Vec3, 3> platform_points(const PoseParams& pose,
                                    const MechanismGeometry& geom) {
  const AxisVectors av = axis_vectors(geom);
  const Mat3 r1 = rodrigues(av.n1, pose.theta1);
  const Mat3 r2 = rodrigues(av.n2, pose.theta2);
  const Vec3 base = geom.zeta * (r1 * Vec3::UnitZ());
  std::array<Vec3, 3> out;
  for (int j = 0; j < 3; ++j)
    out[j] = base + r1 * (r2 * (pose.sigma * av.m + geom.platform_anchors[j]));
  return out;
}

bool is_rotation(const Mat3& R, double tol) {
  const Mat3 gram = R.transpose() * R;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(R.determinant() - 1.0) <= tol;
}

MechanismGeometry scale_lengths(const MechanismGeometry& geom, double factor) {
  MechanismGeometry out = geom;
  out.zeta *= factor;
  for (int j = 0; j < 3; ++j) {
    out.base_anchors[j] *= factor;
    out.platform_anchors[j] *= factor;
    out.leg_lengths[j] *= factor;
  }
  return out;
}

double length_scale(const MechanismGeometry& geom) {
  double amax = 0.0, bmax = 0.0;
  for (int j = 0; j < 3; ++j) {
    amax = std::max(amax, geom.base_anchors[j].norm());
    bmax = std::max(bmax, geom.platform_anchors[j].norm());
  }
  return 1.0 + geom.max_leg_length() + std::abs(geom.zeta) + amax + bmax;
}

double normalize_angle(double theta) {
  double t = std::remainder(theta, 2.0 * M_PI);
  if (t <= -M_PI) t += 2.0 * M_PI;  // remainder may return exactly -pi
  return t;
}

}  // namespace rrp3ss
