#include "rrp3ss/closure_newton.hpp"

#include <cmath>

namespace rrp3ss {

namespace {

Mat3 skew(const Vec3& n) {
  Mat3 s;
  s << 0.0, -n.z(), n.y(),
       n.z(), 0.0, -n.x(),
      -n.y(), n.x(), 0.0;
  return s;
}

}  // namespace

ClosureSystem::ClosureSystem(const MechanismGeometry& geom) {
  const AxisVectors av = axis_vectors(geom);
  n1_ = av.n1;
  n2_ = av.n2;
  m_ = av.m;
  k1_ = skew(n1_);
  k2_ = skew(n2_);
  zeta_ = geom.zeta;
  for (int j = 0; j < 3; ++j) {
    a_[j] = geom.base_anchors[j];
    b_[j] = geom.platform_anchors[j];
    const double length = geom.leg_lengths[j];
    const_term_[j] = 0.5 * (a_[j].squaredNorm() + b_[j].squaredNorm() +
                            zeta_ * zeta_ - length * length);
    m_dot_b_[j] = m_.dot(b_[j]);
  }
  const double lmax = geom.max_leg_length();
  scale_ = (1.0 + lmax) * (1.0 + lmax);
}

Eigen::Vector3d ClosureSystem::residuals(const PoseParams& pose) const {
  const Mat3 r1 = rodrigues(n1_, pose.theta1);
  const Mat3 r2 = rodrigues(n2_, pose.theta2);
  const Vec3 k = Vec3::UnitZ();
  const Vec3 r1k = r1 * k;
  Eigen::Vector3d out;
  for (int j = 0; j < 3; ++j) {
    const Vec3 w = pose.sigma * m_ + b_[j];
    const Vec3 r2w = r2 * w;
    out[j] = a_[j].dot(r1 * r2w) + zeta_ * a_[j].dot(r1k) - zeta_ * k.dot(r2w) -
             pose.sigma * m_dot_b_[j] -
             0.5 * pose.sigma * pose.sigma - const_term_[j];
  }
  return out;
}

Eigen::Matrix3d ClosureSystem::jacobian(const PoseParams& pose) const {
  const Mat3 r1 = rodrigues(n1_, pose.theta1);
  const Mat3 r2 = rodrigues(n2_, pose.theta2);
  // d/dtheta of a rotation about a fixed axis: K R (= R K).
  const Mat3 dr1 = k1_ * r1;
  const Mat3 dr2 = k2_ * r2;
  const Vec3 k = Vec3::UnitZ();
  const Vec3 r2m = r2 * m_;
  Eigen::Matrix3d jac;
  for (int j = 0; j < 3; ++j) {
    const Vec3 w = pose.sigma * m_ + b_[j];
    const Vec3 r2w = r2 * w;
    const Vec3 dr2w = dr2 * w;
    jac(j, 0) = a_[j].dot(dr1 * r2w) + zeta_ * a_[j].dot(dr1 * k);
    jac(j, 1) = a_[j].dot(r1 * dr2w) - zeta_ * k.dot(dr2w);
    jac(j, 2) = a_[j].dot(r1 * r2m) - zeta_ * k.dot(r2m) - m_dot_b_[j] -
                pose.sigma;
  }
  return jac;
}

NewtonOutcome damped_newton(const ClosureSystem& system, PoseParams& pose,
                            const NewtonControls& controls) {
  NewtonOutcome outcome;
  Eigen::Vector3d res = system.residuals(pose);
  double norm = res.lpNorm<Eigen::Infinity>();
  int growths = 0;

  for (int it = 0; it < controls.max_iterations; ++it) {
    outcome.iterations = it;
    if (norm <= controls.tolerance) {
      outcome.converged = true;
      outcome.residual_inf = norm;
      return outcome;
    }
    const Eigen::Matrix3d jac = system.jacobian(pose);
    const Eigen::Vector3d step = jac.partialPivLu().solve(-res);
    if (!step.allFinite()) {
      outcome.diverged = true;
      outcome.residual_inf = norm;
      return outcome;
    }

    double damping = 1.0;
    PoseParams next = pose;
    Eigen::Vector3d next_res;
    double next_norm = norm;
    bool improved = false;
    for (int h = 0; h <= controls.max_halvings; ++h) {
      next.theta1 = pose.theta1 + damping * step[0];
      next.theta2 = pose.theta2 + damping * step[1];
      next.sigma = pose.sigma + damping * step[2];
      next_res = system.residuals(next);
      next_norm = next_res.lpNorm<Eigen::Infinity>();
      if (next_norm < norm) {
        improved = true;
        break;
      }
      damping *= 0.5;
    }

    if (!improved) {
      if (controls.abandon_on_stall) {
        outcome.diverged = true;
        outcome.residual_inf = norm;
        return outcome;
      }
      if (++growths >= controls.growth_limit) {
        outcome.diverged = true;
        outcome.residual_inf = next_norm;
        pose = next;
        return outcome;
      }
    } else {
      growths = 0;
    }
    pose = next;
    res = next_res;
    norm = next_norm;
  }

  outcome.converged = norm <= controls.tolerance;
  outcome.residual_inf = norm;
  return outcome;
}

}  // namespace rrp3ss
