#pragma once

#include "rrp3ss/geometry.hpp"

#include <Eigen/Dense>

namespace rrp3ss {

/// The three scalar closure equations as a square system in
/// (theta1, theta2, sigma), with closed-form Jacobian. Holds only
/// per-geometry constants; evaluation is pure.
class ClosureSystem {
 public:
  explicit ClosureSystem(const MechanismGeometry& geom);

  /// Residual vector (one expanded closure defect per rod).
  Eigen::Vector3d residuals(const PoseParams& pose) const;
  /// Jacobian with respect to (theta1, theta2, sigma).
  Eigen::Matrix3d jacobian(const PoseParams& pose) const;

  /// Natural residual magnitude: (1 + max rod length)^2.
  double residual_scale() const { return scale_; }

 private:
  Vec3 n1_, n2_, m_;
  Mat3 k1_, k2_;  // cross-product matrices of the two axes
  std::array<Vec3, 3> a_, b_;
  std::array<double, 3> const_term_;  // 0.5 (|a|^2 + |b|^2 + zeta^2 - L^2)
  std::array<double, 3> m_dot_b_;
  double zeta_ = 0.0;
  double scale_ = 1.0;
};

struct NewtonControls {
  int max_iterations = 60;
  /// Convergence bound on the residual infinity norm (absolute).
  double tolerance = 0.0;
  int max_halvings = 20;
  /// When true, a step that cannot reduce the residual aborts the run
  /// (multistart seeds); when false it is taken anyway and counted, and
  /// `growth_limit` consecutive growths abort.
  bool abandon_on_stall = true;
  int growth_limit = 3;
};

struct NewtonOutcome {
  bool converged = false;
  bool diverged = false;  // stalled or residual grew past the limit
  int iterations = 0;
  double residual_inf = 0.0;
};

/// Damped Newton iteration on the closure system; updates `pose` in place.
NewtonOutcome damped_newton(const ClosureSystem& system, PoseParams& pose,
                            const NewtonControls& controls);

}  // namespace rrp3ss
