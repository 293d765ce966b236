#pragma once

#include <Eigen/Dense>

#include <array>

namespace rrp3ss {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Fixed geometry of one RRP-3(SS) structure: an RRP open chain (two
/// revolute axes plus a prismatic slide) whose terminal link is tied to the
/// base by three rods with ball joints at both ends.
///
/// Frames: the base frame has its x-axis on the first revolute axis and its
/// z-axis on the common perpendicular of the two revolute axes at the home
/// configuration. The platform frame coincides with the base frame at home,
/// translated to the slide reference point.
struct MechanismGeometry {
  /// Rotation about the base z-axis taking the first revolute axis onto the
  /// second (radians, counterclockwise positive).
  double alpha = 0.0;
  /// Angle between the second revolute axis and the slide direction,
  /// restricted to (-pi, pi]; positive when the slide direction has a
  /// positive base-z component at home.
  double beta = 0.0;
  /// Base-frame z-coordinate of the slide reference point at home.
  double zeta = 0.0;
  /// Rod anchor centers on the base, base-frame coordinates.
  std::array<Vec3, 3> base_anchors{};
  /// Rod anchor centers on the platform, platform-frame coordinates.
  std::array<Vec3, 3> platform_anchors{};
  /// Rod lengths, all positive.
  std::array<double, 3> leg_lengths{};

  /// Throws std::invalid_argument when an invariant is violated
  /// (non-finite entry, beta out of range, non-positive leg length).
  void validate() const;

  double max_leg_length() const;
};

/// Motion parameters of the RRP open chain, measured from the home
/// configuration: two joint angles (radians) and the signed slide
/// displacement.
struct PoseParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double sigma = 0.0;

  void validate() const;  // all entries finite
};

struct AxisVectors {
  Vec3 n1;  ///< first revolute axis (base x-axis)
  Vec3 n2;  ///< second revolute axis
  Vec3 m;   ///< slide direction
};

/// Unit direction vectors of the two revolute axes and the prismatic slide,
/// base-frame components at the home configuration.
AxisVectors axis_vectors(const MechanismGeometry& geom);

/// Rotation by `theta` about the unit axis `n` (axis-angle form).
/// Throws std::invalid_argument when `n` is not unit length within 1e-12.
Mat3 rodrigues(const Vec3& n, double theta);

/// Platform orientation: rotation about the first axis composed with
/// rotation about the second axis.
Mat3 pose_rotation(const PoseParams& pose, const MechanismGeometry& geom);

/// Base-frame position of the slide reference point.
Vec3 point_q(const PoseParams& pose, const MechanismGeometry& geom);

/// Base-frame positions of the three platform anchors.
std::array<Vec3, 3> platform_points(const PoseParams& pose,
                                    const MechanismGeometry& geom);

/// True when R is orthonormal with unit determinant within `tol` per entry.
bool is_rotation(const Mat3& R, double tol = 1e-12);

/// Uniform scaling of every length in the geometry (anchors, slide offset,
/// rod lengths); angles are untouched. A pose for the scaled geometry maps
/// to the original one by scaling sigma back.
MechanismGeometry scale_lengths(const MechanismGeometry& geom, double factor);

/// Characteristic length: 1 + max rod length + |slide offset| + largest
/// anchor radius on either side. Bounds |sigma| for every assembly
/// configuration and sets the determinant interpolation radius.
double length_scale(const MechanismGeometry& geom);

/// Wrap an angle to (-pi, pi].
double normalize_angle(double theta);

}  // namespace rrp3ss
