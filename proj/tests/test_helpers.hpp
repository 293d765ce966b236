#pragma once

#include "rrp3ss/geometry.hpp"
#include "rrp3ss/tricept.hpp"

#include <complex>
#include <random>
#include <vector>

namespace testutil {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline rrp3ss::Vec3 random_unit(Rng& rng) {
  while (true) {
    const rrp3ss::Vec3 v(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0),
                         uniform(rng, -1.0, 1.0));
    const double n = v.norm();
    if (n > 0.1 && n <= 1.0) return v / n;
  }
}

inline rrp3ss::PoseParams random_pose(Rng& rng, double sigma_span = 2.0) {
  rrp3ss::PoseParams pose;
  pose.theta1 = uniform(rng, -M_PI, M_PI);
  pose.theta2 = uniform(rng, -M_PI, M_PI);
  pose.sigma = uniform(rng, -sigma_span, sigma_span);
  return pose;
}

// Anchor coordinates uniform in [-2,2], both angles uniform, slide offset in
// [-2,2], rod lengths in [1,6]; feasibility not required.
inline rrp3ss::MechanismGeometry random_geometry(Rng& rng) {
  rrp3ss::MechanismGeometry geom;
  geom.alpha = uniform(rng, -M_PI, M_PI);
  geom.beta = uniform(rng, std::nextafter(-M_PI, 0.0), M_PI);
  geom.zeta = uniform(rng, -2.0, 2.0);
  for (int j = 0; j < 3; ++j) {
    for (int c = 0; c < 3; ++c) {
      geom.base_anchors[j][c] = uniform(rng, -2.0, 2.0);
      geom.platform_anchors[j][c] = uniform(rng, -2.0, 2.0);
    }
    geom.leg_lengths[j] = uniform(rng, 1.0, 6.0);
  }
  return geom;
}

// Random geometry with rod lengths read off a random pose, so at least one
// real assembly configuration exists by construction.
inline rrp3ss::MechanismGeometry random_feasible_geometry(Rng& rng) {
  while (true) {
    rrp3ss::MechanismGeometry geom = random_geometry(rng);
    const rrp3ss::PoseParams pose = random_pose(rng);
    const auto points = rrp3ss::platform_points(pose, geom);
    bool ok = true;
    for (int j = 0; j < 3; ++j) {
      const double dist = (points[j] - geom.base_anchors[j]).norm();
      if (dist < 0.2) {
        ok = false;
        break;
      }
      geom.leg_lengths[j] = dist;
    }
    if (ok) return geom;
  }
}

inline rrp3ss::TriceptType2Geometry random_type2(Rng& rng) {
  rrp3ss::TriceptType2Geometry tg;
  tg.base_radius = uniform(rng, 1.0, 6.0);
  tg.platform_radius = uniform(rng, 1.0, 6.0);
  for (int j = 0; j < 3; ++j) tg.leg_lengths[j] = uniform(rng, 1.0, 12.0);
  return tg;
}

// Independent rotation oracle: unit quaternion built from the axis-angle
// pair, converted with the standard quaternion-to-matrix formula.
inline rrp3ss::Mat3 quaternion_rotation(const rrp3ss::Vec3& axis,
                                        double theta) {
  const double w = std::cos(0.5 * theta);
  const rrp3ss::Vec3 v = std::sin(0.5 * theta) * axis;
  const double x = v.x(), y = v.y(), z = v.z();
  rrp3ss::Mat3 rot;
  rot << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return rot;
}

// Expand a polynomial from its roots in extended precision (monic).
inline std::vector<double> poly_from_roots(
    const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<long double>> coeff = {1.0L};
  for (const auto& root : roots) {
    const std::complex<long double> r(root.real(), root.imag());
    coeff.push_back(0.0L);
    for (std::size_t w = coeff.size() - 1; w > 0; --w)
      coeff[w] = coeff[w - 1] - r * coeff[w];
    coeff[0] = -r * coeff[0];
  }
  std::vector<double> out(coeff.size());
  for (std::size_t w = 0; w < coeff.size(); ++w)
    out[w] = static_cast<double>(coeff[w].real());
  return out;
}

// Greedy optimal matching distance between two equally sized complex sets:
// returns the largest pairwise distance in the matching.
inline double match_complex_sets(std::vector<std::complex<double>> a,
                                 std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const auto& value : a) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (used[i]) continue;
      const double dist = std::abs(value - b[i]);
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(i);
      }
    }
    used[best] = true;
    worst = std::max(worst, best_dist);
  }
  return worst;
}

}  // namespace testutil
