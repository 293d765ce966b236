#pragma once

#include "rrp3ss/geometry.hpp"

#include <vector>

namespace rrp3ss {

/// Seed layout for the brute-force real-solution search.
struct OracleGrid {
  int n_theta1 = 24;          ///< angle seeds over [-pi, pi)
  int n_theta2 = 24;          ///< angle seeds over [-pi, pi)
  int n_sigma = 21;           ///< slide seeds over [-span, span]
  double sigma_span = 0.0;    ///< 0 -> length_scale(geom)
  int newton_cap = 60;
  double dedup_radius = 1e-6;

  void validate() const;  // throws std::invalid_argument
};

/// Damped-Newton multistart over the closure system: every converged and
/// deduplicated real solution, sorted by (sigma, theta1, theta2). Seeds are
/// processed concurrently; an empty result is a valid outcome.
std::vector<PoseParams> multistart(const MechanismGeometry& geom,
                                   const OracleGrid& grid = {});
/// Serial reference for the seed sweep; identical output.
std::vector<PoseParams> multistart_serial(const MechanismGeometry& geom,
                                          const OracleGrid& grid = {});

}  // namespace rrp3ss
