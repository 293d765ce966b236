#include "rrp3ss/oracle.hpp"

#include "rrp3ss/closure_newton.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace rrp3ss {

namespace {

constexpr double kAcceptTol = 1e-11;  // times the closure scale

double wrapped_distance(double a, double b) {
  return std::abs(normalize_angle(a - b));
}

bool same_solution(const PoseParams& a, const PoseParams& b, double radius) {
  return wrapped_distance(a.theta1, b.theta1) <= radius &&
         wrapped_distance(a.theta2, b.theta2) <= radius &&
         std::abs(a.sigma - b.sigma) <= radius;
}

std::vector<PoseParams> multistart_impl(const MechanismGeometry& geom,
                                        const OracleGrid& grid, bool parallel) {
  geom.validate();
  grid.validate();
  const ClosureSystem system(geom);
  const double span =
      grid.sigma_span > 0.0 ? grid.sigma_span : length_scale(geom);

  NewtonControls controls;
  controls.max_iterations = grid.newton_cap;
  controls.tolerance = kAcceptTol * system.residual_scale();
  controls.abandon_on_stall = true;

  const int total = grid.n_theta1 * grid.n_theta2 * grid.n_sigma;
  std::vector<std::optional<PoseParams>> slots(total);

  auto run_seed = [&](int index) {
    const int i1 = index / (grid.n_theta2 * grid.n_sigma);
    const int i2 = (index / grid.n_sigma) % grid.n_theta2;
    const int is = index % grid.n_sigma;
    PoseParams pose;
    pose.theta1 = -M_PI + 2.0 * M_PI * double(i1) / grid.n_theta1;
    pose.theta2 = -M_PI + 2.0 * M_PI * double(i2) / grid.n_theta2;
    pose.sigma = -span + 2.0 * span * double(is) / (grid.n_sigma - 1);

    NewtonOutcome outcome = damped_newton(system, pose, controls);
    if (!outcome.converged) return;
    if (std::abs(pose.sigma) > 2.0 * span) return;  // ran away

    // Two undamped polish steps push the residual to roundoff.
    NewtonControls polish = controls;
    polish.max_iterations = 2;
    polish.tolerance = 0.0;
    damped_newton(system, pose, polish);

    pose.theta1 = normalize_angle(pose.theta1);
    pose.theta2 = normalize_angle(pose.theta2);
    slots[index] = pose;
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (int index = 0; index < total; ++index) run_seed(index);
  } else {
    for (int index = 0; index < total; ++index) run_seed(index);
  }

  // Sequential deduplication in seed order keeps the result independent of
  // the thread count.
  std::vector<PoseParams> unique;
  for (const auto& slot : slots) {
    if (!slot) continue;
    bool seen = false;
    for (const PoseParams& kept : unique)
      if (same_solution(*slot, kept, grid.dedup_radius)) {
        seen = true;
        break;
      }
    if (!seen) unique.push_back(*slot);
  }

  std::sort(unique.begin(), unique.end(),
            [](const PoseParams& a, const PoseParams& b) {
              if (a.sigma != b.sigma) return a.sigma < b.sigma;
              if (a.theta1 != b.theta1) return a.theta1 < b.theta1;
              return a.theta2 < b.theta2;
            });
  return unique;
}

}  // namespace

void OracleGrid::validate() const {
  if (n_theta1 < 2 || n_theta2 < 2 || n_sigma < 2)
    throw std::invalid_argument("oracle grid: sample counts must be >= 2");
  if (sigma_span < 0.0 || newton_cap < 1 || dedup_radius <= 0.0)
    throw std::invalid_argument("oracle grid: bad parameter");
}

std::vector<PoseParams> multistart(const MechanismGeometry& geom,
                                   const OracleGrid& grid) {
  return multistart_impl(geom, grid, true);
}

std::vector<PoseParams> multistart_serial(const MechanismGeometry& geom,
                                          const OracleGrid& grid) {
  return multistart_impl(geom, grid, false);
}

}  // namespace rrp3ss
