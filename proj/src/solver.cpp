#include "rrp3ss/solver.hpp"

#include "rrp3ss/errors.hpp"
#include "pipeline_internal.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rrp3ss {

namespace {

constexpr double kInfinityTol = 1e-8;   // |v_0| below this is a blind spot
constexpr double kAmbiguousGap = 1e-6;  // rank-gap threshold, relative

struct NullVector {
  Vec24 v;
  double s1, s23, s24;
};

NullVector smallest_singular_direction(const Mat24& mat) {
  Eigen::JacobiSVD<Mat24> svd(mat, Eigen::ComputeFullV);
  NullVector out;
  out.v = svd.matrixV().col(kEliminationSize - 1);
  const auto& sv = svd.singularValues();
  out.s1 = sv[0];
  out.s23 = sv[kEliminationSize - 2];
  out.s24 = sv[kEliminationSize - 1];
  return out;
}

template <typename Scalar>
double monomial_mismatch(const Eigen::Matrix<Scalar, kEliminationSize, 1>& v,
                         Scalar t1, Scalar t2) {
  double worst = 0.0;
  Scalar pow2 = Scalar(1.0);
  for (int q = 0; q < 4; ++q) {
    Scalar pow1 = Scalar(1.0);
    for (int p = 0; p < 6; ++p) {
      const Scalar expected = pow1 * pow2;
      const double err =
          std::abs(v[6 * q + p] - expected) / (1.0 + std::abs(expected));
      worst = std::max(worst, err);
      pow1 *= t1;
    }
    pow2 *= t2;
  }
  return worst;
}

BackSubstitution back_substitute_checked(const RationalizedCoefficients& rc,
                                         double sigma, bool enforce_gap) {
  const Mat24 mat = build_elimination_matrix(rc, sigma);
  const NullVector nv = smallest_singular_direction(mat);
  if (nv.s1 == 0.0)
    throw SingularGeometry("elimination matrix vanished at the root");
  if (enforce_gap && (nv.s23 - nv.s24) <= kAmbiguousGap * nv.s1)
    throw AmbiguousNullSpace(
        "several configurations share this slide value (rank gap below "
        "tolerance)");
  if (std::abs(nv.v[0]) <= kInfinityTol)  // the vector is unit norm
    throw RootAtInfinity(
        "leading null-vector component vanishes: a joint angle sits at the "
        "half-angle blind spot");

  Vec24 scaled = nv.v / nv.v[0];
  BackSubstitution out;
  out.t1 = scaled[1];
  out.t2 = scaled[6];
  out.nullspace_gap = nv.s23 / nv.s1;
  out.tail_ratio = nv.s24 / nv.s1;
  out.monomial_consistency = monomial_mismatch<double>(scaled, out.t1, out.t2);
  return out;
}

// Local search for solutions whose joint angle sits at pi: seed the closure
// Newton at the blind spot over a coarse sweep of the other angle, keeping
// converged poses whose slide value matches the triggering root.
std::vector<PoseParams> blind_spot_search(const ClosureSystem& system,
                                          double sigma_star) {
  constexpr int kSweep = 16;
  NewtonControls controls;
  controls.max_iterations = 80;
  controls.tolerance = 1e-12 * system.residual_scale();
  const double sigma_tol = 1e-6 * (1.0 + std::abs(sigma_star));

  std::vector<PoseParams> found;
  for (int axis = 0; axis < 2; ++axis)
    for (int g = 0; g < kSweep; ++g) {
      const double other = -M_PI + 2.0 * M_PI * double(g) / kSweep;
      PoseParams pose;
      pose.theta1 = axis == 0 ? M_PI : other;
      pose.theta2 = axis == 0 ? other : M_PI;
      pose.sigma = sigma_star;
      const NewtonOutcome outcome = damped_newton(system, pose, controls);
      if (!outcome.converged) continue;
      if (std::abs(pose.sigma - sigma_star) > sigma_tol) continue;
      pose.theta1 = normalize_angle(pose.theta1);
      pose.theta2 = normalize_angle(pose.theta2);
      bool seen = false;
      for (const PoseParams& kept : found)
        if (std::abs(normalize_angle(pose.theta1 - kept.theta1)) <= 1e-8 &&
            std::abs(normalize_angle(pose.theta2 - kept.theta2)) <= 1e-8 &&
            std::abs(pose.sigma - kept.sigma) <= 1e-8) {
          seen = true;
          break;
        }
      if (!seen) found.push_back(pose);
    }
  return found;
}

// Refine (when requested), enforce closure, deduplicate, push.
void finalize_configuration(AssemblyConfiguration config,
                            const MechanismGeometry& geom,
                            const SolveOptions& options,
                            std::vector<AssemblyConfiguration>& configurations,
                            SolveDiagnostics& diagnostics) {
  const double length_bound = 1.0 + geom.max_leg_length();
  if (options.refine && config.residual_max < 0.1 * length_bound) {
    try {
      config = refine(config, geom);
    } catch (const RefinementDiverged&) {
      // keep the unrefined configuration; the closure filter decides
    }
  }
  if (options.refine && config.residual_max > 1e-8 * length_bound) {
    ++diagnostics.dropped_configurations;
    return;
  }
  for (const AssemblyConfiguration& kept : configurations)
    if (detail::same_configuration(config, kept)) return;
  configurations.push_back(std::move(config));
}

}  // namespace

namespace detail {

EliminationPipeline run_elimination(const MechanismGeometry& geom) {
  geom.validate();
  EliminationPipeline pipeline;
  pipeline.geometry = geom;
  pipeline.scale = 0.5 * length_scale(geom);
  const MechanismGeometry scaled = scale_lengths(geom, 1.0 / pipeline.scale);
  pipeline.rc = rationalize(extract_trig_coefficients(scaled));
  pipeline.scaled_polynomial =
      det_polynomial(pipeline.rc, &pipeline.elimination);
  return pipeline;
}

std::complex<double> polish_on_determinant(const RationalizedCoefficients& rc,
                                           std::complex<double> sigma) {
  const std::complex<double> origin = sigma;
  for (int it = 0; it < 6; ++it) {
    const Mat24c mat = build_elimination_matrix(rc, sigma);
    const Eigen::PartialPivLU<Mat24c> lu(mat);
    const Mat24c deriv = build_elimination_matrix_derivative(rc, sigma);
    const std::complex<double> trace = lu.solve(deriv).trace();
    if (!std::isfinite(trace.real()) || !std::isfinite(trace.imag()) ||
        trace == std::complex<double>(0.0))
      break;
    const std::complex<double> step = 1.0 / trace;
    sigma -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(sigma))) break;
  }
  // Only a local correction is trusted.
  if (std::abs(sigma - origin) > 1e-6 * (1.0 + std::abs(origin))) return origin;
  return sigma;
}

void realize_real_root(const EliminationPipeline& pipeline,
                       const SolveOptions& options, double sigma_scaled,
                       std::vector<AssemblyConfiguration>& configurations,
                       SolveDiagnostics& diagnostics) {
  const MechanismGeometry& geom = pipeline.geometry;
  const double sigma = sigma_scaled * pipeline.scale;
  try {
    const BackSubstitution bs =
        back_substitute(pipeline.rc, sigma_scaled);
    AssemblyConfiguration config = assemble(geom, sigma, bs.t1, bs.t2);
    config.nullspace_gap = bs.nullspace_gap;
    config.monomial_consistency = bs.monomial_consistency;
    finalize_configuration(std::move(config), geom, options, configurations,
                           diagnostics);
  } catch (const RootAtInfinity&) {
    diagnostics.roots_at_infinity.push_back(sigma);
    const ClosureSystem system(geom);
    for (const PoseParams& pose : blind_spot_search(system, sigma)) {
      AssemblyConfiguration config = assemble(geom, pose);
      config.from_pi_fallback = true;
      const std::size_t before = configurations.size();
      finalize_configuration(std::move(config), geom, options, configurations,
                             diagnostics);
      if (configurations.size() > before) ++diagnostics.fallback_configurations;
    }
  } catch (const AmbiguousNullSpace&) {
    diagnostics.ambiguous_roots.push_back(sigma);
    // Principal direction only; the closure filter validates it.
    const BackSubstitution bs =
        back_substitute_checked(pipeline.rc, sigma_scaled, false);
    AssemblyConfiguration config = assemble(geom, sigma, bs.t1, bs.t2);
    config.nullspace_gap = bs.nullspace_gap;
    config.monomial_consistency = bs.monomial_consistency;
    finalize_configuration(std::move(config), geom, options, configurations,
                           diagnostics);
  }
}

void sort_configurations(std::vector<AssemblyConfiguration>& configurations) {
  std::sort(configurations.begin(), configurations.end(),
            [](const AssemblyConfiguration& a, const AssemblyConfiguration& b) {
              if (a.pose.sigma != b.pose.sigma) return a.pose.sigma < b.pose.sigma;
              if (a.pose.theta1 != b.pose.theta1)
                return a.pose.theta1 < b.pose.theta1;
              return a.pose.theta2 < b.pose.theta2;
            });
}

bool same_configuration(const AssemblyConfiguration& a,
                        const AssemblyConfiguration& b, double tol) {
  return std::abs(a.pose.sigma - b.pose.sigma) <=
             tol * (1.0 + std::abs(a.pose.sigma)) &&
         std::abs(normalize_angle(a.pose.theta1 - b.pose.theta1)) <= tol &&
         std::abs(normalize_angle(a.pose.theta2 - b.pose.theta2)) <= tol;
}

}  // namespace detail

BackSubstitution back_substitute(const RationalizedCoefficients& rc,
                                 double sigma) {
  return back_substitute_checked(rc, sigma, true);
}

ComplexBackSubstitution back_substitute_complex(
    const RationalizedCoefficients& rc, std::complex<double> sigma) {
  using Vec24c = Eigen::Matrix<std::complex<double>, kEliminationSize, 1>;
  const Mat24c mat = build_elimination_matrix(rc, sigma);
  Eigen::JacobiSVD<Mat24c> svd(mat, Eigen::ComputeFullV);
  const Vec24c v = svd.matrixV().col(kEliminationSize - 1);
  if (std::abs(v[0]) <= kInfinityTol)
    throw RootAtInfinity("leading null-vector component vanishes");
  const Vec24c scaled = v / v[0];
  ComplexBackSubstitution out;
  out.t1 = scaled[1];
  out.t2 = scaled[6];
  out.monomial_consistency =
      monomial_mismatch<std::complex<double>>(scaled, out.t1, out.t2);
  return out;
}

AssemblyConfiguration assemble(const MechanismGeometry& geom,
                               const PoseParams& pose) {
  geom.validate();
  pose.validate();
  AssemblyConfiguration config;
  config.pose.theta1 = normalize_angle(pose.theta1);
  config.pose.theta2 = normalize_angle(pose.theta2);
  config.pose.sigma = pose.sigma;
  config.t1 = std::tan(0.5 * config.pose.theta1);
  config.t2 = std::tan(0.5 * config.pose.theta2);
  config.rotation = pose_rotation(config.pose, geom);
  config.q_point = point_q(config.pose, geom);
  config.platform_world = platform_points(config.pose, geom);
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double dist =
        (config.platform_world[j] - geom.base_anchors[j]).norm();
    worst = std::max(worst, std::abs(dist - geom.leg_lengths[j]));
  }
  config.residual_max = worst;
  return config;
}

AssemblyConfiguration assemble(const MechanismGeometry& geom, double sigma,
                               double t1, double t2) {
  PoseParams pose;
  pose.theta1 = 2.0 * std::atan(t1);
  pose.theta2 = 2.0 * std::atan(t2);
  pose.sigma = sigma;
  AssemblyConfiguration config = assemble(geom, pose);
  config.t1 = t1;
  config.t2 = t2;
  return config;
}

AssemblyConfiguration refine(const AssemblyConfiguration& config,
                             const MechanismGeometry& geom) {
  const double length_bound = 1.0 + geom.max_leg_length();
  if (!(config.residual_max < 0.1 * length_bound))
    throw std::invalid_argument("refine: configuration outside the basin");

  const ClosureSystem system(geom);
  NewtonControls controls;
  controls.max_iterations = 50;
  controls.tolerance = 1e-12 * system.residual_scale();
  controls.abandon_on_stall = false;
  controls.growth_limit = 3;

  PoseParams pose = config.pose;
  const NewtonOutcome outcome = damped_newton(system, pose, controls);
  if (outcome.diverged)
    throw RefinementDiverged("closure residual kept growing");

  // A couple of full steps past the stopping bound reach roundoff level.
  NewtonControls polish = controls;
  polish.max_iterations = 3;
  polish.tolerance = 0.0;
  polish.abandon_on_stall = true;
  damped_newton(system, pose, polish);

  AssemblyConfiguration refined = assemble(geom, pose);
  refined.refined = true;
  refined.refine_iterations = outcome.iterations;
  refined.from_pi_fallback = config.from_pi_fallback;
  refined.nullspace_gap = config.nullspace_gap;
  refined.monomial_consistency = config.monomial_consistency;
  return refined;
}

SolutionSet solve(const MechanismGeometry& geom, const SolveOptions& options) {
  const detail::EliminationPipeline pipeline = detail::run_elimination(geom);

  RootSet scaled_roots = all_roots(pipeline.scaled_polynomial, options.tol_real);
  if (options.det_polish)
    for (std::complex<double>& root : scaled_roots.roots)
      root = detail::polish_on_determinant(pipeline.rc, root);

  SolutionSet set;
  set.geometry = geom;
  set.polynomial =
      rescale_variable(pipeline.scaled_polynomial, 1.0 / pipeline.scale);
  set.roots.tol_real = options.tol_real;
  for (const std::complex<double>& root : scaled_roots.roots)
    set.roots.roots.push_back(root * pipeline.scale);
  std::sort(set.roots.roots.begin(), set.roots.roots.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  for (const std::complex<double>& root : set.roots.roots) {
    const double scale = set.polynomial.magnitude(std::abs(root));
    set.roots.residuals.push_back(
        scale > 0.0 ? std::abs(set.polynomial(root)) / scale : 0.0);
    set.roots.is_real.push_back(
        std::abs(root.imag()) <=
        options.tol_real * (1.0 + std::abs(root.real())));
  }

  const RealComplexSplit split = classify_real(set.roots, options.tol_real);
  set.real_roots = split.real_roots;

  set.diagnostics.collapse_ratios = pipeline.elimination.collapse_ratios;
  set.diagnostics.imag_leak = pipeline.elimination.imag_leak;
  set.diagnostics.node_radius = pipeline.elimination.node_radius;
  set.diagnostics.scale_factor = pipeline.scale;

  for (double sigma : set.real_roots)
    detail::realize_real_root(pipeline, options, sigma / pipeline.scale,
                              set.configurations, set.diagnostics);
  detail::sort_configurations(set.configurations);

  if (options.want_complex) {
    for (const std::complex<double>& rep : split.complex_pairs) {
      try {
        const ComplexBackSubstitution bs =
            back_substitute_complex(pipeline.rc, rep / pipeline.scale);
        set.diagnostics.complex_branches.push_back(
            {rep, bs.t1, bs.t2, bs.monomial_consistency});
      } catch (const RootAtInfinity&) {
        set.diagnostics.roots_at_infinity.push_back(rep.real());
      }
    }
  }
  return set;
}

}  // namespace rrp3ss
