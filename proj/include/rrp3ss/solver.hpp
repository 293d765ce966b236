#pragma once

#include "rrp3ss/compat.hpp"
#include "rrp3ss/elimination.hpp"
#include "rrp3ss/geometry.hpp"
#include "rrp3ss/polyroots.hpp"

#include <complex>
#include <vector>

namespace rrp3ss {

/// Result of extracting (t1, t2) from the null space of the elimination
/// matrix at a (near-)root of its determinant.
struct BackSubstitution {
  double t1 = 0.0;
  double t2 = 0.0;
  /// Second-smallest singular value over the largest: the rank-gap margin.
  double nullspace_gap = 0.0;
  /// Smallest singular value over the largest: how singular the matrix is.
  double tail_ratio = 0.0;
  /// Worst relative mismatch of the null vector against the power-product
  /// structure it must follow (diagnostic only).
  double monomial_consistency = 0.0;
};

/// Null-space back-substitution at a real determinant root: full SVD, the
/// smallest right singular vector scaled to unit leading component, entries
/// two and seven read off as (t1, t2). Throws RootAtInfinity when the leading
/// component vanishes and AmbiguousNullSpace on a rank gap below 1e-6.
BackSubstitution back_substitute(const RationalizedCoefficients& rc,
                                 double sigma);

/// Same extraction at a complex root (diagnostic use; no assembly).
struct ComplexBackSubstitution {
  std::complex<double> t1, t2;
  double monomial_consistency = 0.0;
};
ComplexBackSubstitution back_substitute_complex(
    const RationalizedCoefficients& rc, std::complex<double> sigma);

/// One assembly configuration of the structure.
struct AssemblyConfiguration {
  PoseParams pose;  ///< angles normalized to (-pi, pi]
  double t1 = 0.0, t2 = 0.0;  ///< tangent half-angles of the pose
  Mat3 rotation;
  Vec3 q_point;
  std::array<Vec3, 3> platform_world{};
  /// max over rods of | |B_j - A_j| - L_j |.
  double residual_max = 0.0;
  bool refined = false;
  /// Set when the configuration was recovered by the blind-spot fallback
  /// search instead of null-space extraction.
  bool from_pi_fallback = false;
  double nullspace_gap = 0.0;
  double monomial_consistency = 0.0;
  int refine_iterations = 0;
};

AssemblyConfiguration assemble(const MechanismGeometry& geom, double sigma,
                               double t1, double t2);
AssemblyConfiguration assemble(const MechanismGeometry& geom,
                               const PoseParams& pose);

/// Newton polish of a configuration on the closure system (analytic
/// Jacobian). Requires the configuration inside the Newton basin
/// (residual_max below a tenth of the length scale); throws
/// RefinementDiverged when the residual keeps growing.
AssemblyConfiguration refine(const AssemblyConfiguration& config,
                             const MechanismGeometry& geom);

struct SolveOptions {
  double tol_real = 1e-7;   ///< real-root classification tolerance
  bool refine = true;       ///< Newton-polish each configuration
  bool want_complex = false;  ///< record complex (t1, t2) branches
  /// Newton-polish each determinant root on det M itself (trace formula)
  /// before classification; removes interpolation error from the roots.
  bool det_polish = true;
};

/// A complex root branch: slide value and extracted tangent half-angles.
struct ComplexBranch {
  std::complex<double> sigma, t1, t2;
  double monomial_consistency = 0.0;
};

struct SolveDiagnostics {
  std::array<double, 4> collapse_ratios{};
  double imag_leak = 0.0;
  double node_radius = 0.0;
  /// Length divisor applied before elimination (slide values were rescaled
  /// back afterwards).
  double scale_factor = 1.0;
  std::vector<double> roots_at_infinity;  ///< slide values at the blind spot
  std::vector<double> ambiguous_roots;    ///< rank gap below tolerance
  int fallback_configurations = 0;
  int dropped_configurations = 0;
  std::vector<ComplexBranch> complex_branches;
};

struct SolutionSet {
  MechanismGeometry geometry;
  /// Determinant polynomial in the input units, max-normalized.
  UnivariatePolynomial polynomial;
  /// All roots in input units (28 for a nondegenerate instance).
  RootSet roots;
  /// Classified real roots, ascending.
  std::vector<double> real_roots;
  /// Real assembly configurations, sorted by (sigma, theta1, theta2).
  std::vector<AssemblyConfiguration> configurations;
  SolveDiagnostics diagnostics;
};

/// Full pipeline: coefficient extraction, rationalization, determinant
/// interpolation, root finding, per-root back-substitution, assembly and
/// refinement. Throws CollapseFailure or SingularGeometry from the
/// elimination stage; per-root blind-spot hits are recorded in diagnostics
/// and recovered by a local search.
SolutionSet solve(const MechanismGeometry& geom, const SolveOptions& options = {});

}  // namespace rrp3ss
