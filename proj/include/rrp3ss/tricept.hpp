#pragma once

#include "rrp3ss/solver.hpp"

#include <utility>
#include <vector>

namespace rrp3ss {

/// Type-II in-parallel stage: equilateral anchor triangles with a common
/// vertex direction set, the fixed revolute axis parallel to a side of the
/// base triangle, slide orthogonal to the platform triangle.
struct TriceptType2Geometry {
  double base_radius = 0.0;      ///< circumradius of the base triangle
  double platform_radius = 0.0;  ///< circumradius of the platform triangle
  std::array<double, 3> leg_lengths{};

  void validate() const;  // throws std::invalid_argument
};

/// Type-I variant: the fixed revolute axis goes through a base vertex.
/// Constructible for completeness; this elimination cannot solve it.
struct TriceptType1Geometry {
  double base_radius = 0.0;
  double platform_radius = 0.0;
  std::array<double, 3> leg_lengths{};

  void validate() const;
};

/// Induced general geometry: anchors r * u_i on both sides with the vertex
/// directions u_i = (cos(i 120deg - 150deg), sin(i 120deg - 150deg), 0),
/// both revolute angles at 90deg, zero slide offset.
MechanismGeometry to_general(const TriceptType2Geometry& tg);
/// Type-I counterpart (vertex directions rotated so the fixed axis passes
/// through a base vertex).
MechanismGeometry to_general(const TriceptType1Geometry& tg);

/// True when the geometry is mirror-symmetric about the base plane: zero
/// slide offset, planar anchors on both sides, slide direction orthogonal to
/// the plane.
bool has_base_plane_symmetry(const MechanismGeometry& geom, double tol = 1e-9);

/// Even part of a polynomial as a polynomial in the squared variable.
/// Throws OddCoefficientLeak when an odd coefficient exceeds tol * max|h|.
UnivariatePolynomial even_part(const UnivariatePolynomial& poly, double tol);

struct Type2SolutionSet {
  SolutionSet general;
  /// The half-degree roots: values of sigma^2, input units.
  RootSet sigma_squared;
  /// Index pairs into general.configurations related by the base-plane
  /// mirror; a self-symmetric configuration pairs with itself, an unmatched
  /// one carries -1.
  std::vector<std::pair<int, int>> mirror_pairs;
};

/// Forward kinematics of the type-II stage: the general pipeline, an
/// odd-coefficient vanishing check, the half-degree solve in sigma^2, and
/// expansion of each positive value into a mirror pair of configurations.
Type2SolutionSet solve_type2(const TriceptType2Geometry& tg,
                             const SolveOptions& options = {});

/// Refused with NotSupported: the elimination matrix degenerates on the
/// type-I family, which has its own dedicated 24-solution treatment.
SolutionSet solve_type1(const TriceptType1Geometry& tg,
                        const SolveOptions& options = {});

/// The base-plane mirror partner of a configuration (slide and both angles
/// negated; platform z-coordinates flip, x and y are preserved). Requires a
/// mirror-symmetric geometry.
AssemblyConfiguration mirror(const AssemblyConfiguration& config,
                             const MechanismGeometry& geom);

}  // namespace rrp3ss
