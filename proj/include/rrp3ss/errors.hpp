#pragma once

#include <stdexcept>
#include <string>

namespace rrp3ss {

/// Base class for all solver failures that are not plain precondition
/// violations (those throw std::invalid_argument).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The interpolated determinant polynomial kept significant coefficients
/// above degree 28. Signals ill conditioning or a geometry outside the
/// empirical degree-collapse regime.
class CollapseFailure : public Error {
 public:
  using Error::Error;
};

/// det M(sigma) vanishes at every interpolation node: the instance is
/// architecturally singular and the elimination carries no information.
class SingularGeometry : public Error {
 public:
  using Error::Error;
};

/// Root iteration failed to reach the residual bound within the cap.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A non-real root has no conjugate partner within the matching tolerance.
class UnpairedComplexRoot : public Error {
 public:
  using Error::Error;
};

/// Null-vector normalization impossible: the leading component of the
/// monomial vector is (numerically) zero, i.e. a joint angle sits at the
/// half-angle parameterization's blind spot.
class RootAtInfinity : public Error {
 public:
  using Error::Error;
};

/// The elimination matrix has a (numerically) multi-dimensional null space
/// at the requested root: several configurations share this slide value.
class AmbiguousNullSpace : public Error {
 public:
  using Error::Error;
};

/// Newton refinement moved away from the closure manifold.
class RefinementDiverged : public Error {
 public:
  using Error::Error;
};

/// A coefficient that must vanish structurally exceeded its tolerance.
class OddCoefficientLeak : public Error {
 public:
  using Error::Error;
};

/// The requested structure family is outside this solver's scope.
class NotSupported : public Error {
 public:
  using Error::Error;
};

}  // namespace rrp3ss
