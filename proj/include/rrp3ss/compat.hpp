#pragma once

#include "rrp3ss/geometry.hpp"

#include <array>
#include <complex>

namespace rrp3ss {

/// Polynomial in the slide variable of degree <= 2, ascending coefficients.
struct SigmaPoly {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  double operator()(double sigma) const {
    return c[0] + sigma * (c[1] + sigma * c[2]);
  }
  std::complex<double> operator()(std::complex<double> sigma) const {
    return c[0] + sigma * (c[1] + sigma * c[2]);
  }
  /// Value of the derivative polynomial.
  std::complex<double> derivative(std::complex<double> sigma) const {
    return c[1] + 2.0 * c[2] * sigma;
  }
  int degree(double tol = 0.0) const {
    if (std::abs(c[2]) > tol) return 2;
    if (std::abs(c[1]) > tol) return 1;
    return 0;
  }

  SigmaPoly& operator+=(const SigmaPoly& o) {
    for (int i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
  }
  SigmaPoly& operator-=(const SigmaPoly& o) {
    for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
  }
  SigmaPoly& operator*=(double k) {
    for (int i = 0; i < 3; ++i) c[i] *= k;
    return *this;
  }
};

/// Coefficients of the reduced closure system in the trigonometric monomial
/// basis. Equations are ordered {first leg, second minus first, third minus
/// first}; the subtraction cancels the quadratic slide term in rows 2 and 3.
///
/// Index convention for the two angle factors: 0 -> constant, 1 -> sine,
/// 2 -> cosine, so e[j][m1][m2] multiplies the monomial basis1[m1]*basis2[m2].
struct TrigCoefficients {
  std::array<std::array<std::array<SigmaPoly, 3>, 3>, 3> e{};
  /// Characteristic length of the generating geometry (see length_scale).
  double sigma_radius = 0.0;

  /// Reconstruct equation row `j` (0-based) at a pose.
  double evaluate(const PoseParams& pose, int j) const;
};

/// Coefficients of the same system after the tangent half-angle substitution
/// and clearing of denominators: f[j][p][q] multiplies t1^p * t2^q, where
/// t_i = tan(theta_i / 2). Slide degree is <= 2 in row 0 and <= 1 elsewhere.
struct RationalizedCoefficients {
  std::array<std::array<std::array<SigmaPoly, 3>, 3>, 3> f{};
  double sigma_radius = 0.0;

  int sigma_degree(int j) const { return j == 0 ? 2 : 1; }

  /// Reconstruct equation row `j` at a point (t1, t2, sigma).
  double evaluate(double t1, double t2, double sigma, int j) const;
};

/// Squared-length closure defect for one rod: |B_j - A_j|^2 - L_j^2.
/// `leg` is 1-based; zero exactly at an assembly configuration.
double residual_squared(const PoseParams& pose, const MechanismGeometry& geom,
                        int leg);

/// Closure defect of the same rod in expanded scalar form (half the negated
/// squared-length defect). `leg` is 1-based.
double residual_canonical(const PoseParams& pose, const MechanismGeometry& geom,
                          int leg);

/// The three reduced residuals {E1, E2 - E1, E3 - E1} at a pose.
std::array<double, 3> reduced_residuals(const PoseParams& pose,
                                        const MechanismGeometry& geom);

/// Closed-form coefficients of the reduced system, expanded term by term via
/// the affine decomposition of each axis rotation in {1, sin, cos}.
TrigCoefficients extract_trig_coefficients(const MechanismGeometry& geom);

/// Half-angle rationalization: substitute the rational forms of sine and
/// cosine and multiply row j by (1 + t1^2)(1 + t2^2).
RationalizedCoefficients rationalize(const TrigCoefficients& tc);

}  // namespace rrp3ss
