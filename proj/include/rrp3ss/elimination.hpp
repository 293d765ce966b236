#pragma once

#include "rrp3ss/compat.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace rrp3ss {

inline constexpr int kEliminationSize = 24;
/// Relative threshold under which interpolated coefficients of degree > 28
/// are accepted as zero (and above which CollapseFailure is raised).
inline constexpr double kCollapseTol = 1e-8;
/// Number of interpolation nodes on the circle (even, > 33).
inline constexpr int kDeterminantNodes = 40;

using Mat24 = Eigen::Matrix<double, kEliminationSize, kEliminationSize>;
using Mat24c =
    Eigen::Matrix<std::complex<double>, kEliminationSize, kEliminationSize>;
using Vec24 = Eigen::Matrix<double, kEliminationSize, 1>;

/// Real univariate polynomial, ascending coefficients, normalized so the
/// largest-magnitude coefficient is +1 and the leading coefficient is
/// significant.
struct UnivariatePolynomial {
  std::vector<double> coeffs;

  /// Trims trailing coefficients at or below `trim_tol` times the largest
  /// magnitude, then normalizes. Throws std::invalid_argument when every
  /// coefficient vanishes.
  static UnivariatePolynomial from_coefficients(std::vector<double> raw,
                                                double trim_tol = 0.0);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> x) const;
  std::complex<double> derivative(std::complex<double> x) const;

  /// Local magnitude sum_w |h_w| |x|^w; the natural scale for residuals.
  double magnitude(double abs_x) const;
};

/// Conditioning and collapse diagnostics from the determinant interpolation.
struct EliminationDiagnostics {
  /// |h_w| / max|h| for w = 29..32 (must all be below kCollapseTol).
  std::array<double, 4> collapse_ratios{};
  /// Largest imaginary residue of the interpolated coefficients relative to
  /// max|h|; warning level is 1e-9.
  double imag_leak = 0.0;
  /// Radius of the interpolation circle used.
  double node_radius = 0.0;
  /// Raw interpolated coefficients, degrees 0..N-1, before truncation.
  std::vector<double> raw_coefficients;
  /// max_k |det(z_k)| / hadamard bound — zero-ness measure per node set.
  double det_scale_ratio = 0.0;
};

/// Row/column layout of the 24x24 elimination matrix.
/// Rows: (j, u, v) -> 8 j + 2 u + v with u in 0..3, v in 0..1; the first
/// eight rows carry the slide-quadratic equation. Columns: the monomial
/// t1^p t2^q sits in column 6 q + p with p in 0..5, q in 0..3.
Mat24 build_elimination_matrix(const RationalizedCoefficients& rc,
                               double sigma);
Mat24c build_elimination_matrix(const RationalizedCoefficients& rc,
                                std::complex<double> sigma);
/// Entry-wise derivative of the matrix with respect to the slide variable.
Mat24c build_elimination_matrix_derivative(const RationalizedCoefficients& rc,
                                           std::complex<double> sigma);

/// The 24-component monomial vector annihilated by the matrix at a solution:
/// component 6 q + p equals t1^p t2^q.
Vec24 monomial_vector(double t1, double t2);

/// The interpolation circle's node set: radius * exp(2 pi i k / count).
std::vector<std::complex<double>> determinant_nodes(double radius, int count);

/// det M at every node. Conjugate nodes are paired (the coefficients are
/// real), so only the upper half circle is factorized.
std::vector<std::complex<double>> evaluate_determinant_nodes(
    const RationalizedCoefficients& rc,
    const std::vector<std::complex<double>>& nodes);
/// Serial reference for the node sweep; identical output.
std::vector<std::complex<double>> evaluate_determinant_nodes_serial(
    const RationalizedCoefficients& rc,
    const std::vector<std::complex<double>>& nodes);

/// Determinant polynomial of the elimination matrix by evaluation at the
/// node circle and discrete-Fourier interpolation, truncated to degree 28.
/// Throws CollapseFailure when a degree-29..32 coefficient is significant and
/// SingularGeometry when the determinant vanishes at every node.
UnivariatePolynomial det_polynomial(const RationalizedCoefficients& rc,
                                    EliminationDiagnostics* diag = nullptr);
/// Same computation on the serial reference kernel.
UnivariatePolynomial det_polynomial_serial(const RationalizedCoefficients& rc,
                                           EliminationDiagnostics* diag = nullptr);

/// Rewrite p(x) as q(y) with y = x / factor (i.e. q(y) = p(factor * y)),
/// renormalized. Roots of q are roots of p divided by factor.
UnivariatePolynomial rescale_variable(const UnivariatePolynomial& p,
                                      double factor);

}  // namespace rrp3ss
