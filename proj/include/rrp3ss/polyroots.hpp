#pragma once

#include "rrp3ss/elimination.hpp"

#include <complex>
#include <vector>

namespace rrp3ss {

/// All complex roots of a real polynomial, with per-root diagnostics.
struct RootSet {
  std::vector<std::complex<double>> roots;  ///< sorted by (re, im)
  std::vector<double> residuals;            ///< |p(r)| / sum |h_w| |r|^w
  std::vector<bool> is_real;                ///< under the tolerance used
  double tol_real = 0.0;                    ///< tolerance the flags refer to

  std::size_t size() const { return roots.size(); }
};

/// Real roots and one representative (positive imaginary part) per conjugate
/// pair.
struct RealComplexSplit {
  std::vector<double> real_roots;                   ///< ascending
  std::vector<std::complex<double>> complex_pairs;  ///< sorted by (re, im)
};

/// Simultaneous (Aberth) iteration over all roots, Newton-polished, with a
/// companion-matrix eigenvalue fallback. Every root satisfies
/// |p(r)| <= 1e-9 * sum |h_w| |r|^w, else NonConvergence is thrown.
RootSet all_roots(const UnivariatePolynomial& poly, double tol_real = 1e-7);

/// Split a root set into real roots and conjugate pairs. A root is real when
/// |Im r| <= tol_real * (1 + |Re r|); remaining roots must pair up with a
/// conjugate partner (UnpairedComplexRoot otherwise). Pairs are symmetrized.
RealComplexSplit classify_real(const RootSet& roots, double tol_real);

}  // namespace rrp3ss
