#include "rrp3ss/polyroots.hpp"

#include "rrp3ss/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rrp3ss {

namespace {

using Complex = std::complex<double>;

constexpr double kResidualBound = 1e-9;   // acceptance bound, relative
constexpr double kRoundoffStop = 1e-14;   // per-root early stop, relative
constexpr int kMaxSweeps = 200;
constexpr int kPolishSteps = 24;

struct Evaluation {
  Complex value;
  Complex slope;
  double scale;  // sum |h_w| |x|^w
};

Evaluation evaluate(const UnivariatePolynomial& poly, Complex x) {
  Complex value = 0.0, slope = 0.0;
  double scale = 0.0;
  const double ax = std::abs(x);
  for (int w = poly.degree(); w >= 0; --w) {
    slope = slope * x + value;
    value = value * x + poly.coeffs[w];
    scale = scale * ax + std::abs(poly.coeffs[w]);
  }
  return {value, slope, scale};
}

// Initial moduli from the Newton polygon (upper convex hull of
// (w, log|h_w|)): each hull edge contributes its slope as the radius for as
// many starting points as the edge spans. Adapts to clustered magnitudes
// where a single inclusion circle converges slowly.
std::vector<double> initial_moduli(const UnivariatePolynomial& poly) {
  const int n = poly.degree();
  std::vector<std::pair<int, double>> pts;
  for (int w = 0; w <= n; ++w)
    if (poly.coeffs[w] != 0.0)
      pts.emplace_back(w, std::log(std::abs(poly.coeffs[w])));

  std::vector<std::pair<int, double>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      // Drop b when it lies below the segment a--pt.
      if ((b.second - a.second) * (pt.first - a.first) <=
          (pt.second - a.second) * (b.first - a.first))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }

  std::vector<double> moduli;
  moduli.reserve(n);
  // Exact zeros below the first hull point start (numerically) at zero.
  for (int w = 0; w < hull.front().first; ++w) moduli.push_back(1e-12);
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const auto& [w0, y0] = hull[e];
    const auto& [w1, y1] = hull[e + 1];
    const double radius = std::exp((y0 - y1) / double(w1 - w0));
    for (int k = 0; k < w1 - w0; ++k) moduli.push_back(radius);
  }
  return moduli;
}

// One pass of per-root Newton polishing.
void polish(const UnivariatePolynomial& poly, std::vector<Complex>& roots) {
  for (Complex& root : roots) {
    for (int it = 0; it < kPolishSteps; ++it) {
      const Evaluation ev = evaluate(poly, root);
      if (std::abs(ev.value) <= kRoundoffStop * ev.scale) break;
      if (ev.slope == Complex(0.0)) break;
      const Complex step = ev.value / ev.slope;
      root -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(root))) break;
    }
  }
}

bool residuals_ok(const UnivariatePolynomial& poly,
                  const std::vector<Complex>& roots) {
  for (const Complex& root : roots) {
    const Evaluation ev = evaluate(poly, root);
    if (!(std::abs(ev.value) <= kResidualBound * ev.scale)) return false;
  }
  return true;
}

std::vector<Complex> aberth(const UnivariatePolynomial& poly) {
  const int n = poly.degree();
  std::vector<Complex> z(n);
  const std::vector<double> moduli = initial_moduli(poly);
  for (int k = 0; k < n; ++k)
    z[k] = std::polar(moduli[k], 2.0 * M_PI * double(k) / n + 0.7);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool settled = true;
    for (int k = 0; k < n; ++k) {
      const Evaluation ev = evaluate(poly, z[k]);
      if (std::abs(ev.value) <= kRoundoffStop * ev.scale) continue;
      settled = false;
      if (ev.slope == Complex(0.0)) {
        z[k] *= Complex(1.0 + 1e-8, 1e-8);
        continue;
      }
      const Complex newton = ev.value / ev.slope;
      Complex repulsion = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k && z[k] != z[j]) repulsion += 1.0 / (z[k] - z[j]);
      const Complex denom = 1.0 - newton * repulsion;
      const Complex step = denom == Complex(0.0) ? newton : newton / denom;
      z[k] -= step;
    }
    if (settled) break;
  }
  return z;
}

std::vector<Complex> companion_eigenvalues(const UnivariatePolynomial& poly) {
  const int n = poly.degree();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    companion(i, n - 1) = -poly.coeffs[i] / poly.coeffs[n];
    if (i > 0) companion(i, i - 1) = 1.0;
  }
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
  std::vector<Complex> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = solver.eigenvalues()[i];
  return roots;
}

void sort_roots(std::vector<Complex>& roots) {
  std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace

RootSet all_roots(const UnivariatePolynomial& poly, double tol_real) {
  if (poly.degree() < 1)
    throw std::invalid_argument("all_roots: polynomial degree must be >= 1");

  std::vector<Complex> roots = aberth(poly);
  polish(poly, roots);
  if (!residuals_ok(poly, roots)) {
    roots = companion_eigenvalues(poly);
    polish(poly, roots);
    if (!residuals_ok(poly, roots))
      throw NonConvergence("root residual bound not reached");
  }
  sort_roots(roots);

  RootSet out;
  out.tol_real = tol_real;
  out.roots = std::move(roots);
  out.residuals.reserve(out.roots.size());
  out.is_real.reserve(out.roots.size());
  for (const Complex& root : out.roots) {
    const Evaluation ev = evaluate(poly, root);
    out.residuals.push_back(ev.scale > 0.0 ? std::abs(ev.value) / ev.scale
                                           : 0.0);
    out.is_real.push_back(std::abs(root.imag()) <=
                          tol_real * (1.0 + std::abs(root.real())));
  }
  return out;
}

RealComplexSplit classify_real(const RootSet& roots, double tol_real) {
  RealComplexSplit split;
  std::vector<Complex> upper, lower;
  for (const Complex& root : roots.roots) {
    if (std::abs(root.imag()) <= tol_real * (1.0 + std::abs(root.real())))
      split.real_roots.push_back(root.real());
    else if (root.imag() > 0.0)
      upper.push_back(root);
    else
      lower.push_back(root);
  }

  std::vector<bool> used(lower.size(), false);
  for (const Complex& root : upper) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (used[i]) continue;
      const double dist = std::abs(root - std::conj(lower[i]));
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(i);
      }
    }
    const double match_tol = 1e-8 * (1.0 + std::abs(root));
    if (best < 0 || best_dist > match_tol)
      throw UnpairedComplexRoot("non-real root without conjugate partner");
    used[best] = true;
    // Symmetrize the pair; report the positive-imaginary member.
    const Complex mate = std::conj(lower[best]);
    split.complex_pairs.push_back(0.5 * (root + mate));
  }
  for (bool u : used)
    if (!u) throw UnpairedComplexRoot("non-real root without conjugate partner");

  std::sort(split.real_roots.begin(), split.real_roots.end());
  std::sort(split.complex_pairs.begin(), split.complex_pairs.end(),
            [](const Complex& a, const Complex& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  return split;
}

}  // namespace rrp3ss
