#include "rrp3ss/elimination.hpp"

#include "rrp3ss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rrp3ss {

namespace {

using CLD = std::complex<long double>;

constexpr long double kPiL = 3.141592653589793238462643383279502884L;
constexpr long double kEpsL = 5.42101086242752217e-20L;  // 2^-64
// Relative determinant magnitude (against the Hadamard bound) below which a
// node counts as structurally singular.
constexpr double kSingularRatio = 1e-13;

template <typename Scalar>
void fill_matrix(const RationalizedCoefficients& rc, Scalar sigma,
                 Eigen::Matrix<Scalar, kEliminationSize, kEliminationSize>& mat,
                 bool derivative) {
  mat.setZero();
  for (int j = 0; j < 3; ++j)
    for (int u = 0; u < 4; ++u)
      for (int v = 0; v < 2; ++v) {
        const int row = 8 * j + 2 * u + v;
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 3; ++q) {
            const int col = 6 * (q + v) + (p + u);
            const SigmaPoly& poly = rc.f[j][p][q];
            if (derivative) {
              mat(row, col) = Scalar(poly.c[1]) + Scalar(2.0 * poly.c[2]) * sigma;
            } else {
              mat(row, col) =
                  Scalar(poly.c[0]) +
                  sigma * (Scalar(poly.c[1]) + sigma * Scalar(poly.c[2]));
            }
          }
      }
}

struct NodeSweep {
  std::vector<CLD> dets;
  long double max_abs_det = 0.0L;
  double max_hadamard_ratio = 0.0;
};

// Determinants at every node; conjugate nodes are mirrored, so only the
// upper half circle is factorized. Extended precision keeps the wide dynamic
// range of the coefficients recoverable.
NodeSweep sweep_determinants(const RationalizedCoefficients& rc,
                             const std::vector<CLD>& nodes, bool parallel) {
  using Mat24ld = Eigen::Matrix<CLD, kEliminationSize, kEliminationSize>;
  const int count = static_cast<int>(nodes.size());
  const int half = count / 2;
  std::vector<CLD> dets(count);
  std::vector<double> ratios(half + 1, 0.0);

  auto eval_one = [&](int k) {
    Mat24ld mat;
    fill_matrix<CLD>(rc, nodes[k], mat, false);
    long double hadamard = 1.0L;
    for (int r = 0; r < kEliminationSize; ++r)
      hadamard *= mat.row(r).norm();
    const CLD det = Eigen::PartialPivLU<Mat24ld>(mat).determinant();
    dets[k] = det;
    ratios[k] = hadamard > 0.0L
                    ? static_cast<double>(std::abs(det) / hadamard)
                    : 0.0;
  };

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k <= half; ++k) eval_one(k);
  } else {
    for (int k = 0; k <= half; ++k) eval_one(k);
  }
  for (int k = half + 1; k < count; ++k) dets[k] = std::conj(dets[count - k]);

  NodeSweep out;
  out.max_hadamard_ratio = *std::max_element(ratios.begin(), ratios.end());
  for (const CLD& det : dets)
    out.max_abs_det = std::max(out.max_abs_det, std::abs(det));
  out.dets = std::move(dets);
  return out;
}

std::vector<CLD> node_circle(long double radius, int count) {
  std::vector<CLD> nodes(count);
  const int half = count / 2;
  for (int k = 0; k <= half; ++k)
    nodes[k] = std::polar(radius, 2.0L * kPiL * k / count);
  if (count % 2 == 0) nodes[half] = CLD(-radius, 0.0L);
  for (int k = half + 1; k < count; ++k) nodes[k] = std::conj(nodes[count - k]);
  return nodes;
}

struct InterpolationPass {
  std::vector<long double> coeff;  // real parts, degrees 0..count-1
  std::vector<long double> imag;
  long double max_abs_det = 0.0L;
  long double radius = 1.0L;
  double max_hadamard_ratio = 0.0;

  // Interpolation error floor for the coefficient of degree w.
  long double floor_at(int w) const {
    return kEpsL * max_abs_det / std::pow(radius, (long double)w);
  }
};

InterpolationPass interpolate_at_radius(const RationalizedCoefficients& rc,
                                        long double radius, int count,
                                        bool parallel) {
  const NodeSweep sweep =
      sweep_determinants(rc, node_circle(radius, count), parallel);
  InterpolationPass pass;
  pass.radius = radius;
  pass.max_abs_det = sweep.max_abs_det;
  pass.max_hadamard_ratio = sweep.max_hadamard_ratio;
  pass.coeff.resize(count);
  pass.imag.resize(count);
  for (int w = 0; w < count; ++w) {
    CLD acc = 0.0L;
    for (int k = 0; k < count; ++k)
      acc += sweep.dets[k] *
             std::polar(1.0L, -2.0L * kPiL * (long double)(k) * w / count);
    acc /= (long double)(count) * std::pow(radius, (long double)w);
    pass.coeff[w] = acc.real();
    pass.imag[w] = acc.imag();
  }
  return pass;
}

UnivariatePolynomial det_polynomial_impl(const RationalizedCoefficients& rc,
                                         EliminationDiagnostics* diag,
                                         bool parallel) {
  const double scale_hint = rc.sigma_radius > 0.0 ? rc.sigma_radius : 2.0;
  const long double radius1 = 0.5L * (long double)scale_hint;
  const int count = kDeterminantNodes;

  InterpolationPass pass = interpolate_at_radius(rc, radius1, count, parallel);
  if (pass.max_hadamard_ratio < kSingularRatio)
    throw SingularGeometry(
        "determinant vanishes at every interpolation node; the instance is "
        "architecturally singular");

  long double max_abs = 0.0L;
  for (long double c : pass.coeff) max_abs = std::max(max_abs, std::abs(c));
  if (max_abs == 0.0L)
    throw SingularGeometry("interpolated determinant polynomial is zero");

  // The coefficients can span many orders of magnitude. A second pass at a
  // radius near the geometric mean of the root magnitudes recovers the
  // low-degree coefficients; per degree, the estimate with the smaller
  // error floor wins.
  int w_low = 0, w_high = 28;
  while (w_low < 28 && std::abs(pass.coeff[w_low]) <= 1e-10L * max_abs)
    ++w_low;
  while (w_high > w_low && std::abs(pass.coeff[w_high]) <= 1e-9L * max_abs)
    --w_high;
  if (w_high > w_low) {
    const long double ratio =
        std::abs(pass.coeff[w_low]) / std::abs(pass.coeff[w_high]);
    long double radius2 =
        radius1 * std::pow(ratio, 1.0L / (long double)(w_high - w_low));
    radius2 = std::clamp(radius2, radius1 / 16.0L, radius1);
    if (radius2 < 0.8L * radius1) {
      const InterpolationPass low =
          interpolate_at_radius(rc, radius2, count, parallel);
      for (int w = 0; w < count; ++w)
        if (low.floor_at(w) < pass.floor_at(w)) {
          pass.coeff[w] = low.coeff[w];
          pass.imag[w] = low.imag[w];
        }
      max_abs = 0.0L;
      for (long double c : pass.coeff) max_abs = std::max(max_abs, std::abs(c));
    }
  }

  long double imag_leak = 0.0L;
  for (long double c : pass.imag)
    imag_leak = std::max(imag_leak, std::abs(c) / max_abs);

  std::array<double, 4> collapse_ratios{};
  for (int w = 29; w <= 32; ++w)
    collapse_ratios[w - 29] =
        static_cast<double>(std::abs(pass.coeff[w]) / max_abs);

  if (diag) {
    diag->collapse_ratios = collapse_ratios;
    diag->imag_leak = static_cast<double>(imag_leak);
    diag->node_radius = static_cast<double>(radius1);
    diag->raw_coefficients.resize(count);
    for (int w = 0; w < count; ++w)
      diag->raw_coefficients[w] = static_cast<double>(pass.coeff[w]);
    diag->det_scale_ratio = pass.max_hadamard_ratio;
  }

  for (int w = 29; w < count; ++w) {
    if (std::abs(pass.coeff[w]) > (long double)kCollapseTol * max_abs)
      throw CollapseFailure(
          "degree-" + std::to_string(w) +
          " coefficient did not collapse (relative magnitude " +
          std::to_string(static_cast<double>(std::abs(pass.coeff[w]) / max_abs)) +
          ")");
  }

  // Normalize in extended precision, then truncate to degree 28.
  std::size_t pivot = 0;
  for (std::size_t w = 1; w <= 28; ++w)
    if (std::abs(pass.coeff[w]) > std::abs(pass.coeff[pivot])) pivot = w;
  std::vector<double> raw(29);
  for (int w = 0; w <= 28; ++w)
    raw[w] = static_cast<double>(pass.coeff[w] / pass.coeff[pivot]);
  return UnivariatePolynomial::from_coefficients(std::move(raw), kCollapseTol);
}

}  // namespace

UnivariatePolynomial UnivariatePolynomial::from_coefficients(
    std::vector<double> raw, double trim_tol) {
  double max_abs = 0.0;
  for (double c : raw) max_abs = std::max(max_abs, std::abs(c));
  if (max_abs == 0.0 || raw.empty())
    throw std::invalid_argument("polynomial: all coefficients vanish");
  while (raw.size() > 1 && std::abs(raw.back()) <= trim_tol * max_abs)
    raw.pop_back();

  // Normalize: the largest-magnitude coefficient becomes +1.
  std::size_t pivot = 0;
  for (std::size_t w = 1; w < raw.size(); ++w)
    if (std::abs(raw[w]) > std::abs(raw[pivot])) pivot = w;
  const double scale = raw[pivot];
  for (double& c : raw) c /= scale;

  UnivariatePolynomial poly;
  poly.coeffs = std::move(raw);
  return poly;
}

double UnivariatePolynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> UnivariatePolynomial::operator()(
    std::complex<double> x) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> UnivariatePolynomial::derivative(
    std::complex<double> x) const {
  std::complex<double> acc = 0.0;
  for (int w = degree(); w >= 1; --w) acc = acc * x + double(w) * coeffs[w];
  return acc;
}

double UnivariatePolynomial::magnitude(double abs_x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * abs_x + std::abs(*it);
  return acc;
}

Mat24 build_elimination_matrix(const RationalizedCoefficients& rc,
                               double sigma) {
  Mat24 mat;
  fill_matrix<double>(rc, sigma, mat, false);
  return mat;
}

Mat24c build_elimination_matrix(const RationalizedCoefficients& rc,
                                std::complex<double> sigma) {
  Mat24c mat;
  fill_matrix<std::complex<double>>(rc, sigma, mat, false);
  return mat;
}

Mat24c build_elimination_matrix_derivative(const RationalizedCoefficients& rc,
                                           std::complex<double> sigma) {
  Mat24c mat;
  fill_matrix<std::complex<double>>(rc, sigma, mat, true);
  return mat;
}

Vec24 monomial_vector(double t1, double t2) {
  Vec24 tau;
  double pow2 = 1.0;
  for (int q = 0; q < 4; ++q) {
    double pow1 = 1.0;
    for (int p = 0; p < 6; ++p) {
      tau[6 * q + p] = pow1 * pow2;
      pow1 *= t1;
    }
    pow2 *= t2;
  }
  return tau;
}

std::vector<std::complex<double>> determinant_nodes(double radius, int count) {
  if (count < 2 || radius <= 0.0)
    throw std::invalid_argument("determinant_nodes: bad node set");
  const auto nodes = node_circle((long double)radius, count);
  std::vector<std::complex<double>> out(count);
  for (int k = 0; k < count; ++k)
    out[k] = std::complex<double>(static_cast<double>(nodes[k].real()),
                                  static_cast<double>(nodes[k].imag()));
  return out;
}

std::vector<std::complex<double>> evaluate_determinant_nodes(
    const RationalizedCoefficients& rc,
    const std::vector<std::complex<double>>& nodes) {
  std::vector<CLD> lifted(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k)
    lifted[k] = CLD(nodes[k].real(), nodes[k].imag());
  const NodeSweep sweep = sweep_determinants(rc, lifted, true);
  std::vector<std::complex<double>> out(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k)
    out[k] = std::complex<double>(static_cast<double>(sweep.dets[k].real()),
                                  static_cast<double>(sweep.dets[k].imag()));
  return out;
}

std::vector<std::complex<double>> evaluate_determinant_nodes_serial(
    const RationalizedCoefficients& rc,
    const std::vector<std::complex<double>>& nodes) {
  std::vector<CLD> lifted(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k)
    lifted[k] = CLD(nodes[k].real(), nodes[k].imag());
  const NodeSweep sweep = sweep_determinants(rc, lifted, false);
  std::vector<std::complex<double>> out(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k)
    out[k] = std::complex<double>(static_cast<double>(sweep.dets[k].real()),
                                  static_cast<double>(sweep.dets[k].imag()));
  return out;
}

UnivariatePolynomial det_polynomial(const RationalizedCoefficients& rc,
                                    EliminationDiagnostics* diag) {
  return det_polynomial_impl(rc, diag, true);
}

UnivariatePolynomial det_polynomial_serial(const RationalizedCoefficients& rc,
                                           EliminationDiagnostics* diag) {
  return det_polynomial_impl(rc, diag, false);
}

UnivariatePolynomial rescale_variable(const UnivariatePolynomial& p,
                                      double factor) {
  std::vector<double> out(p.coeffs.size());
  double power = 1.0;
  for (std::size_t w = 0; w < out.size(); ++w) {
    out[w] = p.coeffs[w] * power;
    power *= factor;
  }
  return UnivariatePolynomial::from_coefficients(std::move(out));
}

}  // namespace rrp3ss
