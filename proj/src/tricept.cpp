#include "rrp3ss/tricept.hpp"

#include "rrp3ss/errors.hpp"
#include "pipeline_internal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rrp3ss {

namespace {

void validate_radii(double base_radius, double platform_radius,
                    const std::array<double, 3>& leg_lengths) {
  if (!(base_radius > 0.0) || !(platform_radius > 0.0))
    throw std::invalid_argument("tricept: circumradii must be positive");
  for (double length : leg_lengths)
    if (!(length > 0.0) || !std::isfinite(length))
      throw std::invalid_argument("tricept: leg lengths must be positive");
}

MechanismGeometry radial_geometry(double base_radius, double platform_radius,
                                  const std::array<double, 3>& leg_lengths,
                                  double vertex_offset_deg) {
  MechanismGeometry geom;
  geom.alpha = M_PI / 2.0;
  geom.beta = M_PI / 2.0;
  geom.zeta = 0.0;
  geom.leg_lengths = leg_lengths;
  for (int i = 1; i <= 3; ++i) {
    const double angle = (i * 120.0 + vertex_offset_deg) * M_PI / 180.0;
    const Vec3 u(std::cos(angle), std::sin(angle), 0.0);
    geom.base_anchors[i - 1] = base_radius * u;
    geom.platform_anchors[i - 1] = platform_radius * u;
  }
  return geom;
}

}  // namespace

void TriceptType2Geometry::validate() const {
  validate_radii(base_radius, platform_radius, leg_lengths);
}

void TriceptType1Geometry::validate() const {
  validate_radii(base_radius, platform_radius, leg_lengths);
}

MechanismGeometry to_general(const TriceptType2Geometry& tg) {
  tg.validate();
  // Vertices at -30, 90, 210 degrees: the x-axis is parallel to the side
  // joining the first and third base vertices.
  return radial_geometry(tg.base_radius, tg.platform_radius, tg.leg_lengths,
                         -150.0);
}

MechanismGeometry to_general(const TriceptType1Geometry& tg) {
  tg.validate();
  // Vertices at 0, 120, 240 degrees: the x-axis goes through a base vertex.
  return radial_geometry(tg.base_radius, tg.platform_radius, tg.leg_lengths,
                         -120.0);
}

bool has_base_plane_symmetry(const MechanismGeometry& geom, double tol) {
  if (std::abs(geom.zeta) > tol) return false;
  if (std::abs(std::abs(geom.beta) - M_PI / 2.0) > tol) return false;
  for (int j = 0; j < 3; ++j)
    if (std::abs(geom.base_anchors[j].z()) > tol ||
        std::abs(geom.platform_anchors[j].z()) > tol)
      return false;
  return true;
}

UnivariatePolynomial even_part(const UnivariatePolynomial& poly, double tol) {
  double max_abs = 0.0;
  for (double c : poly.coeffs) max_abs = std::max(max_abs, std::abs(c));
  for (std::size_t w = 1; w < poly.coeffs.size(); w += 2)
    if (std::abs(poly.coeffs[w]) > tol * max_abs)
      throw OddCoefficientLeak("odd coefficient of degree " +
                               std::to_string(w) + " is significant");
  std::vector<double> folded((poly.coeffs.size() + 1) / 2);
  for (std::size_t k = 0; k < folded.size(); ++k)
    folded[k] = poly.coeffs[2 * k];
  return UnivariatePolynomial::from_coefficients(std::move(folded), tol);
}

AssemblyConfiguration mirror(const AssemblyConfiguration& config,
                             const MechanismGeometry& geom) {
  if (!has_base_plane_symmetry(geom))
    throw std::invalid_argument(
        "mirror: geometry is not symmetric about the base plane");
  PoseParams pose;
  pose.theta1 = normalize_angle(-config.pose.theta1);
  pose.theta2 = normalize_angle(-config.pose.theta2);
  pose.sigma = -config.pose.sigma;
  return assemble(geom, pose);
}

Type2SolutionSet solve_type2(const TriceptType2Geometry& tg,
                             const SolveOptions& options) {
  const MechanismGeometry geom = to_general(tg);
  const detail::EliminationPipeline pipeline = detail::run_elimination(geom);

  // The mirror symmetry forces an even determinant polynomial.
  const UnivariatePolynomial folded =
      even_part(pipeline.scaled_polynomial, kCollapseTol);

  RootSet squares_scaled = all_roots(folded, options.tol_real);

  // Polish the square roots on the determinant itself, then re-square.
  std::vector<std::complex<double>> sigma_scaled(squares_scaled.size());
  for (std::size_t i = 0; i < squares_scaled.size(); ++i) {
    const std::complex<double> x = squares_scaled.roots[i];
    if (std::abs(x) <= options.tol_real * (1.0 + std::abs(x))) {
      sigma_scaled[i] = 0.0;
      continue;
    }
    std::complex<double> root = std::sqrt(x);
    if (options.det_polish)
      root = detail::polish_on_determinant(pipeline.rc, root);
    sigma_scaled[i] = root;
    squares_scaled.roots[i] = root * root;
  }

  Type2SolutionSet out;
  out.general.geometry = geom;
  out.general.polynomial =
      rescale_variable(pipeline.scaled_polynomial, 1.0 / pipeline.scale);
  out.general.diagnostics.collapse_ratios = pipeline.elimination.collapse_ratios;
  out.general.diagnostics.imag_leak = pipeline.elimination.imag_leak;
  out.general.diagnostics.node_radius = pipeline.elimination.node_radius;
  out.general.diagnostics.scale_factor = pipeline.scale;

  // sigma^2 values in input units.
  const UnivariatePolynomial folded_input =
      rescale_variable(folded, 1.0 / (pipeline.scale * pipeline.scale));
  out.sigma_squared.tol_real = options.tol_real;
  for (const std::complex<double>& x : squares_scaled.roots)
    out.sigma_squared.roots.push_back(x * pipeline.scale * pipeline.scale);
  std::sort(out.sigma_squared.roots.begin(), out.sigma_squared.roots.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  for (const std::complex<double>& x : out.sigma_squared.roots) {
    const double scale = folded_input.magnitude(std::abs(x));
    out.sigma_squared.residuals.push_back(
        scale > 0.0 ? std::abs(folded_input(x)) / scale : 0.0);
    out.sigma_squared.is_real.push_back(
        std::abs(x.imag()) <= options.tol_real * (1.0 + std::abs(x.real())));
  }

  // Full slide-root list: both signs of every square root.
  out.general.roots.tol_real = options.tol_real;
  for (const std::complex<double>& root : sigma_scaled) {
    out.general.roots.roots.push_back(root * pipeline.scale);
    out.general.roots.roots.push_back(-root * pipeline.scale);
  }
  std::sort(out.general.roots.roots.begin(), out.general.roots.roots.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  for (const std::complex<double>& root : out.general.roots.roots) {
    const double scale = out.general.polynomial.magnitude(std::abs(root));
    out.general.roots.residuals.push_back(
        scale > 0.0 ? std::abs(out.general.polynomial(root)) / scale : 0.0);
    out.general.roots.is_real.push_back(
        std::abs(root.imag()) <=
        options.tol_real * (1.0 + std::abs(root.real())));
  }

  // Configurations: each real positive square expands to a mirror pair; a
  // vanishing square contributes a single configuration.
  const RealComplexSplit xsplit =
      classify_real(out.sigma_squared, options.tol_real);
  for (double x : xsplit.real_roots) {
    const double x_scaled = x / (pipeline.scale * pipeline.scale);
    if (std::abs(x) <= options.tol_real * (1.0 + std::abs(x))) {
      detail::realize_real_root(pipeline, options, 0.0,
                                out.general.configurations,
                                out.general.diagnostics);
      out.general.real_roots.push_back(0.0);
      continue;
    }
    if (x < 0.0) continue;
    const double root_scaled = std::sqrt(x_scaled);
    for (double sign : {1.0, -1.0}) {
      detail::realize_real_root(pipeline, options, sign * root_scaled,
                                out.general.configurations,
                                out.general.diagnostics);
      out.general.real_roots.push_back(sign * root_scaled * pipeline.scale);
    }
  }
  std::sort(out.general.real_roots.begin(), out.general.real_roots.end());
  detail::sort_configurations(out.general.configurations);

  // Match mirror partners.
  const int count = static_cast<int>(out.general.configurations.size());
  std::vector<int> partner(count, -1);
  for (int i = 0; i < count; ++i) {
    if (partner[i] >= 0) continue;
    const AssemblyConfiguration image =
        mirror(out.general.configurations[i], geom);
    for (int j = i; j < count; ++j) {
      if (j > i && partner[j] >= 0) continue;
      if (detail::same_configuration(image, out.general.configurations[j])) {
        partner[i] = j;
        partner[j] = i;
        break;
      }
    }
  }
  for (int i = 0; i < count; ++i)
    if (partner[i] >= i || partner[i] < 0)
      out.mirror_pairs.emplace_back(i, partner[i]);

  if (options.want_complex) {
    for (std::size_t i = 0; i < out.general.roots.size(); ++i) {
      const std::complex<double> rep = out.general.roots.roots[i];
      if (out.general.roots.is_real[i] || rep.imag() <= 0.0) continue;
      try {
        const ComplexBackSubstitution bs =
            back_substitute_complex(pipeline.rc, rep / pipeline.scale);
        out.general.diagnostics.complex_branches.push_back(
            {rep, bs.t1, bs.t2, bs.monomial_consistency});
      } catch (const RootAtInfinity&) {
        out.general.diagnostics.roots_at_infinity.push_back(rep.real());
      }
    }
  }
  return out;
}

SolutionSet solve_type1(const TriceptType1Geometry& tg, const SolveOptions&) {
  tg.validate();
  throw NotSupported(
      "type-I structures: the elimination matrix degenerates on this family; "
      "use the dedicated treatment that solves a 12th-order equation in a "
      "squared unknown (24 solutions)");
}

}  // namespace rrp3ss
