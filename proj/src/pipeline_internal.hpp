#pragma once

// Shared internals of the general solve pipeline and its even-polynomial
// specialization. Not installed; include from src/ only.

#include "rrp3ss/closure_newton.hpp"
#include "rrp3ss/solver.hpp"

#include <complex>
#include <vector>

namespace rrp3ss::detail {

struct EliminationPipeline {
  MechanismGeometry geometry;      // input units
  double scale = 1.0;              // lengths were divided by this
  RationalizedCoefficients rc;     // scaled domain
  UnivariatePolynomial scaled_polynomial;
  EliminationDiagnostics elimination;
};

EliminationPipeline run_elimination(const MechanismGeometry& geom);

/// Newton on det M via the trace identity det'/det = tr(M^{-1} M');
/// returns the input unchanged when the correction is not local.
std::complex<double> polish_on_determinant(const RationalizedCoefficients& rc,
                                           std::complex<double> sigma);

/// Back-substitute one real scaled root, assemble, refine, filter and push.
/// Blind-spot roots trigger the local fallback search; ambiguous null spaces
/// are recorded and the principal direction is still tried.
void realize_real_root(const EliminationPipeline& pipeline,
                       const SolveOptions& options, double sigma_scaled,
                       std::vector<AssemblyConfiguration>& configurations,
                       SolveDiagnostics& diagnostics);

void sort_configurations(std::vector<AssemblyConfiguration>& configurations);

bool same_configuration(const AssemblyConfiguration& a,
                        const AssemblyConfiguration& b, double tol = 1e-8);

}  // namespace rrp3ss::detail
