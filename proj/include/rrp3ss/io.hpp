#pragma once

#include "rrp3ss/errors.hpp"
#include "rrp3ss/oracle.hpp"
#include "rrp3ss/solver.hpp"
#include "rrp3ss/tricept.hpp"

#include <optional>
#include <string>

namespace rrp3ss {

/// A parse or validation failure of a geometry document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Parsed geometry input: exactly one block is present. JSON with //- and
/// /**/-style comments permitted; angles are given in degrees, lengths in
/// any consistent unit.
///
/// General block keys: alpha_deg, beta_deg, zeta, A (3x3), B (3x3), L (3).
/// Tricept blocks: "tricept2" (or "tricept1") with r_base, r_platform, L.
struct GeometryDocument {
  std::optional<MechanismGeometry> general;
  std::optional<TriceptType2Geometry> tricept2;
  std::optional<TriceptType1Geometry> tricept1;
};

GeometryDocument load_geometry_document(const std::string& path);
GeometryDocument parse_geometry_document(const std::string& text);

enum class OutputFormat { kTable, kJson, kCsv };

/// Parse "table", "json" or "csv"; throws std::invalid_argument otherwise.
OutputFormat parse_output_format(const std::string& name);

/// Format a double with 16 significant digits (shortest form).
std::string format_number(double value);

/// Renderers are deterministic: the same input yields the same bytes.
/// `real_only` omits the non-real roots from the root section.
std::string render_solution(const SolutionSet& set, OutputFormat format,
                            bool real_only);
std::string render_type2_solution(const Type2SolutionSet& set,
                                  OutputFormat format, bool real_only);
std::string render_oracle(const std::vector<PoseParams>& solutions,
                          OutputFormat format);

struct CheckReport {
  std::array<double, 3> distances{};
  std::array<double, 3> lengths{};
  std::array<double, 3> residuals{};  // distance minus length
  bool passed = false;
  double tolerance = 0.0;
};

CheckReport check_pose(const MechanismGeometry& geom, const PoseParams& pose,
                       double tolerance);
std::string render_check(const CheckReport& report, OutputFormat format);

/// Warnings worth surfacing on stderr (conditioning, blind-spot fallbacks,
/// ambiguous roots); empty when unremarkable.
std::string diagnostics_summary(const SolveDiagnostics& diagnostics);

}  // namespace rrp3ss
