#include "rrp3ss/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rrp3ss {

namespace {

using nlohmann::json;

constexpr double kDegToRad = M_PI / 180.0;
constexpr double kRadToDeg = 180.0 / M_PI;

double require_number(const json& node, const std::string& what) {
  if (!node.is_number())
    throw ParseError("geometry document: " + what + " must be a number");
  return node.get<double>();
}

Vec3 require_vec3(const json& node, const std::string& what) {
  if (!node.is_array() || node.size() != 3)
    throw ParseError("geometry document: " + what +
                     " must be an array of 3 numbers");
  return Vec3(require_number(node[0], what), require_number(node[1], what),
              require_number(node[2], what));
}

std::array<double, 3> require_triple(const json& node,
                                     const std::string& what) {
  if (!node.is_array() || node.size() != 3)
    throw ParseError("geometry document: " + what +
                     " must be an array of 3 numbers");
  return {require_number(node[0], what), require_number(node[1], what),
          require_number(node[2], what)};
}

MechanismGeometry parse_general(const json& doc) {
  for (const char* key : {"alpha_deg", "beta_deg", "zeta", "A", "B", "L"})
    if (!doc.contains(key))
      throw ParseError(std::string("geometry document: missing key '") + key +
                       "'");
  MechanismGeometry geom;
  geom.alpha = kDegToRad * require_number(doc["alpha_deg"], "alpha_deg");
  geom.beta = kDegToRad * require_number(doc["beta_deg"], "beta_deg");
  geom.zeta = require_number(doc["zeta"], "zeta");
  const json& a = doc["A"];
  const json& b = doc["B"];
  if (!a.is_array() || a.size() != 3 || !b.is_array() || b.size() != 3)
    throw ParseError("geometry document: A and B must be 3x3 arrays");
  for (int j = 0; j < 3; ++j) {
    geom.base_anchors[j] = require_vec3(a[j], "A");
    geom.platform_anchors[j] = require_vec3(b[j], "B");
  }
  geom.leg_lengths = require_triple(doc["L"], "L");
  try {
    geom.validate();
  } catch (const std::invalid_argument& err) {
    throw ParseError(err.what());
  }
  return geom;
}

template <typename TriceptGeometry>
TriceptGeometry parse_tricept(const json& block, const char* name) {
  for (const char* key : {"r_base", "r_platform", "L"})
    if (!block.contains(key))
      throw ParseError(std::string("geometry document: ") + name +
                       " block missing key '" + key + "'");
  TriceptGeometry tg;
  tg.base_radius = require_number(block["r_base"], "r_base");
  tg.platform_radius = require_number(block["r_platform"], "r_platform");
  tg.leg_lengths = require_triple(block["L"], "L");
  try {
    tg.validate();
  } catch (const std::invalid_argument& err) {
    throw ParseError(err.what());
  }
  return tg;
}

void append_config_table(std::string& out, const AssemblyConfiguration& config,
                         int index) {
  out += "config " + std::to_string(index) + "\n";
  out += "  sigma       " + format_number(config.pose.sigma) + "\n";
  out += "  theta1_deg  " + format_number(kRadToDeg * config.pose.theta1) + "\n";
  out += "  theta2_deg  " + format_number(kRadToDeg * config.pose.theta2) + "\n";
  for (int j = 0; j < 3; ++j) {
    const Vec3& point = config.platform_world[j];
    out += "  B" + std::to_string(j + 1) + "  " + format_number(point.x()) +
           "  " + format_number(point.y()) + "  " + format_number(point.z()) +
           "\n";
  }
}

json config_to_json(const AssemblyConfiguration& config) {
  json node;
  node["sigma"] = config.pose.sigma;
  node["theta1_deg"] = kRadToDeg * config.pose.theta1;
  node["theta2_deg"] = kRadToDeg * config.pose.theta2;
  node["t1"] = config.t1;
  node["t2"] = config.t2;
  node["B"] = json::array();
  for (int j = 0; j < 3; ++j)
    node["B"].push_back({config.platform_world[j].x(),
                         config.platform_world[j].y(),
                         config.platform_world[j].z()});
  node["residual_max"] = config.residual_max;
  node["refined"] = config.refined;
  node["from_pi_fallback"] = config.from_pi_fallback;
  return node;
}

void append_config_csv(std::string& out, const AssemblyConfiguration& config,
                       int index, int pair = -1) {
  out += "config," + std::to_string(index);
  out += "," + format_number(config.pose.sigma);
  out += "," + format_number(kRadToDeg * config.pose.theta1);
  out += "," + format_number(kRadToDeg * config.pose.theta2);
  for (int j = 0; j < 3; ++j) {
    const Vec3& point = config.platform_world[j];
    out += "," + format_number(point.x()) + "," + format_number(point.y()) +
           "," + format_number(point.z());
  }
  out += "," + format_number(config.residual_max);
  out += std::string(",") + (config.refined ? "1" : "0");
  if (pair >= 0) out += "," + std::to_string(pair + 1);
  out += "\n";
}

std::string root_lines(const RootSet& roots, bool real_only,
                       const char* label) {
  std::string out;
  int printed = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (real_only && !roots.is_real[i]) continue;
    const std::complex<double> root = roots.roots[i];
    const double im = roots.is_real[i] ? 0.0 : root.imag();
    out += std::string(label) + " " + std::to_string(++printed) + "  " +
           format_number(root.real()) + "  " + format_number(im) + "\n";
  }
  return out;
}

json roots_to_json(const RootSet& roots, bool real_only) {
  json arr = json::array();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (real_only && !roots.is_real[i]) continue;
    const double im = roots.is_real[i] ? 0.0 : roots.roots[i].imag();
    arr.push_back({roots.roots[i].real(), im});
  }
  return arr;
}

json diagnostics_to_json(const SolveDiagnostics& diagnostics) {
  json node;
  node["node_radius"] = diagnostics.node_radius;
  node["scale_factor"] = diagnostics.scale_factor;
  node["imag_leak"] = diagnostics.imag_leak;
  node["collapse_ratios"] = diagnostics.collapse_ratios;
  node["roots_at_infinity"] = diagnostics.roots_at_infinity;
  node["ambiguous_roots"] = diagnostics.ambiguous_roots;
  node["fallback_configurations"] = diagnostics.fallback_configurations;
  node["dropped_configurations"] = diagnostics.dropped_configurations;
  return node;
}

// Signed-pair field of a mirror-pair row: the upper configuration's value
// with a +-/-+ prefix when the partner flips its sign.
std::string paired_field(double upper, bool flips) {
  if (!flips) return format_number(upper);
  return (upper >= 0.0 ? "+-" : "-+") + format_number(std::abs(upper));
}

}  // namespace

GeometryDocument parse_geometry_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("geometry document: ") + err.what());
  }
  if (!doc.is_object())
    throw ParseError("geometry document: top level must be an object");

  bool has_general = false;
  for (const char* key : {"alpha_deg", "beta_deg", "zeta", "A", "B", "L"})
    if (doc.contains(key)) has_general = true;
  const bool has_t2 = doc.contains("tricept2");
  const bool has_t1 = doc.contains("tricept1");
  if (int(has_general) + int(has_t2) + int(has_t1) != 1)
    throw ParseError(
        "geometry document: provide exactly one of the general keys, a "
        "'tricept2' block, or a 'tricept1' block");

  GeometryDocument out;
  if (has_general) out.general = parse_general(doc);
  if (has_t2)
    out.tricept2 = parse_tricept<TriceptType2Geometry>(doc["tricept2"], "tricept2");
  if (has_t1)
    out.tricept1 = parse_tricept<TriceptType1Geometry>(doc["tricept1"], "tricept1");
  return out;
}

GeometryDocument load_geometry_document(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw ParseError("cannot open geometry file: " + path);
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse_geometry_document(buffer.str());
}

OutputFormat parse_output_format(const std::string& name) {
  if (name == "table") return OutputFormat::kTable;
  if (name == "json") return OutputFormat::kJson;
  if (name == "csv") return OutputFormat::kCsv;
  throw std::invalid_argument("unknown output format: " + name);
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // canonical zero, drops the sign bit
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.16g", value);
  return buffer;
}

std::string render_solution(const SolutionSet& set, OutputFormat format,
                            bool real_only) {
  const int real_count =
      static_cast<int>(std::count(set.roots.is_real.begin(),
                                  set.roots.is_real.end(), true));
  if (format == OutputFormat::kTable) {
    std::string out;
    if (real_only)
      out += "# real roots: " + std::to_string(real_count) + "\n";
    else
      out += "# roots: " + std::to_string(set.roots.size()) +
             " (real: " + std::to_string(real_count) + ")\n";
    out += root_lines(set.roots, real_only, "root");
    out += "# configurations: " + std::to_string(set.configurations.size()) +
           "\n";
    for (std::size_t i = 0; i < set.configurations.size(); ++i)
      append_config_table(out, set.configurations[i], static_cast<int>(i) + 1);
    return out;
  }
  if (format == OutputFormat::kJson) {
    json doc;
    doc["roots"] = roots_to_json(set.roots, real_only);
    doc["real_roots"] = set.real_roots;
    doc["configurations"] = json::array();
    for (const AssemblyConfiguration& config : set.configurations)
      doc["configurations"].push_back(config_to_json(config));
    doc["diagnostics"] = diagnostics_to_json(set.diagnostics);
    return doc.dump(2) + "\n";
  }
  std::string out;
  int printed = 0;
  for (std::size_t i = 0; i < set.roots.size(); ++i) {
    if (real_only && !set.roots.is_real[i]) continue;
    const double im = set.roots.is_real[i] ? 0.0 : set.roots.roots[i].imag();
    out += "root," + std::to_string(++printed) + "," +
           format_number(set.roots.roots[i].real()) + "," + format_number(im) +
           "\n";
  }
  for (std::size_t i = 0; i < set.configurations.size(); ++i)
    append_config_csv(out, set.configurations[i], static_cast<int>(i) + 1);
  return out;
}

std::string render_type2_solution(const Type2SolutionSet& set,
                                  OutputFormat format, bool real_only) {
  const RootSet& squares = set.sigma_squared;
  int real_count = 0, positive_count = 0;
  for (std::size_t i = 0; i < squares.size(); ++i)
    if (squares.is_real[i]) {
      ++real_count;
      if (squares.roots[i].real() > 0.0) ++positive_count;
    }

  if (format == OutputFormat::kTable) {
    std::string out;
    if (real_only)
      out += "# real sigma^2 values: " + std::to_string(real_count) + "\n";
    else
      out += "# sigma^2 values: " + std::to_string(squares.size()) +
             " (real: " + std::to_string(real_count) +
             ", positive: " + std::to_string(positive_count) + ")\n";
    out += root_lines(squares, real_only, "s2");
    const auto& configs = set.general.configurations;
    out += "# configurations: " + std::to_string(configs.size()) +
           " (mirror pairs: " + std::to_string(set.mirror_pairs.size()) + ")\n";
    int row = 0;
    for (const auto& [i, j] : set.mirror_pairs) {
      ++row;
      if (j < 0 || j == i) {
        append_config_table(out, configs[i], row);
        continue;
      }
      // The member with positive slide is the upper configuration.
      const AssemblyConfiguration& upper =
          configs[i].pose.sigma >= configs[j].pose.sigma ? configs[i]
                                                         : configs[j];
      out += "pair " + std::to_string(row) + "  sigma " +
             paired_field(upper.pose.sigma, true) + "  theta1_deg " +
             paired_field(kRadToDeg * upper.pose.theta1, true) +
             "  theta2_deg " +
             paired_field(kRadToDeg * upper.pose.theta2, true) + "\n";
      for (int leg = 0; leg < 3; ++leg) {
        const Vec3& point = upper.platform_world[leg];
        out += "  B" + std::to_string(leg + 1) + "  " +
               format_number(point.x()) + "  " + format_number(point.y()) +
               "  " + paired_field(point.z(), true) + "\n";
      }
    }
    return out;
  }
  if (format == OutputFormat::kJson) {
    json doc;
    doc["sigma_squared"] = roots_to_json(squares, real_only);
    doc["roots"] = roots_to_json(set.general.roots, real_only);
    doc["configurations"] = json::array();
    std::vector<int> pair_of(set.general.configurations.size(), -1);
    int row = 0;
    for (const auto& [i, j] : set.mirror_pairs) {
      pair_of[i] = row;
      if (j >= 0) pair_of[j] = row;
      ++row;
    }
    for (std::size_t i = 0; i < set.general.configurations.size(); ++i) {
      json node = config_to_json(set.general.configurations[i]);
      node["mirror_pair"] = pair_of[i] + 1;
      doc["configurations"].push_back(node);
    }
    doc["diagnostics"] = diagnostics_to_json(set.general.diagnostics);
    return doc.dump(2) + "\n";
  }
  std::string out;
  int printed = 0;
  for (std::size_t i = 0; i < squares.size(); ++i) {
    if (real_only && !squares.is_real[i]) continue;
    const double im = squares.is_real[i] ? 0.0 : squares.roots[i].imag();
    out += "s2," + std::to_string(++printed) + "," +
           format_number(squares.roots[i].real()) + "," + format_number(im) +
           "\n";
  }
  std::vector<int> pair_of(set.general.configurations.size(), -1);
  int row = 0;
  for (const auto& [i, j] : set.mirror_pairs) {
    pair_of[i] = row;
    if (j >= 0) pair_of[j] = row;
    ++row;
  }
  for (std::size_t i = 0; i < set.general.configurations.size(); ++i)
    append_config_csv(out, set.general.configurations[i],
                      static_cast<int>(i) + 1, pair_of[i]);
  return out;
}

std::string render_oracle(const std::vector<PoseParams>& solutions,
                          OutputFormat format) {
  if (format == OutputFormat::kTable) {
    std::string out = "# oracle solutions: " + std::to_string(solutions.size()) + "\n";
    for (std::size_t i = 0; i < solutions.size(); ++i) {
      const PoseParams& pose = solutions[i];
      out += "sol " + std::to_string(i + 1) + "  sigma " +
             format_number(pose.sigma) + "  theta1_deg " +
             format_number(kRadToDeg * pose.theta1) + "  theta2_deg " +
             format_number(kRadToDeg * pose.theta2) + "\n";
    }
    return out;
  }
  if (format == OutputFormat::kJson) {
    json doc;
    doc["solutions"] = json::array();
    for (const PoseParams& pose : solutions)
      doc["solutions"].push_back({{"sigma", pose.sigma},
                                  {"theta1_deg", kRadToDeg * pose.theta1},
                                  {"theta2_deg", kRadToDeg * pose.theta2}});
    return doc.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    const PoseParams& pose = solutions[i];
    out += "sol," + std::to_string(i + 1) + "," + format_number(pose.sigma) +
           "," + format_number(kRadToDeg * pose.theta1) + "," +
           format_number(kRadToDeg * pose.theta2) + "\n";
  }
  return out;
}

CheckReport check_pose(const MechanismGeometry& geom, const PoseParams& pose,
                       double tolerance) {
  geom.validate();
  pose.validate();
  CheckReport report;
  report.tolerance = tolerance;
  const auto points = platform_points(pose, geom);
  report.passed = true;
  for (int j = 0; j < 3; ++j) {
    report.distances[j] = (points[j] - geom.base_anchors[j]).norm();
    report.lengths[j] = geom.leg_lengths[j];
    report.residuals[j] = report.distances[j] - report.lengths[j];
    if (!(std::abs(report.residuals[j]) <= tolerance)) report.passed = false;
  }
  return report;
}

std::string render_check(const CheckReport& report, OutputFormat format) {
  if (format == OutputFormat::kTable) {
    std::string out;
    for (int j = 0; j < 3; ++j)
      out += "leg " + std::to_string(j + 1) + "  distance " +
             format_number(report.distances[j]) + "  length " +
             format_number(report.lengths[j]) + "  residual " +
             format_number(report.residuals[j]) + "\n";
    out += std::string("check ") + (report.passed ? "PASS" : "FAIL") +
           " (tol " + format_number(report.tolerance) + ")\n";
    return out;
  }
  if (format == OutputFormat::kJson) {
    json doc;
    doc["legs"] = json::array();
    for (int j = 0; j < 3; ++j)
      doc["legs"].push_back({{"distance", report.distances[j]},
                             {"length", report.lengths[j]},
                             {"residual", report.residuals[j]}});
    doc["passed"] = report.passed;
    doc["tol"] = report.tolerance;
    return doc.dump(2) + "\n";
  }
  std::string out;
  for (int j = 0; j < 3; ++j)
    out += "leg," + std::to_string(j + 1) + "," +
           format_number(report.distances[j]) + "," +
           format_number(report.lengths[j]) + "," +
           format_number(report.residuals[j]) + "\n";
  out += std::string("result,") + (report.passed ? "1" : "0") + "," +
         format_number(report.tolerance) + "\n";
  return out;
}

std::string diagnostics_summary(const SolveDiagnostics& diagnostics) {
  std::string out;
  if (diagnostics.imag_leak > 1e-9)
    out += "warning: interpolation imaginary leak " +
           format_number(diagnostics.imag_leak) + "\n";
  if (!diagnostics.roots_at_infinity.empty())
    out += "note: " + std::to_string(diagnostics.roots_at_infinity.size()) +
           " root(s) at the half-angle blind spot; local search used\n";
  if (!diagnostics.ambiguous_roots.empty())
    out += "warning: " + std::to_string(diagnostics.ambiguous_roots.size()) +
           " root(s) with ambiguous null space\n";
  if (diagnostics.dropped_configurations > 0)
    out += "note: " + std::to_string(diagnostics.dropped_configurations) +
           " candidate configuration(s) failed the closure filter\n";
  return out;
}

}  // namespace rrp3ss
