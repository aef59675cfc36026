#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "singulim/descent.hpp"
#include "singulim/homog.hpp"
#include "singulim/limits.hpp"
#include "singulim/rational_function.hpp"

namespace singulim {

/// Objective plus metadata as stored in a .problem file.
struct ProblemFile {
  std::string name;
  RationalFunction function;
  std::vector<ExactPoint> singular_points;
};

nlohmann::ordered_json polynomial_to_json(const Polynomial& p);
/// Throws InputError naming `field` when the term list is malformed.
Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t n_vars, const std::string& field);

nlohmann::ordered_json problem_to_json(const ProblemFile& problem);
ProblemFile problem_from_json(const nlohmann::json& j);
/// Canonical text: two-space indented JSON with a trailing newline.
std::string problem_to_text(const ProblemFile& problem);
ProblemFile read_problem(const std::string& path);
void write_problem(const std::string& path, const ProblemFile& problem);

/// %.17g, enough to round-trip any double.
std::string format_double(double v);

/// CSV with a "# stop_reason: ..." line, then k, x_1..x_n, f, grad_norm,
/// step_norm, alpha. The last row leaves the step columns empty.
void write_trace_csv(std::ostream& out, const DescentTrace& trace);
DescentTrace read_trace_csv(std::istream& in);
void write_trace_file(const std::string& path, const DescentTrace& trace);
DescentTrace read_trace_file(const std::string& path);

/// Parses "a,b,c" into doubles or exact rationals.
Point parse_point(const std::string& csv, const std::string& field);
ExactPoint parse_exact_point(const std::string& csv, const std::string& field);
std::vector<std::size_t> parse_dims(const std::string& csv);

/// Nested arrays, row-major; the shape must match `dims`.
DenseTensor tensor_from_json(const nlohmann::json& j, const std::vector<std::size_t>& dims);

nlohmann::ordered_json to_json(const ConditionReport& report);
nlohmann::ordered_json to_json(const DirectionTrail& trail);
nlohmann::ordered_json to_json(const ProbeResult& probe);
nlohmann::ordered_json to_json(const RateEstimate& rate);

/// fig1, multi3 and counterex in their canonical form.
std::vector<ProblemFile> bundled_examples();

/// Plot data: samples of f on a square grid for level-set rendering.
void write_level_set_csv(std::ostream& out, const RationalFunction& f, double lo, double hi, std::size_t steps);

}  // namespace singulim
