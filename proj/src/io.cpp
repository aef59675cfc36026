#include "singulim/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "singulim/errors.hpp"

namespace singulim {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  if (t.empty()) throw InputError(field + ": empty number");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw InputError(field + ": cannot parse '" + t + "' as a number");
  return v;
}

ordered_json optional_number(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

ordered_json exact_point_json(const ExactPoint& p) {
  ordered_json arr = ordered_json::array();
  for (const auto& q : p) arr.push_back(format_rational(q));
  return arr;
}

void tensor_fill(const nlohmann::json& j, const std::vector<std::size_t>& dims, std::size_t depth,
                 std::vector<double>& out) {
  if (depth == dims.size()) {
    if (!j.is_number()) throw InputError("target: expected a number at depth " + std::to_string(depth));
    out.push_back(j.get<double>());
    return;
  }
  if (!j.is_array() || j.size() != dims[depth]) {
    throw InputError("target: expected an array of length " + std::to_string(dims[depth]) + " at depth " +
                     std::to_string(depth));
  }
  for (const auto& child : j) tensor_fill(child, dims, depth + 1, out);
}

}  // namespace

ordered_json polynomial_to_json(const Polynomial& p) {
  ordered_json terms = ordered_json::array();
  for (const auto& [mono, coeff] : p.terms()) {
    ordered_json t;
    t["coeff"] = format_rational(coeff);
    t["exps"] = mono;
    terms.push_back(std::move(t));
  }
  return terms;
}

Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t n_vars, const std::string& field) {
  if (!j.is_array()) throw InputError(field + ": expected a list of terms");
  std::vector<std::pair<Monomial, Rational>> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& t = j[i];
    const std::string where = field + "[" + std::to_string(i) + "]";
    if (!t.is_object() || !t.contains("coeff") || !t.contains("exps")) {
      throw InputError(where + ": each term needs 'coeff' and 'exps'");
    }
    Rational c;
    if (t["coeff"].is_string()) {
      c = parse_rational(t["coeff"].get<std::string>());
    } else if (t["coeff"].is_number_integer()) {
      c = Rational(t["coeff"].get<long>());
    } else {
      throw InputError(where + ".coeff: expected a string such as \"3/4\"");
    }
    const auto& e = t["exps"];
    if (!e.is_array() || e.size() != n_vars) {
      throw InputError(where + ".exps: expected " + std::to_string(n_vars) + " exponents");
    }
    Monomial mono;
    for (const auto& x : e) {
      if (!x.is_number_unsigned()) throw InputError(where + ".exps: exponents must be non-negative integers");
      mono.push_back(x.get<unsigned>());
    }
    terms.emplace_back(std::move(mono), std::move(c));
  }
  return Polynomial::from_terms(n_vars, terms);
}

ordered_json problem_to_json(const ProblemFile& problem) {
  ordered_json j;
  j["name"] = problem.name;
  j["n_vars"] = problem.function.n_vars();
  j["numer"] = polynomial_to_json(problem.function.numer());
  j["denom"] = polynomial_to_json(problem.function.denom());
  ordered_json points = ordered_json::array();
  for (const auto& p : problem.singular_points) points.push_back(exact_point_json(p));
  j["singular_points"] = std::move(points);
  return j;
}

ProblemFile problem_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("problem: expected a JSON object");
  if (!j.contains("n_vars") || !j["n_vars"].is_number_unsigned() || j["n_vars"].get<std::size_t>() == 0) {
    throw InputError("n_vars: expected a positive integer");
  }
  const auto n = j["n_vars"].get<std::size_t>();
  if (!j.contains("numer")) throw InputError("numer: missing");
  if (!j.contains("denom")) throw InputError("denom: missing");
  Polynomial numer = polynomial_from_json(j["numer"], n, "numer");
  Polynomial denom = polynomial_from_json(j["denom"], n, "denom");
  if (denom.is_zero()) throw InputError("denom: the zero polynomial is not a valid denominator");

  std::vector<ExactPoint> points;
  if (j.contains("singular_points")) {
    const auto& sp = j["singular_points"];
    if (!sp.is_array()) throw InputError("singular_points: expected a list of points");
    for (std::size_t i = 0; i < sp.size(); ++i) {
      const std::string where = "singular_points[" + std::to_string(i) + "]";
      if (!sp[i].is_array() || sp[i].size() != n) {
        throw InputError(where + ": expected " + std::to_string(n) + " coordinates");
      }
      ExactPoint p;
      for (const auto& c : sp[i]) {
        if (c.is_string()) {
          p.push_back(parse_rational(c.get<std::string>()));
        } else if (c.is_number_integer()) {
          p.emplace_back(c.get<long>());
        } else {
          throw InputError(where + ": coordinates must be strings such as \"1/2\"");
        }
      }
      points.push_back(std::move(p));
    }
  }
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "";
  return ProblemFile{std::move(name), RationalFunction(std::move(numer), std::move(denom)), std::move(points)};
}

std::string problem_to_text(const ProblemFile& problem) { return problem_to_json(problem).dump(2) + "\n"; }

ProblemFile read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("problem: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("problem '" + path + "': " + e.what());
  }
  return problem_from_json(j);
}

void write_problem(const std::string& path, const ProblemFile& problem) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << problem_to_text(problem);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const DescentTrace& trace) {
  trace.check_consistent();
  out << "# stop_reason: " << to_string(trace.stop_reason) << "\n";
  if (!trace.diagnostic.empty()) out << "# diagnostic: " << trace.diagnostic << "\n";
  out << "k";
  for (std::size_t i = 1; i <= trace.n_vars(); ++i) out << ",x_" << i;
  out << ",f,grad_norm,step_norm,alpha\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << k;
    for (double v : trace.iterates[k]) out << "," << format_double(v);
    out << "," << format_double(trace.f_values[k]) << "," << format_double(trace.grad_norms[k]) << ",";
    if (k + 1 < trace.size()) {
      out << format_double(trace.step_norms[k]) << ",";
      if (!std::isnan(trace.step_sizes[k])) out << format_double(trace.step_sizes[k]);
    } else {
      out << ",";
    }
    out << "\n";
  }
}

DescentTrace read_trace_csv(std::istream& in) {
  DescentTrace trace;
  std::string line;
  std::size_t line_no = 0;
  std::size_t n_vars = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::string where = "trace line " + std::to_string(line_no);
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      if (body.rfind("stop_reason:", 0) == 0) trace.stop_reason = parse_stop_reason(trim(body.substr(12)));
      if (body.rfind("diagnostic:", 0) == 0) trace.diagnostic = trim(body.substr(11));
      continue;
    }
    const auto cells = split(line, ',');
    if (!have_header) {
      if (cells.size() < 6 || trim(cells[0]) != "k") throw InputError(where + ": expected header 'k,x_1,...'");
      n_vars = cells.size() - 5;
      for (std::size_t i = 0; i < n_vars; ++i) {
        if (trim(cells[1 + i]) != "x_" + std::to_string(i + 1)) {
          throw InputError(where + ": expected column x_" + std::to_string(i + 1));
        }
      }
      const char* tail[] = {"f", "grad_norm", "step_norm", "alpha"};
      for (std::size_t i = 0; i < 4; ++i) {
        if (trim(cells[1 + n_vars + i]) != tail[i]) throw InputError(where + ": expected column " + tail[i]);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != n_vars + 5) {
      throw InputError(where + ": expected " + std::to_string(n_vars + 5) + " fields, got " +
                       std::to_string(cells.size()));
    }
    const double k = parse_double(cells[0], where + " k");
    if (k != static_cast<double>(trace.size())) throw InputError(where + ": k must count up from 0");
    Point x(n_vars);
    for (std::size_t i = 0; i < n_vars; ++i) x[i] = parse_double(cells[1 + i], where + " x_" + std::to_string(i + 1));
    trace.iterates.push_back(std::move(x));
    trace.f_values.push_back(parse_double(cells[1 + n_vars], where + " f"));
    trace.grad_norms.push_back(parse_double(cells[2 + n_vars], where + " grad_norm"));
    const std::string step = trim(cells[3 + n_vars]);
    const std::string alpha = trim(cells[4 + n_vars]);
    trace.step_norms.push_back(step.empty() ? kNaN : parse_double(step, where + " step_norm"));
    trace.step_sizes.push_back(alpha.empty() ? kNaN : parse_double(alpha, where + " alpha"));
  }
  if (!have_header) throw InputError("trace: missing header line");
  if (trace.empty()) throw InputError("trace: no data rows");
  // The step columns of the last row describe no step.
  trace.step_norms.pop_back();
  trace.step_sizes.pop_back();
  for (std::size_t k = 0; k < trace.step_norms.size(); ++k) {
    if (std::isnan(trace.step_norms[k])) {
      throw InputError("trace row " + std::to_string(k) + ": step_norm is required on every row but the last");
    }
  }
  return trace;
}

void write_trace_file(const std::string& path, const DescentTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_trace_csv(out, trace);
}

DescentTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("trace: cannot open '" + path + "'");
  return read_trace_csv(in);
}

Point parse_point(const std::string& csv, const std::string& field) {
  Point p;
  for (const auto& cell : split(csv, ',')) p.push_back(parse_double(cell, field));
  if (p.empty()) throw InputError(field + ": empty point");
  for (double v : p) {
    if (!std::isfinite(v)) throw InputError(field + ": coordinates must be finite");
  }
  return p;
}

ExactPoint parse_exact_point(const std::string& csv, const std::string& field) {
  ExactPoint p;
  for (const auto& cell : split(csv, ',')) {
    try {
      p.push_back(parse_rational(trim(cell)));
    } catch (const InputError& e) {
      throw InputError(field + ": " + e.what());
    }
  }
  if (p.empty()) throw InputError(field + ": empty point");
  return p;
}

std::vector<std::size_t> parse_dims(const std::string& csv) {
  std::vector<std::size_t> dims;
  for (const auto& cell : split(csv, ',')) {
    const double v = parse_double(cell, "dims");
    if (!(v >= 1.0) || v != std::floor(v)) throw InputError("dims: entries must be positive integers");
    dims.push_back(static_cast<std::size_t>(v));
  }
  return dims;
}

DenseTensor tensor_from_json(const nlohmann::json& j, const std::vector<std::size_t>& dims) {
  DenseTensor t;
  t.shape = dims;
  tensor_fill(j, dims, 0, t.data);
  return t;
}

ordered_json to_json(const ConditionReport& report) {
  ordered_json j;
  j["tail_start"] = report.tail_start;
  j["steps_checked"] = report.steps_checked;
  j["sigma_hat"] = optional_number(report.sigma_hat);
  j["kappa_hat"] = optional_number(report.kappa_hat);
  j["a2_violations"] = report.a2_violations;
  j["degenerate_steps"] = report.degenerate_steps;
  j["certified"] = report.certified();
  return j;
}

ordered_json to_json(const DirectionTrail& trail) {
  ordered_json j;
  j["center"] = trail.center;
  j["length"] = trail.size();
  j["skipped"] = trail.skipped;
  j["tail_start"] = trail.tail_start;
  j["min_tail_pencil"] = trail.min_tail_pencil;
  j["a4_certified"] = trail.a4_certified();
  j["limit_spread"] = trail.limit_spread;
  if (!trail.unit_directions.empty()) {
    j["last_direction"] = trail.unit_directions.back();
    j["last_limit"] = optional_number(trail.limit_values.back());
  }
  return j;
}

ordered_json to_json(const ProbeResult& probe) {
  auto certs = [](const std::vector<LojasiewiczCertificate>& list) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : list) {
      ordered_json e;
      e["theta"] = c.theta;
      e["c"] = finite_or_null(c.c);
      e["feasible"] = c.feasible;
      if (c.binding_index) e["binding_index"] = *c.binding_index;
      arr.push_back(std::move(e));
    }
    return arr;
  };
  ordered_json j;
  j["L"] = probe.L;
  j["L_extrapolated"] = probe.L_extrapolated;
  j["L_fit_quality"] = probe.L_fit_quality;
  j["tail_start"] = probe.certificates.empty() ? 0 : probe.certificates.front().tail_start;
  j["any_feasible"] = probe.any_feasible();
  j["certificates"] = certs(probe.certificates);
  j["sensitivity_at_last_f"] = certs(probe.sensitivity);
  if (!probe.diagnostic.empty()) j["diagnostic"] = probe.diagnostic;
  return j;
}

ordered_json to_json(const RateEstimate& rate) {
  ordered_json j;
  j["regime"] = to_string(rate.regime);
  j["q"] = optional_number(rate.q);
  j["p"] = optional_number(rate.p);
  j["theta_from_p"] = optional_number(rate.theta_from_p);
  j["fit_quality"] = rate.fit_quality;
  j["linear_fit_quality"] = rate.linear_fit_quality;
  j["power_fit_quality"] = rate.power_fit_quality;
  j["increases"] = rate.increases;
  if (!rate.diagnostic.empty()) j["diagnostic"] = rate.diagnostic;
  return j;
}

std::vector<ProblemFile> bundled_examples() {
  const auto x = Polynomial::variable(2, 0);
  const auto y = Polynomial::variable(2, 1);
  const auto one = Polynomial::constant(2, 1);
  const auto r2 = x * x + y * y;
  const RationalFunction fig1(x * y, r2 * (one + r2));

  const ExactPoint origin{0, 0};
  const ExactPoint right{3, 0};
  const ExactPoint up{0, 3};
  const RationalFunction multi3 = fig1 + fig1.shifted(right) + fig1.shifted(up);

  const RationalFunction counterex(y * y - x * x, r2);
  return {
      ProblemFile{"fig1", fig1, {origin}},
      ProblemFile{"multi3", multi3, {origin, right, up}},
      ProblemFile{"counterex", counterex, {origin}},
  };
}

void write_level_set_csv(std::ostream& out, const RationalFunction& f, double lo, double hi, std::size_t steps) {
  if (f.n_vars() != 2) throw ValidationError("level set: the objective must have two variables");
  if (steps < 2) throw ValidationError("level set: need at least two grid steps");
  out << "x,y,f\n";
  for (std::size_t i = 0; i < steps; ++i) {
    for (std::size_t j = 0; j < steps; ++j) {
      const Point p{lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1),
                    lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(steps - 1)};
      out << format_double(p[0]) << "," << format_double(p[1]) << ",";
      if (f.in_domain(p)) out << format_double(f.value(p));
      out << "\n";
    }
  }
}

}  // namespace singulim
