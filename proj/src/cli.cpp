#include "singulim/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "singulim/errors.hpp"
#include "singulim/io.hpp"

namespace singulim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SINGULIM_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    throw InputError("SINGULIM_SEED: expected a non-negative integer, got '" + std::string(env) + "'");
  }
  return 1;
}

std::string format_point(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += format_double(x[i]);
  }
  return s + ")";
}

std::string format_exact(const ExactPoint& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += format_rational(x[i]);
  }
  return s + ")";
}

void check_dimension(std::size_t got, std::size_t want, const std::string& field) {
  if (got != want) {
    throw InputError(field + ": expected " + std::to_string(want) + " coordinates, got " + std::to_string(got));
  }
}

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

void print_verdict(std::ostream& out, const DirectionVerdict& v) {
  out << "direction " << format_point(v.direction) << ": " << (v.in_safe_set ? "safe" : "unsafe")
      << ", pencil_value " << format_double(v.pencil_value);
  if (v.limit_value) out << ", limit " << format_double(*v.limit_value);
  out << "\n";
}

struct OptimizeArgs {
  std::string problem, x0, trace_out;
  DescentConfig cfg;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out) {
  const ProblemFile problem = read_problem(a.problem);
  const Point x0 = parse_point(a.x0, "--x0");
  check_dimension(x0.size(), problem.function.n_vars(), "--x0");
  const DescentTrace trace = optimize(problem.function, x0, a.cfg);
  if (!a.trace_out.empty()) write_trace_file(a.trace_out, trace);
  out << "iterations: " << trace.size() - 1 << "\n";
  out << "stop_reason: " << to_string(trace.stop_reason) << "\n";
  if (!trace.diagnostic.empty()) out << "diagnostic: " << trace.diagnostic << "\n";
  out << "x_final: " << format_point(trace.iterates.back()) << "\n";
  out << "f_final: " << format_double(trace.f_values.back()) << "\n";
  out << "grad_norm_final: " << format_double(trace.grad_norms.back()) << "\n";
  return kExitOk;
}

struct AnalyzeArgs {
  std::string problem, point;
  std::vector<std::string> directions;
  std::size_t random_directions = 0;
  std::optional<std::uint64_t> seed;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const ProblemFile problem = read_problem(a.problem);
  const ExactPoint x_star = parse_exact_point(a.point, "--point");
  check_dimension(x_star.size(), problem.function.n_vars(), "--point");
  const LinePencil pencil = analyze_singularity(problem.function, x_star);
  out << "point: " << format_exact(x_star) << "\n";
  out << "n_min: " << pencil.n_min << "\n";
  out << "f_n_min: " << polynomial_to_json(pencil.safe_set_polynomial()).dump() << "\n";
  out << "f_n_min_readable: " << pencil.safe_set_polynomial().to_string() << "\n";
  out << "numerator_order: " << (pencil.numer_order ? std::to_string(*pencil.numer_order) : "none") << "\n";
  for (const auto& d : a.directions) {
    const ExactPoint dir = parse_exact_point(d, "--direction");
    check_dimension(dir.size(), pencil.n_vars(), "--direction");
    print_verdict(out, direction_verdict(pencil, std::span<const Rational>(dir)));
  }
  if (a.random_directions > 0) {
    std::mt19937_64 rng(a.seed ? *a.seed : default_seed());
    std::normal_distribution<double> normal;
    std::size_t safe = 0;
    for (std::size_t k = 0; k < a.random_directions; ++k) {
      Point d(pencil.n_vars());
      for (double& v : d) v = normal(rng);
      if (norm2(d) == 0.0) continue;
      if (direction_verdict(pencil, std::span<const double>(d)).in_safe_set) ++safe;
    }
    out << "random_directions: " << a.random_directions << ", safe: " << safe << "\n";
  }
  return kExitOk;
}

struct DiagnoseArgs {
  std::string trace, problem, x_star, report;
  double tail_fraction = 0.5;
  std::vector<double> theta_grid;
};

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out) {
  const ProblemFile problem = read_problem(a.problem);
  const DescentTrace trace = read_trace_file(a.trace);
  if (trace.size() < 2) {
    throw InputError("--trace: '" + a.trace + "' holds a single iterate; diagnosis needs at least two");
  }
  check_dimension(trace.n_vars(), problem.function.n_vars(), "--trace");
  if (!(a.tail_fraction > 0.0 && a.tail_fraction <= 1.0)) throw InputError("--tail-fraction: must lie in (0, 1]");
  const std::size_t tail = tail_start_for(trace.size(), a.tail_fraction);

  ordered_json report;
  report["problem"] = problem.name;
  report["trace_length"] = trace.size();
  report["stop_reason"] = to_string(trace.stop_reason);
  report["f_final"] = trace.f_values.back();
  report["conditions"] = to_json(check_conditions(trace, tail));

  const auto cluster = find_cluster_point(trace);
  if (cluster) {
    report["cluster_point"] = cluster->point;
    report["cluster_spread"] = cluster->spread;
  } else {
    report["cluster_point"] = nullptr;
  }

  std::optional<ExactPoint> x_star;
  std::string source;
  if (!a.x_star.empty()) {
    x_star = parse_exact_point(a.x_star, "--x-star");
    check_dimension(x_star->size(), trace.n_vars(), "--x-star");
    source = "flag";
  } else if (cluster && cluster->exact) {
    x_star = cluster->exact;
    source = "cluster";
  } else if (!problem.singular_points.empty()) {
    // Nearest known singular point to the last iterate.
    double best = INFINITY;
    for (const auto& p : problem.singular_points) {
      const double d = distance(trace.iterates.back(), to_double(p));
      if (d < best) {
        best = d;
        x_star = p;
      }
    }
    source = "nearest_singular_point";
  }

  if (x_star) {
    const Point center = to_double(*x_star);
    report["x_star"] = center;
    report["x_star_source"] = source;
    try {
      const LinePencil pencil = analyze_singularity(problem.function, *x_star);
      report["n_min"] = pencil.n_min;
      report["direction_trail"] = to_json(direction_trail(trace, pencil, tail));
    } catch (const UnboundedFunctionError& e) {
      report["direction_trail"] = {{"error", e.what()}};
    }
    report["rate"] = to_json(rate_classify(trace, center, tail));
  } else {
    report["x_star"] = nullptr;
  }

  try {
    const auto grid = a.theta_grid.empty() ? default_theta_grid() : a.theta_grid;
    report["lojasiewicz"] = to_json(lojasiewicz_probe(trace, tail, grid));
  } catch (const ValidationError& e) {
    report["lojasiewicz"] = {{"error", e.what()}};
  }

  if (!a.report.empty()) write_json_file(a.report, report);
  out << report.dump(2) << "\n";
  return kExitOk;
}

struct TensorArgs {
  std::string dims, target, emit_problem, name = "cp_homogenized";
  std::size_t rank = 1;
  std::size_t budget = kSymbolicBudget;
};

int cmd_tensor(const TensorArgs& a, std::ostream& out) {
  const auto dims = parse_dims(a.dims);
  std::ifstream in(a.target);
  if (!in) throw InputError("--target: cannot open '" + a.target + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("--target: " + std::string(e.what()));
  }
  const DenseTensor target = tensor_from_json(j, dims);
  const CPModel model(dims, a.rank);
  const HomogenizedObjective obj = build_cp_objective(model, target, a.budget);
  const ProblemFile problem{a.name, obj.f_hat, {}};
  if (!a.emit_problem.empty()) write_problem(a.emit_problem, problem);
  out << "parameters: " << model.parameter_count() << "\n";
  out << "target_norm_sq: " << format_double(obj.target_norm_sq) << "\n";
  out << "numerator_terms: " << obj.f_hat.numer().term_count() << "\n";
  out << "denominator_terms: " << obj.f_hat.denom().term_count() << "\n";
  return kExitOk;
}

struct SeriesArgs {
  std::string problem, point, direction;
  std::size_t terms = kDefaultSeriesTerms;
};

int cmd_series(const SeriesArgs& a, std::ostream& out) {
  const ProblemFile problem = read_problem(a.problem);
  const ExactPoint x_star = parse_exact_point(a.point, "--point");
  check_dimension(x_star.size(), problem.function.n_vars(), "--point");
  const Point d = parse_point(a.direction, "--direction");
  check_dimension(d.size(), problem.function.n_vars(), "--direction");
  const TaylorLine line = taylor_line(problem.function, x_star, d, a.terms);
  out << "recurrence_order: " << line.recurrence_order << "\n";
  out << "recurrence_weights:";
  for (double w : line.recurrence_weights) out << " " << format_double(w);
  out << "\n";
  out << "radius_lower_bound: " << format_double(line.radius_lower_bound) << "\n";
  out << "recurrence_residual: " << format_double(recurrence_residual(line)) << "\n";
  out << "n,c_n\n";
  for (std::size_t n = 0; n < line.coeffs.size(); ++n) out << n << "," << format_double(line.coeffs[n]) << "\n";
  return kExitOk;
}

int cmd_examples(const std::string& dir, std::ostream& out) {
  std::filesystem::create_directories(dir);
  for (const auto& p : bundled_examples()) {
    const auto path = (std::filesystem::path(dir) / (p.name + ".problem")).string();
    write_problem(path, p);
    out << path << "\n";
  }
  return kExitOk;
}

struct LevelSetArgs {
  std::string problem, out_path;
  double lo = -2.5, hi = 2.5;
  std::size_t steps = 101;
};

int cmd_levelset(const LevelSetArgs& a, std::ostream& out) {
  const ProblemFile problem = read_problem(a.problem);
  if (!(a.hi > a.lo)) throw InputError("--hi: must exceed --lo");
  if (a.out_path.empty()) {
    write_level_set_csv(out, problem.function, a.lo, a.hi, a.steps);
  } else {
    std::ofstream file(a.out_path, std::ios::binary);
    if (!file) throw InputError("--out: cannot write '" + a.out_path + "'");
    write_level_set_csv(file, problem.function, a.lo, a.hi, a.steps);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Descent and singularity diagnostics for bounded rational functions", "singulim"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  auto* optimize_cmd = app.add_subcommand("optimize", "Run Armijo steepest descent and write the trace");
  optimize_cmd->add_option("--problem", opt.problem, "Problem file")->required();
  optimize_cmd->add_option("--x0", opt.x0, "Start point, comma separated")->required();
  optimize_cmd->add_option("--sigma", opt.cfg.sigma_armijo, "Armijo constant")->capture_default_str();
  optimize_cmd->add_option("--beta", opt.cfg.backtrack_factor, "Backtracking factor")->capture_default_str();
  optimize_cmd->add_option("--step0", opt.cfg.initial_step, "Initial step")->capture_default_str();
  optimize_cmd->add_option("--max-iters", opt.cfg.max_iters, "Iteration limit")->capture_default_str();
  optimize_cmd->add_option("--grad-tol", opt.cfg.grad_tol, "Gradient-norm stop")->capture_default_str();
  optimize_cmd->add_option("--f-equal-tol", opt.cfg.f_equal_tol, "f-equality stop")->capture_default_str();
  optimize_cmd->add_option("--trace-out", opt.trace_out, "Trace CSV output");

  AnalyzeArgs an;
  std::uint64_t seed_value = 0;
  auto* analyze_cmd = app.add_subcommand("analyze", "Safe directions and limits at a candidate point");
  analyze_cmd->add_option("--problem", an.problem, "Problem file")->required();
  analyze_cmd->add_option("--point", an.point, "Candidate point, exact rationals")->required();
  analyze_cmd->add_option("--direction", an.directions, "Direction to classify (repeatable)");
  analyze_cmd->add_option("--random-directions", an.random_directions, "Sample this many random directions");
  auto* seed_opt = analyze_cmd->add_option("--seed", seed_value, "Seed (default SINGULIM_SEED or 1)");

  DiagnoseArgs dg;
  auto* diagnose_cmd = app.add_subcommand("diagnose", "Certify conditions and rates on a trace");
  diagnose_cmd->add_option("--trace", dg.trace, "Trace CSV")->required();
  diagnose_cmd->add_option("--problem", dg.problem, "Problem file")->required();
  diagnose_cmd->add_option("--x-star", dg.x_star, "Limit point, exact rationals");
  diagnose_cmd->add_option("--report", dg.report, "Report JSON output");
  diagnose_cmd->add_option("--tail-fraction", dg.tail_fraction, "Trailing fraction checked")->capture_default_str();
  diagnose_cmd->add_option("--theta", dg.theta_grid, "Exponent grid (repeatable)");

  TensorArgs tn;
  auto* tensor_cmd = app.add_subcommand("tensor", "Emit the homogenized CP objective as a problem file");
  tensor_cmd->add_option("--dims", tn.dims, "Tensor dimensions, comma separated")->required();
  tensor_cmd->add_option("--rank", tn.rank, "CP rank")->required();
  tensor_cmd->add_option("--target", tn.target, "Target tensor JSON")->required();
  tensor_cmd->add_option("--emit-problem", tn.emit_problem, "Problem file output");
  tensor_cmd->add_option("--budget", tn.budget, "Symbolic budget on sum(dims)*rank")->capture_default_str();
  tensor_cmd->add_option("--name", tn.name, "Problem name")->capture_default_str();

  SeriesArgs sr;
  auto* series_cmd = app.add_subcommand("series", "Taylor coefficients along a direction");
  series_cmd->add_option("--problem", sr.problem, "Problem file")->required();
  series_cmd->add_option("--point", sr.point, "Base point, exact rationals")->required();
  series_cmd->add_option("--direction", sr.direction, "Direction")->required();
  series_cmd->add_option("--terms", sr.terms, "Number of coefficients")->capture_default_str();

  std::string examples_dir = "problems";
  auto* examples_cmd = app.add_subcommand("examples", "Write the bundled problem files");
  examples_cmd->add_option("--out-dir", examples_dir, "Output directory")->capture_default_str();

  LevelSetArgs ls;
  auto* levelset_cmd = app.add_subcommand("levelset", "Sample f on a grid for level-set plots");
  levelset_cmd->add_option("--problem", ls.problem, "Problem file")->required();
  levelset_cmd->add_option("--lo", ls.lo, "Grid lower bound")->capture_default_str();
  levelset_cmd->add_option("--hi", ls.hi, "Grid upper bound")->capture_default_str();
  levelset_cmd->add_option("--steps", ls.steps, "Samples per axis")->capture_default_str();
  levelset_cmd->add_option("--out", ls.out_path, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitMalformed;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitMalformed;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitMalformed;
  }

  try {
    if (*optimize_cmd) return cmd_optimize(opt, out);
    if (*analyze_cmd) {
      if (*seed_opt) an.seed = seed_value;
      return cmd_analyze(an, out);
    }
    if (*diagnose_cmd) return cmd_diagnose(dg, out);
    if (*tensor_cmd) return cmd_tensor(tn, out);
    if (*series_cmd) return cmd_series(sr, out);
    if (*examples_cmd) return cmd_examples(examples_dir, out);
    if (*levelset_cmd) return cmd_levelset(ls, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const UnboundedFunctionError& e) {
    err << "unbounded: " << e.what() << "\n";
    return kExitFailure;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitMalformed;
}

}  // namespace singulim
