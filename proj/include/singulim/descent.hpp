#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "singulim/rational_function.hpp"

namespace singulim {

struct DescentConfig {
  double sigma_armijo = 0.1;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  std::size_t max_iters = 100000;
  double grad_tol = 1e-12;
  double f_equal_tol = 0.0;

  /// Throws ValidationError naming the first out-of-range field.
  void validate() const;
};

/// Halvings tried before the line search gives up.
inline constexpr int kMaxBacktracks = 60;

enum class StopReason { grad_tol, f_stationary, max_iters, domain_violation, external };

std::string to_string(StopReason reason);
/// Inverse of to_string; throws InputError on unknown names.
StopReason parse_stop_reason(const std::string& name);

/// Iterates x_k with f(x_k), |grad f(x_k)| and the accepted step data.
/// step_norms and step_sizes are one shorter than iterates; step sizes are
/// NaN for traces that were not produced by optimize.
struct DescentTrace {
  std::vector<Point> iterates;
  std::vector<double> f_values;
  std::vector<double> grad_norms;
  std::vector<double> step_norms;
  std::vector<double> step_sizes;
  StopReason stop_reason = StopReason::external;
  std::string diagnostic;

  std::size_t size() const { return iterates.size(); }
  bool empty() const { return iterates.empty(); }
  std::size_t n_vars() const { return iterates.empty() ? 0 : iterates.front().size(); }

  /// Throws ValidationError unless the per-point and per-step sequences have
  /// consistent lengths and dimensions.
  void check_consistent() const;
};

/// Steepest descent with Armijo backtracking. Throws DomainError when x0 is
/// outside the domain of f.
DescentTrace optimize(const RationalFunction& f, std::span<const double> x0,
                      const DescentConfig& cfg = {});

/// Trace over prescribed points with f and |grad f| recomputed from `f`.
DescentTrace trace_from_points(const RationalFunction& f, const std::vector<Point>& points);

struct ConditionReport {
  /// min over the tail of (f_k - f_{k+1}) / (|grad f(x_k)| |x_{k+1} - x_k|).
  std::optional<double> sigma_hat;
  /// min over the tail of |x_{k+1} - x_k| / |grad f(x_k)|.
  std::optional<double> kappa_hat;
  std::size_t a2_violations = 0;
  /// Zero steps taken at a nonzero gradient.
  std::size_t degenerate_steps = 0;
  std::size_t tail_start = 0;
  std::size_t steps_checked = 0;

  bool certified() const {
    return sigma_hat && *sigma_hat > 0 && kappa_hat && *kappa_hat > 0 && a2_violations == 0;
  }
};

/// Empirical decrease, strict-decrease and step-size checks over steps k >= tail_start. A single-point trace gives
/// an empty report.
ConditionReport check_conditions(const DescentTrace& trace, std::size_t tail_start);

/// First index of the trailing `fraction` of a trace of `length` points,
/// clamped so that at least one step remains when possible.
std::size_t tail_start_for(std::size_t length, double fraction);

}  // namespace singulim
