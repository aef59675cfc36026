#include "singulim/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "singulim/errors.hpp"

namespace singulim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

}  // namespace

void DescentConfig::validate() const {
  if (!(sigma_armijo > 0.0 && sigma_armijo < 1.0)) throw ValidationError("sigma_armijo must lie in (0,1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw ValidationError("backtrack_factor must lie in (0,1)");
  }
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) throw ValidationError("initial_step must be positive");
  if (!(grad_tol >= 0.0)) throw ValidationError("grad_tol must be non-negative");
  if (!(f_equal_tol >= 0.0)) throw ValidationError("f_equal_tol must be non-negative");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::grad_tol: return "grad_tol";
    case StopReason::f_stationary: return "f_stationary";
    case StopReason::max_iters: return "max_iters";
    case StopReason::domain_violation: return "domain_violation";
    case StopReason::external: return "external";
  }
  return "external";
}

StopReason parse_stop_reason(const std::string& name) {
  for (StopReason r : {StopReason::grad_tol, StopReason::f_stationary, StopReason::max_iters,
                       StopReason::domain_violation, StopReason::external}) {
    if (to_string(r) == name) return r;
  }
  throw InputError("unknown stop_reason '" + name + "'");
}

void DescentTrace::check_consistent() const {
  const std::size_t n = iterates.size();
  if (f_values.size() != n || grad_norms.size() != n) {
    throw ValidationError("trace: f_values and grad_norms must have one entry per iterate");
  }
  const std::size_t steps = n == 0 ? 0 : n - 1;
  if (step_norms.size() != steps || step_sizes.size() != steps) {
    throw ValidationError("trace: step_norms and step_sizes must be one shorter than iterates");
  }
  for (const auto& x : iterates) {
    if (x.size() != n_vars()) throw ValidationError("trace: iterates have differing dimensions");
  }
}

DescentTrace optimize(const RationalFunction& f, std::span<const double> x0, const DescentConfig& cfg) {
  cfg.validate();
  if (x0.size() != f.n_vars()) throw DimensionError("x0 has wrong dimension");

  DescentTrace trace;
  Point x(x0.begin(), x0.end());
  auto [fx, grad] = f.value_and_gradient(x);
  if (!all_finite(grad)) throw DomainError("gradient is not finite at x0", x);

  Point trial(x.size());
  for (std::size_t k = 0;; ++k) {
    const double gnorm = norm2(grad);
    trace.iterates.push_back(x);
    trace.f_values.push_back(fx);
    trace.grad_norms.push_back(gnorm);

    if (gnorm <= cfg.grad_tol) {
      trace.stop_reason = StopReason::grad_tol;
      break;
    }
    if (k >= cfg.max_iters) {
      trace.stop_reason = StopReason::max_iters;
      break;
    }

    double alpha = cfg.initial_step;
    bool accepted = false;
    double f_trial = 0.0, step = 0.0;
    for (int attempt = 0; attempt <= kMaxBacktracks; ++attempt, alpha *= cfg.backtrack_factor) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - alpha * grad[i];
      step = distance(trial, x);
      if (step == 0.0) break;
      try {
        f_trial = f.value(trial);
      } catch (const DomainError&) {
        continue;
      }
      // Ratio form, so the logged sigma_hat reproduces the acceptance decision.
      if ((fx - f_trial) / (gnorm * step) >= cfg.sigma_armijo) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      trace.stop_reason = StopReason::f_stationary;
      trace.diagnostic = "line search found no Armijo step after " + std::to_string(kMaxBacktracks) +
                         " halvings at iteration " + std::to_string(k);
      break;
    }
    if (std::abs(fx - f_trial) <= cfg.f_equal_tol) {
      trace.stop_reason = StopReason::f_stationary;
      trace.diagnostic = "f unchanged within f_equal_tol at iteration " + std::to_string(k);
      break;
    }

    std::pair<double, Point> next;
    try {
      next = f.value_and_gradient(trial);
    } catch (const DomainError& e) {
      trace.stop_reason = StopReason::domain_violation;
      trace.diagnostic = e.what();
      break;
    }
    if (!all_finite(next.second)) {
      trace.stop_reason = StopReason::domain_violation;
      trace.diagnostic = "gradient is not finite at iteration " + std::to_string(k + 1);
      break;
    }
    trace.step_norms.push_back(step);
    trace.step_sizes.push_back(alpha);
    x = trial;
    fx = next.first;
    grad = std::move(next.second);
  }
  return trace;
}

DescentTrace trace_from_points(const RationalFunction& f, const std::vector<Point>& points) {
  DescentTrace trace;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto [fx, grad] = f.value_and_gradient(points[k]);
    trace.iterates.push_back(points[k]);
    trace.f_values.push_back(fx);
    trace.grad_norms.push_back(norm2(grad));
    if (k > 0) {
      trace.step_norms.push_back(distance(points[k], points[k - 1]));
      trace.step_sizes.push_back(kNaN);
    }
  }
  trace.stop_reason = StopReason::external;
  return trace;
}

ConditionReport check_conditions(const DescentTrace& trace, std::size_t tail_start) {
  trace.check_consistent();
  ConditionReport report;
  report.tail_start = tail_start;
  if (trace.size() < 2) return report;
  if (tail_start + 1 >= trace.size()) {
    throw ValidationError("check_conditions: tail_start " + std::to_string(tail_start) +
                          " leaves no step in a trace of " + std::to_string(trace.size()) + " points");
  }
  for (std::size_t k = tail_start; k + 1 < trace.size(); ++k) {
    const double decrease = trace.f_values[k] - trace.f_values[k + 1];
    const double gnorm = trace.grad_norms[k];
    const double step = distance(trace.iterates[k + 1], trace.iterates[k]);
    ++report.steps_checked;
    if (decrease == 0.0 && step != 0.0) ++report.a2_violations;
    if (step == 0.0) {
      if (gnorm > 0.0) ++report.degenerate_steps;
      continue;
    }
    if (gnorm > 0.0) {
      const double sigma = decrease / (gnorm * step);
      const double kappa = step / gnorm;
      report.sigma_hat = report.sigma_hat ? std::min(*report.sigma_hat, sigma) : sigma;
      report.kappa_hat = report.kappa_hat ? std::min(*report.kappa_hat, kappa) : kappa;
    }
  }
  return report;
}

std::size_t tail_start_for(std::size_t length, double fraction) {
  if (length < 2) return 0;
  fraction = std::clamp(fraction, 0.0, 1.0);
  const auto tail = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(length)));
  std::size_t start = length - std::max<std::size_t>(tail, 2);
  return std::min(start, length - 2);
}

}  // namespace singulim
