#include "singulim/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "singulim/errors.hpp"

namespace singulim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kLimitFitPoints = 20;
constexpr double kLimitFitQuality = 0.99;
constexpr double kCertificateSlack = 1e-12;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit fit;
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // A flat response is fitted perfectly but carries no trend.
  fit.r2 = syy == 0.0 ? 0.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

std::optional<Rational> snap(double v, const ClusterOptions& options) {
  for (unsigned q = 1; q <= options.max_denominator; ++q) {
    const double num = std::round(v * q);
    if (std::abs(v - num / q) <= options.tolerance) {
      Rational r(static_cast<long>(num), q);
      r.canonicalize();
      return r;
    }
  }
  return std::nullopt;
}

// Ratio |r|^(1-theta) / g with 0/0 read as 0: the inequality holds trivially.
double lojasiewicz_ratio(double residual, double gnorm, double theta) {
  const double lhs = std::pow(std::abs(residual), 1.0 - theta);
  if (lhs == 0.0) return 0.0;
  if (gnorm == 0.0) return kInf;
  return lhs / gnorm;
}

std::vector<LojasiewiczCertificate> certificates_at(const DescentTrace& trace, std::size_t tail_start,
                                                    std::span<const double> grid, double L) {
  std::vector<LojasiewiczCertificate> out;
  for (double theta : grid) {
    LojasiewiczCertificate cert;
    cert.theta = theta;
    cert.L = L;
    cert.tail_start = tail_start;
    for (std::size_t k = tail_start; k < trace.size(); ++k) {
      const double ratio = lojasiewicz_ratio(trace.f_values[k] - L, trace.grad_norms[k], theta);
      if (!cert.binding_index || ratio > cert.c) {
        cert.c = ratio;
        cert.binding_index = k;
      }
    }
    cert.feasible = cert.binding_index.has_value() && std::isfinite(cert.c);
    out.push_back(cert);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.theta < b.theta; });
  return out;
}

}  // namespace

std::optional<ClusterPoint> find_cluster_point(const DescentTrace& trace, const ClusterOptions& options) {
  if (trace.empty()) throw ValidationError("find_cluster_point: empty trace");
  const std::size_t n = trace.size();
  const auto window = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(options.window_fraction * static_cast<double>(n))));
  const std::size_t first = n - std::min(window, n);
  const std::size_t dim = trace.n_vars();

  Point mean(dim, 0.0);
  for (std::size_t k = first; k < n; ++k) {
    for (std::size_t i = 0; i < dim; ++i) mean[i] += trace.iterates[k][i];
  }
  for (double& m : mean) m /= static_cast<double>(n - first);

  double spread = 0.0;
  for (std::size_t k = first; k < n; ++k) spread = std::max(spread, distance(trace.iterates[k], mean));
  if (!(spread <= options.tolerance)) return std::nullopt;

  ClusterPoint result;
  result.point = mean;
  result.spread = spread;
  ExactPoint exact;
  for (double m : mean) {
    auto r = snap(m, options);
    if (!r) break;
    exact.push_back(*r);
  }
  if (exact.size() == dim) {
    result.point = to_double(exact);
    result.exact = std::move(exact);
  }
  return result;
}

DirectionTrail direction_trail(const DescentTrace& trace, const LinePencil& pencil, std::size_t tail_start) {
  if (trace.n_vars() != pencil.n_vars() && !trace.empty()) {
    throw DimensionError("direction_trail: trace and pencil dimensions differ");
  }
  DirectionTrail trail;
  trail.center = to_double(pencil.base);
  trail.tail_start = tail_start;
  const Polynomial& safe = pencil.safe_set_polynomial();
  const Polynomial limit_numer = pencil.limit_numerator();

  double min_pencil = kInf;
  double lo = kInf, hi = -kInf;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    Point u(trace.iterates[k]);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= trail.center[i];
    const double len = norm2(u);
    if (len == 0.0) {
      ++trail.skipped;
      continue;
    }
    for (double& v : u) v /= len;
    const double value = safe.evaluate(u);
    std::optional<double> limit;
    if (std::abs(value) > kSafeMargin) limit = limit_numer.evaluate(u) / value;

    if (k >= tail_start) {
      min_pencil = std::min(min_pencil, std::abs(value));
      if (limit) {
        lo = std::min(lo, *limit);
        hi = std::max(hi, *limit);
      }
    }
    trail.indices.push_back(k);
    trail.unit_directions.push_back(std::move(u));
    trail.pencil_values.push_back(value);
    trail.limit_values.push_back(limit);
  }
  trail.min_tail_pencil = std::isfinite(min_pencil) ? min_pencil : 0.0;
  trail.limit_spread = hi >= lo ? hi - lo : 0.0;
  return trail;
}

bool ProbeResult::any_feasible() const {
  return std::any_of(certificates.begin(), certificates.end(), [](const auto& c) { return c.feasible; });
}

std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(i / 20.0);
  return grid;
}

double estimate_limit(std::span<const double> f_values, bool* extrapolated, double* fit_quality) {
  if (extrapolated) *extrapolated = false;
  if (fit_quality) *fit_quality = 0.0;
  if (f_values.empty()) throw ValidationError("estimate_limit: no f-values");
  const double last = f_values.back();
  const std::size_t m = std::min(f_values.size(), kLimitFitPoints);
  if (m < 4) return last;
  const auto window = f_values.subspan(f_values.size() - m);

  std::vector<double> ks, logs;
  for (std::size_t i = 0; i + 1 < window.size(); ++i) {
    const double delta = window[i + 1] - window[i];
    if (delta == 0.0) return last;
    ks.push_back(static_cast<double>(i));
    logs.push_back(std::log(std::abs(delta)));
  }
  const LineFit fit = fit_line(ks, logs);
  if (fit_quality) *fit_quality = fit.r2;
  const double ratio = std::exp(fit.slope);
  if (fit.r2 < kLimitFitQuality || !(ratio > 0.0 && ratio < 1.0)) return last;
  const double last_delta = window[window.size() - 1] - window[window.size() - 2];
  if (extrapolated) *extrapolated = true;
  return last + last_delta * ratio / (1.0 - ratio);
}

ProbeResult lojasiewicz_probe(const DescentTrace& trace, std::size_t tail_start,
                              std::span<const double> theta_grid) {
  trace.check_consistent();
  if (tail_start >= trace.size()) {
    throw ValidationError("lojasiewicz_probe: tail_start " + std::to_string(tail_start) +
                          " is past the end of a trace of " + std::to_string(trace.size()) + " points");
  }
  for (double theta : theta_grid) {
    if (!(theta > 0.0 && theta <= 0.5)) throw ValidationError("lojasiewicz_probe: theta must lie in (0, 1/2]");
  }

  ProbeResult result;
  result.L = estimate_limit(trace.f_values, &result.L_extrapolated, &result.L_fit_quality);

  // A vanishing gradient away from the limit defeats every exponent, which
  // is a verdict in itself, so it is reported before the monotonicity check.
  for (std::size_t k = tail_start; k < trace.size(); ++k) {
    if (trace.grad_norms[k] == 0.0 && trace.f_values[k] != result.L) {
      result.diagnostic = "gradient vanishes at k = " + std::to_string(k) +
                          " while f differs from its limit estimate";
      result.certificates = certificates_at(trace, tail_start, theta_grid, result.L);
      result.sensitivity = certificates_at(trace, tail_start, theta_grid, trace.f_values.back());
      return result;
    }
  }
  for (std::size_t k = tail_start; k + 1 < trace.size(); ++k) {
    if (trace.f_values[k + 1] > trace.f_values[k]) {
      throw ValidationError("lojasiewicz_probe: f increases at k = " + std::to_string(k) +
                            "; the tail must be monotone");
    }
  }
  result.certificates = certificates_at(trace, tail_start, theta_grid, result.L);
  result.sensitivity = certificates_at(trace, tail_start, theta_grid, trace.f_values.back());
  return result;
}

ProbeResult lojasiewicz_probe(const DescentTrace& trace, std::size_t tail_start) {
  const auto grid = default_theta_grid();
  return lojasiewicz_probe(trace, tail_start, grid);
}

std::size_t verify_certificate(const DescentTrace& trace, const LojasiewiczCertificate& cert) {
  std::size_t violations = 0;
  for (std::size_t k = cert.tail_start; k < trace.size(); ++k) {
    const double lhs = std::pow(std::abs(trace.f_values[k] - cert.L), 1.0 - cert.theta);
    const double rhs = cert.c * trace.grad_norms[k];
    if (lhs == 0.0) continue;
    if (!(lhs <= rhs * (1.0 + kCertificateSlack))) ++violations;
  }
  return violations;
}

std::string to_string(RateRegime regime) {
  switch (regime) {
    case RateRegime::linear: return "linear";
    case RateRegime::sublinear: return "sublinear";
    case RateRegime::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

RateEstimate rate_classify(std::span<const double> distances, std::size_t first_index) {
  RateEstimate est;
  std::vector<double> ks, logs, log_ks_power, logs_power;
  std::size_t nonpositive = 0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double r = distances[i];
    if (i > 0 && r > distances[i - 1]) ++est.increases;
    if (!(r > 0.0) || !std::isfinite(r)) {
      ++nonpositive;
      continue;
    }
    const double k = static_cast<double>(first_index + i);
    ks.push_back(k);
    logs.push_back(std::log(r));
    if (k > 0.0) {
      log_ks_power.push_back(std::log(k));
      logs_power.push_back(std::log(r));
    }
  }
  if (ks.size() < 3) {
    est.diagnostic = "fewer than three positive distances on the tail";
    return est;
  }
  if (!(distances.back() < distances.front())) {
    est.diagnostic = "distances do not decrease over the tail";
    return est;
  }

  const LineFit linear = fit_line(ks, logs);
  const LineFit power = log_ks_power.size() >= 3 ? fit_line(log_ks_power, logs_power) : LineFit{};
  est.linear_fit_quality = linear.r2;
  est.power_fit_quality = power.r2;
  est.fit_quality = std::max(linear.r2, power.r2);
  if (est.increases > 0) {
    est.diagnostic = std::to_string(est.increases) + " tail steps increase the distance";
  }
  if (nonpositive > 0) {
    if (!est.diagnostic.empty()) est.diagnostic += "; ";
    est.diagnostic += std::to_string(nonpositive) + " zero distances skipped";
  }
  if (est.fit_quality < kRateMinFitQuality) return est;

  if (linear.r2 >= power.r2) {
    const double q = std::exp(linear.slope);
    if (q > 0.0 && q < 1.0) {
      est.regime = RateRegime::linear;
      est.q = q;
      est.fit_quality = linear.r2;
    }
  } else {
    const double p = -power.slope;
    if (p > 0.0) {
      est.regime = RateRegime::sublinear;
      est.p = p;
      est.theta_from_p = p / (1.0 + 2.0 * p);
      est.fit_quality = power.r2;
    }
  }
  return est;
}

RateEstimate rate_classify(const DescentTrace& trace, std::span<const double> x_star, std::size_t tail_start) {
  if (x_star.size() != trace.n_vars()) throw DimensionError("rate_classify: x_star has wrong dimension");
  if (tail_start >= trace.size()) throw ValidationError("rate_classify: tail_start past the end of the trace");
  std::vector<double> distances;
  for (std::size_t k = tail_start; k < trace.size(); ++k) distances.push_back(distance(trace.iterates[k], x_star));
  return rate_classify(distances, tail_start);
}

}  // namespace singulim
