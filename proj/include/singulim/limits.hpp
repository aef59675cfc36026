#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "singulim/descent.hpp"
#include "singulim/singularity.hpp"

namespace singulim {

struct ClusterOptions {
  /// Trailing fraction of the iterates that must have settled.
  double window_fraction = 0.1;
  /// Every window point must lie this close to the window mean.
  double tolerance = 1e-8;
  /// Coordinates within `tolerance` of p/q with q <= this are snapped.
  unsigned max_denominator = 16;
};

struct ClusterPoint {
  Point point;
  /// Set when every coordinate snapped to a small-denominator rational.
  std::optional<ExactPoint> exact;
  /// Largest distance from a window point to the window mean.
  double spread = 0.0;
};

std::optional<ClusterPoint> find_cluster_point(const DescentTrace& trace,
                                               const ClusterOptions& options = {});

/// Normalized approach directions (x_k - x*)/|x_k - x*| and the safe-set
/// polynomial evaluated on them.
struct DirectionTrail {
  Point center;
  std::vector<std::size_t> indices;
  std::vector<Point> unit_directions;
  std::vector<double> pencil_values;
  /// Directional limit along each unit direction (unset when unsafe).
  std::vector<std::optional<double>> limit_values;
  /// Iterates equal to the center, left out of the trail.
  std::size_t skipped = 0;
  std::size_t tail_start = 0;
  /// min |pencil value| over trail entries with index >= tail_start.
  double min_tail_pencil = 0.0;
  /// max - min of the directional limits over the tail.
  double limit_spread = 0.0;

  std::size_t size() const { return indices.size(); }
  /// Tail directions stay at least `margin` inside the safe set.
  bool a4_certified(double margin = kSafeMargin) const { return !indices.empty() && min_tail_pencil > margin; }
};

DirectionTrail direction_trail(const DescentTrace& trace, const LinePencil& pencil,
                               std::size_t tail_start = 0);

struct LojasiewiczCertificate {
  double theta = 0.0;
  /// Smallest c making |f_k - L|^(1-theta) <= c |grad f(x_k)| on the tail;
  /// +inf when some tail gradient vanishes at a nonzero residual.
  double c = 0.0;
  double L = 0.0;
  std::size_t tail_start = 0;
  bool feasible = false;
  /// Tail index where the bound is tight.
  std::optional<std::size_t> binding_index;
};

struct ProbeResult {
  double L = 0.0;
  /// True when L came from the geometric extrapolation of the f-decrements.
  bool L_extrapolated = false;
  double L_fit_quality = 0.0;
  std::vector<LojasiewiczCertificate> certificates;
  /// The same grid evaluated at L = last f-value.
  std::vector<LojasiewiczCertificate> sensitivity;
  std::string diagnostic;

  bool any_feasible() const;
};

std::vector<double> default_theta_grid();

/// Estimate of lim f(x_k): last value plus the geometric-tail correction when
/// log|f_{k+1} - f_k| is linear in k (R^2 >= 0.99) over the last 20 points.
double estimate_limit(std::span<const double> f_values, bool* extrapolated = nullptr,
                      double* fit_quality = nullptr);

/// Certificates for each theta, sorted by theta. A vanishing tail gradient at
/// a nonzero residual makes every theta infeasible; otherwise a tail that is
/// not non-increasing throws ValidationError.
ProbeResult lojasiewicz_probe(const DescentTrace& trace, std::size_t tail_start,
                              std::span<const double> theta_grid);
ProbeResult lojasiewicz_probe(const DescentTrace& trace, std::size_t tail_start);

/// Pointwise re-check of a certificate on the tail; returns the number of
/// violations.
std::size_t verify_certificate(const DescentTrace& trace, const LojasiewiczCertificate& cert);

enum class RateRegime { linear, sublinear, inconclusive };
std::string to_string(RateRegime regime);

struct RateEstimate {
  RateRegime regime = RateRegime::inconclusive;
  std::optional<double> q;
  std::optional<double> p;
  std::optional<double> theta_from_p;
  /// R^2 of the chosen fit (the better one when inconclusive).
  double fit_quality = 0.0;
  double linear_fit_quality = 0.0;
  double power_fit_quality = 0.0;
  /// Tail steps where the distance grew.
  std::size_t increases = 0;
  std::string diagnostic;
};

inline constexpr double kRateMinFitQuality = 0.95;

/// Classifies distances r_k, k = first_index, first_index+1, ..., by fitting
/// log r against k and against log k.
RateEstimate rate_classify(std::span<const double> distances, std::size_t first_index);
RateEstimate rate_classify(const DescentTrace& trace, std::span<const double> x_star,
                           std::size_t tail_start);

}  // namespace singulim
