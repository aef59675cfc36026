#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "singulim/polynomial.hpp"
#include "singulim/rational_function.hpp"

namespace singulim {

/// Relative margin for deciding safe-set membership of floating-point
/// directions: |f_nmin(d)| > kSafeMargin * ||d||^n_min.
inline constexpr double kSafeMargin = 1e-9;
inline constexpr std::size_t kDefaultSeriesTerms = 64;

/// Maclaurin coefficients (in t) of numerator and denominator along the lines
/// t -> base + t*d, as polynomials in the direction d.
struct LinePencil {
  ExactPoint base;
  std::vector<Polynomial> denom_coeffs;
  std::vector<Polynomial> numer_coeffs;
  /// First index whose denominator coefficient is not identically zero.
  std::size_t n_min = 0;
  /// Vanishing order of the numerator (nullopt when the numerator is 0).
  std::optional<std::size_t> numer_order;

  std::size_t n_vars() const { return base.size(); }
  /// f_{n_min}: the safe directions are exactly where it is nonzero.
  const Polynomial& safe_set_polynomial() const { return denom_coeffs[n_min]; }
  /// Numerator coefficient of order n_min (zero polynomial when absent).
  Polynomial limit_numerator() const;
};

/// Builds the pencil at `x_star`; throws UnboundedFunctionError when the
/// numerator vanishes to lower order than the denominator.
LinePencil analyze_singularity(const RationalFunction& f, std::span<const Rational> x_star);

struct DirectionVerdict {
  Point direction;
  bool in_safe_set = false;
  double pencil_value = 0.0;
  /// lim_{t->0} f(x* + t d), available on safe directions.
  std::optional<double> limit_value;
};

/// Floating-point direction: membership uses the relative kSafeMargin.
DirectionVerdict direction_verdict(const LinePencil& pencil, std::span<const double> d);
/// Exact direction: membership decided exactly.
DirectionVerdict direction_verdict(const LinePencil& pencil, std::span<const Rational> d);

/// Taylor expansion of t -> f(x* + t d) with its linear recurrence.
struct TaylorLine {
  Point direction;
  std::vector<double> coeffs;
  /// Degrees of the numerator and denominator after dividing out t^n_min.
  std::size_t numer_degree = 0;
  std::size_t denom_degree = 0;
  std::size_t recurrence_order = 0;
  /// w_j = -g_j/g_0, j = 1..recurrence_order: c_n = sum_j w_j c_{n-j}.
  std::vector<double> recurrence_weights;
  double radius_lower_bound = 0.0;

  /// Index after which the recurrence holds: max(numer_degree, denom_degree).
  std::size_t recurrence_start() const { return std::max(numer_degree, denom_degree); }
};

TaylorLine taylor_line(const LinePencil& pencil, std::span<const double> d,
                       std::size_t terms = kDefaultSeriesTerms);
TaylorLine taylor_line(const RationalFunction& f, std::span<const Rational> x_star,
                       std::span<const double> d, std::size_t terms = kDefaultSeriesTerms);

/// Companion matrix of the recurrence, row-major r x r (empty when r = 0).
std::vector<std::vector<double>> companion_matrix(std::span<const double> weights);
double infinity_norm(const std::vector<std::vector<double>>& m);

/// k / max(1, ||C||_inf) with k = 1/2.
double radius_lower_bound(const TaylorLine& line);

/// Largest relative residual of the recurrence over the stored coefficients.
double recurrence_residual(const TaylorLine& line);

/// sum_{n=first}^{first+count-1} |c_n t^n|, extending past the stored
/// coefficients with the recurrence applied to the scaled terms c_n t^n.
double series_tail(const TaylorLine& line, double t, std::size_t first, std::size_t count);
/// Partial sum sum_{n<terms} c_n t^n.
double series_partial_sum(const TaylorLine& line, double t, std::size_t terms);

/// Exact univariate tools: power-series quotient of two coefficient lists.
struct ExactSeries {
  std::vector<Rational> coeffs;
  std::vector<Rational> recurrence_weights;
  std::size_t numer_degree = 0;
  std::size_t denom_degree = 0;
};

/// numer/denom expanded to `count` coefficients; requires denom[0] != 0.
ExactSeries series_divide(std::span<const Rational> numer, std::span<const Rational> denom,
                          std::size_t count);
/// Extends `initial` to `count` terms with c_n = sum_j w_j c_{n-j}.
std::vector<Rational> recurrence_extend(std::span<const Rational> initial,
                                        std::span<const Rational> weights, std::size_t count);

}  // namespace singulim
