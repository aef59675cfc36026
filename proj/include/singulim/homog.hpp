#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "singulim/descent.hpp"
#include "singulim/polynomial.hpp"
#include "singulim/rational_function.hpp"

namespace singulim {

/// v / |v| with the norm computed by scaling; throws ValidationError on 0.
Point normalize(std::span<const double> v);

struct NormalizationBound {
  double lhs = 0.0;  // |u - v/|v||
  double rhs = 0.0;  // 2 |u - v|
  bool holds() const { return lhs <= rhs; }
};

/// Requires |u| = 1 within 1e-12 and v != 0.
NormalizationBound normalization_bound_check(std::span<const double> u, std::span<const double> v);

/// Dense tensor, row-major (last index fastest).
struct DenseTensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  std::size_t element_count() const;
  double norm_sq() const;
};

/// Rank-r CP parameterization tau(x) = sum_s a_{s,1} (x) ... (x) a_{s,d}.
/// Parameters are laid out term-major: factor (s, m) starts at
/// s * sum(dims) + dims[0] + ... + dims[m-1].
class CPModel {
 public:
  CPModel(std::vector<std::size_t> dims, std::size_t rank);

  std::size_t order() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t rank() const { return rank_; }
  std::size_t parameter_count() const { return rank_ * dim_sum_; }
  std::size_t offset(std::size_t term, std::size_t mode) const;

  /// Dense tau(x) for a parameter vector.
  DenseTensor tensor(std::span<const double> params) const;

 private:
  std::vector<std::size_t> dims_;
  std::size_t rank_;
  std::size_t dim_sum_ = 0;
};

/// Default limit on sum(dims) * rank for symbolic expansion.
inline constexpr std::size_t kSymbolicBudget = 12;

struct HomogenizedObjective {
  CPModel model;
  /// f_hat = (|T|^2 |tau|^4 - <tau,T>^2 |tau|^2) / |tau|^4.
  RationalFunction f_hat;
  double target_norm_sq = 0.0;
  Polynomial tau_norm_sq;
  Polynomial tau_inner_target;
};

HomogenizedObjective build_cp_objective(const CPModel& model, const DenseTensor& target,
                                        std::size_t budget = kSymbolicBudget);

/// <grad f(x), x>, which vanishes for degree-0 homogeneous f.
double euler_check(const RationalFunction& f, std::span<const double> x);
/// 1e-8 * (1 + |grad f(x)| |x|).
double euler_tolerance(const RationalFunction& f, std::span<const double> x);

/// Sufficient-decrease report for the normalized sequence x_k/|x_k|, with f and grad f
/// recomputed there. Throws ValidationError when some iterate is zero or
/// fails the Euler check.
ConditionReport normalized_a1_check(const RationalFunction& f, const DescentTrace& trace,
                                    std::size_t tail_start);

}  // namespace singulim
