#include "singulim/homog.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "singulim/errors.hpp"

namespace singulim {

namespace {

constexpr double kUnitTolerance = 1e-12;
// Points already on the unit sphere to this accuracy are not renormalized.
constexpr double kAlreadyNormalized = 1e-15;

// Calls visit(index) for every multi-index of `dims`, last index fastest.
void for_each_index(const std::vector<std::size_t>& dims,
                    const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> idx(dims.size(), 0);
  for (;;) {
    visit(idx);
    std::size_t m = dims.size();
    while (m > 0) {
      --m;
      if (++idx[m] < dims[m]) break;
      idx[m] = 0;
      if (m == 0) return;
    }
    if (dims.empty()) return;
  }
}

}  // namespace

Point normalize(std::span<const double> v) {
  const double len = norm2(v);
  if (len == 0.0) throw ValidationError("normalize: zero vector");
  if (!std::isfinite(len)) throw ValidationError("normalize: vector has non-finite entries");
  Point u(v.begin(), v.end());
  for (double& a : u) a /= len;
  return u;
}

NormalizationBound normalization_bound_check(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DimensionError("normalization_bound_check: dimension mismatch");
  if (std::abs(norm2(u) - 1.0) > kUnitTolerance) throw ValidationError("normalization_bound_check: u is not a unit vector");
  const Point w = normalize(v);
  return {distance(u, w), 2.0 * distance(u, v)};
}

std::size_t DenseTensor::element_count() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

double DenseTensor::norm_sq() const {
  double s = 0.0;
  for (double a : data) s += a * a;
  return s;
}

CPModel::CPModel(std::vector<std::size_t> dims, std::size_t rank) : dims_(std::move(dims)), rank_(rank) {
  if (dims_.size() < 2) throw ValidationError("CP model: order must be at least 2");
  if (rank_ == 0) throw ValidationError("CP model: rank must be positive");
  for (std::size_t d : dims_) {
    if (d == 0) throw ValidationError("CP model: every dimension must be positive");
    dim_sum_ += d;
  }
}

std::size_t CPModel::offset(std::size_t term, std::size_t mode) const {
  std::size_t off = term * dim_sum_;
  for (std::size_t m = 0; m < mode; ++m) off += dims_[m];
  return off;
}

DenseTensor CPModel::tensor(std::span<const double> params) const {
  if (params.size() != parameter_count()) {
    throw DimensionError("CP model: expected " + std::to_string(parameter_count()) + " parameters, got " +
                         std::to_string(params.size()));
  }
  DenseTensor t;
  t.shape = dims_;
  t.data.reserve(t.element_count());
  for_each_index(dims_, [&](const std::vector<std::size_t>& idx) {
    double entry = 0.0;
    for (std::size_t s = 0; s < rank_; ++s) {
      double prod = 1.0;
      for (std::size_t m = 0; m < order(); ++m) prod *= params[offset(s, m) + idx[m]];
      entry += prod;
    }
    t.data.push_back(entry);
  });
  return t;
}

HomogenizedObjective build_cp_objective(const CPModel& model, const DenseTensor& target, std::size_t budget) {
  if (target.shape != model.dims()) throw DimensionError("build_cp_objective: target shape does not match dims");
  if (target.data.size() != target.element_count()) {
    throw DimensionError("build_cp_objective: target has " + std::to_string(target.data.size()) +
                         " entries, shape needs " + std::to_string(target.element_count()));
  }
  if (model.parameter_count() > budget) {
    throw ValidationError("build_cp_objective: sum(dims)*rank = " + std::to_string(model.parameter_count()) +
                          " exceeds the symbolic budget " + std::to_string(budget));
  }
  const std::size_t n = model.parameter_count();
  const std::size_t order = model.order();

  // |tau|^2 = sum_{s,t} prod_m <a_{s,m}, a_{t,m}>
  Polynomial tau_norm_sq(n);
  for (std::size_t s = 0; s < model.rank(); ++s) {
    for (std::size_t t = 0; t < model.rank(); ++t) {
      Polynomial prod = Polynomial::constant(n, 1);
      for (std::size_t m = 0; m < order; ++m) {
        Polynomial inner(n);
        for (std::size_t i = 0; i < model.dims()[m]; ++i) {
          inner += Polynomial::variable(n, model.offset(s, m) + i) * Polynomial::variable(n, model.offset(t, m) + i);
        }
        prod *= inner;
      }
      tau_norm_sq += prod;
    }
  }

  std::vector<std::pair<Monomial, Rational>> inner_terms;
  std::size_t flat = 0;
  for_each_index(model.dims(), [&](const std::vector<std::size_t>& idx) {
    const double entry = target.data[flat++];
    if (entry == 0.0) return;
    const Rational coeff(entry);
    for (std::size_t s = 0; s < model.rank(); ++s) {
      Monomial mono(n, 0);
      for (std::size_t m = 0; m < order; ++m) ++mono[model.offset(s, m) + idx[m]];
      inner_terms.emplace_back(std::move(mono), coeff);
    }
  });
  Polynomial tau_inner_target = Polynomial::from_terms(n, inner_terms);

  Rational target_norm_sq = 0;
  for (double a : target.data) target_norm_sq += Rational(a) * Rational(a);

  const Polynomial denom = tau_norm_sq * tau_norm_sq;
  const Polynomial numer = denom * target_norm_sq - tau_inner_target * tau_inner_target * tau_norm_sq;
  return HomogenizedObjective{model, RationalFunction(numer, denom), target_norm_sq.get_d(),
                              std::move(tau_norm_sq), std::move(tau_inner_target)};
}

double euler_check(const RationalFunction& f, std::span<const double> x) {
  const auto [value, grad] = f.value_and_gradient(x);
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += grad[i] * x[i];
  return dot;
}

double euler_tolerance(const RationalFunction& f, std::span<const double> x) {
  const auto [value, grad] = f.value_and_gradient(x);
  return 1e-8 * (1.0 + norm2(grad) * norm2(x));
}

ConditionReport normalized_a1_check(const RationalFunction& f, const DescentTrace& trace, std::size_t tail_start) {
  std::vector<Point> units;
  units.reserve(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const Point& x = trace.iterates[k];
    const double len = norm2(x);
    if (len == 0.0) throw ValidationError("normalized_a1_check: iterate " + std::to_string(k) + " is the zero vector");
    const double euler = euler_check(f, x);
    if (!(std::abs(euler) <= euler_tolerance(f, x))) {
      throw ValidationError("normalized_a1_check: objective fails the degree-0 Euler check at iterate " +
                            std::to_string(k));
    }
    units.push_back(std::abs(len - 1.0) <= kAlreadyNormalized ? x : normalize(x));
  }
  return check_conditions(trace_from_points(f, units), tail_start);
}

}  // namespace singulim
