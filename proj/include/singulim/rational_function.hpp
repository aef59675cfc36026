#pragma once

#include <memory>
#include <span>
#include <utility>

#include "singulim/polynomial.hpp"

namespace singulim {

/// |denom(x)| below this is treated as leaving the domain.
inline constexpr double kDenominatorFloor = 1e-300;

/// Polynomial flattened to double coefficients for fast repeated evaluation.
class CompiledPolynomial {
 public:
  explicit CompiledPolynomial(const Polynomial& p);

  std::size_t n_vars() const { return n_vars_; }
  double value(std::span<const double> x) const;
  /// Value plus all partial derivatives in one sweep over the terms.
  double value_and_gradient(std::span<const double> x, std::span<double> grad) const;

 private:
  std::vector<double> powers(std::span<const double> x) const;

  std::size_t n_vars_;
  std::vector<double> coeffs_;
  std::vector<unsigned> exps_;  // term-major, n_vars_ entries per term
  std::vector<unsigned> max_deg_;
  std::vector<std::size_t> power_offset_;
  std::size_t power_size_ = 0;
};

/// f = numer / denom with implicit domain {x : denom(x) != 0}.
///
/// Immutable after construction; copies share the compiled evaluators.
class RationalFunction {
 public:
  RationalFunction(Polynomial numer, Polynomial denom);

  static RationalFunction polynomial(Polynomial p);

  std::size_t n_vars() const { return numer_.n_vars(); }
  const Polynomial& numer() const { return numer_; }
  const Polynomial& denom() const { return denom_; }

  bool in_domain(std::span<const double> x) const;

  /// f(x); throws DomainError when |denom(x)| < kDenominatorFloor.
  double value(std::span<const double> x) const;
  /// f(x) and grad f(x) = (q grad p - p grad q) / q^2.
  std::pair<double, Point> value_and_gradient(std::span<const double> x) const;

  /// Exact value at rational coordinates; throws DomainError when denom is 0.
  Rational value(std::span<const Rational> x) const;

  RationalFunction operator+(const RationalFunction& other) const;
  RationalFunction operator*(const Rational& scalar) const;

  /// g(x) = f(x - shift), exactly; moves a singularity at 0 to `shift`.
  RationalFunction shifted(std::span<const Rational> shift) const;

 private:
  void check_point(std::span<const double> x) const;

  Polynomial numer_;
  Polynomial denom_;
  std::shared_ptr<const CompiledPolynomial> numer_eval_;
  std::shared_ptr<const CompiledPolynomial> denom_eval_;
};

/// Euclidean norm with scaling, safe for tiny and huge entries.
double norm2(std::span<const double> v);
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace singulim
