#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace singulim {

using Rational = mpq_class;

/// Floating-point point in R^n.
using Point = std::vector<double>;
/// Point with exact rational coordinates (singular points, exact directions).
using ExactPoint = std::vector<Rational>;

/// Exponent vector of a monomial, one entry per variable.
using Monomial = std::vector<unsigned>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in canonical form: no zero coefficients, every monomial has
/// exactly n_vars() entries, and the term map is ordered lexicographically by
/// exponent vector. Two polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  /// The zero polynomial in `n_vars` variables.
  explicit Polynomial(std::size_t n_vars = 1);

  static Polynomial constant(std::size_t n_vars, const Rational& c);
  static Polynomial variable(std::size_t n_vars, std::size_t index);
  static Polynomial term(Monomial exponents, const Rational& c);
  /// Sums duplicate monomials and drops zero coefficients.
  static Polynomial from_terms(std::size_t n_vars,
                               const std::vector<std::pair<Monomial, Rational>>& terms);

  std::size_t n_vars() const { return n_vars_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  /// Exact test: true iff no terms remain after canonicalization.
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  /// Largest exponent of variable `i` over all terms.
  unsigned degree_in(std::size_t i) const;
  /// Coefficient of `exponents` (zero when absent).
  Rational coefficient(const Monomial& exponents) const;
  /// True when every term has total degree `d`.
  bool is_homogeneous(int d) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& scalar);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  Polynomial operator-() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

  /// Formal partial derivative with respect to variable `i`.
  Polynomial partial(std::size_t i) const;

  /// Floating-point evaluation.
  double evaluate(std::span<const double> x) const;
  /// Exact evaluation at rational coordinates.
  Rational evaluate(std::span<const Rational> x) const;

  /// Terms of total degree exactly `d`.
  Polynomial homogeneous_component(int d) const;

  /// Human-readable form such as "x1^2*x2 - 1/2*x3" (diagnostics only).
  std::string to_string() const;

 private:
  void check_same_size(const Polynomial& other, const char* op) const;

  std::size_t n_vars_;
  Terms terms_;
};

Polynomial pow(const Polynomial& p, unsigned k);

/// Maclaurin coefficients of t -> p(base + t*d) as polynomials in d.
///
/// Returns f_0..f_deg(p) with p(base + t*d) = sum_n f_n(d) t^n; f_n is the
/// standard 1/n! Taylor coefficient and is homogeneous of degree n in d.
/// The zero polynomial yields a single zero coefficient.
std::vector<Polynomial> compose_line(const Polynomial& p, std::span<const Rational> base);

/// Parses "num/den", "num", or a decimal such as "-0.125" / "1e-3" exactly.
Rational parse_rational(const std::string& text);
/// Canonical text: "num" for integers, "num/den" otherwise.
std::string format_rational(const Rational& q);

ExactPoint to_exact(std::span<const double> x);
Point to_double(std::span<const Rational> x);

}  // namespace singulim
