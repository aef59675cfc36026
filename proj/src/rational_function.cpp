#include "singulim/rational_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "singulim/errors.hpp"

namespace singulim {

CompiledPolynomial::CompiledPolynomial(const Polynomial& p)
    : n_vars_(p.n_vars()), max_deg_(p.n_vars(), 0), power_offset_(p.n_vars(), 0) {
  coeffs_.reserve(p.term_count());
  exps_.reserve(p.term_count() * n_vars_);
  for (const auto& [e, c] : p.terms()) {
    coeffs_.push_back(c.get_d());
    for (std::size_t i = 0; i < n_vars_; ++i) {
      exps_.push_back(e[i]);
      max_deg_[i] = std::max(max_deg_[i], e[i]);
    }
  }
  for (std::size_t i = 0; i < n_vars_; ++i) {
    power_offset_[i] = power_size_;
    power_size_ += max_deg_[i] + 1;
  }
}

std::vector<double> CompiledPolynomial::powers(std::span<const double> x) const {
  std::vector<double> pw(power_size_);
  for (std::size_t i = 0; i < n_vars_; ++i) {
    double* row = pw.data() + power_offset_[i];
    row[0] = 1.0;
    for (unsigned e = 1; e <= max_deg_[i]; ++e) row[e] = row[e - 1] * x[i];
  }
  return pw;
}

double CompiledPolynomial::value(std::span<const double> x) const {
  const auto pw = powers(x);
  double sum = 0.0;
  const unsigned* e = exps_.data();
  // Same product order as value_and_gradient so both paths agree bitwise.
  for (double c : coeffs_) {
    double t = 1.0;
    for (std::size_t i = 0; i < n_vars_; ++i) t *= pw[power_offset_[i] + e[i]];
    sum += c * t;
    e += n_vars_;
  }
  return sum;
}

double CompiledPolynomial::value_and_gradient(std::span<const double> x,
                                              std::span<double> grad) const {
  const auto pw = powers(x);
  std::fill(grad.begin(), grad.end(), 0.0);
  // prefix[i] = prod_{j<i} x_j^e_j, suffix built on the fly.
  std::vector<double> prefix(n_vars_ + 1);
  double sum = 0.0;
  const unsigned* e = exps_.data();
  for (double c : coeffs_) {
    prefix[0] = 1.0;
    for (std::size_t i = 0; i < n_vars_; ++i) prefix[i + 1] = prefix[i] * pw[power_offset_[i] + e[i]];
    sum += c * prefix[n_vars_];
    double suffix = 1.0;
    for (std::size_t i = n_vars_; i-- > 0;) {
      if (e[i] > 0) {
        grad[i] += c * e[i] * prefix[i] * pw[power_offset_[i] + e[i] - 1] * suffix;
      }
      suffix *= pw[power_offset_[i] + e[i]];
    }
    e += n_vars_;
  }
  return sum;
}

RationalFunction::RationalFunction(Polynomial numer, Polynomial denom)
    : numer_(std::move(numer)), denom_(std::move(denom)) {
  if (numer_.n_vars() != denom_.n_vars()) {
    throw DimensionError("rational function: numerator and denominator variable counts differ");
  }
  if (denom_.is_zero()) throw ValidationError("rational function: denominator is the zero polynomial");
  numer_eval_ = std::make_shared<const CompiledPolynomial>(numer_);
  denom_eval_ = std::make_shared<const CompiledPolynomial>(denom_);
}

RationalFunction RationalFunction::polynomial(Polynomial p) {
  const std::size_t n = p.n_vars();
  return RationalFunction(std::move(p), Polynomial::constant(n, 1));
}

void RationalFunction::check_point(std::span<const double> x) const {
  if (x.size() != n_vars()) {
    throw DimensionError("point has " + std::to_string(x.size()) + " coordinates, function has " +
                         std::to_string(n_vars()) + " variables");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("point has a non-finite coordinate", Point(x.begin(), x.end()));
  }
}

bool RationalFunction::in_domain(std::span<const double> x) const {
  check_point(x);
  return std::abs(denom_eval_->value(x)) >= kDenominatorFloor;
}

namespace {

[[noreturn]] void throw_outside(std::span<const double> x) {
  std::string where = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) where += ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x[i]);
    where += buf;
  }
  where += ")";
  throw DomainError("point " + where + " is outside the domain (denominator vanishes)",
                    Point(x.begin(), x.end()));
}

}  // namespace

double RationalFunction::value(std::span<const double> x) const {
  check_point(x);
  const double q = denom_eval_->value(x);
  if (!(std::abs(q) >= kDenominatorFloor)) throw_outside(x);
  return numer_eval_->value(x) / q;
}

std::pair<double, Point> RationalFunction::value_and_gradient(std::span<const double> x) const {
  check_point(x);
  const std::size_t n = n_vars();
  Point dp(n), dq(n);
  const double q = denom_eval_->value_and_gradient(x, dq);
  if (!(std::abs(q) >= kDenominatorFloor)) throw_outside(x);
  const double p = numer_eval_->value_and_gradient(x, dp);
  const double f = p / q;
  Point grad(n);
  for (std::size_t i = 0; i < n; ++i) grad[i] = (dp[i] - f * dq[i]) / q;
  return {f, std::move(grad)};
}

Rational RationalFunction::value(std::span<const Rational> x) const {
  if (x.size() != n_vars()) throw DimensionError("point has wrong dimension");
  const Rational q = denom_.evaluate(x);
  if (sgn(q) == 0) throw DomainError("denominator vanishes at the exact point", to_double(x));
  return numer_.evaluate(x) / q;
}

RationalFunction RationalFunction::operator+(const RationalFunction& other) const {
  if (denom_ == other.denom_) return RationalFunction(numer_ + other.numer_, denom_);
  return RationalFunction(numer_ * other.denom_ + other.numer_ * denom_, denom_ * other.denom_);
}

RationalFunction RationalFunction::operator*(const Rational& scalar) const {
  return RationalFunction(numer_ * scalar, denom_);
}

namespace {

Polynomial shift_polynomial(const Polynomial& p, std::span<const Rational> shift) {
  // p(x - s) = sum_n f_n(x) where f_n are the line coefficients at base -s.
  ExactPoint base(shift.begin(), shift.end());
  for (auto& b : base) b = -b;
  Polynomial out(p.n_vars());
  for (const auto& piece : compose_line(p, base)) out += piece;
  return out;
}

}  // namespace

RationalFunction RationalFunction::shifted(std::span<const Rational> shift) const {
  if (shift.size() != n_vars()) throw DimensionError("shift has wrong dimension");
  return RationalFunction(shift_polynomial(numer_, shift), shift_polynomial(denom_, shift));
}

double norm2(std::span<const double> v) {
  double scale = 0.0;
  for (double a : v) scale = std::max(scale, std::abs(a));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (double a : v) {
    const double r = a / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("distance: dimension mismatch");
  Point d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return norm2(d);
}

}  // namespace singulim
