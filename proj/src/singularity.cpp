#include "singulim/singularity.hpp"

#include <algorithm>
#include <cmath>

#include "singulim/errors.hpp"

namespace singulim {

namespace {

template <class T>
bool is_zero_value(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return sgn(v) == 0;
  } else {
    return v == T(0);
  }
}

template <class T>
std::size_t effective_degree(std::span<const T> coeffs) {
  std::size_t deg = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!is_zero_value(coeffs[i])) deg = i;
  }
  return deg;
}

// c_n = (a_n - sum_{j>=1} g_j c_{n-j}) / g_0
template <class T>
std::vector<T> divide_series(std::span<const T> numer, std::span<const T> denom, std::size_t count) {
  std::vector<T> c(count, T(0));
  const std::size_t dg = effective_degree(denom);
  for (std::size_t n = 0; n < count; ++n) {
    T acc = n < numer.size() ? numer[n] : T(0);
    for (std::size_t j = 1; j <= std::min(n, dg); ++j) acc -= denom[j] * c[n - j];
    c[n] = acc / denom[0];
  }
  return c;
}

std::string format_direction(std::span<const double> d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(d[i]);
  }
  return s + ")";
}

}  // namespace

Polynomial LinePencil::limit_numerator() const {
  if (n_min < numer_coeffs.size()) return numer_coeffs[n_min];
  return Polynomial(n_vars());
}

LinePencil analyze_singularity(const RationalFunction& f, std::span<const Rational> x_star) {
  if (x_star.size() != f.n_vars()) throw DimensionError("analyze_singularity: point has wrong dimension");
  LinePencil pencil;
  pencil.base.assign(x_star.begin(), x_star.end());
  pencil.denom_coeffs = compose_line(f.denom(), x_star);
  pencil.numer_coeffs = compose_line(f.numer(), x_star);

  // Well-defined: the denominator is a nonzero polynomial, so some line
  // coefficient is not identically zero.
  pencil.n_min = pencil.denom_coeffs.size();
  for (std::size_t k = 0; k < pencil.denom_coeffs.size(); ++k) {
    if (!pencil.denom_coeffs[k].is_zero()) {
      pencil.n_min = k;
      break;
    }
  }
  for (std::size_t k = 0; k < pencil.numer_coeffs.size(); ++k) {
    if (!pencil.numer_coeffs[k].is_zero()) {
      pencil.numer_order = k;
      break;
    }
  }
  if (pencil.numer_order && *pencil.numer_order < pencil.n_min) {
    throw UnboundedFunctionError(
        "numerator vanishes to order " + std::to_string(*pencil.numer_order) +
        " but the denominator to order " + std::to_string(pencil.n_min) +
        " at the analysed point: the function is unbounded there");
  }
  return pencil;
}

DirectionVerdict direction_verdict(const LinePencil& pencil, std::span<const double> d) {
  if (d.size() != pencil.n_vars()) throw DimensionError("direction has wrong dimension");
  const double len = norm2(d);
  if (len == 0.0) throw ValidationError("direction must be nonzero");
  DirectionVerdict v;
  v.direction.assign(d.begin(), d.end());
  v.pencil_value = pencil.safe_set_polynomial().evaluate(d);
  const double margin = kSafeMargin * std::pow(len, static_cast<double>(pencil.n_min));
  v.in_safe_set = std::abs(v.pencil_value) > margin;
  if (v.in_safe_set) v.limit_value = pencil.limit_numerator().evaluate(d) / v.pencil_value;
  return v;
}

DirectionVerdict direction_verdict(const LinePencil& pencil, std::span<const Rational> d) {
  if (d.size() != pencil.n_vars()) throw DimensionError("direction has wrong dimension");
  if (std::all_of(d.begin(), d.end(), [](const Rational& q) { return sgn(q) == 0; })) {
    throw ValidationError("direction must be nonzero");
  }
  DirectionVerdict v;
  v.direction = to_double(d);
  const Rational pv = pencil.safe_set_polynomial().evaluate(d);
  v.pencil_value = pv.get_d();
  v.in_safe_set = sgn(pv) != 0;
  if (v.in_safe_set) {
    const Rational limit = pencil.limit_numerator().evaluate(d) / pv;
    v.limit_value = limit.get_d();
  }
  return v;
}

TaylorLine taylor_line(const LinePencil& pencil, std::span<const double> d, std::size_t terms) {
  const DirectionVerdict verdict = direction_verdict(pencil, d);
  if (!verdict.in_safe_set) {
    throw ValidationError("direction " + format_direction(d) +
                          " is unsafe: the pencil polynomial f_" + std::to_string(pencil.n_min) +
                          " = " + pencil.safe_set_polynomial().to_string() + " vanishes there");
  }
  std::vector<double> numer, denom;
  for (std::size_t k = pencil.n_min; k < pencil.numer_coeffs.size(); ++k) {
    numer.push_back(pencil.numer_coeffs[k].evaluate(d));
  }
  for (std::size_t k = pencil.n_min; k < pencil.denom_coeffs.size(); ++k) {
    denom.push_back(pencil.denom_coeffs[k].evaluate(d));
  }
  if (numer.empty()) numer.push_back(0.0);

  TaylorLine line;
  line.direction.assign(d.begin(), d.end());
  line.numer_degree = effective_degree<double>(numer);
  line.denom_degree = effective_degree<double>(denom);
  line.recurrence_order = line.denom_degree;
  const std::size_t needed = line.recurrence_start() + line.recurrence_order + 1;
  if (terms < needed) {
    throw ValidationError("taylor_line: need at least " + std::to_string(needed) +
                          " terms for this line, got " + std::to_string(terms));
  }
  line.coeffs = divide_series<double>(numer, denom, terms);
  for (std::size_t j = 1; j <= line.recurrence_order; ++j) {
    line.recurrence_weights.push_back(-denom[j] / denom[0]);
  }
  line.radius_lower_bound = radius_lower_bound(line);
  return line;
}

TaylorLine taylor_line(const RationalFunction& f, std::span<const Rational> x_star,
                       std::span<const double> d, std::size_t terms) {
  return taylor_line(analyze_singularity(f, x_star), d, terms);
}

std::vector<std::vector<double>> companion_matrix(std::span<const double> weights) {
  const std::size_t r = weights.size();
  std::vector<std::vector<double>> c(r, std::vector<double>(r, 0.0));
  // State (c_{n-r+1}, ..., c_n) -> (c_{n-r+2}, ..., c_{n+1}).
  for (std::size_t i = 0; i + 1 < r; ++i) c[i][i + 1] = 1.0;
  if (r > 0) {
    for (std::size_t j = 1; j <= r; ++j) c[r - 1][r - j] = weights[j - 1];
  }
  return c;
}

double infinity_norm(const std::vector<std::vector<double>>& m) {
  double best = 0.0;
  for (const auto& row : m) {
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double radius_lower_bound(const TaylorLine& line) {
  constexpr double k = 0.5;
  const double c_norm = infinity_norm(companion_matrix(line.recurrence_weights));
  return k / std::max(1.0, c_norm);
}

double recurrence_residual(const TaylorLine& line) {
  double worst = 0.0;
  const auto& c = line.coeffs;
  for (std::size_t n = line.recurrence_start() + 1; n < c.size(); ++n) {
    double pred = 0.0, scale = std::abs(c[n]);
    for (std::size_t j = 1; j <= line.recurrence_order && j <= n; ++j) {
      const double term = line.recurrence_weights[j - 1] * c[n - j];
      pred += term;
      scale += std::abs(term);
    }
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(c[n] - pred) / scale);
  }
  return worst;
}

double series_tail(const TaylorLine& line, double t, std::size_t first, std::size_t count) {
  const std::size_t last = first + count;
  const std::size_t r = line.recurrence_order;
  std::vector<double> scaled_weights(r);
  double tj = 1.0;
  for (std::size_t j = 0; j < r; ++j) {
    tj *= t;
    scaled_weights[j] = line.recurrence_weights[j] * tj;
  }
  std::vector<double> a;
  a.reserve(last);
  double tn = 1.0;
  double sum = 0.0;
  for (std::size_t n = 0; n < last; ++n) {
    double an;
    if (n < line.coeffs.size()) {
      an = line.coeffs[n] * tn;
      tn *= t;
    } else {
      an = 0.0;
      for (std::size_t j = 1; j <= r; ++j) an += scaled_weights[j - 1] * a[n - j];
    }
    a.push_back(an);
    if (n >= first) sum += std::abs(an);
  }
  return sum;
}

double series_partial_sum(const TaylorLine& line, double t, std::size_t terms) {
  double sum = 0.0;
  double tn = 1.0;
  for (std::size_t n = 0; n < terms && n < line.coeffs.size(); ++n) {
    sum += line.coeffs[n] * tn;
    tn *= t;
  }
  return sum;
}

ExactSeries series_divide(std::span<const Rational> numer, std::span<const Rational> denom,
                          std::size_t count) {
  if (denom.empty() || sgn(denom[0]) == 0) {
    throw ValidationError("series_divide: constant term of the denominator must be nonzero");
  }
  ExactSeries s;
  s.numer_degree = numer.empty() ? 0 : effective_degree(numer);
  s.denom_degree = effective_degree(denom);
  s.coeffs = divide_series<Rational>(numer, denom, count);
  for (std::size_t j = 1; j <= s.denom_degree; ++j) s.recurrence_weights.push_back(-denom[j] / denom[0]);
  return s;
}

std::vector<Rational> recurrence_extend(std::span<const Rational> initial,
                                        std::span<const Rational> weights, std::size_t count) {
  std::vector<Rational> c(initial.begin(), initial.end());
  c.reserve(std::max(count, c.size()));
  for (std::size_t n = c.size(); n < count; ++n) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= weights.size() && j <= n; ++j) acc += weights[j - 1] * c[n - j];
    c.push_back(acc);
  }
  return c;
}

}  // namespace singulim
