#include "singulim/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "singulim/errors.hpp"

namespace singulim {

namespace {

void strip_zero(Polynomial::Terms& terms, Polynomial::Terms::iterator it) {
  if (sgn(it->second) == 0) terms.erase(it);
}

// Power tables x_i^e for e <= max degree of variable i.
template <class T>
std::vector<std::vector<T>> power_table(const Polynomial& p, std::span<const T> x) {
  std::vector<std::vector<T>> powers(p.n_vars());
  for (std::size_t i = 0; i < p.n_vars(); ++i) {
    const unsigned d = p.degree_in(i);
    powers[i].reserve(d + 1);
    powers[i].push_back(T(1));
    for (unsigned e = 1; e <= d; ++e) powers[i].push_back(powers[i].back() * x[i]);
  }
  return powers;
}

}  // namespace

Polynomial::Polynomial(std::size_t n_vars) : n_vars_(n_vars) {
  if (n_vars == 0) throw DimensionError("polynomial needs at least one variable");
}

Polynomial Polynomial::constant(std::size_t n_vars, const Rational& c) {
  Polynomial p(n_vars);
  if (sgn(c) != 0) p.terms_.emplace(Monomial(n_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t n_vars, std::size_t index) {
  if (index >= n_vars) throw DimensionError("variable index out of range");
  Monomial e(n_vars, 0);
  e[index] = 1;
  return term(std::move(e), 1);
}

Polynomial Polynomial::term(Monomial exponents, const Rational& c) {
  Polynomial p(exponents.size());
  if (sgn(c) != 0) p.terms_.emplace(std::move(exponents), c);
  return p;
}

Polynomial Polynomial::from_terms(std::size_t n_vars,
                                  const std::vector<std::pair<Monomial, Rational>>& terms) {
  Polynomial p(n_vars);
  for (const auto& [e, c] : terms) {
    if (e.size() != n_vars) throw DimensionError("monomial length does not match n_vars");
    auto [it, inserted] = p.terms_.try_emplace(e, c);
    if (!inserted) it->second += c;
    strip_zero(p.terms_, it);
  }
  return p;
}

int Polynomial::degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (unsigned k : e) d += static_cast<int>(k);
    best = std::max(best, d);
  }
  return best;
}

unsigned Polynomial::degree_in(std::size_t i) const {
  if (i >= n_vars_) throw DimensionError("variable index out of range");
  unsigned best = 0;
  for (const auto& [e, c] : terms_) best = std::max(best, e[i]);
  return best;
}

Rational Polynomial::coefficient(const Monomial& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool Polynomial::is_homogeneous(int d) const {
  for (const auto& [e, c] : terms_) {
    int total = 0;
    for (unsigned k : e) total += static_cast<int>(k);
    if (total != d) return false;
  }
  return true;
}

void Polynomial::check_same_size(const Polynomial& other, const char* op) const {
  if (n_vars_ != other.n_vars_) {
    throw DimensionError(std::string("polynomial ") + op + ": variable counts differ (" +
                         std::to_string(n_vars_) + " vs " + std::to_string(other.n_vars_) + ")");
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same_size(other, "add");
  for (const auto& [e, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      strip_zero(terms_, it);
    }
  }
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_same_size(other, "subtract");
  for (const auto& [e, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, -c);
    if (!inserted) {
      it->second -= c;
      strip_zero(terms_, it);
    }
  }
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same_size(b, "multiply");
  Polynomial out(a.n_vars_);
  Monomial e(a.n_vars_);
  Rational prod;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      prod = ca * cb;
      auto [it, inserted] = out.terms_.try_emplace(e, prod);
      if (!inserted) it->second += prod;
    }
  }
  std::erase_if(out.terms_, [](const auto& kv) { return sgn(kv.second) == 0; });
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& scalar) {
  if (sgn(scalar) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scalar;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

Polynomial Polynomial::partial(std::size_t i) const {
  if (i >= n_vars_) {
    throw DimensionError("partial: variable index " + std::to_string(i) + " out of range for " +
                         std::to_string(n_vars_) + " variables");
  }
  Polynomial out(n_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Monomial d = e;
    --d[i];
    // Distinct monomials stay distinct after lowering one exponent.
    out.terms_.emplace(std::move(d), c * e[i]);
  }
  return out;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != n_vars_) throw DimensionError("evaluate: point has wrong dimension");
  const auto powers = power_table<double>(*this, x);
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < n_vars_; ++i) t *= powers[i][e[i]];
    sum += t;
  }
  return sum;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
  if (x.size() != n_vars_) throw DimensionError("evaluate: point has wrong dimension");
  const auto powers = power_table<Rational>(*this, x);
  Rational sum = 0;
  Rational t;
  for (const auto& [e, c] : terms_) {
    t = c;
    for (std::size_t i = 0; i < n_vars_; ++i) {
      if (e[i] != 0) t *= powers[i][e[i]];
    }
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::homogeneous_component(int d) const {
  Polynomial out(n_vars_);
  for (const auto& [e, c] : terms_) {
    int total = 0;
    for (unsigned k : e) total += static_cast<int>(k);
    if (total == d) out.terms_.emplace(e, c);
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Reverse lexicographic order puts high powers of x1 first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    bool any_var = false;
    std::ostringstream vars;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (any_var) vars << "*";
      vars << "x" << (i + 1);
      if (e[i] > 1) vars << "^" << e[i];
      any_var = true;
    }
    if (!any_var) {
      os << format_rational(mag);
    } else if (mag == 1) {
      os << vars.str();
    } else {
      os << format_rational(mag) << "*" << vars.str();
    }
  }
  return os.str();
}

Polynomial pow(const Polynomial& p, unsigned k) {
  Polynomial result = Polynomial::constant(p.n_vars(), 1);
  Polynomial base = p;
  while (k > 0) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k > 0) base *= base;
  }
  return result;
}

std::vector<Polynomial> compose_line(const Polynomial& p, std::span<const Rational> base) {
  const std::size_t n = p.n_vars();
  if (base.size() != n) throw DimensionError("compose_line: base point has wrong dimension");
  const int deg = p.degree();
  if (deg < 0) return {Polynomial(n)};

  const bool at_origin =
      std::all_of(base.begin(), base.end(), [](const Rational& b) { return sgn(b) == 0; });
  std::vector<Polynomial> out;
  out.reserve(static_cast<std::size_t>(deg) + 1);
  if (at_origin) {
    for (int k = 0; k <= deg; ++k) out.push_back(p.homogeneous_component(k));
    return out;
  }

  // (b_i + t d_i)^e = sum_k C(e,k) b_i^(e-k) d_i^k t^k, expanded per term.
  std::vector<std::vector<std::pair<Monomial, Rational>>> buckets(deg + 1);
  std::vector<unsigned> k(n);
  for (const auto& [e, c] : p.terms()) {
    std::fill(k.begin(), k.end(), 0U);
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn(base[i]) == 0) k[i] = e[i];
    }
    while (true) {
      Rational coeff = c;
      unsigned t_power = 0;
      for (std::size_t i = 0; i < n; ++i) {
        t_power += k[i];
        if (k[i] == e[i]) continue;
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), e[i], k[i]);
        Rational bpow;
        mpz_pow_ui(mpq_numref(bpow.get_mpq_t()), mpq_numref(base[i].get_mpq_t()), e[i] - k[i]);
        mpz_pow_ui(mpq_denref(bpow.get_mpq_t()), mpq_denref(base[i].get_mpq_t()), e[i] - k[i]);
        coeff *= Rational(binom) * bpow;
      }
      buckets[t_power].emplace_back(Monomial(k.begin(), k.end()), coeff);

      // Odometer over the variables with nonzero base coordinate.
      std::size_t i = 0;
      for (; i < n; ++i) {
        if (sgn(base[i]) == 0) continue;
        if (k[i] < e[i]) {
          ++k[i];
          break;
        }
        k[i] = 0;
      }
      if (i == n) break;
    }
  }
  for (int d = 0; d <= deg; ++d) out.push_back(Polynomial::from_terms(n, buckets[d]));
  return out;
}

Rational parse_rational(const std::string& raw) {
  std::string text = raw;
  text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); }),
             text.end());
  if (text.empty()) throw InputError("empty rational literal");
  auto fail = [&]() -> Rational { throw InputError("malformed rational literal '" + raw + "'"); };

  if (text.find('/') != std::string::npos) {
    const auto slash = text.find('/');
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    auto is_int = [](const std::string& s, bool allow_sign) {
      std::size_t i = 0;
      if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
      if (i >= s.size()) return false;
      return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                         [](unsigned char ch) { return std::isdigit(ch); });
    };
    if (!is_int(num, true) || !is_int(den, false)) return fail();
    mpz_class n(num[0] == '+' ? num.substr(1) : num, 10);
    mpz_class d(den, 10);
    if (d == 0) throw InputError("zero denominator in rational literal '" + raw + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
  }

  // Decimal with optional exponent, converted exactly.
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '-' || text[i] == '+') negative = text[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      any_digit = true;
      if (seen_point) ++scale;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) return fail();
  long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return fail();
    ++i;
    std::size_t used = 0;
    try {
      exponent = std::stol(text.substr(i), &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (i + used != text.size()) return fail();
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - scale;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  Rational q = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(10); }

ExactPoint to_exact(std::span<const double> x) {
  ExactPoint out;
  out.reserve(x.size());
  for (double v : x) {
    if (!std::isfinite(v)) throw ValidationError("cannot convert non-finite coordinate to a rational");
    out.emplace_back(v);
  }
  return out;
}

Point to_double(std::span<const Rational> x) {
  Point out;
  out.reserve(x.size());
  for (const auto& q : x) out.push_back(q.get_d());
  return out;
}

}  // namespace singulim
