#include <doctest.h>

#include <cmath>
#include <numbers>

#include "singulim/errors.hpp"
#include "singulim/singularity.hpp"
#include "support.hpp"

using namespace singulim;

namespace {

const Polynomial X = Polynomial::variable(2, 0);
const Polynomial Y = Polynomial::variable(2, 1);
const Polynomial ONE = Polynomial::constant(2, 1);
const Polynomial R2 = X * X + Y * Y;
const ExactPoint ORIGIN{0, 0};

RationalFunction fig1() { return RationalFunction(X * Y, R2 * (ONE + R2)); }

RationalFunction univariate(std::vector<long> numer, std::vector<long> denom) {
  auto build = [](const std::vector<long>& c) {
    Polynomial p(1);
    for (std::size_t k = 0; k < c.size(); ++k) p += Polynomial::term({static_cast<unsigned>(k)}, c[k]);
    return p;
  };
  return RationalFunction(build(numer), build(denom));
}

// lim_{t->0+} f(x* + t d), read off at a small t.
double numeric_limit(const RationalFunction& f, const Point& d, double t = 1e-7) {
  Point x(d);
  for (double& v : x) v *= t;
  return f.value(x);
}

// Checks sum_j c_j g_{n-j} = a_n, the defining identity of the quotient.
bool product_matches(const std::vector<Rational>& c, const std::vector<Rational>& g,
                     const std::vector<Rational>& a) {
  for (std::size_t n = 0; n < c.size(); ++n) {
    Rational s = 0;
    for (std::size_t j = 0; j <= n && j < g.size(); ++j) s += g[j] * c[n - j];
    const Rational want = n < a.size() ? a[n] : Rational(0);
    if (s != want) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("analyze_singularity examples") {
  const LinePencil p = analyze_singularity(fig1(), ORIGIN);
  CHECK(p.n_min == 2);
  CHECK(p.safe_set_polynomial() == R2);
  CHECK(p.numer_order == std::optional<std::size_t>(2));
  for (std::size_t k = 0; k < p.n_min; ++k) CHECK(p.denom_coeffs[k].is_zero());

  const LinePencil regular = analyze_singularity(RationalFunction(ONE, ONE + R2), ORIGIN);
  CHECK(regular.n_min == 0);
  CHECK(direction_verdict(regular, Point{0.3, -2}).in_safe_set);

  const RationalFunction ratio(X * X, R2);
  const LinePencil rp = analyze_singularity(ratio, ORIGIN);
  CHECK(rp.n_min == 2);
  CHECK(rp.safe_set_polynomial() == R2);
  CHECK(rp.numer_order == std::optional<std::size_t>(2));
  for (int k = 0; k < 8; ++k) {
    const double a = k * std::numbers::pi / 4 + 0.1;
    const Point d{std::cos(a), std::sin(a)};
    const auto v = direction_verdict(rp, d);
    REQUIRE(v.limit_value);
    CHECK(*v.limit_value == doctest::Approx(d[0] * d[0] / (d[0] * d[0] + d[1] * d[1])).epsilon(1e-12));
    CHECK(*v.limit_value == doctest::Approx(numeric_limit(ratio, d)).epsilon(1e-6));
  }
}

TEST_CASE("unbounded functions are reported") {
  CHECK_THROWS_AS(analyze_singularity(RationalFunction(X, R2), ORIGIN), UnboundedFunctionError);
  CHECK_THROWS_AS(analyze_singularity(fig1(), ExactPoint{0}), DimensionError);
}

TEST_CASE("direction_verdict examples") {
  const LinePencil p = analyze_singularity(fig1(), ORIGIN);
  const auto diag = direction_verdict(p, Point{1, -1});
  CHECK(diag.in_safe_set);
  REQUIRE(diag.limit_value);
  CHECK(*diag.limit_value == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(*diag.limit_value == doctest::Approx(numeric_limit(fig1(), Point{1, -1})).epsilon(1e-6));

  const auto axis = direction_verdict(p, Point{1, 0});
  CHECK(axis.in_safe_set);
  CHECK(*axis.limit_value == 0.0);

  const LinePencil rp = analyze_singularity(RationalFunction(X * X, R2), ORIGIN);
  CHECK(*direction_verdict(rp, Point{0, 1}).limit_value == 0.0);
  CHECK(*direction_verdict(rp, Point{1, 0}).limit_value == 1.0);

  CHECK_THROWS_AS(direction_verdict(p, Point{0, 0}), ValidationError);
  CHECK_THROWS_AS(direction_verdict(p, ExactPoint{0, 0}), ValidationError);
}

TEST_CASE("exact and margin-based safe-set membership") {
  // Denominator x^2 + y^4: f_2(d) = d1^2 vanishes on the y axis.
  const RationalFunction f(X * X, X * X + Y * Y * Y * Y);
  const LinePencil p = analyze_singularity(f, ORIGIN);
  CHECK(p.n_min == 2);
  CHECK_FALSE(direction_verdict(p, ExactPoint{0, 1}).in_safe_set);
  CHECK(direction_verdict(p, ExactPoint{testing::rat(1, 1000000), 1}).in_safe_set);
  CHECK_FALSE(direction_verdict(p, Point{1e-6, 1}).in_safe_set);  // 1e-12 < margin
  CHECK(direction_verdict(p, Point{1e-4, 1}).in_safe_set);
}

TEST_CASE("taylor_line: geometric series") {
  const auto f = univariate({1}, {1, -1});
  const TaylorLine line = taylor_line(f, ExactPoint{0}, Point{1}, 20);
  for (double c : line.coeffs) CHECK(c == 1.0);
  REQUIRE(line.recurrence_weights.size() == 1);
  CHECK(line.recurrence_weights[0] == 1.0);
  CHECK(line.radius_lower_bound == 0.5);
}

TEST_CASE("taylor_line: Fibonacci") {
  const auto f = univariate({1}, {1, -1, -1});
  const TaylorLine line = taylor_line(f, ExactPoint{0}, Point{1}, 11);
  const std::vector<double> fib{1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
  CHECK(line.coeffs == fib);
  CHECK(line.recurrence_weights == std::vector<double>{1, 1});
  CHECK(infinity_norm(companion_matrix(line.recurrence_weights)) == 2.0);
  CHECK(line.radius_lower_bound == 0.25);
  CHECK(recurrence_residual(line) == 0.0);
}

TEST_CASE("taylor_line: fig1 along (1,-1)") {
  const TaylorLine line = taylor_line(fig1(), ORIGIN, Point{1, -1});
  CHECK(line.coeffs.size() == kDefaultSeriesTerms);
  CHECK(line.coeffs[0] == doctest::Approx(-0.5).epsilon(1e-15));
  const double t = 0.01;
  CHECK(std::abs(series_partial_sum(line, t, line.coeffs.size()) - fig1().value(Point{t, -t})) <= 1e-10);
  CHECK(line.radius_lower_bound > 0.0);
  CHECK(recurrence_residual(line) <= 1e-9);
  const double tail = series_tail(line, line.radius_lower_bound / 2, kDefaultSeriesTerms, 4000);
  CHECK(tail < 1e-9);
}

TEST_CASE("taylor_line rejects unsafe and short requests") {
  const RationalFunction f(X * X, X * X + Y * Y * Y * Y);
  try {
    (void)taylor_line(f, ORIGIN, Point{0, 1});
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("x1^2") != std::string::npos);
  }
  CHECK_THROWS_AS(taylor_line(univariate({1}, {1, -1, -1}), ExactPoint{0}, Point{1}, 2), ValidationError);
  CHECK_THROWS_AS(taylor_line(fig1(), ORIGIN, Point{0, 0}), ValidationError);
}

TEST_CASE("companion matrix layout") {
  const auto c = companion_matrix(std::vector<double>{0.5, -2, 3});
  REQUIRE(c.size() == 3);
  CHECK(c[0] == std::vector<double>{0, 1, 0});
  CHECK(c[1] == std::vector<double>{0, 0, 1});
  CHECK(c[2] == std::vector<double>{3, -2, 0.5});
  CHECK(infinity_norm(c) == 5.5);
  CHECK(companion_matrix(std::vector<double>{}).empty());
}

TEST_CASE("series_divide requires a nonzero constant term") {
  const std::vector<Rational> a{1}, g{0, 1};
  CHECK_THROWS_AS(series_divide(a, g, 5), ValidationError);
}

TEST_CASE("property: safe set is scale invariant") {
  const LinePencil p = analyze_singularity(fig1(), ORIGIN);
  auto gen = testing::rng(10);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 11);
  for (int k = 0; k < 200; ++k) {
    const ExactPoint d{testing::rat(num(gen), den(gen)), testing::rat(num(gen), den(gen))};
    const int scale = num(gen);
    const Rational t = testing::rat(scale == 0 ? 1 : scale, den(gen));
    if (sgn(d[0]) == 0 && sgn(d[1]) == 0) continue;
    const ExactPoint td{t * d[0], t * d[1]};
    CHECK(p.safe_set_polynomial().evaluate(td) == t * t * p.safe_set_polynomial().evaluate(d));
    CHECK(direction_verdict(p, td).in_safe_set == direction_verdict(p, d).in_safe_set);
  }
}

TEST_CASE("property: random unit directions are safe for fig1") {
  const LinePencil p = analyze_singularity(fig1(), ORIGIN);
  auto gen = testing::rng(11);
  std::normal_distribution<double> normal;
  int safe = 0;
  for (int k = 0; k < 1000; ++k) {
    Point d{normal(gen), normal(gen)};
    const double len = norm2(d);
    for (double& v : d) v /= len;
    safe += direction_verdict(p, d).in_safe_set ? 1 : 0;
  }
  CHECK(safe == 1000);
}

TEST_CASE("property: series and recurrence agree exactly") {
  auto gen = testing::rng(12);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5), deg(0, 4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> a(deg(gen) + 1), g(deg(gen) + 1);
    for (auto& v : a) v = testing::rat(num(gen), den(gen));
    for (auto& v : g) v = testing::rat(num(gen), den(gen));
    if (sgn(g[0]) == 0) g[0] = 1;
    const ExactSeries s = series_divide(a, g, 51);
    CHECK(product_matches(s.coeffs, g, a));
    const std::size_t start = std::max(s.numer_degree, s.denom_degree) + 1;
    const std::vector<Rational> head(s.coeffs.begin(), s.coeffs.begin() + start);
    CHECK(recurrence_extend(head, s.recurrence_weights, 51) == s.coeffs);
  }
}

TEST_CASE("property: directional limits match numeric limits") {
  const RationalFunction f = fig1();
  const LinePencil p = analyze_singularity(f, ORIGIN);
  auto gen = testing::rng(13);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 50; ++k) {
    const Point d{normal(gen), normal(gen)};
    const auto v = direction_verdict(p, d);
    REQUIRE(v.limit_value);
    CHECK(std::abs(*v.limit_value - numeric_limit(f, d)) <= 1e-6);
  }
}
