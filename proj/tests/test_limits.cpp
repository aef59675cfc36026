#include <doctest.h>

#include <cmath>

#include "singulim/errors.hpp"
#include "singulim/limits.hpp"
#include "support.hpp"

using namespace singulim;

namespace {

const Polynomial X = Polynomial::variable(2, 0);
const Polynomial Y = Polynomial::variable(2, 1);
const Polynomial ONE = Polynomial::constant(2, 1);
const Polynomial R2 = X * X + Y * Y;
const ExactPoint ORIGIN{0, 0};

RationalFunction fig1() { return RationalFunction(X * Y, R2 * (ONE + R2)); }
RationalFunction counterex() { return RationalFunction(Y * Y - X * X, R2); }

RationalFunction square_1d() {
  const Polynomial x = Polynomial::variable(1, 0);
  return RationalFunction::polynomial(x * x);
}

DescentTrace halving_trace(int n) {
  std::vector<Point> pts;
  for (int k = 0; k < n; ++k) pts.push_back(Point{std::ldexp(1.0, -k)});
  return trace_from_points(square_1d(), pts);
}

// e1, e2/2, e1/4, ...: the alternating-axis sequence.
std::vector<Point> alternating_axes(int n) {
  std::vector<Point> pts;
  for (int k = 0; k < n; ++k) {
    const double s = std::ldexp(1.0, -k);
    pts.push_back(k % 2 == 0 ? Point{s, 0} : Point{0, s});
  }
  return pts;
}

DescentTrace constant_trace(const Point& x, std::size_t n) {
  DescentTrace t;
  for (std::size_t k = 0; k < n; ++k) {
    t.iterates.push_back(x);
    t.f_values.push_back(0.0);
    t.grad_norms.push_back(1.0);
    if (k > 0) {
      t.step_norms.push_back(0.0);
      t.step_sizes.push_back(0.0);
    }
  }
  return t;
}

}  // namespace

TEST_CASE("find_cluster_point: constant trace returns its point") {
  const auto c = find_cluster_point(constant_trace(Point{0.5, 2}, 10));
  REQUIRE(c);
  CHECK(c->point == Point{0.5, 2});
  REQUIRE(c->exact);
  CHECK((*c->exact)[0] == testing::rat(1, 2));

  const auto odd = find_cluster_point(constant_trace(Point{0.123456789, 1}, 10));
  REQUIRE(odd);
  CHECK_FALSE(odd->exact);
  CHECK(odd->point[0] == 0.123456789);
}

TEST_CASE("find_cluster_point: divergent trace has none") {
  std::vector<Point> pts;
  for (int k = 0; k < 100; ++k) pts.push_back(Point{1e3 * std::pow(1.1, k), 0});
  const DescentTrace t = trace_from_points(RationalFunction::polynomial(X), pts);
  CHECK_FALSE(find_cluster_point(t));
}

TEST_CASE("find_cluster_point: settled geometric trace snaps to the origin") {
  std::vector<Point> pts;
  for (int k = 0; k < 200; ++k) pts.push_back(Point{std::ldexp(1.0, -k), -std::ldexp(1.0, -k)});
  const auto c = find_cluster_point(trace_from_points(RationalFunction::polynomial(X), pts));
  REQUIRE(c);
  REQUIRE(c->exact);
  CHECK(*c->exact == ORIGIN);
  CHECK_THROWS_AS(find_cluster_point(DescentTrace{}), ValidationError);
}

TEST_CASE("direction_trail: alternating axes on x^2/(x^2+y^2)") {
  const RationalFunction f(X * X, R2);
  const DescentTrace t = trace_from_points(f, alternating_axes(20));
  const DirectionTrail trail = direction_trail(t, analyze_singularity(f, ORIGIN));
  CHECK(trail.size() == 20);
  for (double v : trail.pencil_values) CHECK(v == 1.0);
  CHECK(trail.min_tail_pencil == 1.0);
  CHECK(trail.a4_certified());
  CHECK(trail.limit_spread == 1.0);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(t.f_values[k] == (k % 2 == 0 ? 1.0 : 0.0));
}

TEST_CASE("direction_trail: unit directions, skips and single points") {
  const RationalFunction f = fig1();
  const LinePencil pencil = analyze_singularity(f, ORIGIN);
  const DescentTrace one = trace_from_points(f, {Point{1, 2}});
  CHECK(direction_trail(one, pencil).size() == 1);

  DescentTrace with_center = trace_from_points(f, {Point{1, 2}, Point{0.5, 0.25}});
  with_center.iterates.push_back(Point{0, 0});
  with_center.f_values.push_back(-0.5);
  with_center.grad_norms.push_back(0.0);
  with_center.step_norms.push_back(distance(Point{0, 0}, Point{0.5, 0.25}));
  with_center.step_sizes.push_back(NAN);
  const DirectionTrail trail = direction_trail(with_center, pencil);
  CHECK(trail.skipped == 1);
  CHECK(trail.size() == 2);
  for (const auto& u : trail.unit_directions) CHECK(std::abs(norm2(u) - 1.0) <= 1e-12);
  for (std::size_t i = 0; i < trail.size(); ++i) {
    CHECK(trail.pencil_values[i] == pencil.safe_set_polynomial().evaluate(trail.unit_directions[i]));
  }
}

TEST_CASE("property: safe-direction margin separates trails that approach the unsafe set") {
  // x^2/(x^2 + y^4): f_2(d) = d1^2, so the y axis is unsafe.
  const RationalFunction f(X * X, X * X + Y * Y * Y * Y);
  const LinePencil pencil = analyze_singularity(f, ORIGIN);
  auto trail_for = [&](auto tilt) {
    std::vector<Point> pts;
    for (int k = 1; k < 40; ++k) pts.push_back(Point{std::ldexp(tilt(k), -k), std::ldexp(1.0, -k)});
    return direction_trail(trace_from_points(f, pts), pencil, 20);
  };
  const DirectionTrail fixed = trail_for([](int) { return 0.5; });
  CHECK(fixed.a4_certified());
  CHECK(fixed.min_tail_pencil == doctest::Approx(0.2));
  const DirectionTrail drifting = trail_for([](int k) { return std::ldexp(1.0, -k); });
  CHECK_FALSE(drifting.a4_certified());
  CHECK(drifting.min_tail_pencil <= kSafeMargin);
}

TEST_CASE("lojasiewicz_probe: halving sequence on x^2") {
  const DescentTrace t = halving_trace(30);
  const ProbeResult probe = lojasiewicz_probe(t, 0);
  CHECK(probe.L_extrapolated);
  CHECK(std::abs(probe.L) <= 1e-12 * t.f_values.front());
  REQUIRE(probe.certificates.size() == 10);
  const auto& half = probe.certificates.back();
  CHECK(half.theta == 0.5);
  CHECK(half.feasible);
  CHECK(half.c == doctest::Approx(0.5).epsilon(1e-9));
  for (std::size_t i = 1; i < probe.certificates.size(); ++i) {
    CHECK(probe.certificates[i - 1].theta < probe.certificates[i].theta);
  }
  const auto& exact = probe.sensitivity.back();
  CHECK(exact.L == t.f_values.back());
}

TEST_CASE("lojasiewicz_probe: zero gradient with nonzero residual defeats every theta") {
  const DescentTrace t = trace_from_points(counterex(), alternating_axes(12));
  for (double g : t.grad_norms) CHECK(g == 0.0);
  const ProbeResult probe = lojasiewicz_probe(t, 0);
  CHECK_FALSE(probe.any_feasible());
  for (const auto& c : probe.certificates) CHECK(std::isinf(c.c));
  CHECK_FALSE(probe.diagnostic.empty());
}

TEST_CASE("lojasiewicz_probe: non-monotone tail throws") {
  const DescentTrace t = trace_from_points(square_1d(), {Point{1.0}, Point{2.0}, Point{0.5}});
  CHECK_THROWS_AS(lojasiewicz_probe(t, 0), ValidationError);
  const std::vector<double> bad{0.0, 0.3};
  CHECK_THROWS_AS(lojasiewicz_probe(halving_trace(5), 0, bad), ValidationError);
}

TEST_CASE("property: certificates re-verify and c grows with theta") {
  const DescentTrace t = halving_trace(40);
  const ProbeResult probe = lojasiewicz_probe(t, 5);
  for (const auto& c : probe.certificates) {
    REQUIRE(c.feasible);
    CHECK(verify_certificate(t, c) == 0);
    REQUIRE(c.binding_index);
    // Tight at the binding index.
    const double lhs = std::pow(std::abs(t.f_values[*c.binding_index] - c.L), 1 - c.theta);
    CHECK(lhs == doctest::Approx(c.c * t.grad_norms[*c.binding_index]).epsilon(1e-12));
  }
  for (std::size_t i = 1; i < probe.certificates.size(); ++i) {
    CHECK(probe.certificates[i].c >= probe.certificates[i - 1].c);
  }
  LojasiewiczCertificate tight = probe.certificates.back();
  tight.c *= 0.9;
  CHECK(verify_certificate(t, tight) > 0);
}

TEST_CASE("estimate_limit falls back to the last value without a geometric fit") {
  const std::vector<double> few{3, 2, 1};
  CHECK(estimate_limit(few) == 1);
  std::vector<double> harmonic;
  for (int k = 1; k <= 40; ++k) harmonic.push_back(1.0 / k + (k % 3) * 1e-3);
  bool extrapolated = true;
  CHECK(estimate_limit(harmonic, &extrapolated) == harmonic.back());
  CHECK_FALSE(extrapolated);
}

TEST_CASE("rate_classify: planted geometric and power laws") {
  std::vector<double> geo, power, flat;
  for (int k = 0; k < 100; ++k) geo.push_back(std::pow(0.8, k));
  for (int k = 1; k <= 100; ++k) power.push_back(std::pow(static_cast<double>(k), -2.0));
  for (int k = 0; k < 100; ++k) flat.push_back(0.3);

  const RateEstimate g = rate_classify(geo, 0);
  CHECK(g.regime == RateRegime::linear);
  REQUIRE(g.q);
  CHECK(std::abs(*g.q - 0.8) <= 1e-6);

  const RateEstimate p = rate_classify(power, 1);
  CHECK(p.regime == RateRegime::sublinear);
  REQUIRE(p.p);
  CHECK(std::abs(*p.p - 2.0) <= 1e-6);
  CHECK(std::abs(*p.theta_from_p - 0.4) <= 1e-6);

  CHECK(rate_classify(flat, 0).regime == RateRegime::inconclusive);
}

TEST_CASE("rate_classify: noisy inputs within 5 percent") {
  auto gen = testing::rng(30);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> geo, power;
  for (int k = 0; k < 100; ++k) geo.push_back(std::pow(0.8, k) * (1 + noise(gen)));
  for (int k = 1; k <= 100; ++k) power.push_back(std::pow(static_cast<double>(k), -2.0) * (1 + noise(gen)));
  const RateEstimate g = rate_classify(geo, 0);
  CHECK(g.regime == RateRegime::linear);
  CHECK(std::abs(*g.q - 0.8) <= 0.05 * 0.8);
  const RateEstimate p = rate_classify(power, 1);
  CHECK(p.regime == RateRegime::sublinear);
  CHECK(std::abs(*p.p - 2.0) <= 0.05 * 2.0);
  CHECK(p.increases > 0);
}

TEST_CASE("rate_classify on a trace measures distance to x_star") {
  std::vector<Point> pts;
  for (int k = 0; k < 60; ++k) pts.push_back(Point{1 + std::pow(0.5, k), 2});
  const DescentTrace t = trace_from_points(RationalFunction::polynomial(X), pts);
  const RateEstimate r = rate_classify(t, Point{1, 2}, 10);
  CHECK(r.regime == RateRegime::linear);
  CHECK(std::abs(*r.q - 0.5) <= 1e-6);
  CHECK_THROWS_AS(rate_classify(t, Point{1}, 0), DimensionError);
}
