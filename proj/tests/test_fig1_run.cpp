#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "singulim/cli.hpp"
#include "singulim/io.hpp"
#include "singulim/limits.hpp"
#include "support.hpp"

using namespace singulim;
namespace fs = std::filesystem;

namespace {

std::string fig1_path() { return (fs::path(SINGULIM_SOURCE_DIR) / "problems" / "fig1.problem").string(); }

const DescentTrace& full_run() {
  static const DescentTrace trace = [] {
    DescentConfig cfg;
    cfg.max_iters = 100000;
    return optimize(read_problem(fig1_path()).function, Point{2, -0.1}, cfg);
  }();
  return trace;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "singulim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  return code;
}

}  // namespace

TEST_CASE("fig1 run: value converges to -1/2 monotonically") {
  const DescentTrace& t = full_run();
  CHECK(t.stop_reason == StopReason::max_iters);
  CHECK(std::abs(t.f_values.back() + 0.5) < 1e-4);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) REQUIRE(t.f_values[k + 1] < t.f_values[k]);
}

TEST_CASE("fig1 run: cluster detection finds the origin") {
  const auto cluster = find_cluster_point(full_run());
  REQUIRE(cluster);
  REQUIRE(cluster->exact);
  CHECK(*cluster->exact == ExactPoint{0, 0});
}

TEST_CASE("fig1 run: every approach direction has pencil value 1") {
  const DescentTrace& t = full_run();
  const LinePencil pencil = analyze_singularity(read_problem(fig1_path()).function, ExactPoint{0, 0});
  const DirectionTrail trail = direction_trail(t, pencil, tail_start_for(t.size(), 0.5));
  CHECK(trail.skipped == 0);
  double worst = 0;
  for (double v : trail.pencil_values) worst = std::max(worst, std::abs(v - 1.0));
  CHECK(worst <= 1e-9);
  CHECK(std::abs(trail.min_tail_pencil - 1.0) <= 1e-9);
  CHECK(trail.a4_certified());
  // The approach direction settles on the minimizing ray (1,-1)/sqrt(2).
  const Point& last = trail.unit_directions.back();
  CHECK(std::abs(last[0] - std::sqrt(0.5)) <= 1e-3);
  CHECK(std::abs(last[1] + std::sqrt(0.5)) <= 1e-3);
  REQUIRE(trail.limit_values.back());
  CHECK(std::abs(*trail.limit_values.back() + 0.5) <= 1e-6);
}

TEST_CASE("fig1 run: conditions and certificates on the tail") {
  const DescentTrace& t = full_run();
  const std::size_t tail = tail_start_for(t.size(), 0.5);
  const ConditionReport r = check_conditions(t, tail);
  CHECK(r.certified());
  CHECK(*r.sigma_hat >= 0.1);
  const ProbeResult probe = lojasiewicz_probe(t, tail);
  CHECK(probe.any_feasible());
  for (const auto& c : probe.certificates) {
    if (c.feasible) CHECK(verify_certificate(t, c) == 0);
  }
}

TEST_CASE("cli: analyze fig1 prints the pencil") {
  std::string out;
  REQUIRE(run({"analyze", "--problem", fig1_path(), "--point", "0,0"}, &out) == kExitOk);
  CHECK(out.find("n_min: 2") != std::string::npos);
  CHECK(out.find("f_n_min_readable: x1^2 + x2^2") != std::string::npos);
}

TEST_CASE("cli: optimize fig1 from (2,-0.1) reaches the origin") {
  const fs::path dir = fs::temp_directory_path() / ("singulim_fig1_" + std::to_string(testing::seed()));
  fs::create_directories(dir);
  const std::string path = (dir / "fig1.trace.csv").string();
  REQUIRE(run({"optimize", "--problem", fig1_path(), "--x0", "2,-0.1", "--trace-out", path}) == kExitOk);
  const DescentTrace t = read_trace_file(path);
  CHECK(std::abs(t.f_values.back() + 0.5) < 1e-4);
  CHECK(norm2(t.iterates.back()) < 1e-6);
}
