#include <monosplit/metrics.hpp>
#include <monosplit/oracles.hpp>

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

using monosplit::FeasibleSet;
using monosplit::ProblemSpec;
using monosplit::Resolvent;
using monosplit::RngStream;
using monosplit::Vector;

namespace {

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

// 1-D problem: A(x) = x - 1 over the nonnegative reals, solution x* = 1.
ProblemSpec shifted_identity() {
  auto mean = [](const Vector& x) { return Vector(x.array() - 1.0); };
  ProblemSpec p;
  p.name = "shifted_identity";
  p.dimension = 1;
  p.mean_map = mean;
  p.sample_map = [mean](const Vector& x, RngStream&) { return mean(x); };
  p.resolvent = Resolvent::normal_cone(FeasibleSet::nonneg_orthant(1));
  p.lipschitz_L = 1.0;
  p.strong_monotonicity_sigma = 1.0;
  p.known_solution = vec1(1.0);
  return p;
}

// 1-D problem: T(y) = y + N_[-1,1](y), solution 0; used for gap probing.
ProblemSpec identity_on_box() {
  auto mean = [](const Vector& x) { return x; };
  ProblemSpec p;
  p.name = "identity_on_box";
  p.dimension = 1;
  p.mean_map = mean;
  p.sample_map = [](const Vector& x, RngStream&) { return x; };
  p.resolvent = Resolvent::normal_cone(FeasibleSet::box(vec1(-1.0), vec1(1.0)));
  p.lipschitz_L = 1.0;
  p.strong_monotonicity_sigma = 1.0;
  p.known_solution = vec1(0.0);
  p.domain_radius = 1.0;
  return p;
}

}  // namespace

// ------------------------------------------------------------------ residual

TEST_CASE("residual by hand on the shifted identity") {
  const ProblemSpec p = shifted_identity();
  REQUIRE(monosplit::residual(p, vec1(0.0), 0.5) == Catch::Approx(0.5).margin(1e-15));
  REQUIRE(monosplit::residual(p, vec1(1.0), 0.5) == 0.0);
  REQUIRE(monosplit::residual(p, *p.known_solution) <= 1e-10);
  REQUIRE_THROWS_AS(monosplit::residual(p, vec1(0.0), 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(monosplit::residual(p, Vector::Zero(2), 0.5), std::invalid_argument);
}

TEST_CASE("two-argument residual uses the default step") {
  const ProblemSpec p = shifted_identity();
  REQUIRE(monosplit::residual(p, vec1(0.3)) ==
          monosplit::residual(p, vec1(0.3), p.default_gamma()));
}

TEST_CASE("residual is Lipschitz in the probe point") {
  // |r(x) - r(y)| <= (2 + gamma L) ||x - y||: one iterate difference plus a
  // non-expansive resolvent of a (1 + gamma L)-Lipschitz inner map.
  Eigen::Matrix2d M;
  M << 2.0, 0.5, -0.5, 1.0;
  auto mean = [M](const Vector& x) { return Vector(M * x); };
  ProblemSpec p;
  p.name = "affine2";
  p.dimension = 2;
  p.mean_map = mean;
  p.sample_map = [mean](const Vector& x, RngStream&) { return mean(x); };
  p.resolvent = Resolvent::normal_cone(FeasibleSet::nonneg_orthant(2));
  p.lipschitz_L = 2.2;  // a hair above the spectral norm of M

  RngStream rng(11);
  const double gamma = 0.1;
  for (int rep = 0; rep < 500; ++rep) {
    Vector x(2), y(2);
    for (int i = 0; i < 2; ++i) {
      x[i] = rng.uniform(-5.0, 5.0);
      y[i] = rng.uniform(-5.0, 5.0);
    }
    const double lhs =
        std::abs(monosplit::residual(p, x, gamma) - monosplit::residual(p, y, gamma));
    REQUIRE(lhs <= (2.0 + gamma * p.lipschitz_L) * (x - y).norm() + 1e-12);
  }
}

// ---------------------------------------------------------------- error

TEST_CASE("error to solution is the plain distance") {
  const ProblemSpec p = shifted_identity();
  REQUIRE(monosplit::error_to_solution(p, vec1(1.0)) == 0.0);
  REQUIRE(monosplit::error_to_solution(p, vec1(3.0)) == 2.0);

  ProblemSpec no_sol = p;
  no_sol.known_solution.reset();
  REQUIRE_THROWS_AS(monosplit::error_to_solution(no_sol, vec1(3.0)),
                    monosplit::MetricUnsupportedError);
}

TEST_CASE("error is unchanged by padding both points with zeros") {
  auto mean2 = [](const Vector& x) { return Vector(x.array() - 1.0); };
  ProblemSpec p2;
  p2.name = "padded";
  p2.dimension = 2;
  p2.mean_map = mean2;
  p2.sample_map = [mean2](const Vector& x, RngStream&) { return mean2(x); };
  p2.resolvent = Resolvent::normal_cone(FeasibleSet::whole_space(2));
  p2.lipschitz_L = 1.0;
  Vector sol(2), probe(2);
  sol << 1.0, 0.0;
  probe << 3.0, 0.0;
  p2.known_solution = sol;
  REQUIRE(monosplit::error_to_solution(p2, probe) == 2.0);
}

// ----------------------------------------------------- confidence intervals

TEST_CASE("normal critical values") {
  REQUIRE(monosplit::normal_critical_value(0.95) == 1.96);
  REQUIRE(monosplit::normal_critical_value(0.90) == 1.645);
  REQUIRE(monosplit::normal_critical_value(0.99) == 2.576);
  // Generic levels go through the inverse normal CDF.
  REQUIRE(monosplit::normal_critical_value(0.5) == Catch::Approx(0.67449).margin(1e-4));
  REQUIRE_THROWS_AS(monosplit::normal_critical_value(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(monosplit::normal_critical_value(1.0), std::invalid_argument);
}

TEST_CASE("confidence interval of two points") {
  const auto ci = monosplit::confidence_interval(std::vector<double>{0.0, 2.0}, 0.95);
  // Sample sd is sqrt(2), so the half width is exactly 1.96.
  REQUIRE(ci.mean == 1.0);
  REQUIRE(ci.low == Catch::Approx(-0.96).margin(1e-12));
  REQUIRE(ci.high == Catch::Approx(2.96).margin(1e-12));
}

TEST_CASE("confidence interval degenerates on constant data") {
  const auto ci = monosplit::confidence_interval(std::vector<double>{3.0, 3.0, 3.0}, 0.95);
  REQUIRE(ci.low == 3.0);
  REQUIRE(ci.high == 3.0);
}

TEST_CASE("confidence interval is symmetric about the mean") {
  RngStream rng(5);
  std::vector<double> vals;
  for (int i = 0; i < 25; ++i) vals.push_back(rng.uniform(-1.0, 4.0));
  const auto ci = monosplit::confidence_interval(vals, 0.95);
  REQUIRE(0.5 * (ci.low + ci.high) == Catch::Approx(ci.mean).margin(1e-12));
}

TEST_CASE("confidence interval edge cases") {
  REQUIRE_THROWS_AS(monosplit::confidence_interval(std::vector<double>{}, 0.95),
                    std::invalid_argument);
  // One value yields the degenerate interval used for single-trial runs.
  const auto ci = monosplit::confidence_interval(std::vector<double>{1.5}, 0.95);
  REQUIRE(ci.low == 1.5);
  REQUIRE(ci.high == 1.5);
}

TEST_CASE("trial summary averages errors and times") {
  const auto stats = monosplit::summarize_trials({1.0, 3.0}, {0.5, 1.5}, 0.95);
  REQUIRE(stats.error_mean == 2.0);
  REQUIRE(stats.time_mean_s == 1.0);
  REQUIRE(stats.trials == 2);
  REQUIRE(stats.ci_low <= stats.error_mean);
  REQUIRE(stats.ci_high >= stats.error_mean);
  REQUIRE_THROWS_AS(monosplit::summarize_trials({1.0}, {0.5, 1.5}, 0.95),
                    std::invalid_argument);
}

// ------------------------------------------------------------- gap estimate

TEST_CASE("gap vanishes at the solution of the box problem") {
  const ProblemSpec p = identity_on_box();
  const auto gap = monosplit::gap_estimate(p, vec1(0.0), 512, RngStream(17));
  REQUIRE(gap.value == 0.0);
  REQUIRE(gap.probes == 512);
}

TEST_CASE("gap at the box boundary matches the grid supremum") {
  const ProblemSpec p = identity_on_box();
  // Grid route: G(1) = sup over y in [-1,1] of y (1 - y) = 1/4 at y = 1/2.
  double grid_best = 0.0;
  const int n = 1000000;
  for (int i = 0; i <= n; ++i) {
    const double y = -1.0 + 2.0 * i / n;
    grid_best = std::max(grid_best, y * (1.0 - y));
  }
  REQUIRE(grid_best == Catch::Approx(0.25).margin(1e-6));

  const auto gap = monosplit::gap_estimate(p, vec1(1.0), 4096, RngStream(17));
  REQUIRE(gap.value >= 0.2495);            // probe density reaches the optimum
  REQUIRE(gap.value <= grid_best + 1e-9);  // and never exceeds the true sup
}

TEST_CASE("gap estimates refine monotonically over nested probe sets") {
  const ProblemSpec p = identity_on_box();
  const RngStream rng(23);
  double prev = -1.0;
  for (int probes : {16, 64, 256, 1024}) {
    const double v = monosplit::gap_estimate(p, vec1(0.7), probes, rng).value;
    REQUIRE(v >= prev);
    REQUIRE(v >= 0.0);
    prev = v;
  }
}

TEST_CASE("gap requires a bounded domain or an explicit radius") {
  ProblemSpec p = shifted_identity();  // orthant domain, unbounded
  REQUIRE_THROWS_AS(monosplit::gap_estimate(p, vec1(0.5), 16, RngStream(1)),
                    monosplit::MetricUnsupportedError);
  p.domain_radius = 4.0;
  REQUIRE_NOTHROW(monosplit::gap_estimate(p, vec1(0.5), 16, RngStream(1)));
  REQUIRE_THROWS_AS(monosplit::gap_estimate(p, vec1(0.5), 0, RngStream(1)),
                    std::invalid_argument);
}
