#pragma once

// Empirical validation of an instance against its certified constants.
//
// Every check probes the actual maps, so a doctored instance file (stored L
// halved, noise understated, biased oracle) fails here even though it parses
// fine.  Checks are deterministic in the validation seed.

#include "monosplit/metrics.hpp"
#include "monosplit/oracles.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace monosplit {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

struct ValidateOptions {
  int pairs = 200;      // random probe pairs for monotonicity / Lipschitz
  long draws = 2000;    // oracle draws per probe point for moment checks
  std::uint64_t seed = 0;
  double probe_radius = 0.0;  // 0 = derive from the instance
};

namespace detail {

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline double validate_radius(const ProblemSpec& p, const ValidateOptions& opt) {
  if (opt.probe_radius > 0.0) return opt.probe_radius;
  double r = 4.0;
  if (p.known_solution) r = std::max(r, 2.0 * p.known_solution->cwiseAbs().maxCoeff());
  if (p.domain_radius) r = std::max(r, *p.domain_radius);
  return r;
}

inline Vector random_point(RngStream& rng, Eigen::Index d, double radius) {
  Vector x(d);
  for (Eigen::Index i = 0; i < d; ++i) x[i] = rng.uniform(-radius, radius);
  return x;
}

}  // namespace detail

inline ValidationReport validate_problem(const ProblemSpec& p, const ValidateOptions& opt = {}) {
  ValidationReport report;
  auto add = [&report](const std::string& name, bool ok, const std::string& detail) {
    report.checks.push_back({name, ok, detail});
  };

  // Structural sanity first; if this fails, nothing else is probed.
  try {
    p.check_valid();
    add("structure", true, "dimensions and constants are well formed");
  } catch (const std::exception& e) {
    add("structure", false, e.what());
    return report;
  }

  const double R = detail::validate_radius(p, opt);
  const Eigen::Index d = p.dimension;
  RngStream root(opt.seed);

  // ---- monotonicity and strong monotonicity of the mean map ------------
  {
    RngStream rng = root.fork(1);
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < opt.pairs; ++t) {
      const Vector x = detail::random_point(rng, d, R);
      const Vector y = detail::random_point(rng, d, R);
      const double nsq = (x - y).squaredNorm();
      if (nsq == 0.0) continue;
      const double inner = (eval_mean(p, x) - eval_mean(p, y)).dot(x - y);
      worst = std::min(worst, inner / nsq);
    }
    const double tol = 1e-9 * (1.0 + p.lipschitz_L * R * R);
    add("monotone", worst >= -tol,
        "smallest <A(x)-A(y), x-y>/||x-y||^2 observed: " + detail::fmt_double(worst));
    const double sigma = p.strong_monotonicity_sigma;
    add("strongly_monotone", worst >= sigma - tol,
        "certified sigma " + detail::fmt_double(sigma) + ", observed floor " +
            detail::fmt_double(worst));
  }

  // ---- Lipschitz bound --------------------------------------------------
  {
    RngStream rng = root.fork(2);
    double worst_ratio = 0.0;
    auto consider = [&](const Vector& x, const Vector& y) {
      const double nx = (x - y).norm();
      if (nx == 0.0) return;
      worst_ratio = std::max(worst_ratio, (eval_mean(p, x) - eval_mean(p, y)).norm() / nx);
    };
    for (int t = 0; t < opt.pairs; ++t)
      consider(detail::random_point(rng, d, R), detail::random_point(rng, d, R));
    // Directed probes: axis and diagonal steps from an interior and from a
    // deep-negative base point, where piecewise maps attain their steepest
    // slopes.  These catch an understated constant that random pairs miss.
    const Vector bases[2] = {Vector::Constant(d, 0.1), Vector::Constant(d, -2.0 * R)};
    for (const Vector& base : bases) {
      for (double delta : {1e-3, R / 10.0}) {
        for (Eigen::Index i = 0; i < d; ++i) {
          Vector y = base;
          y[i] += delta;
          consider(base, y);
        }
        consider(base, base + Vector::Constant(d, delta / std::sqrt(static_cast<double>(d))));
      }
    }
    const bool ok = worst_ratio <= p.lipschitz_L * (1.0 + 1e-9) + 1e-12;
    add("lipschitz", ok,
        "certified L " + detail::fmt_double(p.lipschitz_L) + ", sharpest observed ratio " +
            detail::fmt_double(worst_ratio));
  }

  // ---- oracle unbiasedness ----------------------------------------------
  {
    RngStream rng = root.fork(3);
    bool ok = true;
    double worst = 0.0;
    for (int pt = 0; pt < 3; ++pt) {
      Vector x = detail::random_point(rng, d, R);
      x = p.resolvent.apply(1.0, x);  // test at domain points, where solvers live
      const Vector mean = eval_mean(p, x);
      Vector acc = Vector::Zero(d);
      RngStream draws = rng.fork(static_cast<std::uint64_t>(100 + pt));
      for (long j = 0; j < opt.draws; ++j) acc += sample(p, x, draws);
      acc /= static_cast<double>(opt.draws);
      const double bound =
          std::sqrt(p.noise_nu1 * p.noise_nu1 * x.squaredNorm() + p.noise_nu2 * p.noise_nu2);
      const double thresh =
          5.0 * bound / std::sqrt(static_cast<double>(opt.draws)) + 1e-9 * (1.0 + mean.norm());
      const double dev = (acc - mean).norm();
      worst = std::max(worst, dev - thresh);
      if (dev > thresh) ok = false;
    }
    add("unbiased", ok,
        ok ? "sample means match the mean map within sampling error"
           : "sample mean deviates beyond sampling error by " + detail::fmt_double(worst));
  }

  // ---- noise second-moment bound -----------------------------------------
  {
    RngStream rng = root.fork(4);
    bool ok = true;
    std::string detail_str = "empirical E||A(x,w)-EA(x)||^2 within the certified bound";
    for (int pt = 0; pt < 3; ++pt) {
      Vector x = detail::random_point(rng, d, R);
      x = p.resolvent.apply(1.0, x);
      const Vector mean = eval_mean(p, x);
      double second = 0.0;
      RngStream draws = rng.fork(static_cast<std::uint64_t>(200 + pt));
      for (long j = 0; j < opt.draws; ++j) second += (sample(p, x, draws) - mean).squaredNorm();
      second /= static_cast<double>(opt.draws);
      const double bound = p.noise_nu1 * p.noise_nu1 * x.squaredNorm() + p.noise_nu2 * p.noise_nu2;
      if (second > bound * 1.25 + 1e-9) {
        ok = false;
        detail_str = "observed " + detail::fmt_double(second) + " exceeds bound " +
                     detail::fmt_double(bound);
        break;
      }
    }
    add("noise_moment", ok, detail_str);
  }

  // ---- resolvent: firm nonexpansiveness ----------------------------------
  {
    RngStream rng = root.fork(5);
    bool ok = true;
    const double gamma = p.default_gamma();
    for (int t = 0; t < opt.pairs; ++t) {
      const Vector v = detail::random_point(rng, d, 2.0 * R);
      const Vector w = detail::random_point(rng, d, 2.0 * R);
      const Vector jv = p.resolvent.apply(gamma, v);
      const Vector jw = p.resolvent.apply(gamma, w);
      const double lhs = (jv - jw).squaredNorm();
      const double rhs = (jv - jw).dot(v - w);
      if (lhs > rhs + 1e-9 * (1.0 + R * R)) {
        ok = false;
        break;
      }
    }
    add("resolvent_firmly_nonexpansive", ok,
        ok ? "||Jv-Jw||^2 <= <Jv-Jw, v-w> on all probe pairs" : "firm nonexpansiveness violated");
  }

  // ---- projector agreement (capped simplex only) --------------------------
  if (p.resolvent.kind() == Resolvent::Kind::NormalCone &&
      p.resolvent.feasible_set()->kind() == FeasibleSet::Kind::CappedSimplex && d <= 16) {
    RngStream rng = root.fork(6);
    const FeasibleSet& set = *p.resolvent.feasible_set();
    bool ok = true;
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const Vector v = detail::random_point(rng, d, 2.0 * set.cap());
      const double dev = (set.project(v) - set.project_reference(v)).norm();
      worst = std::max(worst, dev);
      if (dev > 1e-9) ok = false;
    }
    add("projector_agreement", ok,
        "fast vs reference projector, largest deviation " + detail::fmt_double(worst));
  }

  // ---- known solution actually solves the inclusion -----------------------
  if (p.known_solution) {
    const double res = residual(p, *p.known_solution);
    const double tol = 1e-6 * (1.0 + p.known_solution->norm());
    add("solution_residual", res <= tol,
        "residual at stored solution: " + detail::fmt_double(res));
    if (p.domain_radius) {
      try {
        const GapEstimate g = gap_estimate(p, *p.known_solution, 64, root.fork(7));
        add("solution_gap", g.value <= 1e-6 * (1.0 + p.lipschitz_L * R),
            "gap lower bound at stored solution: " + detail::fmt_double(g.value));
      } catch (const MetricUnsupportedError&) {
        // gap not computable here; nothing to check
      }
    }
  }

  return report;
}

}  // namespace monosplit
