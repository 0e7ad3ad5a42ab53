#pragma once

// Solution-quality metrics: the fixed-point residual, distance to a known
// solution, a probe-based lower bound on the restricted gap function, and
// Gaussian confidence intervals for trial aggregates.

#include "monosplit/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace monosplit {

class MetricUnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------------------
// Residual and solution error

// Natural residual r_gamma(x) = || x - J_{gamma B}(x - gamma E[A](x)) ||.
// Zero exactly at solutions of 0 in E[A](x) + B(x) for any gamma > 0.
inline double residual(const ProblemSpec& p, const Vector& x, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("residual: gamma must be positive");
  const Vector forward = x - gamma * eval_mean(p, x);
  return (x - p.resolvent.apply(gamma, forward)).norm();
}

// Reporting default: gamma = 1/(4L), the same scale every solver is judged
// at regardless of the step rule it ran with.
inline double residual(const ProblemSpec& p, const Vector& x) {
  return residual(p, x, p.default_gamma());
}

inline double error_to_solution(const ProblemSpec& p, const Vector& x) {
  if (!p.known_solution)
    throw MetricUnsupportedError("error_to_solution: instance has no known solution");
  if (x.size() != p.dimension)
    throw std::invalid_argument("error_to_solution: dimension mismatch");
  return (x - *p.known_solution).norm();
}

// ------------------------------------------------------------------------
// Confidence intervals

namespace detail {

// Acklam's rational approximation to the standard normal quantile,
// |relative error| < 1.15e-9 on (0, 1).
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("inverse_normal_cdf: p must lie in (0, 1)");
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Two-sided critical value for a given confidence level.  The three standard
// levels use the conventional table values so that reported intervals match
// published numbers digit for digit; anything else falls back to the
// quantile approximation.
inline double normal_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("normal_critical_value: level must lie in (0, 1)");
  if (level == 0.90) return 1.645;
  if (level == 0.95) return 1.96;
  if (level == 0.99) return 2.576;
  return detail::inverse_normal_cdf(0.5 + level / 2.0);
}

struct ConfidenceInterval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// mean +- z * s / sqrt(n) with the sample standard deviation s (n-1
// denominator).  A single value yields a degenerate interval.
inline ConfidenceInterval confidence_interval(std::span<const double> values, double level) {
  if (values.empty())
    throw std::invalid_argument("confidence_interval: no values");
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() == 1) return {mean, mean, mean};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double s = std::sqrt(ss / (n - 1.0));
  const double half = normal_critical_value(level) * s / std::sqrt(n);
  return {mean, mean - half, mean + half};
}

inline ConfidenceInterval confidence_interval(const std::vector<double>& values, double level) {
  return confidence_interval(std::span<const double>(values.data(), values.size()), level);
}

// ------------------------------------------------------------------------
// Gap lower bound

struct GapEstimate {
  double value = 0.0;
  int probes = 0;
};

namespace detail {

// One element z in T(y) = E[A](y) + B(y) maximizing <z, x - y> over the
// sampled slice of B(y): the exact per-coordinate supremum for separable
// subdifferentials, plus normal-cone rays on active faces at five dyadic
// magnitudes around the probe radius.
inline double probe_value(const ProblemSpec& p, const Vector& x, const Vector& y,
                          double radius) {
  const Vector diff = x - y;
  double val = eval_mean(p, y).dot(diff);
  const double face_tol = 1e-9 * std::max(1.0, radius);
  const double mags[5] = {radius / 4.0, radius / 2.0, radius, 2.0 * radius, 4.0 * radius};
  auto ray_gain = [&](double inner) {
    // max_t in mags  t * inner, with t >= 0 allowed to be skipped (t = 0).
    if (inner <= 0.0) return 0.0;
    return mags[4] * inner;
  };

  const Resolvent& r = p.resolvent;
  if (r.kind() == Resolvent::Kind::NormalCone) {
    const FeasibleSet& set = *r.feasible_set();
    switch (set.kind()) {
      case FeasibleSet::Kind::WholeSpace:
        break;
      case FeasibleSet::Kind::NonnegOrthant:
        for (Eigen::Index i = 0; i < y.size(); ++i)
          if (y[i] <= face_tol) val += ray_gain(-diff[i]);
        break;
      case FeasibleSet::Kind::Box:
        for (Eigen::Index i = 0; i < y.size(); ++i) {
          if (std::isfinite(set.lower()[i]) && y[i] <= set.lower()[i] + face_tol)
            val += ray_gain(-diff[i]);
          if (std::isfinite(set.upper()[i]) && y[i] >= set.upper()[i] - face_tol)
            val += ray_gain(diff[i]);
        }
        break;
      case FeasibleSet::Kind::CappedSimplex:
        for (Eigen::Index i = 0; i < y.size(); ++i)
          if (y[i] <= face_tol) val += ray_gain(-diff[i]);
        if (y.sum() >= set.cap() - face_tol) val += ray_gain(diff.sum());
        break;
    }
  } else {
    const auto& terms = r.terms();
    const auto& domains = r.domains();
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const auto [lo, hi] = terms[idx].subdifferential(y[i], face_tol);
      val += diff[i] >= 0.0 ? hi * diff[i] : lo * diff[i];
      const Interval& dom = domains[idx];
      if (dom.lower && y[i] <= *dom.lower + face_tol) val += ray_gain(-diff[i]);
      if (dom.upper && y[i] >= *dom.upper - face_tol) val += ray_gain(diff[i]);
    }
  }
  return val;
}

// Probe point: a point of a ball around the anchor pushed into dom B, with
// every third probe snapped onto a boundary face so the normal-cone rays
// actually fire.
inline Vector make_probe(const ProblemSpec& p, const Vector& anchor, double radius,
                         RngStream rng, long index) {
  const Eigen::Index d = p.dimension;
  Vector z(d);
  for (Eigen::Index i = 0; i < d; ++i) z[i] = rng.gaussian();
  const double norm = z.norm();
  if (norm > 0.0) z *= radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d)) / norm;
  z += anchor;

  const Resolvent& r = p.resolvent;
  Vector y;
  if (r.kind() == Resolvent::Kind::NormalCone) {
    y = r.feasible_set()->project(z);
    if (index % 3 == 2) {
      const FeasibleSet& set = *r.feasible_set();
      const auto face = static_cast<Eigen::Index>(index / 3) % d;
      switch (set.kind()) {
        case FeasibleSet::Kind::WholeSpace:
          break;
        case FeasibleSet::Kind::NonnegOrthant:
        case FeasibleSet::Kind::CappedSimplex:
          y[face] = 0.0;
          break;
        case FeasibleSet::Kind::Box: {
          const double lo = set.lower()[face];
          const double hi = set.upper()[face];
          const double target = (index / 3) % 2 == 0 ? lo : hi;
          if (std::isfinite(target)) y[face] = target;
          break;
        }
      }
    }
  } else {
    y.resize(d);
    for (Eigen::Index i = 0; i < d; ++i)
      y[i] = r.domains()[static_cast<std::size_t>(i)].clamp(z[i]);
    if (index % 3 == 2) {
      const auto face = static_cast<Eigen::Index>(index / 3) % d;
      const auto idx = static_cast<std::size_t>(face);
      const Interval& dom = r.domains()[idx];
      if ((index / 3) % 2 == 0 && dom.lower) {
        y[face] = *dom.lower;
      } else if (dom.upper) {
        y[face] = *dom.upper;
      } else {
        // No endpoint to snap to; the kink of the 1-D term still widens
        // the subdifferential, so probe there instead.
        y[face] = r.terms()[idx].breakpoint;
        y[face] = dom.clamp(y[face]);
      }
    }
  }
  return y;
}

}  // namespace detail

// Lower bound on the restricted gap sup_{y, z in T(y)} <z, x - y> by direct
// probing.  Probe j is generated from rng.fork(j), so enlarging n_probes
// extends the probe sequence instead of reshuffling it and the estimate is
// monotonically nondecreasing in n_probes.  When x itself lies in dom B the
// trivial probe y = x is included, which pins the estimate at >= 0.
inline GapEstimate gap_estimate(const ProblemSpec& p, const Vector& x, int n_probes,
                                const RngStream& rng) {
  if (x.size() != p.dimension) throw std::invalid_argument("gap_estimate: dimension mismatch");
  if (n_probes < 1) throw std::invalid_argument("gap_estimate: need at least one probe");
  double radius = 0.0;
  if (p.domain_radius) {
    radius = *p.domain_radius;
  } else if (p.resolvent.kind() == Resolvent::Kind::NormalCone &&
             p.resolvent.feasible_set()->is_bounded()) {
    const FeasibleSet& set = *p.resolvent.feasible_set();
    if (set.kind() == FeasibleSet::Kind::CappedSimplex) {
      radius = set.cap();
    } else {
      radius = std::max(set.lower().cwiseAbs().maxCoeff(), set.upper().cwiseAbs().maxCoeff()) *
               std::sqrt(static_cast<double>(set.dimension()));
    }
  } else {
    throw MetricUnsupportedError(
        "gap_estimate: unbounded domain and no domain_radius on the instance");
  }
  if (!(radius > 0.0)) throw std::invalid_argument("gap_estimate: nonpositive radius");

  const Vector anchor = p.known_solution ? *p.known_solution : x;
  double best = -std::numeric_limits<double>::infinity();
  if (p.resolvent.domain_contains(x, 1e-9 * std::max(1.0, radius))) best = 0.0;
  for (int j = 0; j < n_probes; ++j) {
    const Vector y = detail::make_probe(p, anchor, radius, rng.fork(static_cast<std::uint64_t>(j)), j);
    best = std::max(best, detail::probe_value(p, x, y, radius));
  }
  return {best, n_probes};
}

// ------------------------------------------------------------------------
// Trial aggregation

struct TrialStats {
  double error_mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double time_mean_s = 0.0;
  int trials = 0;
};

inline TrialStats summarize_trials(const std::vector<double>& errors,
                                   const std::vector<double>& times_s, double level) {
  if (errors.empty()) throw std::invalid_argument("summarize_trials: no trials");
  if (times_s.size() != errors.size())
    throw std::invalid_argument("summarize_trials: errors/times size mismatch");
  const ConfidenceInterval ci = confidence_interval(errors, level);
  double tm = 0.0;
  for (double t : times_s) tm += t;
  tm /= static_cast<double>(times_s.size());
  return {ci.mean, ci.low, ci.high, tm, static_cast<int>(errors.size())};
}

}  // namespace monosplit
