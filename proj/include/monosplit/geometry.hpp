#pragma once

// Feasible sets, projections, and resolvents of the maximal monotone part B.
//
// Two families of B are supported:
//   * the normal cone of a simple closed convex set X, whose resolvent
//     (I + gamma B)^{-1} is the Euclidean projection onto X (gamma-free), and
//   * a separable sum B = sum_i d h_i(x_i) + N_{X_i}(x_i) of scalar convex
//     piecewise-linear functions over intervals, whose resolvent splits into
//     exact one-dimensional proximal steps.
//
// The capped simplex {x >= 0, sum x <= cap} carries two projectors: the
// production one (clamp, then a sort-and-threshold pass when the cap binds)
// and a reference one that enumerates every candidate active set.  The
// reference projector returns the same point and exists to model resolvents
// whose cost dwarfs a map evaluation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace monosplit {

using Vector = Eigen::VectorXd;

// ------------------------------------------------------------------------
// Interval

// Closed interval with optional endpoints; an absent endpoint marks that
// side as unbounded.  Degenerate (lower == upper) intervals are allowed.
struct Interval {
  std::optional<double> lower;
  std::optional<double> upper;

  static Interval whole_line() { return {}; }
  static Interval at_least(double lo) { return {lo, std::nullopt}; }
  static Interval at_most(double hi) { return {std::nullopt, hi}; }
  static Interval bounded(double lo, double hi) { return {lo, hi}; }

  void check_valid() const {
    if (lower && !std::isfinite(*lower))
      throw std::invalid_argument("Interval: non-finite lower bound");
    if (upper && !std::isfinite(*upper))
      throw std::invalid_argument("Interval: non-finite upper bound");
    if (lower && upper && *lower > *upper)
      throw std::invalid_argument("Interval: lower bound exceeds upper bound");
  }

  bool is_bounded() const { return lower.has_value() && upper.has_value(); }

  double clamp(double t) const {
    if (lower && t < *lower) t = *lower;
    if (upper && t > *upper) t = *upper;
    return t;
  }

  bool contains(double t, double tol = 0.0) const {
    if (lower && t < *lower - tol) return false;
    if (upper && t > *upper + tol) return false;
    return true;
  }
};

// ------------------------------------------------------------------------
// Scalar piecewise-linear prox

// Convex scalar function with one kink,
//     f(t) = scale * max(slope_left * (t - breakpoint),
//                        slope_right * (t - breakpoint)),
// normalized so f(breakpoint) = 0 (an additive constant never moves a
// proximal point).  Convexity requires slope_left <= slope_right and
// scale >= 0.  With slope_left = -1, slope_right = 1, scale = a this is
// a * |t - breakpoint|.
struct PiecewiseLinearProx1D {
  double slope_left = 0.0;
  double slope_right = 0.0;
  double breakpoint = 0.0;
  double scale = 1.0;

  PiecewiseLinearProx1D() = default;
  PiecewiseLinearProx1D(double sl, double sr, double b, double sc = 1.0)
      : slope_left(sl), slope_right(sr), breakpoint(b), scale(sc) {
    if (!(std::isfinite(sl) && std::isfinite(sr) && std::isfinite(b) && std::isfinite(sc)))
      throw std::invalid_argument("PiecewiseLinearProx1D: non-finite parameter");
    if (sl > sr)
      throw std::invalid_argument(
          "PiecewiseLinearProx1D: slope_left > slope_right gives a concave kink");
    if (sc < 0.0)
      throw std::invalid_argument("PiecewiseLinearProx1D: negative scale");
  }

  double value(double t) const {
    return scale * std::max(slope_left * (t - breakpoint), slope_right * (t - breakpoint));
  }

  // Subgradient interval [lo, hi] of f at t.
  std::pair<double, double> subdifferential(double t, double tol = 0.0) const {
    if (t < breakpoint - tol) return {scale * slope_left, scale * slope_left};
    if (t > breakpoint + tol) return {scale * slope_right, scale * slope_right};
    return {scale * slope_left, scale * slope_right};
  }

  // argmin_t  f(t) + (t - v)^2 / (2 gamma)  over the given interval.
  //
  // The unconstrained minimizer is piecewise explicit: shift v by
  // gamma * scale * slope for whichever linear piece is active, and land on
  // the kink when the shifted candidates bracket it.  The interval constraint
  // then clamps, which is exact because the objective is convex in t.
  double prox(double gamma, double v, const Interval& domain = Interval::whole_line()) const {
    if (!(gamma > 0.0)) throw std::invalid_argument("prox: gamma must be positive");
    const double left_cand = v - gamma * scale * slope_left;
    double u;
    if (left_cand < breakpoint) {
      u = left_cand;
    } else {
      const double right_cand = v - gamma * scale * slope_right;
      u = (right_cand > breakpoint) ? right_cand : breakpoint;
    }
    return domain.clamp(u);
  }
};

inline double prox_pwl_1d(const PiecewiseLinearProx1D& f, double gamma, double v,
                          const Interval& domain = Interval::whole_line()) {
  return f.prox(gamma, v, domain);
}

// ------------------------------------------------------------------------
// Feasible sets

class FeasibleSet {
 public:
  enum class Kind { WholeSpace, NonnegOrthant, Box, CappedSimplex };

  static FeasibleSet whole_space(Eigen::Index dim) {
    return FeasibleSet(Kind::WholeSpace, dim);
  }

  static FeasibleSet nonneg_orthant(Eigen::Index dim) {
    return FeasibleSet(Kind::NonnegOrthant, dim);
  }

  static FeasibleSet box(Vector lower, Vector upper) {
    if (lower.size() != upper.size())
      throw std::invalid_argument("FeasibleSet::box: bound dimensions differ");
    if (((upper - lower).array() < 0.0).any())
      throw std::invalid_argument("FeasibleSet::box: lower bound exceeds upper bound");
    FeasibleSet s(Kind::Box, lower.size());
    s.lower_ = std::move(lower);
    s.upper_ = std::move(upper);
    return s;
  }

  // { x : x >= 0, sum_i x_i <= cap }
  static FeasibleSet capped_simplex(Eigen::Index dim, double cap) {
    if (!(cap > 0.0))
      throw std::invalid_argument("FeasibleSet::capped_simplex: cap must be positive");
    FeasibleSet s(Kind::CappedSimplex, dim);
    s.cap_ = cap;
    return s;
  }

  Kind kind() const { return kind_; }
  Eigen::Index dimension() const { return dim_; }
  double cap() const { return cap_; }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  bool is_bounded() const {
    switch (kind_) {
      case Kind::WholeSpace:
      case Kind::NonnegOrthant:
        return false;
      case Kind::Box:
        return lower_.allFinite() && upper_.allFinite();
      case Kind::CappedSimplex:
        return true;
    }
    return false;
  }

  bool contains(const Vector& x, double tol = 0.0) const {
    check_dim(x);
    switch (kind_) {
      case Kind::WholeSpace:
        return true;
      case Kind::NonnegOrthant:
        return (x.array() >= -tol).all();
      case Kind::Box:
        return ((x - lower_).array() >= -tol).all() && ((upper_ - x).array() >= -tol).all();
      case Kind::CappedSimplex:
        return (x.array() >= -tol).all() && x.sum() <= cap_ + tol;
    }
    return false;
  }

  Vector project(const Vector& x) const {
    check_dim(x);
    switch (kind_) {
      case Kind::WholeSpace:
        return x;
      case Kind::NonnegOrthant:
        return x.cwiseMax(0.0);
      case Kind::Box:
        return x.cwiseMax(lower_).cwiseMin(upper_);
      case Kind::CappedSimplex:
        return project_capped_simplex(x);
    }
    throw std::logic_error("FeasibleSet::project: unreachable");
  }

  // Exhaustive active-set projector.  For the capped simplex it enumerates,
  // for every support S of positive coordinates, both the cap-inactive
  // candidate (x restricted to S) and the cap-active one (x shifted by the
  // multiplier that puts the sum exactly at the cap), keeps the feasible
  // ones, and returns the closest.  The true projection is always among the
  // candidates, so the result matches project() while costing Theta(2^d d).
  // For the other set kinds it simply defers to project().
  Vector project_reference(const Vector& x) const {
    check_dim(x);
    if (kind_ != Kind::CappedSimplex) return project(x);
    if (dim_ > 24)
      throw std::invalid_argument("project_reference: enumeration needs dimension <= 24");

    const auto d = static_cast<std::uint32_t>(dim_);
    Vector best = Vector::Zero(dim_);  // support S = empty, always feasible
    double best_dist = x.squaredNorm();
    Vector cand(dim_);
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << d); ++mask) {
      double sum = 0.0;
      int card = 0;
      for (std::uint32_t i = 0; i < d; ++i) {
        if (mask & (std::uint64_t(1) << i)) {
          sum += x[i];
          ++card;
        }
      }
      // Cap inactive: y = x on S, zero elsewhere.
      bool feasible = sum <= cap_;
      if (feasible) {
        for (std::uint32_t i = 0; i < d; ++i) {
          const bool in = mask & (std::uint64_t(1) << i);
          cand[i] = in ? x[i] : 0.0;
          if (in && x[i] < 0.0) feasible = false;
        }
        if (feasible) {
          const double dist = (cand - x).squaredNorm();
          if (dist < best_dist) {
            best_dist = dist;
            best = cand;
          }
        }
      }
      // Cap active: y = x - lambda on S with lambda chosen so sum(y) = cap.
      const double lambda = (sum - cap_) / card;
      feasible = lambda >= 0.0;
      if (feasible) {
        for (std::uint32_t i = 0; i < d; ++i) {
          const bool in = mask & (std::uint64_t(1) << i);
          cand[i] = in ? x[i] - lambda : 0.0;
          if (in && cand[i] < 0.0) feasible = false;
        }
        if (feasible) {
          const double dist = (cand - x).squaredNorm();
          if (dist < best_dist) {
            best_dist = dist;
            best = cand;
          }
        }
      }
    }
    return best;
  }

 private:
  FeasibleSet(Kind k, Eigen::Index dim) : kind_(k), dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("FeasibleSet: dimension must be positive");
  }

  void check_dim(const Vector& x) const {
    if (x.size() != dim_)
      throw std::invalid_argument("FeasibleSet: vector dimension mismatch");
  }

  // Clamp to the orthant; if the cap still binds, project onto the facet
  // {y >= 0, sum y = cap} by the sort-and-threshold rule.
  Vector project_capped_simplex(const Vector& x) const {
    Vector z = x.cwiseMax(0.0);
    if (z.sum() <= cap_) return z;
    std::vector<double> u(x.data(), x.data() + x.size());
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      cumulative += u[j];
      const double candidate = (cumulative - cap_) / static_cast<double>(j + 1);
      if (u[j] - candidate > 0.0) {
        theta = candidate;
      } else {
        break;
      }
    }
    return (x.array() - theta).cwiseMax(0.0).matrix();
  }

  Kind kind_;
  Eigen::Index dim_;
  double cap_ = 0.0;
  Vector lower_, upper_;
};

// ------------------------------------------------------------------------
// Resolvents

// (I + gamma B)^{-1} for the supported monotone parts.  gamma must be
// positive; normal-cone resolvents do not otherwise depend on it.
class Resolvent {
 public:
  enum class Kind { NormalCone, Separable };

  static Resolvent normal_cone(FeasibleSet set, bool use_reference_projector = false) {
    Resolvent r;
    r.kind_ = Kind::NormalCone;
    r.set_ = std::move(set);
    r.reference_projector_ = use_reference_projector;
    return r;
  }

  static Resolvent separable(std::vector<PiecewiseLinearProx1D> terms,
                             std::vector<Interval> domains) {
    if (terms.size() != domains.size())
      throw std::invalid_argument("Resolvent::separable: terms/domains size mismatch");
    if (terms.empty())
      throw std::invalid_argument("Resolvent::separable: empty term list");
    for (const auto& d : domains) d.check_valid();
    Resolvent r;
    r.kind_ = Kind::Separable;
    r.terms_ = std::move(terms);
    r.domains_ = std::move(domains);
    return r;
  }

  Kind kind() const { return kind_; }
  Eigen::Index dimension() const {
    return kind_ == Kind::NormalCone ? set_->dimension()
                                     : static_cast<Eigen::Index>(terms_.size());
  }
  bool uses_reference_projector() const { return reference_projector_; }
  const FeasibleSet* feasible_set() const { return set_ ? &*set_ : nullptr; }
  const std::vector<PiecewiseLinearProx1D>& terms() const { return terms_; }
  const std::vector<Interval>& domains() const { return domains_; }

  Vector apply(double gamma, const Vector& v) const {
    if (!(gamma > 0.0)) throw std::invalid_argument("Resolvent::apply: gamma must be positive");
    if (v.size() != dimension())
      throw std::invalid_argument("Resolvent::apply: vector dimension mismatch");
    if (kind_ == Kind::NormalCone)
      return reference_projector_ ? set_->project_reference(v) : set_->project(v);
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      out[i] = terms_[static_cast<std::size_t>(i)].prox(
          gamma, v[i], domains_[static_cast<std::size_t>(i)]);
    return out;
  }

  // Membership in dom B (the feasible set, or the product of intervals).
  bool domain_contains(const Vector& x, double tol = 0.0) const {
    if (x.size() != dimension()) return false;
    if (kind_ == Kind::NormalCone) return set_->contains(x, tol);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (!domains_[static_cast<std::size_t>(i)].contains(x[i], tol)) return false;
    return true;
  }

 private:
  Resolvent() = default;

  Kind kind_ = Kind::NormalCone;
  std::optional<FeasibleSet> set_;
  bool reference_projector_ = false;
  std::vector<PiecewiseLinearProx1D> terms_;
  std::vector<Interval> domains_;
};

// Projection onto a set expressed through its normal-cone resolvent; kept as
// a named helper because call sites read better than apply(1, x).  The gamma
// argument is validated and then irrelevant.
inline Vector resolvent_normal_cone(const FeasibleSet& set, double gamma, const Vector& x) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("resolvent_normal_cone: gamma must be positive");
  return set.project(x);
}

}  // namespace monosplit
