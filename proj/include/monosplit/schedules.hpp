#pragma once

// Batch-size schedules and step-size rules, plus the closed-form theoretical
// step and batch bounds used by the variance-reduced scheme.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace monosplit {

// ------------------------------------------------------------------------
// Minibatch schedules, indexed by iteration k >= 0.

class BatchSchedule {
 public:
  enum class Kind { Constant, Polynomial, Geometric };

  static BatchSchedule constant(long n) {
    if (n < 1) throw std::invalid_argument("BatchSchedule::constant: n must be >= 1");
    BatchSchedule s;
    s.kind_ = Kind::Constant;
    s.n0_ = n;
    return s;
  }

  // N_k = max(1, floor(k^a)); a > 1 so that sum 1/N_k converges.
  static BatchSchedule polynomial(double a) {
    if (!(a > 1.0)) throw std::invalid_argument("BatchSchedule::polynomial: exponent must exceed 1");
    BatchSchedule s;
    s.kind_ = Kind::Polynomial;
    s.exponent_ = a;
    return s;
  }

  // N_k = n0 * max(1, floor(rho^{-(k+1)})) with rho in (0, 1).
  static BatchSchedule geometric(long n0, double rho) {
    if (n0 < 1) throw std::invalid_argument("BatchSchedule::geometric: n0 must be >= 1");
    if (!(rho > 0.0 && rho < 1.0))
      throw std::invalid_argument("BatchSchedule::geometric: rho must lie in (0, 1)");
    BatchSchedule s;
    s.kind_ = Kind::Geometric;
    s.n0_ = n0;
    s.rho_ = rho;
    return s;
  }

  long batch_size(long k) const {
    if (k < 0) throw std::invalid_argument("BatchSchedule: iteration index must be >= 0");
    switch (kind_) {
      case Kind::Constant:
        return n0_;
      case Kind::Polynomial: {
        const double v = std::floor(std::pow(static_cast<double>(k), exponent_));
        return std::max<long>(1, static_cast<long>(std::min(v, kMaxBatch)));
      }
      case Kind::Geometric: {
        const double v = std::floor(std::pow(rho_, -static_cast<double>(k + 1)));
        const double lim = kMaxBatch / static_cast<double>(n0_);
        return n0_ * std::max<long>(1, static_cast<long>(std::min(v, lim)));
      }
    }
    throw std::logic_error("BatchSchedule: unreachable");
  }

  long operator()(long k) const { return batch_size(k); }

  Kind kind() const { return kind_; }
  long n0() const { return n0_; }
  double exponent() const { return exponent_; }
  double rho() const { return rho_; }

  // Whether sum_k 1/N_k is finite, the condition the convergence theory
  // needs from a schedule.  Constant schedules fail it.
  bool summable_inverse() const { return kind_ != Kind::Constant; }

 private:
  // Growing schedules are queried for arbitrarily deep iterations (the solver
  // asks for N_k before checking the remaining budget), so sizes saturate at
  // 2^53 samples instead of overflowing.  The cap is exact in double, and
  // n0 * size stays far below the long range.
  static constexpr double kMaxBatch = 9007199254740992.0;

  BatchSchedule() = default;
  Kind kind_ = Kind::Constant;
  long n0_ = 1;
  double exponent_ = 0.0;
  double rho_ = 0.5;
};

// ------------------------------------------------------------------------
// Step-size rules, indexed by iteration k >= 1.

class StepRule {
 public:
  enum class Kind { Constant, Diminishing };

  static StepRule constant(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("StepRule::constant: gamma must be positive");
    StepRule r;
    r.kind_ = Kind::Constant;
    r.gamma0_ = gamma;
    return r;
  }

  // gamma_k = gamma0 / k^e with e in [1/2, 1].  e = 1/2 is the classical
  // stochastic-approximation choice and is reserved for that scheme; the
  // solver configs enforce the restriction.
  static StepRule diminishing(double gamma0, double exponent) {
    if (!(gamma0 > 0.0))
      throw std::invalid_argument("StepRule::diminishing: gamma0 must be positive");
    if (!(exponent >= 0.5 && exponent <= 1.0))
      throw std::invalid_argument("StepRule::diminishing: exponent must lie in [1/2, 1]");
    StepRule r;
    r.kind_ = Kind::Diminishing;
    r.gamma0_ = gamma0;
    r.exponent_ = exponent;
    return r;
  }

  // Diminishing rule clipped at `cap`: gamma_k = min(gamma0 / k^e, cap).
  // A scale-blind 1/sqrt(k) schedule expands the iterates whenever
  // gamma_k L > 2, which on a sharply scaled map lasts long enough to
  // overflow; clipping at order 1/L keeps the early steps stable without
  // changing the asymptotic schedule.
  static StepRule diminishing_capped(double gamma0, double exponent, double cap) {
    StepRule r = diminishing(gamma0, exponent);
    if (!(cap > 0.0))
      throw std::invalid_argument("StepRule::diminishing_capped: cap must be positive");
    r.cap_ = cap;
    return r;
  }

  double step(long k) const {
    if (k < 1) throw std::invalid_argument("StepRule: iteration index must be >= 1");
    if (kind_ == Kind::Constant) return gamma0_;
    return std::min(gamma0_ / std::pow(static_cast<double>(k), exponent_), cap_);
  }

  double operator()(long k) const { return step(k); }

  Kind kind() const { return kind_; }
  double gamma0() const { return gamma0_; }
  double exponent() const { return exponent_; }
  double cap() const { return cap_; }

 private:
  StepRule() = default;
  Kind kind_ = Kind::Constant;
  double gamma0_ = 1.0;
  double exponent_ = 1.0;
  double cap_ = std::numeric_limits<double>::infinity();
};

// ------------------------------------------------------------------------
// Theoretical constants.

// Step size guaranteeing convergence in the merely monotone regime with
// multiplicative noise nu1 and base batch n0:
//     gamma = 1 / (2 sqrt(L^2 + 4 nu1^2 / n0)).
inline double step_monotone(double L, double nu1, long n0) {
  if (!(L > 0.0)) throw std::invalid_argument("step_monotone: L must be positive");
  if (nu1 < 0.0) throw std::invalid_argument("step_monotone: nu1 must be >= 0");
  if (n0 < 1) throw std::invalid_argument("step_monotone: n0 must be >= 1");
  return 1.0 / (2.0 * std::sqrt(L * L + 4.0 * nu1 * nu1 / static_cast<double>(n0)));
}

// Step size for the strongly monotone linear-rate regime:
//     gamma = safety * min{ sigma/4, 1/(20 sigma), sqrt(7) / (4 sqrt(L^2 + 1/2)) }.
inline double step_strongly_monotone(double sigma, double L, double safety = 0.99) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("step_strongly_monotone: sigma must be positive");
  if (!(L >= sigma))
    throw std::invalid_argument("step_strongly_monotone: L must be >= sigma");
  if (!(safety > 0.0 && safety <= 1.0))
    throw std::invalid_argument("step_strongly_monotone: safety must lie in (0, 1]");
  const double a = sigma / 4.0;
  const double b = 1.0 / (20.0 * sigma);
  const double c = std::sqrt(7.0) / (4.0 * std::sqrt(L * L + 0.5));
  return safety * std::min(a, std::min(b, c));
}

// Smallest base batch keeping the noise contribution inside the linear-rate
// contraction:  ceil( 2 (24 gamma^2 + 8) nu1^2 / (sigma gamma) ), at least 1.
inline long min_batch_strongly_monotone(double gamma, double sigma, double nu1) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("min_batch_strongly_monotone: gamma must be positive");
  if (!(sigma > 0.0))
    throw std::invalid_argument("min_batch_strongly_monotone: sigma must be positive");
  if (nu1 < 0.0) throw std::invalid_argument("min_batch_strongly_monotone: nu1 must be >= 0");
  const double raw = 2.0 * (24.0 * gamma * gamma + 8.0) * nu1 * nu1 / (sigma * gamma);
  // Same 2^53 saturation as BatchSchedule: a requirement beyond that is not
  // satisfiable anyway, and the contract promises a positive integer.
  return std::max<long>(1, static_cast<long>(std::ceil(std::min(raw, 9007199254740992.0))));
}

}  // namespace monosplit
