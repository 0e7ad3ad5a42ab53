#pragma once

// Solvers for 0 in E[A(x, w)] + B(x).
//
//   * run_vr_smfbs: variance-reduced stochastic modified forward-backward
//     splitting.  Each iteration draws a fresh minibatch at x_k, takes the
//     proximal half step, draws a second independent minibatch at the half
//     point, and applies Tseng's correction using the two estimates.
//   * run_sa: projected/proximal stochastic approximation, one sample per
//     iteration, diminishing steps.
//   * run_deterministic_mfbs: the same splitting driven by the exact mean
//     map; doubles as ground-truth solver and SAA sub-solver.
//   * run_saa: sample average approximation, solving one deterministic
//     empirical instance to high accuracy.
//
// Oracle accounting: every stochastic sample costs one unit, so a vr step
// with batch N_k costs 2 N_k.  A deterministic exact-map evaluation also
// costs one unit (two per MFBS iteration); an SAA empirical-map evaluation
// costs nu, its scenario count.  Solvers never start an iteration whose
// cost would exceed the remaining budget.

#include "monosplit/metrics.hpp"
#include "monosplit/oracles.hpp"
#include "monosplit/schedules.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace monosplit {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long iteration)
      : std::runtime_error(what), iteration(iteration) {}
  long iteration = 0;
};

enum class Scheme { VrSmfbs, VrSmfbsSingleSample, Sa, DeterministicMfbs, Saa };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::VrSmfbs: return "vr_smfbs";
    case Scheme::VrSmfbsSingleSample: return "vr_smfbs_single";
    case Scheme::Sa: return "sa";
    case Scheme::DeterministicMfbs: return "deterministic_mfbs";
    case Scheme::Saa: return "saa";
  }
  return "?";
}

// ------------------------------------------------------------------------
// Traces

struct TraceRecord {
  long k = 0;          // completed iterations when the row was written
  long batch = 0;      // N_k of the step just taken (0 on the initial row)
  double gamma = std::numeric_limits<double>::quiet_NaN();
  long cum_evals = 0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  double error = std::numeric_limits<double>::quiet_NaN();  // nan if no known solution
  double elapsed_s = 0.0;  // solver work only; metric evaluation is excluded
};

struct IterationTrace {
  std::vector<TraceRecord> records;
  Vector final_iterate;
  Vector half_sum;  // running sum of the averaged points (half iterates for
                    // vr and mfbs, post-resolvent iterates for sa)
  Vector averaged;  // half_sum / iterations
  long iterations = 0;
  long cum_evals = 0;
  double wall_seconds = 0.0;
};

inline const Vector& averaged_iterate(const IterationTrace& trace) {
  if (trace.iterations < 1)
    throw std::invalid_argument("averaged_iterate: trace holds no completed iterations");
  return trace.averaged;
}

// ------------------------------------------------------------------------
// Configuration

struct SolverConfig {
  Scheme scheme = Scheme::VrSmfbs;
  StepRule step = StepRule::constant(1.0);
  BatchSchedule batches = BatchSchedule::constant(1);
  long eval_budget = 0;
  // 0 = automatic: record every iteration when the budget allows at most
  // 1e5 evaluations, otherwise thin to roughly 1000 rows.
  long record_every = 0;
  std::uint64_t seed = 0;
  std::optional<Vector> initial_iterate;

  void validate(const ProblemSpec& p) const {
    p.check_valid();
    if (eval_budget < 1) throw ConfigError("solver config: eval_budget must be >= 1");
    if (initial_iterate && initial_iterate->size() != p.dimension)
      throw ConfigError("solver config: initial iterate dimension mismatch");
    if (scheme != Scheme::Sa && step.kind() == StepRule::Kind::Diminishing &&
        step.exponent() <= 0.5)
      throw ConfigError("solver config: step exponent 1/2 is reserved for the sa scheme");
    const bool unit_batch = batches.kind() == BatchSchedule::Kind::Constant &&
                            batches.batch_size(0) == 1;
    if (scheme == Scheme::Sa && !unit_batch)
      throw ConfigError("solver config: sa uses one sample per step (batch Constant(1))");
    if (scheme == Scheme::VrSmfbsSingleSample) {
      if (!unit_batch)
        throw ConfigError("solver config: single-sample vr-smfbs requires batch Constant(1)");
      if (step.kind() != StepRule::Kind::Diminishing)
        throw ConfigError("solver config: single-sample vr-smfbs requires a diminishing step");
    }
    if ((scheme == Scheme::VrSmfbs || scheme == Scheme::VrSmfbsSingleSample) &&
        eval_budget < 2 * batches.batch_size(0))
      throw ConfigError("solver config: budget cannot cover the first vr step (2 N_0)");
  }
};

namespace detail {

// Substream tags so every random decision has a fixed address.
inline constexpr std::uint64_t kTagInit = 0x01;
inline constexpr std::uint64_t kTagIterations = 0x02;
inline constexpr std::uint64_t kTagScenarios = 0x03;

inline Vector initial_point(const ProblemSpec& p, const SolverConfig& cfg,
                            const RngStream& root) {
  if (cfg.initial_iterate) return *cfg.initial_iterate;
  RngStream r = root.fork(kTagInit);
  Vector x(p.dimension);
  for (Eigen::Index i = 0; i < p.dimension; ++i) x[i] = r.uniform();
  return x;
}

inline void check_finite(const Vector& x, long k) {
  if (!x.allFinite() || x.norm() > 1e100)
    throw DivergenceError("iterate diverged (non-finite or above 1e100 in norm)", k);
}

inline long auto_record_every(const BatchSchedule& batches, long budget, long cost_factor) {
  if (budget <= 100000) return 1;
  long planned = 0;
  long evals = 0;
  for (long k = 0;; ++k) {
    const long cost = cost_factor * batches.batch_size(k);
    if (evals + cost > budget) break;
    evals += cost;
    ++planned;
    if (planned > budget) break;  // paranoid guard, cost >= 1 prevents this
  }
  return std::max<long>(1, (planned + 999) / 1000);
}

class Stopwatch {
 public:
  void start() { t0_ = std::chrono::steady_clock::now(); }
  void stop() {
    total_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }
  double seconds() const { return total_; }

 private:
  std::chrono::steady_clock::time_point t0_;
  double total_ = 0.0;
};

inline void record_row(IterationTrace& trace, const ProblemSpec& p, const Vector& x,
                       long k, long batch, double gamma, double elapsed) {
  TraceRecord row;
  row.k = k;
  row.batch = batch;
  row.gamma = gamma;
  row.cum_evals = trace.cum_evals;
  row.residual = residual(p, x);
  row.error = p.known_solution ? error_to_solution(p, x)
                               : std::numeric_limits<double>::quiet_NaN();
  row.elapsed_s = elapsed;
  trace.records.push_back(row);
}

}  // namespace detail

// ------------------------------------------------------------------------
// One vr-SMFBS iteration

struct VrStepResult {
  Vector half;   // x_{k+1/2}
  Vector next;   // x_{k+1}
  long evaluations = 0;
};

// x_{k+1/2} = J_{gamma B}(x_k - gamma Ahat(x_k))
// x_{k+1}   = x_{k+1/2} - gamma (Ahat(x_{k+1/2}) - Ahat(x_k))
// with two independent minibatches of size batch, drawn from substreams
// forked off iter_rng so the two half-steps never share samples.
inline VrStepResult vr_smfbs_step(const ProblemSpec& p, const Vector& x, double gamma,
                                  long batch, const RngStream& iter_rng) {
  if (!(gamma > 0.0)) throw std::invalid_argument("vr_smfbs_step: gamma must be positive");
  RngStream rng_fwd = iter_rng.fork(0);
  RngStream rng_half = iter_rng.fork(1);
  const Vector a_k = minibatch(p, x, batch, rng_fwd).value;
  Vector half = p.resolvent.apply(gamma, x - gamma * a_k);
  const Vector a_half = minibatch(p, half, batch, rng_half).value;
  Vector next = half - gamma * (a_half - a_k);
  return {std::move(half), std::move(next), 2 * batch};
}

// ------------------------------------------------------------------------
// vr-SMFBS driver

inline IterationTrace run_vr_smfbs(const ProblemSpec& p, const SolverConfig& cfg) {
  if (cfg.scheme != Scheme::VrSmfbs && cfg.scheme != Scheme::VrSmfbsSingleSample)
    throw ConfigError("run_vr_smfbs: config is for a different scheme");
  cfg.validate(p);
  const RngStream root(cfg.seed);
  const RngStream iters = root.fork(detail::kTagIterations);
  const long record_every = cfg.record_every > 0
                                ? cfg.record_every
                                : detail::auto_record_every(cfg.batches, cfg.eval_budget, 2);

  IterationTrace trace;
  Vector x = detail::initial_point(p, cfg, root);
  trace.half_sum = Vector::Zero(p.dimension);
  detail::Stopwatch watch;
  detail::record_row(trace, p, x, 0, 0, std::numeric_limits<double>::quiet_NaN(), 0.0);

  for (long k = 0;; ++k) {
    const long batch = cfg.batches.batch_size(k);
    const long cost = 2 * batch;
    if (trace.cum_evals + cost > cfg.eval_budget) break;
    const double gamma = cfg.step.step(k + 1);

    watch.start();
    VrStepResult step = vr_smfbs_step(p, x, gamma, batch, iters.fork(static_cast<std::uint64_t>(k)));
    trace.half_sum += step.half;
    x = std::move(step.next);
    watch.stop();

    detail::check_finite(x, k);
    trace.cum_evals += cost;
    trace.iterations = k + 1;
    if ((k + 1) % record_every == 0)
      detail::record_row(trace, p, x, k + 1, batch, gamma, watch.seconds());
  }

  if (trace.iterations > 0 && trace.records.back().k != trace.iterations) {
    const long k = trace.iterations;
    detail::record_row(trace, p, x, k, cfg.batches.batch_size(k - 1), cfg.step.step(k),
                       watch.seconds());
  }
  trace.final_iterate = x;
  trace.averaged = trace.iterations > 0
                       ? Vector(trace.half_sum / static_cast<double>(trace.iterations))
                       : x;
  trace.wall_seconds = watch.seconds();
  return trace;
}

// ------------------------------------------------------------------------
// Stochastic approximation

// x_{k+1} = J_{gamma_k B}(x_k - gamma_k A(x_k, w_k)), k = 1, 2, ...
// For normal-cone B this is classical projected SA; for separable B the
// backward step is the exact proximal map, the natural generalization.
inline IterationTrace run_sa(const ProblemSpec& p, const SolverConfig& cfg) {
  if (cfg.scheme != Scheme::Sa) throw ConfigError("run_sa: config is for a different scheme");
  cfg.validate(p);
  const RngStream root(cfg.seed);
  const RngStream iters = root.fork(detail::kTagIterations);
  const long record_every =
      cfg.record_every > 0 ? cfg.record_every
                           : detail::auto_record_every(BatchSchedule::constant(1), cfg.eval_budget, 1);

  IterationTrace trace;
  Vector x = detail::initial_point(p, cfg, root);
  trace.half_sum = Vector::Zero(p.dimension);
  detail::Stopwatch watch;
  detail::record_row(trace, p, x, 0, 0, std::numeric_limits<double>::quiet_NaN(), 0.0);

  for (long k = 1;; ++k) {
    if (trace.cum_evals + 1 > cfg.eval_budget) break;
    const double gamma = cfg.step.step(k);

    watch.start();
    RngStream rng_k = iters.fork(static_cast<std::uint64_t>(k));
    const Vector g = sample(p, x, rng_k);
    x = p.resolvent.apply(gamma, x - gamma * g);
    trace.half_sum += x;
    watch.stop();

    detail::check_finite(x, k);
    trace.cum_evals += 1;
    trace.iterations = k;
    if (k % record_every == 0)
      detail::record_row(trace, p, x, k, 1, gamma, watch.seconds());
  }

  if (trace.iterations > 0 && trace.records.back().k != trace.iterations)
    detail::record_row(trace, p, x, trace.iterations, 1, cfg.step.step(trace.iterations),
                       watch.seconds());
  trace.final_iterate = x;
  trace.averaged = trace.iterations > 0
                       ? Vector(trace.half_sum / static_cast<double>(trace.iterations))
                       : x;
  trace.wall_seconds = watch.seconds();
  return trace;
}

// ------------------------------------------------------------------------
// Deterministic MFBS (exact mean map)

struct MfbsResult {
  Vector solution;
  long iterations = 0;
  bool converged = false;
  double final_residual = std::numeric_limits<double>::quiet_NaN();
};

// Tseng's modified forward-backward iteration with the analytic map.
// Stops when || x - x_half || <= tol (the natural residual at the solver's
// own step size).  Requires gamma < 1/L for convergence; not enforced so
// the behavior outside the guarantee can be studied.
inline MfbsResult run_deterministic_mfbs(const ProblemSpec& p, double gamma, double tol,
                                         long max_iters,
                                         std::optional<Vector> x0 = std::nullopt) {
  p.check_valid();
  if (!(gamma > 0.0)) throw std::invalid_argument("run_deterministic_mfbs: gamma must be positive");
  if (!(tol >= 0.0)) throw std::invalid_argument("run_deterministic_mfbs: negative tolerance");
  if (max_iters < 1) throw std::invalid_argument("run_deterministic_mfbs: max_iters must be >= 1");
  Vector x = x0 ? *x0 : Vector(p.resolvent.apply(gamma, Vector::Zero(p.dimension)));
  if (x.size() != p.dimension)
    throw std::invalid_argument("run_deterministic_mfbs: x0 dimension mismatch");

  MfbsResult result;
  for (long k = 0; k < max_iters; ++k) {
    const Vector a_x = eval_mean(p, x);
    const Vector half = p.resolvent.apply(gamma, x - gamma * a_x);
    const double res = (x - half).norm();
    if (res <= tol) {
      result.solution = x;
      result.iterations = k;
      result.converged = true;
      result.final_residual = res;
      return result;
    }
    const Vector a_half = eval_mean(p, half);
    x = half - gamma * (a_half - a_x);
    detail::check_finite(x, k);
  }
  const Vector half = p.resolvent.apply(gamma, x - gamma * eval_mean(p, x));
  result.solution = x;
  result.iterations = max_iters;
  result.converged = false;
  result.final_residual = (x - half).norm();
  return result;
}

// Budget-driven wrapper so the deterministic scheme can run inside the same
// harness as the stochastic ones.  Each iteration charges two exact-map
// evaluations.  The step rule must be constant.
inline IterationTrace run_deterministic_trace(const ProblemSpec& p, const SolverConfig& cfg,
                                              double tol = 1e-12) {
  if (cfg.scheme != Scheme::DeterministicMfbs)
    throw ConfigError("run_deterministic_trace: config is for a different scheme");
  cfg.validate(p);
  if (cfg.step.kind() != StepRule::Kind::Constant)
    throw ConfigError("deterministic_mfbs: step rule must be constant");
  const double gamma = cfg.step.step(1);
  const RngStream root(cfg.seed);
  const long record_every =
      cfg.record_every > 0 ? cfg.record_every
                           : detail::auto_record_every(BatchSchedule::constant(1), cfg.eval_budget / 2, 1);

  IterationTrace trace;
  Vector x = detail::initial_point(p, cfg, root);
  trace.half_sum = Vector::Zero(p.dimension);
  detail::Stopwatch watch;
  detail::record_row(trace, p, x, 0, 0, std::numeric_limits<double>::quiet_NaN(), 0.0);

  for (long k = 0;; ++k) {
    if (trace.cum_evals + 2 > cfg.eval_budget) break;
    watch.start();
    const Vector a_x = eval_mean(p, x);
    const Vector half = p.resolvent.apply(gamma, x - gamma * a_x);
    const bool done = (x - half).norm() <= tol;
    if (!done) {
      const Vector a_half = eval_mean(p, half);
      x = half - gamma * (a_half - a_x);
      trace.half_sum += half;
    }
    watch.stop();
    if (done) break;
    detail::check_finite(x, k);
    trace.cum_evals += 2;
    trace.iterations = k + 1;
    if ((k + 1) % record_every == 0)
      detail::record_row(trace, p, x, k + 1, 1, gamma, watch.seconds());
  }

  if (trace.iterations > 0 && trace.records.back().k != trace.iterations)
    detail::record_row(trace, p, x, trace.iterations, 1, gamma, watch.seconds());
  trace.final_iterate = x;
  trace.averaged = trace.iterations > 0
                       ? Vector(trace.half_sum / static_cast<double>(trace.iterations))
                       : x;
  trace.wall_seconds = watch.seconds();
  return trace;
}

// ------------------------------------------------------------------------
// Sample average approximation

// Builds a deterministic empirical instance from nu scenario draws.  The
// returned spec must expose the empirical map as mean_map (its sample_map
// may coincide with it) and carry constants valid for the empirical map.
using SaaFactory = std::function<ProblemSpec(long nu, RngStream& rng)>;

struct SaaResult {
  Vector solution;
  long nu = 0;
  long subsolver_iterations = 0;
  bool converged = false;
  long evaluations = 0;  // scenario evaluations: 2 * nu per subsolver iteration
  double wall_seconds = 0.0;
};

// Draws nu scenarios, then solves the empirical instance with deterministic
// MFBS at gamma = 1/(4 L_emp) to the given tolerance.  Scenario draws come
// from a dedicated substream of seed, so SAA instances are reproducible and
// independent of any solver randomness.
inline SaaResult run_saa(const SaaFactory& factory, long nu, double tol, std::uint64_t seed,
                         long max_iters = 2000000) {
  if (!factory) throw ConfigError("run_saa: factory is unset");
  if (nu < 1) throw ConfigError("run_saa: scenario count must be >= 1");
  RngStream scen = RngStream(seed).fork(detail::kTagScenarios);

  detail::Stopwatch watch;
  watch.start();
  const ProblemSpec emp = factory(nu, scen);
  emp.check_valid();
  const MfbsResult sol = run_deterministic_mfbs(emp, emp.default_gamma(), tol, max_iters);
  watch.stop();

  SaaResult out;
  out.solution = sol.solution;
  out.nu = nu;
  out.subsolver_iterations = sol.iterations;
  out.converged = sol.converged;
  out.evaluations = 2 * nu * sol.iterations;
  out.wall_seconds = watch.seconds();
  return out;
}

}  // namespace monosplit
