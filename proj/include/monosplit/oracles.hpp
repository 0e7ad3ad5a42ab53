#pragma once

// Problem description and stochastic oracles.
//
// A ProblemSpec bundles everything a solver needs about the generalized
// equation 0 in E[A(x, w)] + B(x): the analytic mean map, a single-sample
// stochastic oracle, the resolvent of B, and certified constants (Lipschitz
// modulus, strong-monotonicity modulus, noise moments).  The constants are
// inputs, not promises the struct can check by itself; validate.hpp probes
// them empirically.

#include "monosplit/geometry.hpp"
#include "monosplit/rng.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace monosplit {

struct ProblemSpec {
  std::string name;
  Eigen::Index dimension = 0;

  // x -> E[A(x, w)], the exact mean map.
  std::function<Vector(const Vector&)> mean_map;
  // One stochastic evaluation A(x, w), one unit of oracle cost.
  std::function<Vector(const Vector&, RngStream&)> sample_map;

  Resolvent resolvent = Resolvent::normal_cone(FeasibleSet::whole_space(1));

  double lipschitz_L = 1.0;
  // Certified strong-monotonicity modulus; 0 means only mere monotonicity
  // is claimed, even if the instance happens to be better behaved.
  double strong_monotonicity_sigma = 0.0;
  // Oracle noise bound E||A(x,w) - E A(x,w)||^2 <= nu1^2 ||x||^2 + nu2^2.
  double noise_nu1 = 0.0;
  double noise_nu2 = 0.0;

  std::optional<Vector> known_solution;
  // Radius bound on the region of interest, used by gap probing.
  std::optional<double> domain_radius;

  double default_gamma() const { return 1.0 / (4.0 * lipschitz_L); }

  void check_valid() const {
    if (dimension <= 0) throw std::invalid_argument("ProblemSpec: dimension must be positive");
    if (!mean_map) throw std::invalid_argument("ProblemSpec: mean_map is unset");
    if (!sample_map) throw std::invalid_argument("ProblemSpec: sample_map is unset");
    if (resolvent.dimension() != dimension)
      throw std::invalid_argument("ProblemSpec: resolvent dimension mismatch");
    if (!(lipschitz_L > 0.0)) throw std::invalid_argument("ProblemSpec: lipschitz_L must be positive");
    if (strong_monotonicity_sigma < 0.0)
      throw std::invalid_argument("ProblemSpec: negative strong_monotonicity_sigma");
    if (strong_monotonicity_sigma > lipschitz_L)
      throw std::invalid_argument("ProblemSpec: sigma exceeds L");
    if (noise_nu1 < 0.0 || noise_nu2 < 0.0)
      throw std::invalid_argument("ProblemSpec: negative noise moment");
    if (known_solution && known_solution->size() != dimension)
      throw std::invalid_argument("ProblemSpec: known_solution dimension mismatch");
  }
};

inline Vector eval_mean(const ProblemSpec& p, const Vector& x) {
  if (x.size() != p.dimension)
    throw std::invalid_argument("eval_mean: dimension mismatch");
  return p.mean_map(x);
}

inline Vector sample(const ProblemSpec& p, const Vector& x, RngStream& rng) {
  if (x.size() != p.dimension)
    throw std::invalid_argument("sample: dimension mismatch");
  return p.sample_map(x, rng);
}

struct MinibatchEstimate {
  Vector value;
  long batch_size = 0;
  long evaluations = 0;  // oracle cost charged, equal to batch_size
};

// Average of n fresh draws at x.  Each draw advances rng, so consecutive
// minibatches from one stream are built from disjoint samples.  Accumulated
// as a running mean: identical draws then return their common value bitwise
// (zero-noise estimates collapse onto the mean map for every batch size),
// which a sum-then-divide loop only achieves up to rounding.
inline MinibatchEstimate minibatch(const ProblemSpec& p, const Vector& x, long n,
                                   RngStream& rng) {
  if (n < 1) throw std::invalid_argument("minibatch: batch size must be >= 1");
  Vector acc = sample(p, x, rng);
  for (long i = 1; i < n; ++i)
    acc += (sample(p, x, rng) - acc) / static_cast<double>(i + 1);
  return {std::move(acc), n, n};
}

// Wraps a mean map in the additive-Gaussian noise model
//     A(x, w) = E A(x) + nu1 ||x|| g1 + nu2 g2,   g1, g2 ~ N(0, I/d),
// whose variance matches the (nu1, nu2) bound with equality.  The optional
// bias adds a fixed vector to every sample, deliberately violating
// unbiasedness for diagnostics.
inline std::function<Vector(const Vector&, RngStream&)> make_gaussian_sampler(
    std::function<Vector(const Vector&)> mean_map, double nu1, double nu2,
    Eigen::Index dim, std::optional<Vector> bias = std::nullopt) {
  if (nu1 < 0.0 || nu2 < 0.0)
    throw std::invalid_argument("make_gaussian_sampler: negative noise moment");
  if (bias && bias->size() != dim)
    throw std::invalid_argument("make_gaussian_sampler: bias dimension mismatch");
  const double root_dim = std::sqrt(static_cast<double>(dim));
  return [mean_map = std::move(mean_map), nu1, nu2, dim, root_dim,
          bias = std::move(bias)](const Vector& x, RngStream& rng) {
    Vector v = mean_map(x);
    if (nu1 > 0.0) {
      const double a = nu1 * x.norm() / root_dim;
      for (Eigen::Index i = 0; i < dim; ++i) v[i] += a * rng.gaussian();
    }
    if (nu2 > 0.0) {
      const double b = nu2 / root_dim;
      for (Eigen::Index i = 0; i < dim; ++i) v[i] += b * rng.gaussian();
    }
    if (bias) v += *bias;
    return v;
  };
}

}  // namespace monosplit
