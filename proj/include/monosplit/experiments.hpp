#pragma once

// Instance generators.
//
//   * make_cournot: stochastic Cournot competition with a smoothed two-stage
//     recourse term; the expectation of the recourse gradient is available
//     in closed form, so the mean map is analytic.
//   * make_mlf_game: multi-leader-follower game whose follower optimal-value
//     reactions enter as scalar piecewise-linear convex terms handled by B.
//   * make_synthetic: affine monotone map Q x + q with exactly prescribed
//     spectral norm L and strong-monotonicity modulus sigma, plus a Gaussian
//     noise model matching prescribed (nu1, nu2) moments.
//
// Every generator is deterministic in its seed and stores enough in the
// params struct to reproduce the instance bit for bit; save_instance /
// load_instance round-trip instances through JSON, keeping the certified
// constants alongside the generator inputs.

#include "monosplit/oracles.hpp"
#include "monosplit/solvers.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace monosplit {

using nlohmann::json;

// ------------------------------------------------------------------------
// Smoothed recourse pieces (shared by Cournot and its SAA variant)

// Gradient of the smoothed second-stage value: min(x / epsilon, h).
inline double smoothed_recourse_grad(double x, double epsilon, double h) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("smoothed_recourse_grad: epsilon must be positive");
  if (h > 0.0)
    throw std::invalid_argument("smoothed_recourse_grad: h must be nonpositive");
  return std::min(x / epsilon, h);
}

// E_h[min(t, h)] for h ~ U[a, b]: integrates the clamp piecewise.
//   t <= a:        t
//   t >= b:        (a + b) / 2
//   a < t < b:     (t^2 - a^2) / (2 (b - a)) + t (b - t) / (b - a)
inline double expected_min_uniform(double t, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("expected_min_uniform: need a < b");
  if (t <= a) return t;
  if (t >= b) return 0.5 * (a + b);
  return (t * t - a * a) / (2.0 * (b - a)) + t * (b - t) / (b - a);
}

inline double expected_recourse_grad(double x, double epsilon, double h_low, double h_high) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("expected_recourse_grad: epsilon must be positive");
  return expected_min_uniform(x / epsilon, h_low, h_high);
}

namespace detail {
inline constexpr std::uint64_t kTagEll = 0x11;
inline constexpr std::uint64_t kTagFrozenH = 0x12;
inline constexpr std::uint64_t kTagMatrix = 0x13;
inline constexpr std::uint64_t kTagSolution = 0x14;
}  // namespace detail

// ------------------------------------------------------------------------
// Cournot with two-stage recourse

struct CournotTwoStageParams {
  int players = 5;
  double epsilon = 1.0;
  // Quadratic production-cost curvatures; empty means ones(players).
  // Ignored (forced to zero) when merely_monotone is set.
  std::vector<double> m;
  // Linear production costs; empty means one U[2, 3] draw per player.
  std::vector<double> ell;
  double inverse_demand_d = 1.0;
  double inverse_demand_r = 1.0;
  double h_low = -5.0;
  double h_high = 0.0;
  // Zero curvature: the map is monotone through the price term alone and
  // the instance certifies sigma = 0.
  bool merely_monotone = false;
  // Freeze one h draw per player; the oracle becomes noiseless.
  bool frozen_h = false;
  // Multiplies the entire map.  Leaves the solution set untouched while
  // scaling L, sigma, and the noise moments together, which is how the
  // benchmark sweeps the Lipschitz constant without changing geometry.
  double map_scale = 1.0;
  // Capped simplex (joint capacity) instead of the nonnegative orthant.
  bool complicated_set = false;
  double cap = 10.0;
  // Route projections through the exhaustive active-set projector.
  bool reference_projector = false;
  std::uint64_t seed = 0;
  bool compute_solution = true;
};

inline ProblemSpec make_cournot(const CournotTwoStageParams& prm) {
  const int J = prm.players;
  if (J < 1) throw std::invalid_argument("make_cournot: players must be >= 1");
  if (!(prm.epsilon > 0.0)) throw std::invalid_argument("make_cournot: epsilon must be positive");
  if (!(prm.h_low < prm.h_high)) throw std::invalid_argument("make_cournot: need h_low < h_high");
  if (prm.h_high > 0.0)
    throw std::invalid_argument("make_cournot: recourse cap support must be nonpositive");
  if (!(prm.inverse_demand_r > 0.0))
    throw std::invalid_argument("make_cournot: price slope r must be positive");
  if (!(prm.map_scale > 0.0)) throw std::invalid_argument("make_cournot: map_scale must be positive");
  if (!prm.m.empty() && static_cast<int>(prm.m.size()) != J)
    throw std::invalid_argument("make_cournot: m size mismatch");
  if (!prm.ell.empty() && static_cast<int>(prm.ell.size()) != J)
    throw std::invalid_argument("make_cournot: ell size mismatch");

  Vector m = Vector::Ones(J);
  if (prm.merely_monotone) {
    m.setZero();
  } else if (!prm.m.empty()) {
    for (int i = 0; i < J; ++i) m[i] = prm.m[i];
    if ((m.array() < 0.0).any()) throw std::invalid_argument("make_cournot: negative curvature");
  }

  RngStream root(prm.seed);
  Vector ell(J);
  if (prm.ell.empty()) {
    RngStream r = root.fork(detail::kTagEll);
    for (int i = 0; i < J; ++i) ell[i] = r.uniform(2.0, 3.0);
  } else {
    for (int i = 0; i < J; ++i) ell[i] = prm.ell[i];
  }

  Vector frozen = Vector::Zero(J);
  if (prm.frozen_h) {
    RngStream r = root.fork(detail::kTagFrozenH);
    for (int i = 0; i < J; ++i) frozen[i] = r.uniform(prm.h_low, prm.h_high);
  }

  const double tau = prm.map_scale;
  const double r_price = prm.inverse_demand_r;
  const double d_price = prm.inverse_demand_d;
  const double eps = prm.epsilon;
  const double h_low = prm.h_low;
  const double h_high = prm.h_high;
  const bool frozen_mode = prm.frozen_h;

  auto mean_map = [=](const Vector& x) {
    const double total = x.sum();
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double recourse = frozen_mode
                                  ? smoothed_recourse_grad(x[i], eps, frozen[i])
                                  : expected_recourse_grad(x[i], eps, h_low, h_high);
      out[i] = tau * (m[i] * x[i] + ell[i] + r_price * (total + x[i]) - d_price + recourse);
    }
    return out;
  };
  auto sample_map = [=](const Vector& x, RngStream& rng) {
    const double total = x.sum();
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double h = frozen_mode ? frozen[i] : rng.uniform(h_low, h_high);
      out[i] = tau * (m[i] * x[i] + ell[i] + r_price * (total + x[i]) - d_price +
                      smoothed_recourse_grad(x[i], eps, h));
    }
    return out;
  };

  ProblemSpec p;
  p.name = "cournot_two_stage";
  p.dimension = J;
  p.mean_map = mean_map;
  p.sample_map = sample_map;
  p.resolvent = prm.complicated_set
                    ? Resolvent::normal_cone(FeasibleSet::capped_simplex(J, prm.cap),
                                             prm.reference_projector)
                    : Resolvent::normal_cone(FeasibleSet::nonneg_orthant(J),
                                             prm.reference_projector);
  p.lipschitz_L = tau * (m.maxCoeff() + r_price * (1.0 + J) + 1.0 / eps);
  p.strong_monotonicity_sigma = prm.merely_monotone ? 0.0 : tau * (m.minCoeff() + r_price);
  p.noise_nu1 = 0.0;
  // Var(min(t, h)) <= Var(h) = (h_high - h_low)^2 / 12 per coordinate.
  p.noise_nu2 = frozen_mode ? 0.0
                            : tau * std::sqrt(static_cast<double>(J)) *
                                  (h_high - h_low) / std::sqrt(12.0);

  if (prm.compute_solution) {
    // The price slope keeps the map strongly monotone in fact (modulus at
    // least tau * r) even when the certificate says merely monotone, so the
    // deterministic solve converges linearly to the unique solution.
    const MfbsResult gt = run_deterministic_mfbs(p, p.default_gamma(), 1e-10, 500000);
    if (!gt.converged)
      throw std::runtime_error("make_cournot: ground-truth solve did not converge");
    p.known_solution = gt.solution;
    p.domain_radius = prm.complicated_set
                          ? prm.cap
                          : std::max(2.0 * gt.solution.norm(), std::sqrt(static_cast<double>(J)));
  } else if (prm.complicated_set) {
    p.domain_radius = prm.cap;
  }
  return p;
}

// ------------------------------------------------------------------------
// Multi-leader-follower game

struct MlfGameParams {
  int leaders = 5;
  std::vector<double> m;    // leader cost curvatures, >= 0
  std::vector<double> ell;  // leader linear costs; empty = U[1, 2] draws
  double r_low = 0.75, r_high = 1.25;  // stochastic price slope, positive
  double d_low = 0.5, d_high = 1.5;    // stochastic demand intercept
  // Follower reaction data: h_i(t) = a_i * max(b0_i/q_i + (b1_i/q_i) t,
  //                                            l0_i + l1_i t).
  std::vector<double> a;   // >= 0, else the recourse term is nonconvex
  std::vector<double> q;   // > 0
  std::vector<double> b0, b1, l0, l1;
  std::vector<Interval> domains;  // per-leader strategy interval; empty = [0, 10]
  std::uint64_t seed = 0;
  bool compute_solution = true;
};

inline ProblemSpec make_mlf_game(const MlfGameParams& prm) {
  const int J = prm.leaders;
  if (J < 1) throw std::invalid_argument("make_mlf_game: leaders must be >= 1");
  if (!(prm.r_low > 0.0 && prm.r_high >= prm.r_low))
    throw std::invalid_argument("make_mlf_game: price slope range must be positive");
  if (!(prm.d_high >= prm.d_low)) throw std::invalid_argument("make_mlf_game: bad demand range");
  auto expect_size = [J](const std::vector<double>& v, const char* name) {
    if (!v.empty() && static_cast<int>(v.size()) != J)
      throw std::invalid_argument(std::string("make_mlf_game: ") + name + " size mismatch");
  };
  expect_size(prm.m, "m");
  expect_size(prm.ell, "ell");
  expect_size(prm.a, "a");
  expect_size(prm.q, "q");
  expect_size(prm.b0, "b0");
  expect_size(prm.b1, "b1");
  expect_size(prm.l0, "l0");
  expect_size(prm.l1, "l1");
  if (!prm.domains.empty() && static_cast<int>(prm.domains.size()) != J)
    throw std::invalid_argument("make_mlf_game: domains size mismatch");

  RngStream root(prm.seed);
  auto fill = [J](const std::vector<double>& src, double fallback) {
    Vector v = Vector::Constant(J, fallback);
    for (int i = 0; i < static_cast<int>(src.size()); ++i) v[i] = src[i];
    return v;
  };
  const Vector m = fill(prm.m, 1.0);
  if ((m.array() < 0.0).any()) throw std::invalid_argument("make_mlf_game: negative curvature");
  Vector ell(J);
  if (prm.ell.empty()) {
    RngStream r = root.fork(detail::kTagEll);
    for (int i = 0; i < J; ++i) ell[i] = r.uniform(1.0, 2.0);
  } else {
    ell = fill(prm.ell, 0.0);
  }
  const Vector a = fill(prm.a, 0.5);
  const Vector q = fill(prm.q, 1.0);
  const Vector b0 = fill(prm.b0, 0.5);
  const Vector b1 = fill(prm.b1, -0.5);
  const Vector l0 = fill(prm.l0, 0.0);
  const Vector l1 = fill(prm.l1, 0.5);
  if ((a.array() < 0.0).any())
    throw std::invalid_argument("make_mlf_game: negative recourse weight makes h_i nonconvex");
  if ((q.array() <= 0.0).any())
    throw std::invalid_argument("make_mlf_game: follower curvature must be positive");

  std::vector<PiecewiseLinearProx1D> terms;
  terms.reserve(static_cast<std::size_t>(J));
  for (int i = 0; i < J; ++i) {
    const double s1 = b1[i] / q[i], c1 = b0[i] / q[i];
    const double s2 = l1[i], c2 = l0[i];
    double sl, sr, brk;
    if (s1 == s2) {
      sl = sr = s1;
      brk = 0.0;
    } else if (s1 < s2) {
      sl = s1;
      sr = s2;
      brk = (c1 - c2) / (s2 - s1);
    } else {
      sl = s2;
      sr = s1;
      brk = (c2 - c1) / (s1 - s2);
    }
    terms.emplace_back(sl, sr, brk, a[i]);
  }
  std::vector<Interval> domains = prm.domains;
  if (domains.empty())
    domains.assign(static_cast<std::size_t>(J), Interval::bounded(0.0, 10.0));

  const double r_bar = 0.5 * (prm.r_low + prm.r_high);
  const double d_bar = 0.5 * (prm.d_low + prm.d_high);
  const double r_low = prm.r_low, r_high = prm.r_high;
  const double d_low = prm.d_low, d_high = prm.d_high;

  auto market = [m, ell](const Vector& x, double r, double d) {
    const double total = x.sum();
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      out[i] = m[i] * x[i] + ell[i] + r * (total + x[i]) - d;
    return out;
  };
  auto mean_map = [market, r_bar, d_bar](const Vector& x) { return market(x, r_bar, d_bar); };
  auto sample_map = [market, r_low, r_high, d_low, d_high](const Vector& x, RngStream& rng) {
    return market(x, rng.uniform(r_low, r_high), rng.uniform(d_low, d_high));
  };

  ProblemSpec p;
  p.name = "mlf_game";
  p.dimension = J;
  p.mean_map = mean_map;
  p.sample_map = sample_map;
  p.resolvent = Resolvent::separable(std::move(terms), std::move(domains));
  p.lipschitz_L = m.maxCoeff() + r_bar * (1.0 + J);
  p.strong_monotonicity_sigma = m.minCoeff() + r_bar;
  // w = (r - rbar)((I + 11^T) x) - (d - dbar) 1, the two draws independent:
  // E||w||^2 <= Var(r) (1+J)^2 ||x||^2 + J Var(d).
  p.noise_nu1 = (r_high - r_low) / std::sqrt(12.0) * (1.0 + J);
  p.noise_nu2 = std::sqrt(static_cast<double>(J)) * (d_high - d_low) / std::sqrt(12.0);

  if (prm.compute_solution) {
    const MfbsResult gt = run_deterministic_mfbs(p, p.default_gamma(), 1e-10, 500000);
    if (!gt.converged)
      throw std::runtime_error("make_mlf_game: ground-truth solve did not converge");
    p.known_solution = gt.solution;
  }
  double radius_sq = 0.0;
  bool all_bounded = true;
  for (const Interval& dom : p.resolvent.domains()) {
    if (!dom.is_bounded()) {
      all_bounded = false;
      break;
    }
    const double reach = std::max(std::abs(*dom.lower), std::abs(*dom.upper));
    radius_sq += reach * reach;
  }
  if (all_bounded && radius_sq > 0.0) p.domain_radius = std::sqrt(radius_sq);
  return p;
}

// ------------------------------------------------------------------------
// Synthetic affine operator

struct SyntheticParams {
  int dim = 20;
  double sigma = 0.0;  // exact strong-monotonicity modulus of sym(Q)
  double L = 1.0;      // exact spectral norm of Q
  double nu1 = 0.0;
  double nu2 = 1.0;
  std::uint64_t seed = 0;
  // Feasible set; Box means [-box_half, box_half]^dim.
  std::string set_kind = "whole_space";  // whole_space | nonneg_orthant | box
  double box_half = 1.0;
  // Optional fixed oracle bias, which violates unbiasedness on purpose.
  std::vector<double> bias;
  std::optional<double> domain_radius;
};

namespace detail {

inline double spectral_norm(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.transpose() * M);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace detail

// Q = sigma I + c (P + S) with P symmetric PSD and rank deficient, S skew;
// c is found by bisection so that ||Q||_2 = L to machine precision.  The
// symmetric part sigma I + c P then has smallest eigenvalue exactly sigma.
inline ProblemSpec make_synthetic(const SyntheticParams& prm) {
  const int d = prm.dim;
  if (d < 1) throw std::invalid_argument("make_synthetic: dim must be >= 1");
  if (prm.sigma < 0.0) throw std::invalid_argument("make_synthetic: negative sigma");
  if (!(prm.L > 0.0)) throw std::invalid_argument("make_synthetic: L must be positive");
  if (prm.L < prm.sigma) throw std::invalid_argument("make_synthetic: L < sigma is infeasible");
  if (d == 1 && prm.L != prm.sigma)
    throw std::invalid_argument("make_synthetic: in dimension 1 the norm equals sigma, need L == sigma");
  if (!prm.bias.empty() && static_cast<int>(prm.bias.size()) != d)
    throw std::invalid_argument("make_synthetic: bias size mismatch");

  RngStream root(prm.seed);
  RngStream mat = root.fork(detail::kTagMatrix);
  Eigen::MatrixXd Q = prm.sigma * Eigen::MatrixXd::Identity(d, d);
  if (d > 1 && prm.L > prm.sigma) {
    Eigen::MatrixXd G(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) G(i, j) = mat.gaussian();
    const Eigen::MatrixXd S = 0.5 * (G - G.transpose());
    Eigen::MatrixXd H(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) H(i, j) = mat.gaussian();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(H);
    Eigen::MatrixXd V = qr.householderQ();
    Eigen::VectorXd lambda(d);
    lambda[0] = 0.0;  // rank deficiency pins the symmetric part's floor at sigma
    for (int i = 1; i < d; ++i) lambda[i] = mat.uniform(0.5, 1.0);
    const Eigen::MatrixXd P = V * lambda.asDiagonal() * V.transpose();
    const Eigen::MatrixXd M0 = P + S;

    double c_hi = prm.L / std::max(1e-12, detail::spectral_norm(M0));
    auto norm_at = [&](double c) {
      return detail::spectral_norm(prm.sigma * Eigen::MatrixXd::Identity(d, d) + c * M0);
    };
    while (norm_at(c_hi) < prm.L) c_hi *= 2.0;
    double c_lo = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (c_lo + c_hi);
      (norm_at(mid) < prm.L ? c_lo : c_hi) = mid;
    }
    Q += 0.5 * (c_lo + c_hi) * M0;
  }

  RngStream sol = root.fork(detail::kTagSolution);
  Vector xhat(d);
  for (int i = 0; i < d; ++i) xhat[i] = sol.uniform(0.25, 0.75);
  const Vector q_vec = -Q * xhat;

  FeasibleSet set = FeasibleSet::whole_space(d);
  if (prm.set_kind == "nonneg_orthant") {
    set = FeasibleSet::nonneg_orthant(d);
  } else if (prm.set_kind == "box") {
    if (!(prm.box_half > 0.0)) throw std::invalid_argument("make_synthetic: box_half must be positive");
    set = FeasibleSet::box(Vector::Constant(d, -prm.box_half), Vector::Constant(d, prm.box_half));
  } else if (prm.set_kind != "whole_space") {
    throw std::invalid_argument("make_synthetic: unknown set_kind '" + prm.set_kind + "'");
  }
  if (!set.contains(xhat))
    throw std::invalid_argument("make_synthetic: feasible set excludes the planted solution");

  ProblemSpec p;
  p.name = "synthetic";
  p.dimension = d;
  p.mean_map = [Q, q_vec](const Vector& x) { return Vector(Q * x + q_vec); };
  std::optional<Vector> bias;
  if (!prm.bias.empty()) {
    Vector b(d);
    for (int i = 0; i < d; ++i) b[i] = prm.bias[i];
    bias = b;
  }
  p.sample_map = make_gaussian_sampler(p.mean_map, prm.nu1, prm.nu2, d, bias);
  p.resolvent = Resolvent::normal_cone(set);
  p.lipschitz_L = prm.L;
  p.strong_monotonicity_sigma = prm.sigma;
  p.noise_nu1 = prm.nu1;
  p.noise_nu2 = prm.nu2;
  p.known_solution = xhat;  // interior of every supported set, so A(xhat) = 0 settles it
  if (prm.domain_radius) {
    p.domain_radius = prm.domain_radius;
  } else if (prm.set_kind == "box") {
    p.domain_radius = prm.box_half * std::sqrt(static_cast<double>(d));
  } else {
    p.domain_radius = 2.0 * xhat.norm() + 1.0;
  }
  return p;
}

// ------------------------------------------------------------------------
// SAA companion for the Cournot family

// Empirical-average instance over nu scenario draws of h.  The empirical
// map replaces E[min(x/eps, h)] by its average over the drawn scenarios;
// everything else is shared with make_cournot.  Evaluating the empirical
// map costs nu scenario terms per coordinate, which run_saa accounts for.
inline ProblemSpec make_cournot_saa(const CournotTwoStageParams& prm, long nu, RngStream& rng) {
  if (prm.frozen_h)
    throw std::invalid_argument("make_cournot_saa: frozen instances have nothing to sample");
  CournotTwoStageParams det = prm;
  det.compute_solution = false;
  ProblemSpec base = make_cournot(det);

  const int J = prm.players;
  std::vector<std::vector<double>> scen(static_cast<std::size_t>(J));
  for (auto& s : scen) {
    s.resize(static_cast<std::size_t>(nu));
    for (long l = 0; l < nu; ++l) s[static_cast<std::size_t>(l)] = rng.uniform(prm.h_low, prm.h_high);
  }

  const double tau = prm.map_scale;
  const double eps = prm.epsilon;
  const double h_low = prm.h_low;
  const double h_high = prm.h_high;
  // Swap the closed-form recourse expectation for the scenario average.
  auto base_mean = base.mean_map;
  auto empirical = [base_mean, scen, tau, eps, h_low, h_high, nu](const Vector& x) {
    Vector out = base_mean(x);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const auto& s = scen[static_cast<std::size_t>(i)];
      double avg = 0.0;
      for (long l = 0; l < nu; ++l)
        avg += smoothed_recourse_grad(x[i], eps, s[static_cast<std::size_t>(l)]);
      avg /= static_cast<double>(nu);
      out[i] += tau * (avg - expected_recourse_grad(x[i], eps, h_low, h_high));
    }
    return out;
  };

  ProblemSpec emp;
  emp.name = base.name + "_saa";
  emp.dimension = base.dimension;
  emp.mean_map = empirical;
  emp.sample_map = [empirical](const Vector& x, RngStream&) { return empirical(x); };
  emp.resolvent = base.resolvent;
  emp.lipschitz_L = base.lipschitz_L;  // each scenario map shares the bound
  emp.strong_monotonicity_sigma = base.strong_monotonicity_sigma;
  emp.noise_nu1 = 0.0;
  emp.noise_nu2 = 0.0;
  return emp;
}

// ------------------------------------------------------------------------
// Instance (de)serialization

inline json interval_to_json(const Interval& v) {
  json j;
  j["lower"] = v.lower ? json(*v.lower) : json(nullptr);
  j["upper"] = v.upper ? json(*v.upper) : json(nullptr);
  return j;
}

inline Interval interval_from_json(const json& j) {
  Interval v;
  if (j.contains("lower") && !j["lower"].is_null()) v.lower = j["lower"].get<double>();
  if (j.contains("upper") && !j["upper"].is_null()) v.upper = j["upper"].get<double>();
  v.check_valid();
  return v;
}

inline json cournot_params_to_json(const CournotTwoStageParams& p) {
  return json{{"players", p.players},
              {"epsilon", p.epsilon},
              {"m", p.m},
              {"ell", p.ell},
              {"inverse_demand_d", p.inverse_demand_d},
              {"inverse_demand_r", p.inverse_demand_r},
              {"h_low", p.h_low},
              {"h_high", p.h_high},
              {"merely_monotone", p.merely_monotone},
              {"frozen_h", p.frozen_h},
              {"map_scale", p.map_scale},
              {"complicated_set", p.complicated_set},
              {"cap", p.cap},
              {"reference_projector", p.reference_projector},
              {"seed", p.seed},
              {"compute_solution", p.compute_solution}};
}

inline CournotTwoStageParams cournot_params_from_json(const json& j) {
  CournotTwoStageParams p;
  p.players = j.value("players", p.players);
  p.epsilon = j.value("epsilon", p.epsilon);
  p.m = j.value("m", p.m);
  p.ell = j.value("ell", p.ell);
  p.inverse_demand_d = j.value("inverse_demand_d", p.inverse_demand_d);
  p.inverse_demand_r = j.value("inverse_demand_r", p.inverse_demand_r);
  p.h_low = j.value("h_low", p.h_low);
  p.h_high = j.value("h_high", p.h_high);
  p.merely_monotone = j.value("merely_monotone", p.merely_monotone);
  p.frozen_h = j.value("frozen_h", p.frozen_h);
  p.map_scale = j.value("map_scale", p.map_scale);
  p.complicated_set = j.value("complicated_set", p.complicated_set);
  p.cap = j.value("cap", p.cap);
  p.reference_projector = j.value("reference_projector", p.reference_projector);
  p.seed = j.value("seed", p.seed);
  p.compute_solution = j.value("compute_solution", p.compute_solution);
  return p;
}

inline json mlf_params_to_json(const MlfGameParams& p) {
  json doms = json::array();
  for (const auto& d : p.domains) doms.push_back(interval_to_json(d));
  return json{{"leaders", p.leaders}, {"m", p.m},           {"ell", p.ell},
              {"r_low", p.r_low},     {"r_high", p.r_high}, {"d_low", p.d_low},
              {"d_high", p.d_high},   {"a", p.a},           {"q", p.q},
              {"b0", p.b0},           {"b1", p.b1},         {"l0", p.l0},
              {"l1", p.l1},           {"domains", doms},    {"seed", p.seed},
              {"compute_solution", p.compute_solution}};
}

inline MlfGameParams mlf_params_from_json(const json& j) {
  MlfGameParams p;
  p.leaders = j.value("leaders", p.leaders);
  p.m = j.value("m", p.m);
  p.ell = j.value("ell", p.ell);
  p.r_low = j.value("r_low", p.r_low);
  p.r_high = j.value("r_high", p.r_high);
  p.d_low = j.value("d_low", p.d_low);
  p.d_high = j.value("d_high", p.d_high);
  p.a = j.value("a", p.a);
  p.q = j.value("q", p.q);
  p.b0 = j.value("b0", p.b0);
  p.b1 = j.value("b1", p.b1);
  p.l0 = j.value("l0", p.l0);
  p.l1 = j.value("l1", p.l1);
  if (j.contains("domains"))
    for (const auto& d : j["domains"]) p.domains.push_back(interval_from_json(d));
  p.seed = j.value("seed", p.seed);
  p.compute_solution = j.value("compute_solution", p.compute_solution);
  return p;
}

inline json synthetic_params_to_json(const SyntheticParams& p) {
  json j{{"dim", p.dim},   {"sigma", p.sigma},       {"L", p.L},
         {"nu1", p.nu1},   {"nu2", p.nu2},           {"seed", p.seed},
         {"set_kind", p.set_kind}, {"box_half", p.box_half}, {"bias", p.bias}};
  if (p.domain_radius) j["domain_radius"] = *p.domain_radius;
  return j;
}

inline SyntheticParams synthetic_params_from_json(const json& j) {
  SyntheticParams p;
  p.dim = j.value("dim", p.dim);
  p.sigma = j.value("sigma", p.sigma);
  p.L = j.value("L", p.L);
  p.nu1 = j.value("nu1", p.nu1);
  p.nu2 = j.value("nu2", p.nu2);
  p.seed = j.value("seed", p.seed);
  p.set_kind = j.value("set_kind", p.set_kind);
  p.box_half = j.value("box_half", p.box_half);
  p.bias = j.value("bias", p.bias);
  if (j.contains("domain_radius") && !j["domain_radius"].is_null())
    p.domain_radius = j["domain_radius"].get<double>();
  return p;
}

// Full instance document: generator kind + inputs + the certified constants
// the built problem carries.  load_instance rebuilds the maps from the
// inputs and then installs the stored constants verbatim, so edits to the
// stored constants survive the round trip and can be caught by validation.
inline json instance_to_json(const std::string& kind, const json& params, const ProblemSpec& p) {
  json derived{{"lipschitz_L", p.lipschitz_L},
               {"strong_monotonicity_sigma", p.strong_monotonicity_sigma},
               {"noise_nu1", p.noise_nu1},
               {"noise_nu2", p.noise_nu2}};
  if (p.known_solution) {
    std::vector<double> sol(p.known_solution->data(),
                            p.known_solution->data() + p.known_solution->size());
    derived["solution"] = sol;
  }
  if (p.domain_radius) derived["domain_radius"] = *p.domain_radius;
  return json{{"format", "mono-split-instance-v1"}, {"kind", kind}, {"params", params},
              {"derived", derived}};
}

inline ProblemSpec problem_from_instance_json(const json& doc) {
  if (!doc.contains("kind")) throw std::invalid_argument("instance: missing 'kind'");
  const std::string kind = doc["kind"].get<std::string>();
  const json params = doc.value("params", json::object());
  ProblemSpec p;
  if (kind == "cournot_two_stage") {
    auto prm = cournot_params_from_json(params);
    prm.compute_solution = false;
    p = make_cournot(prm);
  } else if (kind == "mlf_game") {
    auto prm = mlf_params_from_json(params);
    prm.compute_solution = false;
    p = make_mlf_game(prm);
  } else if (kind == "synthetic") {
    p = make_synthetic(synthetic_params_from_json(params));
  } else {
    throw std::invalid_argument("instance: unknown kind '" + kind + "'");
  }
  if (doc.contains("derived")) {
    const json& d = doc["derived"];
    p.lipschitz_L = d.value("lipschitz_L", p.lipschitz_L);
    p.strong_monotonicity_sigma = d.value("strong_monotonicity_sigma", p.strong_monotonicity_sigma);
    p.noise_nu1 = d.value("noise_nu1", p.noise_nu1);
    p.noise_nu2 = d.value("noise_nu2", p.noise_nu2);
    if (d.contains("solution")) {
      const auto sol = d["solution"].get<std::vector<double>>();
      if (static_cast<Eigen::Index>(sol.size()) != p.dimension)
        throw std::invalid_argument("instance: stored solution dimension mismatch");
      Vector v(p.dimension);
      for (Eigen::Index i = 0; i < p.dimension; ++i) v[i] = sol[static_cast<std::size_t>(i)];
      p.known_solution = v;
    }
    if (d.contains("domain_radius")) p.domain_radius = d["domain_radius"].get<double>();
  }
  return p;
}

}  // namespace monosplit
