#pragma once
// Closed-form benchmark for the growth environment and the machinery that
// verifies it and measures learned policies against it.
//
// Under log utility with full capital carryover the optimal plan saves the
// constant share alpha*beta of resources: k' = alpha*beta * z * k^alpha. The
// value function is v(k, z) = A + B ln k + D ln z with
//   B = alpha / (1 - alpha*beta)
//   D = 1 / ((1 - alpha*beta) (1 - beta*rho))
//   A = [ln(1-alpha*beta) + (alpha*beta/(1-alpha*beta)) ln(alpha*beta)
//        + beta*mu*D] / (1 - beta)
// bellman_residual() certifies this algebra numerically: plugging v and the
// policy into the Bellman equation must return (near) zero on interior states.
//
// The expectation over the log-normal innovation is taken with Gauss-Hermite
// quadrature. Since v is linear in ln z', the integrand is linear in the
// innovation and any order >= 1 is already exact; higher orders simply confirm
// invariance.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "growthlab/artifact.hpp"
#include "growthlab/growth_env.hpp"
#include "growthlab/rng.hpp"

namespace growthlab {

struct ReSolution {
  double alpha = 0.4;
  double beta = 0.99;
  double mu = 3.0;
  double rho = 0.0;
  double A = 0.0;
  double B = 0.0;
  double D = 0.0;
};

inline ReSolution solve_re(double alpha, double beta, double mu, double rho) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("solve_re: alpha must be in (0,1)");
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("solve_re: beta must be in (0,1)");
  if (!(std::abs(rho) < 1.0)) throw std::domain_error("solve_re: |rho| must be < 1");
  ReSolution sol;
  sol.alpha = alpha;
  sol.beta = beta;
  sol.mu = mu;
  sol.rho = rho;
  const double ab = alpha * beta;
  sol.B = alpha / (1.0 - ab);
  sol.D = 1.0 / ((1.0 - ab) * (1.0 - beta * rho));
  sol.A = (std::log(1.0 - ab) + ab / (1.0 - ab) * std::log(ab) + beta * mu * sol.D) /
          (1.0 - beta);
  return sol;
}

// Optimal next capital: k' = alpha*beta * z * k^alpha.
inline double re_policy(double k, double z, double alpha, double beta) {
  if (!(k > 0.0)) throw std::domain_error("re_policy: capital must be positive");
  if (!(z > 0.0)) throw std::domain_error("re_policy: shock must be positive");
  return alpha * beta * z * std::pow(k, alpha);
}

// Optimal consumption share: constant in the state.
inline double re_consumption_share(double k, double z, double alpha, double beta) {
  if (!(k > 0.0)) throw std::domain_error("re_consumption_share: capital must be positive");
  if (!(z > 0.0)) throw std::domain_error("re_consumption_share: shock must be positive");
  return 1.0 - alpha * beta;
}

inline double re_value(double k, double z, const ReSolution& sol) {
  if (!(k > 0.0)) throw std::domain_error("re_value: capital must be positive");
  if (!(z > 0.0)) throw std::domain_error("re_value: shock must be positive");
  return sol.A + sol.B * std::log(k) + sol.D * std::log(z);
}

// ---------------------------------------------------------------------------
// Gauss-Hermite quadrature: nodes/weights for integral f(x) e^{-x^2} dx.
// Hermite-recurrence plus Newton refinement; symmetric nodes are mirrored.
// ---------------------------------------------------------------------------

struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussHermite gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  const int n = order;
  GaussHermite q;
  q.nodes.assign(n, 0.0);
  q.weights.assign(n, 0.0);
  const double pi_quarter = 0.7511255444649425;  // pi^(-1/4)
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Initial guesses for the i-th largest root, refined by Newton.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * q.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * q.nodes[1];
    } else {
      z = 2.0 * z - q.nodes[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate the orthonormal Hermite polynomial of degree n at z via the
      // three-term recurrence; pp is its derivative.
      double p1 = pi_quarter;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z_old = z;
      z = z_old - p1 / pp;
      if (std::abs(z - z_old) <= 1e-14) break;
    }
    q.nodes[i] = z;
    q.nodes[n - 1 - i] = -z;
    q.weights[i] = 2.0 / (pp * pp);
    q.weights[n - 1 - i] = q.weights[i];
  }
  return q;
}

// E[v(k', z')] for z' = exp(mu + rho ln z + eps), eps ~ N(0, eps_sigma^2),
// taken by Gauss-Hermite with the change of variable eps = sqrt(2)*sigma*x.
inline double expected_value_next(double k_next, double z, const ReSolution& sol,
                                  double eps_sigma, const GaussHermite& q) {
  const double ln_z_next_mean = sol.mu + sol.rho * std::log(z);
  const double inv_sqrt_pi = 0.5641895835477563;  // 1/sqrt(pi)
  double acc = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double eps = std::sqrt(2.0) * eps_sigma * q.nodes[i];
    const double z_next = std::exp(ln_z_next_mean + eps);
    acc += q.weights[i] * re_value(k_next, z_next, sol);
  }
  return acc * inv_sqrt_pi;
}

// |v(k,z) - [ln(z k^alpha - k') + beta E v(k', z')]| with k' from re_policy.
inline double bellman_residual(double k, double z, const ReSolution& sol,
                               double eps_sigma, int quad_order) {
  const GaussHermite q = gauss_hermite(quad_order);
  const double resources = z * std::pow(k, sol.alpha);
  const double k_next = re_policy(k, z, sol.alpha, sol.beta);
  const double consumption = resources - k_next;
  const double rhs = std::log(consumption) +
                     sol.beta * expected_value_next(k_next, z, sol, eps_sigma, q);
  return std::abs(re_value(k, z, sol) - rhs);
}

// Max relative residual over a log-spaced interior grid; the "does the algebra
// hold" number reported by the verify-oracle command.
struct ResidualGridReport {
  double max_rel_residual = 0.0;
  std::vector<std::array<double, 4>> rows;  // k, z, residual, residual/|v|
};

inline ResidualGridReport bellman_residual_grid(const ReSolution& sol, double eps_sigma,
                                                int quad_order, double k_lo, double k_hi,
                                                int nk, double z_lo, double z_hi, int nz) {
  if (nk < 1 || nz < 1) throw std::invalid_argument("residual grid needs nk, nz >= 1");
  ResidualGridReport rep;
  for (int i = 0; i < nk; ++i) {
    const double fk = nk == 1 ? 0.0 : static_cast<double>(i) / (nk - 1);
    const double k = k_lo * std::pow(k_hi / k_lo, fk);
    for (int j = 0; j < nz; ++j) {
      const double fz = nz == 1 ? 0.0 : static_cast<double>(j) / (nz - 1);
      const double z = z_lo * std::pow(z_hi / z_lo, fz);
      const double res = bellman_residual(k, z, sol, eps_sigma, quad_order);
      const double rel = res / std::abs(re_value(k, z, sol));
      rep.rows.push_back({k, z, res, rel});
      if (rel > rep.max_rel_residual) rep.max_rel_residual = rel;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Policy distance
// ---------------------------------------------------------------------------

struct PolicyGrid {
  std::vector<std::array<double, 2>> points;  // (k, z)
  std::vector<double> analytic;               // optional cached k* per point
  std::size_t size() const { return points.size(); }
};

// Log-spaced nk x nz grid between the q_lo and q_hi quantiles of observed
// capital and shock samples (nearest-rank quantiles on sorted copies).
inline PolicyGrid make_policy_grid(std::vector<double> ks, std::vector<double> zs,
                                   int nk, int nz, double q_lo, double q_hi) {
  if (ks.empty() || zs.empty()) throw std::invalid_argument("policy grid needs samples");
  if (nk < 1 || nz < 1) throw std::invalid_argument("policy grid needs nk, nz >= 1");
  std::sort(ks.begin(), ks.end());
  std::sort(zs.begin(), zs.end());
  auto quantile = [](const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t idx = static_cast<std::size_t>(pos + 0.5);
    return sorted[std::min(idx, sorted.size() - 1)];
  };
  const double k_lo = quantile(ks, q_lo), k_hi = quantile(ks, q_hi);
  const double z_lo = quantile(zs, q_lo), z_hi = quantile(zs, q_hi);
  PolicyGrid grid;
  grid.points.reserve(static_cast<std::size_t>(nk) * nz);
  for (int i = 0; i < nk; ++i) {
    const double fk = nk == 1 ? 0.0 : static_cast<double>(i) / (nk - 1);
    const double k = k_lo * std::pow(k_hi / k_lo, fk);
    for (int j = 0; j < nz; ++j) {
      const double fz = nz == 1 ? 0.0 : static_cast<double>(j) / (nz - 1);
      const double z = z_lo * std::pow(z_hi / z_lo, fz);
      grid.points.push_back({k, z});
    }
  }
  return grid;
}

inline void fill_analytic(PolicyGrid& grid, const ReSolution& sol) {
  grid.analytic.resize(grid.points.size());
  for (std::size_t g = 0; g < grid.points.size(); ++g) {
    grid.analytic[g] = re_policy(grid.points[g][0], grid.points[g][1], sol.alpha, sol.beta);
  }
}

// Mean squared gap between analytical and approximated next-capital choices.
// `approx_next_capital` maps (k, z) to the policy's k'.
inline double policy_distance(const PolicyGrid& grid,
                              const std::function<double(double, double)>& approx_next_capital,
                              const ReSolution& sol) {
  if (grid.points.empty()) throw std::invalid_argument("policy grid is empty");
  double acc = 0.0;
  for (std::size_t g = 0; g < grid.points.size(); ++g) {
    const double k = grid.points[g][0];
    const double z = grid.points[g][1];
    const double k_star = grid.analytic.size() == grid.points.size()
                              ? grid.analytic[g]
                              : re_policy(k, z, sol.alpha, sol.beta);
    const double gap = k_star - approx_next_capital(k, z);
    acc += gap * gap;
  }
  return acc / static_cast<double>(grid.points.size());
}

// ---------------------------------------------------------------------------
// Benchmark simulation
// ---------------------------------------------------------------------------

// Simulates the constant-share optimal policy through the real environment.
// `beta` is the discount factor the share 1 - alpha*beta is built from. Given
// the same seed as a learned-policy evaluation run this consumes an identical
// shock stream, so paths are directly comparable period by period.
inline RunArtifact simulate_re(const EnvParams& env, const RegimeSchedule& sched,
                               double beta, long horizon, std::uint64_t seed) {
  validate(env);
  validate(sched);
  if (horizon < 1) throw ConfigError("simulate horizon must be >= 1");
  NormalStream shocks(derive_seed(seed, kStreamShock));
  RunArtifact art;
  art.series.reserve(static_cast<std::size_t>(horizon));
  EnvState st = reset(env);
  for (long t = 0; t < horizon; ++t) {
    const double a_star = re_consumption_share(st.k, st.z, env.alpha, beta);
    const double eps = shocks.next() * regime_at(sched, st.t + 1).eps_sigma;
    const StepResult res = step(st, a_star, eps, env, sched);
    art.series.push_back({t, st.k, st.z, st.s, res.a, res.c, res.reward});
    st = res.state;
  }
  return art;
}

}  // namespace growthlab
