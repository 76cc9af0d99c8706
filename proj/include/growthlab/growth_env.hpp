#pragma once
// Stochastic optimal-growth environment.
//
// One good. Each period the agent sees total resources s = z * k^alpha and
// picks a consumption share a. Consumption is c = a*s, reward is ln(c) floored
// at r_min, the remainder becomes next period's capital, and an exogenous
// log-AR(1) shock z moves on its own. Regime schedules let experiments switch
// the shock process mid-run (one-period spikes or permanent changes).
//
// The shock path never depends on actions: feeding two runs the same epsilon
// stream yields identical z paths regardless of policy, which is what makes
// paired agent comparisons meaningful.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "growthlab/errors.hpp"

namespace growthlab {

struct EnvParams {
  double alpha = 0.4;    // output elasticity of capital, in (0,1)
  double k_min = 1e-6;   // capital clip bounds keep the state space compact
  double k_max = 1000.0;
  double a_lo = 0.001;   // action clip bounds keep ln(c) finite
  double a_hi = 0.999;
  double r_min = -10.0;  // reward floor
  double k0 = 1.0;       // capital at episode reset
  double z0 = std::exp(3.0);  // shock at episode reset; configs default this to e^mu
};

struct ShockParams {
  double mu = 3.0;        // location, log units
  double rho = 0.0;       // AR coefficient, |rho| < 1
  double eps_sigma = 0.1; // std deviation of the innovation, log units
};

// A scheduled switch of the shock process starting at (or for exactly) `period`.
struct RegimeChange {
  long period = 0;
  ShockParams params;
};

struct RegimeSchedule {
  ShockParams base;
  std::vector<RegimeChange> permanent_changes;    // strictly increasing periods
  std::vector<RegimeChange> one_period_overrides; // strictly increasing periods
};

struct EnvState {
  double k = 0; // capital
  double z = 0; // shock level
  double s = 0; // total resources z * k^alpha, the RL state
  long t = 0;   // period index
};

// What the replay memory stores. The agent observes s only.
struct Transition {
  double s = 0;      // resources before acting
  double a = 0;      // executed action (post clip)
  double r = 0;      // reward
  double s_next = 0; // resources after the transition
};

inline void validate(const ShockParams& p) {
  if (!(std::abs(p.rho) < 1.0)) throw ConfigError("shock rho must satisfy |rho| < 1");
  if (!(p.eps_sigma >= 0.0)) throw ConfigError("shock eps_sigma must be >= 0");
}

inline void validate(const EnvParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw ConfigError("env alpha must be in (0,1)");
  if (!(p.k_min > 0.0 && p.k_min < p.k_max)) throw ConfigError("env requires 0 < k_min < k_max");
  if (!(p.a_lo > 0.0 && p.a_lo < p.a_hi && p.a_hi < 1.0)) {
    throw ConfigError("env requires 0 < a_lo < a_hi < 1");
  }
  if (!(p.z0 > 0.0)) throw ConfigError("env z0 must be > 0");
  if (!(p.k0 >= p.k_min && p.k0 <= p.k_max)) throw ConfigError("env k0 must lie in [k_min, k_max]");
}

inline void validate(const RegimeSchedule& s) {
  validate(s.base);
  auto check_list = [](const std::vector<RegimeChange>& list, const char* what) {
    long prev = -1;
    for (const auto& c : list) {
      if (c.period < 0) throw ConfigError(std::string(what) + " period must be >= 0");
      if (c.period <= prev) {
        throw ConfigError(std::string(what) + " periods must be strictly increasing");
      }
      validate(c.params);
      prev = c.period;
    }
  };
  check_list(s.permanent_changes, "permanent change");
  check_list(s.one_period_overrides, "one-period override");
}

// y = k^alpha
inline double output(double k, double alpha) {
  if (!(k > 0.0)) throw std::domain_error("output: capital must be positive");
  return std::pow(k, alpha);
}

// z' = exp(mu + rho * ln(z_prev) + eps)
inline double shock_next(double z_prev, const ShockParams& p, double eps) {
  if (!(z_prev > 0.0)) throw std::domain_error("shock_next: shock level must be positive");
  return std::exp(p.mu + p.rho * std::log(z_prev) + eps);
}

// Shock process in force at `period`: a one-period override wins, else the
// latest permanent change with start <= period, else the base process.
inline ShockParams regime_at(const RegimeSchedule& sched, long period) {
  for (const auto& o : sched.one_period_overrides) {
    if (o.period == period) return o.params;
    if (o.period > period) break;
  }
  ShockParams current = sched.base;
  for (const auto& c : sched.permanent_changes) {
    if (c.period <= period) current = c.params;
    else break;
  }
  return current;
}

inline EnvState reset(const EnvParams& p) {
  return EnvState{p.k0, p.z0, p.z0 * output(p.k0, p.alpha), 0};
}

struct StepResult {
  EnvState state; // period t+1
  double reward = 0;
  double a = 0;   // executed action after clipping
  double c = 0;   // consumption
};

// One period: clip the action, consume, floor the reward, carry the remainder
// into capital, and draw the next shock under the regime in force at t+1.
// `eps` is the realized innovation (already scaled by that regime's eps_sigma).
//
// Goods conservation is exact: k_pre = fl(s - a*s) makes s - k_pre an exact
// subtraction (Fast2Sum, since a*s <= s), so defining executed consumption as
// c = s - k_pre gives c + k_pre == s bit-for-bit. c differs from a*s by at
// most one ulp.
inline StepResult step(const EnvState& st, double a_raw, double eps,
                       const EnvParams& p, const RegimeSchedule& sched) {
  const double a = std::clamp(a_raw, p.a_lo, p.a_hi);
  const double k_pre = st.s - a * st.s;
  const double c = st.s - k_pre;
  const double r = std::max(std::log(c), p.r_min);
  const double k_next = std::clamp(k_pre, p.k_min, p.k_max);
  const ShockParams regime = regime_at(sched, st.t + 1);
  const double z_next = shock_next(st.z, regime, eps);
  const double s_next = z_next * output(k_next, p.alpha);
  return StepResult{EnvState{k_next, z_next, s_next, st.t + 1}, r, a, c};
}

}  // namespace growthlab
