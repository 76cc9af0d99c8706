#pragma once
// Discretised Ornstein-Uhlenbeck exploration noise with a linearly decaying
// scale. The unit-time-step discretisation makes ou_step exactly an AR(1)
// recursion with coefficient (1 - theta), so the iterates' stationary variance
// is sigma_ou^2 / (1 - (1-theta)^2).

#include <algorithm>

#include "growthlab/errors.hpp"

namespace growthlab {

struct OuParams {
  double theta = 0.15;   // mean-reversion rate per period, in (0, 1]
  double mu_bar = 0.0;   // long-run mean
  double sigma_ou = 0.2; // diffusion scale, > 0
};

struct ExploreSchedule {
  double sigma_start = 1.0; // scale at t = 0
  double sigma_min = 0.3;   // floor; stays strictly positive so exploration never stops
  long decay_steps = 50000; // periods of linear decay from start to floor

  bool operator==(const ExploreSchedule&) const = default;
};

inline void validate(const OuParams& p) {
  if (!(p.theta > 0.0 && p.theta <= 1.0)) throw ConfigError("ou theta must be in (0,1]");
  if (!(p.sigma_ou > 0.0)) throw ConfigError("ou sigma_ou must be > 0");
}

inline void validate(const ExploreSchedule& s) {
  if (!(s.sigma_min > 0.0)) throw ConfigError("exploration sigma_min must be > 0");
  if (!(s.sigma_start >= s.sigma_min)) {
    throw ConfigError("exploration requires sigma_start >= sigma_min");
  }
  if (s.decay_steps < 0) throw ConfigError("exploration decay_steps must be >= 0");
}

// x' = x + theta * (mu_bar - x) + sigma_ou * xi, with xi a standard normal draw.
inline double ou_step(double x, const OuParams& p, double xi) {
  return x + p.theta * (p.mu_bar - x) + p.sigma_ou * xi;
}

// Linear decay from sigma_start at t=0 to sigma_min at t=decay_steps, constant after.
inline double sigma_at(const ExploreSchedule& s, long t) {
  if (t >= s.decay_steps || s.decay_steps == 0) return s.sigma_min;
  const double frac = static_cast<double>(t) / static_cast<double>(s.decay_steps);
  return s.sigma_start + (s.sigma_min - s.sigma_start) * frac;
}

// Exploratory action: policy action plus scaled noise, clipped to bounds.
inline double explore_action(double a_policy, double sigma_t, double noise,
                             double a_lo, double a_hi) {
  return std::clamp(a_policy + sigma_t * noise, a_lo, a_hi);
}

}  // namespace growthlab
