#pragma once

// Actor-critic trainer. The actor maps normalized resources to a consumption
// share; the critic scores (resources, share) pairs. Each environment period
// pushes one transition and, once the replay buffer holds a full batch, runs
// one critic update (toward bootstrapped targets) and one actor update
// (ascending the critic), then soft-updates the target copies.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "growthlab/artifact.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/exploration.hpp"
#include "growthlab/growth_env.hpp"
#include "growthlab/neural_core.hpp"
#include "growthlab/re_oracle.hpp"
#include "growthlab/replay_memory.hpp"
#include "growthlab/rng.hpp"

namespace growthlab {

enum class Optimizer { kSgd, kAdaptive };

inline std::string_view optimizer_name(Optimizer o) {
  return o == Optimizer::kSgd ? "sgd" : "adaptive";
}

inline Optimizer optimizer_from_name(std::string_view name) {
  if (name == "sgd") return Optimizer::kSgd;
  if (name == "adaptive") return Optimizer::kAdaptive;
  throw ConfigError("unknown optimizer '" + std::string(name) + "' (want sgd or adaptive)");
}

struct AgentConfig {
  double beta = 0.99;
  double eta_actor = 1e-4;
  double eta_critic = 1e-3;
  int batch_n = 64;
  int episodes_e = 150;
  int periods_t = 512;
  double target_tau = 1.0;  // 1.0 = target copies track the live networks
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::kSgd;
  double grad_clip = 1.0;  // global-norm cap on each update; 0 disables
  double s_ref = 30.0;     // resources are fed to the networks as s / s_ref
  std::size_t replay_capacity = 100000;
  std::vector<int> actor_hidden{64, 64};
  std::vector<int> critic_hidden{64, 64};

  bool operator==(const AgentConfig&) const = default;
};

inline void validate(const AgentConfig& c) {
  if (!(c.beta >= 0.0 && c.beta <= 1.0)) throw ConfigError("agent beta must be in [0, 1]");
  if (!(c.eta_actor > 0.0)) throw ConfigError("eta_actor must be > 0");
  if (!(c.eta_critic > 0.0)) throw ConfigError("eta_critic must be > 0");
  if (c.batch_n < 1) throw ConfigError("batch_n must be >= 1");
  // The boundary periods_t == batch_n is allowed: it yields exactly one update.
  if (c.periods_t < c.batch_n) throw ConfigError("periods_t must be >= batch_n");
  if (c.episodes_e < 1) throw ConfigError("episodes_e must be >= 1");
  if (!(c.target_tau > 0.0 && c.target_tau <= 1.0)) {
    throw ConfigError("target_tau must be in (0, 1]");
  }
  if (!(c.grad_clip >= 0.0)) throw ConfigError("grad_clip must be >= 0");
  if (!(c.s_ref > 0.0)) throw ConfigError("s_ref must be > 0");
  if (c.replay_capacity < static_cast<std::size_t>(c.batch_n)) {
    throw ConfigError("replay_capacity must hold at least one batch");
  }
  for (int n : c.actor_hidden) {
    if (n < 1) throw ConfigError("actor_hidden sizes must be >= 1");
  }
  for (int n : c.critic_hidden) {
    if (n < 1) throw ConfigError("critic_hidden sizes must be >= 1");
  }
}

struct AgentNets {
  MlpParams actor;
  MlpParams critic;
  MlpParams actor_target;
  MlpParams critic_target;
};

inline AgentNets make_agent_nets(const AgentConfig& cfg, const EnvParams& env,
                                 std::mt19937_64& actor_rng, std::mt19937_64& critic_rng) {
  std::vector<int> actor_sizes{1};
  actor_sizes.insert(actor_sizes.end(), cfg.actor_hidden.begin(), cfg.actor_hidden.end());
  actor_sizes.push_back(1);
  std::vector<int> critic_sizes{2};
  critic_sizes.insert(critic_sizes.end(), cfg.critic_hidden.begin(), cfg.critic_hidden.end());
  critic_sizes.push_back(1);

  AgentNets nets;
  nets.actor = init_mlp(actor_sizes, Activation::kTanh, Activation::kSquash, actor_rng);
  nets.actor.squash_lo = env.a_lo;
  nets.actor.squash_hi = env.a_hi;
  nets.critic = init_mlp(critic_sizes, Activation::kTanh, Activation::kIdentity, critic_rng);
  nets.actor_target = nets.actor;
  nets.critic_target = nets.critic;
  return nets;
}

// y_i = r_i + beta * Q(s'_i, mu(s'_i)) evaluated on the supplied networks.
// The trainer passes its target copies; with tau = 1 those equal the live
// nets. Resources are normalized by s_ref before entering either network.
inline std::vector<double> critic_targets(const std::vector<Transition>& batch, double beta,
                                          const MlpParams& actor, const MlpParams& critic,
                                          double s_ref = 1.0) {
  if (batch.empty()) throw std::invalid_argument("critic_targets: empty batch");
  std::vector<double> y(batch.size());
  std::vector<double> xs(1), xc(2);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    xs[0] = batch[i].s_next / s_ref;
    const double a_next = forward(actor, xs)[0];
    xc[0] = xs[0];
    xc[1] = a_next;
    y[i] = batch[i].r + beta * forward(critic, xc)[0];
  }
  return y;
}

// L = (1/N) sum_i (y_i - Q(s_i, a_i))^2
inline double critic_loss(const std::vector<Transition>& batch, const std::vector<double>& targets,
                          const MlpParams& critic, double s_ref = 1.0) {
  if (batch.empty()) throw std::invalid_argument("critic_loss: empty batch");
  if (batch.size() != targets.size()) throw std::invalid_argument("critic_loss: size mismatch");
  std::vector<double> xc(2);
  double acc = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    xc[0] = batch[i].s / s_ref;
    xc[1] = batch[i].a;
    const double e = targets[i] - forward(critic, xc)[0];
    acc += e * e;
  }
  return acc / static_cast<double>(batch.size());
}

// One step on the mean squared Bellman error. Targets come from the target
// copies and stay fixed while the live critic moves. Returns the pre-update
// loss. Pass an AdamState to use the adaptive optimizer, otherwise plain SGD.
inline double critic_update(const std::vector<Transition>& batch, const AgentConfig& cfg,
                            AgentNets& nets, AdamState* adam = nullptr) {
  const std::vector<double> y =
      critic_targets(batch, cfg.beta, nets.actor_target, nets.critic_target, cfg.s_ref);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  ForwardTrace tr;
  Gradients item = make_gradients(nets.critic);
  Gradients total = make_gradients(nets.critic);
  std::vector<double> xc(2);
  double upstream[1];
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    xc[0] = batch[i].s / cfg.s_ref;
    xc[1] = batch[i].a;
    forward_trace_into(nets.critic, xc, tr);
    const double e = y[i] - tr.activations.back()[0];
    loss += e * e;
    upstream[0] = -2.0 * e * inv_n;  // d/dQ of (y - Q)^2 / N
    backward_into(nets.critic, tr, upstream, item);
    total.add_scaled(item, 1.0);
  }
  loss *= inv_n;
  if (cfg.grad_clip > 0.0) clip_global_norm(total, cfg.grad_clip);
  if (adam) {
    adam_update(nets.critic, *adam, total, cfg.eta_critic);
  } else {
    sgd_update(nets.critic, total, cfg.eta_critic);
  }
  return loss;
}

// Gradient ascent on J = (1/N) sum_i Q(s_i, mu(s_i)): the critic's backward
// pass supplies dQ/da at the actor's own action, which then drives the actor's
// backward pass. Critic parameters are read, never written. Returns the
// pre-update mean J.
inline double actor_update(const std::vector<Transition>& batch, const AgentConfig& cfg,
                           AgentNets& nets, AdamState* adam = nullptr) {
  if (batch.empty()) throw std::invalid_argument("actor_update: empty batch");
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  ForwardTrace tr_actor, tr_critic;
  Gradients g_critic = make_gradients(nets.critic);
  Gradients item = make_gradients(nets.actor);
  Gradients total = make_gradients(nets.actor);
  std::vector<double> xs(1), xc(2);
  double upstream[1];
  double j_acc = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    xs[0] = batch[i].s / cfg.s_ref;
    forward_trace_into(nets.actor, xs, tr_actor);
    xc[0] = xs[0];
    xc[1] = tr_actor.activations.back()[0];
    forward_trace_into(nets.critic, xc, tr_critic);
    j_acc += tr_critic.activations.back()[0];
    upstream[0] = 1.0;
    backward_into(nets.critic, tr_critic, upstream, g_critic);
    upstream[0] = -g_critic.input[1] * inv_n;  // minimize -J
    backward_into(nets.actor, tr_actor, upstream, item);
    total.add_scaled(item, 1.0);
  }
  if (cfg.grad_clip > 0.0) clip_global_norm(total, cfg.grad_clip);
  if (adam) {
    adam_update(nets.actor, *adam, total, cfg.eta_actor);
  } else {
    sgd_update(nets.actor, total, cfg.eta_actor);
  }
  return j_acc * inv_n;
}

// target' = tau * live + (1 - tau) * target, element-wise. The two-product
// form makes tau = 1 copy exactly and tau = 0 keep the target exactly.
inline void soft_update(const MlpParams& live, MlpParams& target, double tau) {
  if (live.layer_sizes != target.layer_sizes) {
    throw std::invalid_argument("soft_update: shape mismatch");
  }
  for (std::size_t l = 0; l < live.weights.size(); ++l) {
    for (std::size_t i = 0; i < live.weights[l].size(); ++i) {
      target.weights[l][i] = tau * live.weights[l][i] + (1.0 - tau) * target.weights[l][i];
    }
    for (std::size_t i = 0; i < live.biases[l].size(); ++i) {
      target.biases[l][i] = tau * live.biases[l][i] + (1.0 - tau) * target.biases[l][i];
    }
  }
}

struct TrainResult {
  MlpParams actor;
  MlpParams critic;
  std::vector<DiagRow> diagnostics;           // one row per episode
  RunArtifact artifact;                       // every period, t = global index
  std::vector<MlpParams> actor_snapshots;     // end-of-episode actor copies
  PolicyGrid de_grid;                         // grid d_e was scored on
  long total_updates = 0;
};

// Policy-distance helper: the next-capital choice implied by an actor at
// state (k, z), i.e. (1 - share) * resources, unclipped.
inline double actor_next_capital(const MlpParams& actor, double s_ref, double alpha,
                                 double k, double z) {
  const double s = z * output(k, alpha);
  std::vector<double> x{s / s_ref};
  return (1.0 - forward(actor, x)[0]) * s;
}

// E episodes of T periods. Per period: act with OU exploration noise at the
// scheduled sigma, step the environment, store the transition, and once the
// buffer holds batch_n items run one critic and one actor update plus target
// soft-updates. Episode diagnostics average over that episode's updates.
//
// d_e is computed after training, scoring each episode-end actor snapshot on
// a single grid spanning the states the whole run visited, so the metric is
// comparable across episodes.
inline TrainResult run_training(const EnvParams& env, const RegimeSchedule& sched,
                                const AgentConfig& cfg, const OuParams& ou,
                                const ExploreSchedule& explore) {
  validate(env);
  validate(sched);
  validate(cfg);
  validate(ou);
  validate(explore);

  std::mt19937_64 actor_rng = make_rng(cfg.seed, kStreamActorInit);
  std::mt19937_64 critic_rng = make_rng(cfg.seed, kStreamCriticInit);
  std::mt19937_64 replay_rng = make_rng(cfg.seed, kStreamReplay);
  NormalStream shock_stream(derive_seed(cfg.seed, kStreamShock));
  NormalStream ou_stream(derive_seed(cfg.seed, kStreamOuNoise));

  AgentNets nets = make_agent_nets(cfg, env, actor_rng, critic_rng);
  AdamState adam_actor = make_adam_state(nets.actor);
  AdamState adam_critic = make_adam_state(nets.critic);
  AdamState* actor_opt = cfg.optimizer == Optimizer::kAdaptive ? &adam_actor : nullptr;
  AdamState* critic_opt = cfg.optimizer == Optimizer::kAdaptive ? &adam_critic : nullptr;

  ReplayBuffer buffer(cfg.replay_capacity);
  TrainResult out;
  out.diagnostics.reserve(static_cast<std::size_t>(cfg.episodes_e));
  out.actor_snapshots.reserve(static_cast<std::size_t>(cfg.episodes_e));
  out.artifact.series.reserve(static_cast<std::size_t>(cfg.episodes_e) * cfg.periods_t);

  std::vector<Transition> batch;
  std::vector<double> xs(1);
  long global_t = 0;

  for (int e = 0; e < cfg.episodes_e; ++e) {
    EnvState st = reset(env);
    double ou_x = 0.0;
    double loss_acc = 0.0, j_acc = 0.0, reward_acc = 0.0, sigma_acc = 0.0;
    long updates = 0;
    for (int t = 0; t < cfg.periods_t; ++t, ++global_t) {
      xs[0] = st.s / cfg.s_ref;
      const double a_policy = forward(nets.actor, xs)[0];
      const double sigma = sigma_at(explore, global_t);
      sigma_acc += sigma;
      ou_x = ou_step(ou_x, ou, ou_stream.next());
      const double a_exec = explore_action(a_policy, sigma, ou_x, env.a_lo, env.a_hi);
      const double eps = shock_stream.next() * regime_at(sched, st.t + 1).eps_sigma;
      const StepResult res = step(st, a_exec, eps, env, sched);
      out.artifact.series.push_back({global_t, st.k, st.z, st.s, res.a, res.c, res.reward});
      buffer.push({st.s, res.a, res.reward, res.state.s});
      reward_acc += res.reward;
      st = res.state;
      if (buffer.size() >= static_cast<std::size_t>(cfg.batch_n)) {
        buffer.sample_into(static_cast<std::size_t>(cfg.batch_n), replay_rng, batch);
        loss_acc += critic_update(batch, cfg, nets, critic_opt);
        j_acc += actor_update(batch, cfg, nets, actor_opt);
        soft_update(nets.actor, nets.actor_target, cfg.target_tau);
        soft_update(nets.critic, nets.critic_target, cfg.target_tau);
        ++updates;
      }
    }
    out.actor_snapshots.push_back(nets.actor);
    DiagRow row;
    row.episode = e;
    row.critic_loss = updates > 0 ? loss_acc / static_cast<double>(updates) : 0.0;
    row.neg_j = updates > 0 ? -j_acc / static_cast<double>(updates) : 0.0;
    row.mean_reward = reward_acc / static_cast<double>(cfg.periods_t);
    row.sigma = sigma_acc / static_cast<double>(cfg.periods_t);
    row.d_e = 0.0;
    out.diagnostics.push_back(row);
    out.total_updates += updates;
  }

  // Policy distance needs the closed-form benchmark, defined for 0 < beta < 1.
  if (cfg.beta > 0.0 && cfg.beta < 1.0) {
    const ReSolution sol = solve_re(env.alpha, cfg.beta, sched.base.mu, sched.base.rho);
    std::vector<double> ks, zs;
    ks.reserve(out.artifact.series.size());
    zs.reserve(out.artifact.series.size());
    for (const SeriesRow& r : out.artifact.series) {
      ks.push_back(r.k);
      zs.push_back(r.z);
    }
    out.de_grid = make_policy_grid(ks, zs, 20, 20, 0.05, 0.95);
    fill_analytic(out.de_grid, sol);
    for (int e = 0; e < cfg.episodes_e; ++e) {
      const MlpParams& snap = out.actor_snapshots[static_cast<std::size_t>(e)];
      auto approx = [&](double k, double z) {
        return actor_next_capital(snap, cfg.s_ref, env.alpha, k, z);
      };
      out.diagnostics[static_cast<std::size_t>(e)].d_e = policy_distance(out.de_grid, approx, sol);
    }
  }

  out.artifact.diagnostics = out.diagnostics;
  out.actor = nets.actor;
  out.critic = nets.critic;
  return out;
}

}  // namespace growthlab
