#pragma once

// Named experiments. A Scenario bundles the environment, a shock schedule, one
// or more agents, and seeds. Running it trains each (agent, seed) pair under
// the base regime, evaluates every trained policy and the constant-share
// benchmark on the full schedule with paired shock draws, computes welfare and
// shock-response metrics, and writes the artifact tree:
//
//   <out>/<scenario>/<agent>/<seed>/series.csv     evaluation path
//   <out>/<scenario>/<agent>/<seed>/actor.ckpt     trained policy
//   <out>/<scenario>/<agent>/<seed>/critic.ckpt
//   <out>/<scenario>/diagnostics.csv               joined training diagnostics
//   <out>/<scenario>/comparison.csv                joined evaluation series
//   <out>/<scenario>/report.md                     welfare and response tables

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "growthlab/artifact.hpp"
#include "growthlab/config.hpp"
#include "growthlab/ddpg_agent.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/re_oracle.hpp"

namespace growthlab {

// ---------------------------------------------------------------------------
// Evaluation simulation
// ---------------------------------------------------------------------------

// Runs a trained actor through the environment. Exploration stays on at the
// given sigma (pass 0 for a greedy run). The shock stream depends only on
// (seed, schedule), so any two policies evaluated with the same seed face
// bit-identical z paths, as does simulate_re.
inline RunArtifact simulate_policy(const EnvParams& env, const RegimeSchedule& sched,
                                   const MlpParams& actor, double s_ref, long horizon,
                                   std::uint64_t seed, double sigma, const OuParams& ou) {
  validate(env);
  validate(sched);
  validate(ou);
  if (horizon < 1) throw ConfigError("simulate horizon must be >= 1");
  if (!(s_ref > 0.0)) throw ConfigError("s_ref must be > 0");
  NormalStream shocks(derive_seed(seed, kStreamShock));
  NormalStream ou_noise(derive_seed(seed, kStreamOuNoise));
  RunArtifact art;
  art.series.reserve(static_cast<std::size_t>(horizon));
  EnvState st = reset(env);
  double ou_x = 0.0;
  std::vector<double> x(1);
  for (long t = 0; t < horizon; ++t) {
    x[0] = st.s / s_ref;
    const double a_policy = forward(actor, x)[0];
    ou_x = ou_step(ou_x, ou, ou_noise.next());
    const double a_exec = explore_action(a_policy, sigma, ou_x, env.a_lo, env.a_hi);
    const double eps = shocks.next() * regime_at(sched, st.t + 1).eps_sigma;
    const StepResult res = step(st, a_exec, eps, env, sched);
    art.series.push_back({t, st.k, st.z, st.s, res.a, res.c, res.reward});
    st = res.state;
  }
  return art;
}

// ---------------------------------------------------------------------------
// Welfare and response metrics
// ---------------------------------------------------------------------------

// Arithmetic mean reward over series[start, start + count).
inline double welfare(const std::vector<SeriesRow>& series, long start, long count) {
  if (count < 1) throw std::invalid_argument("welfare: empty window");
  if (start < 0 || start + count > static_cast<long>(series.size())) {
    throw std::invalid_argument("welfare: window outside series");
  }
  double acc = 0.0;
  for (long i = start; i < start + count; ++i) acc += series[static_cast<std::size_t>(i)].r;
  return acc / static_cast<double>(count);
}

struct ResponseMetrics {
  double pre_mean = 0.0;
  double pre_std = 0.0;
  double band_lo = 0.0;  // pre_mean - 2 * pre_std (or +/- 1e-6 when std is 0)
  double band_hi = 0.0;
  bool responded = false;
  long lag = -1;              // shock period to first out-of-band consumption
  double peak_deviation = 0;  // max |c - pre_mean| from the shock onward
  long reversion = -1;        // shock period to first 3-consecutive re-entry
};

inline ResponseMetrics response_metrics(const std::vector<SeriesRow>& series, long shock_period,
                                        int pre_window) {
  const long n = static_cast<long>(series.size());
  if (shock_period < 1 || shock_period >= n) {
    throw std::invalid_argument("response_metrics: shock period must lie inside the series");
  }
  if (pre_window < 1) throw std::invalid_argument("response_metrics: pre_window must be >= 1");
  const long w = std::min<long>(pre_window, shock_period);

  ResponseMetrics m;
  for (long i = shock_period - w; i < shock_period; ++i) {
    m.pre_mean += series[static_cast<std::size_t>(i)].c;
  }
  m.pre_mean /= static_cast<double>(w);
  double var = 0.0;
  for (long i = shock_period - w; i < shock_period; ++i) {
    const double d = series[static_cast<std::size_t>(i)].c - m.pre_mean;
    var += d * d;
  }
  m.pre_std = std::sqrt(var / static_cast<double>(w));
  const double half = m.pre_std > 0.0 ? 2.0 * m.pre_std : 1e-6;
  m.band_lo = m.pre_mean - half;
  m.band_hi = m.pre_mean + half;

  auto in_band = [&](long t) {
    const double c = series[static_cast<std::size_t>(t)].c;
    return c >= m.band_lo && c <= m.band_hi;
  };
  for (long t = shock_period; t < n; ++t) {
    const double c = series[static_cast<std::size_t>(t)].c;
    m.peak_deviation = std::max(m.peak_deviation, std::abs(c - m.pre_mean));
    if (!m.responded && !in_band(t)) {
      m.responded = true;
      m.lag = t - shock_period;
    }
  }
  if (m.responded) {
    for (long t = shock_period + m.lag + 1; t + 2 < n; ++t) {
      if (in_band(t) && in_band(t + 1) && in_band(t + 2)) {
        m.reversion = t - shock_period;
        break;
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Scenario definition
// ---------------------------------------------------------------------------

struct ScenarioAgentSpec {
  std::string name;
  AgentConfig agent;
  ExploreSchedule explore;
};

struct Scenario {
  std::string name;
  EnvParams env;
  RegimeSchedule schedule;        // evaluation schedule, including any event
  RegimeSchedule train_schedule;  // base regime only
  std::vector<ScenarioAgentSpec> agents;
  OuParams ou;
  long horizon = 512;
  std::vector<std::uint64_t> seeds{0};
  bool greedy_eval = false;
  bool include_re = false;    // add the constant-share benchmark per seed
  long shock_period = -1;     // event period for response metrics; -1 = none
  long checkpoint_every = 0;  // episodes between actor snapshots; 0 = final only
  MetricsConfig metrics;
};

inline void validate(const Scenario& sc) {
  const auto& names = known_scenarios();
  if (std::find(names.begin(), names.end(), sc.name) == names.end()) {
    throw ConfigError("unknown scenario '" + sc.name + "'");
  }
  if (sc.agents.empty()) throw ConfigError("scenario needs at least one agent");
  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    if (sc.agents[i].name.empty()) throw ConfigError("scenario agent names must not be empty");
    for (std::size_t j = i + 1; j < sc.agents.size(); ++j) {
      if (sc.agents[i].name == sc.agents[j].name) {
        throw ConfigError("duplicate scenario agent name '" + sc.agents[i].name + "'");
      }
    }
  }
  if (sc.seeds.empty()) throw ConfigError("scenario needs at least one seed");
  if (sc.horizon < 1) throw ConfigError("scenario horizon must be >= 1");
  if (sc.checkpoint_every < 0) throw ConfigError("checkpoint_every must be >= 0");
  validate(sc.env);
  validate(sc.schedule);
  validate(sc.train_schedule);
  validate(sc.ou);
  validate(sc.metrics);
  for (const ScenarioAgentSpec& spec : sc.agents) {
    validate(spec.agent);
    validate(spec.explore);
  }
  if (sc.name == "transitory_shock") {
    if (sc.schedule.one_period_overrides.size() != 1 || !sc.schedule.permanent_changes.empty()) {
      throw ConfigError("transitory_shock needs exactly one one-period override and no permanent change");
    }
  }
  if (sc.name == "permanent_change") {
    if (sc.schedule.permanent_changes.size() != 1 || !sc.schedule.one_period_overrides.empty()) {
      throw ConfigError("permanent_change needs exactly one permanent regime change and no override");
    }
  }
  if (sc.name == "exploration_comparison") {
    if (sc.agents.size() != 3) throw ConfigError("exploration_comparison needs three agents");
    for (const ScenarioAgentSpec& spec : sc.agents) {
      if (!(spec.agent == sc.agents[0].agent)) {
        throw ConfigError("exploration_comparison agents must share one learning setup");
      }
      ExploreSchedule normalized = spec.explore;
      normalized.sigma_min = sc.agents[0].explore.sigma_min;
      if (!(normalized == sc.agents[0].explore)) {
        throw ConfigError("exploration_comparison agents may differ only in sigma_min");
      }
    }
  }
  if (sc.shock_period >= 0 && sc.shock_period >= sc.horizon) {
    throw ConfigError("event period must lie inside the evaluation horizon");
  }
}

// Expands a RunConfig into a concrete scenario. Training always runs under the
// base regime alone; events enter only the evaluation schedule.
inline Scenario make_scenario(const RunConfig& cfg) {
  Scenario sc;
  sc.name = cfg.scenario.empty() ? "baseline_learning" : cfg.scenario;
  sc.env = cfg.env;
  sc.schedule = cfg.schedule;
  sc.train_schedule = RegimeSchedule{cfg.schedule.base, {}, {}};
  sc.ou = cfg.ou;
  sc.horizon = cfg.horizon;
  sc.seeds = cfg.seeds;
  sc.greedy_eval = cfg.greedy_eval;
  sc.checkpoint_every = cfg.checkpoint_every;
  sc.metrics = cfg.metrics;

  if (sc.name == "exploration_comparison") {
    if (cfg.sigma_min_levels.size() != 3) {
      throw ConfigError("exploration_comparison needs exactly three sigma_min_levels");
    }
    std::vector<double> levels = cfg.sigma_min_levels;
    std::sort(levels.begin(), levels.end());
    // One shared start scale keeps the three agents identical except for the
    // floor, even when the highest floor exceeds the configured start.
    const double start = std::max(cfg.explore.sigma_start, levels.back());
    const char* names[3] = {"low", "mid", "high"};
    for (int i = 0; i < 3; ++i) {
      ScenarioAgentSpec spec;
      spec.name = names[i];
      spec.agent = cfg.agent;
      spec.explore = cfg.explore;
      spec.explore.sigma_start = start;
      spec.explore.sigma_min = levels[static_cast<std::size_t>(i)];
      sc.agents.push_back(std::move(spec));
    }
  } else {
    sc.agents.push_back({"agent", cfg.agent, cfg.explore});
  }

  if (sc.name == "transitory_shock") {
    if (sc.schedule.one_period_overrides.size() != 1) {
      throw ConfigError("transitory_shock needs exactly one [[shock.override]]");
    }
    sc.shock_period = sc.schedule.one_period_overrides[0].period;
    sc.include_re = true;
  } else if (sc.name == "permanent_change") {
    if (sc.schedule.permanent_changes.size() != 1) {
      throw ConfigError("permanent_change needs exactly one [[shock.permanent_change]]");
    }
    sc.shock_period = sc.schedule.permanent_changes[0].period;
    sc.include_re = true;
  } else if (sc.name == "re_comparison") {
    sc.include_re = true;
  }

  validate(sc);
  return sc;
}

// ---------------------------------------------------------------------------
// Scenario execution
// ---------------------------------------------------------------------------

struct ScenarioRunResult {
  std::string agent;
  std::uint64_t seed = 0;
  RunArtifact eval;
  std::vector<DiagRow> training;  // empty for the benchmark rows
  double welfare_mean = 0.0;
  ResponseMetrics response;  // meaningful when the scenario has an event
  double d_e_final = 0.0;
};

struct ScenarioOutputs {
  std::filesystem::path dir;
  std::vector<ScenarioRunResult> runs;  // agents x seeds, then benchmark rows
};

namespace detail_scenario {

inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Welfare window per scenario: around the event when there is one (half the
// window before it), after it for permanent changes, else the series tail.
inline std::pair<long, long> welfare_window(const Scenario& sc) {
  if (sc.name == "permanent_change") {
    const long start = sc.shock_period;
    const long count = std::min<long>(sc.metrics.post_window, sc.horizon - start);
    return {start, count};
  }
  if (sc.shock_period >= 0) {
    long start = sc.shock_period - sc.metrics.welfare_window / 2;
    start = std::max<long>(0, start);
    const long count = std::min<long>(sc.metrics.welfare_window, sc.horizon - start);
    return {start, count};
  }
  const long count = std::min<long>(sc.metrics.welfare_window, sc.horizon);
  return {sc.horizon - count, count};
}

inline void score_run(const Scenario& sc, ScenarioRunResult& run) {
  const auto [start, count] = welfare_window(sc);
  run.welfare_mean = welfare(run.eval.series, start, count);
  if (sc.shock_period >= 1) {
    run.response = response_metrics(run.eval.series, sc.shock_period, sc.metrics.pre_window);
  }
}

inline std::string fmt_cell(double v) { return format_double(v); }

inline std::string fmt_lag(bool defined, long v) {
  return defined && v >= 0 ? std::to_string(v) : std::string("none");
}

}  // namespace detail_scenario

inline void write_report(const Scenario& sc, const std::vector<ScenarioRunResult>& runs,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto [wstart, wcount] = detail_scenario::welfare_window(sc);
  out << "# " << sc.name << "\n\n";
  out << "Evaluation horizon " << sc.horizon << " periods, " << sc.seeds.size()
      << " seed(s), exploration "
      << (sc.greedy_eval ? std::string("off (greedy)") : std::string("on at sigma_min")) << ".\n";
  out << "Welfare window: periods " << wstart << " to " << wstart + wcount - 1 << ".\n\n";

  out << "## Welfare\n\n";
  out << "| agent | seed | mean utility | final d_e |\n";
  out << "|---|---|---|---|\n";
  for (const ScenarioRunResult& run : runs) {
    out << "| " << run.agent << " | " << run.seed << " | "
        << detail_scenario::fmt_cell(run.welfare_mean) << " | "
        << (run.training.empty() ? std::string("n/a") : detail_scenario::fmt_cell(run.d_e_final))
        << " |\n";
  }
  out << "\n";

  if (sc.shock_period >= 0) {
    out << "## Response to the period-" << sc.shock_period << " event\n\n";
    out << "| agent | seed | lag | peak deviation | reversion | pre-shock band |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const ScenarioRunResult& run : runs) {
      const ResponseMetrics& m = run.response;
      out << "| " << run.agent << " | " << run.seed << " | "
          << detail_scenario::fmt_lag(m.responded, m.lag) << " | "
          << detail_scenario::fmt_cell(m.peak_deviation) << " | "
          << detail_scenario::fmt_lag(m.responded, m.reversion) << " | ["
          << detail_scenario::fmt_cell(m.band_lo) << ", "
          << detail_scenario::fmt_cell(m.band_hi) << "] |\n";
    }
    out << "\n";
  }

  // Per-agent welfare means across seeds, a quick cross-seed ranking aid.
  out << "## Mean welfare by agent\n\n";
  out << "| agent | mean utility over seeds |\n";
  out << "|---|---|\n";
  std::vector<std::string> seen;
  for (const ScenarioRunResult& run : runs) {
    if (std::find(seen.begin(), seen.end(), run.agent) != seen.end()) continue;
    seen.push_back(run.agent);
    double acc = 0.0;
    long n = 0;
    for (const ScenarioRunResult& other : runs) {
      if (other.agent == run.agent) {
        acc += other.welfare_mean;
        ++n;
      }
    }
    out << "| " << run.agent << " | " << detail_scenario::fmt_cell(acc / static_cast<double>(n))
        << " |\n";
  }
  if (!out) throw IoError("failed writing " + path.string());
}

inline ScenarioOutputs run_scenario(const Scenario& sc, const std::filesystem::path& out_root,
                                    int jobs = 1) {
  validate(sc);
  ScenarioOutputs outputs;
  outputs.dir = out_root / sc.name;
  std::filesystem::create_directories(outputs.dir);

  const std::size_t n_agents = sc.agents.size();
  const std::size_t n_seeds = sc.seeds.size();
  outputs.runs.resize(n_agents * n_seeds);

  detail_scenario::parallel_for(n_agents * n_seeds, jobs, [&](std::size_t task) {
    const std::size_t agent_idx = task / n_seeds;
    const std::size_t seed_idx = task % n_seeds;
    const ScenarioAgentSpec& spec = sc.agents[agent_idx];
    const std::uint64_t seed = sc.seeds[seed_idx];

    AgentConfig agent_cfg = spec.agent;
    agent_cfg.seed = seed;
    TrainResult trained = run_training(sc.env, sc.train_schedule, agent_cfg, sc.ou, spec.explore);

    const std::uint64_t eval_seed = derive_seed(seed, kStreamEvalRun);
    const double eval_sigma = sc.greedy_eval ? 0.0 : spec.explore.sigma_min;
    ScenarioRunResult run;
    run.agent = spec.name;
    run.seed = seed;
    run.eval = simulate_policy(sc.env, sc.schedule, trained.actor, agent_cfg.s_ref, sc.horizon,
                               eval_seed, eval_sigma, sc.ou);
    run.training = trained.diagnostics;
    run.d_e_final = trained.diagnostics.empty() ? 0.0 : trained.diagnostics.back().d_e;
    detail_scenario::score_run(sc, run);

    const std::filesystem::path run_dir = outputs.dir / spec.name / std::to_string(seed);
    std::filesystem::create_directories(run_dir);
    write_series_csv(run.eval.series, run_dir / "series.csv");
    write_diagnostics_csv(run.training, run_dir / "training_diagnostics.csv");
    save_checkpoint(trained.actor, agent_cfg.s_ref, run_dir / "actor.ckpt");
    save_checkpoint(trained.critic, agent_cfg.s_ref, run_dir / "critic.ckpt");
    if (sc.checkpoint_every > 0) {
      for (std::size_t i = 0; i < trained.actor_snapshots.size(); ++i) {
        const long episode = static_cast<long>(i) + 1;
        if (episode % sc.checkpoint_every != 0) continue;
        save_checkpoint(trained.actor_snapshots[i], agent_cfg.s_ref,
                        run_dir / ("actor_ep" + std::to_string(episode) + ".ckpt"));
      }
    }

    outputs.runs[task] = std::move(run);
  });

  if (sc.include_re) {
    const double beta = sc.agents[0].agent.beta;
    for (const std::uint64_t seed : sc.seeds) {
      const std::uint64_t eval_seed = derive_seed(seed, kStreamEvalRun);
      ScenarioRunResult run;
      run.agent = "re";
      run.seed = seed;
      run.eval = simulate_re(sc.env, sc.schedule, beta, sc.horizon, eval_seed);
      detail_scenario::score_run(sc, run);
      const std::filesystem::path run_dir = outputs.dir / "re" / std::to_string(seed);
      std::filesystem::create_directories(run_dir);
      write_series_csv(run.eval.series, run_dir / "series.csv");
      outputs.runs.push_back(std::move(run));
    }
  }

  {
    CsvWriter w(outputs.dir / "diagnostics.csv");
    w.row("agent", "seed", "episode", "critic_loss", "neg_j", "mean_reward", "sigma", "d_e");
    for (const ScenarioRunResult& run : outputs.runs) {
      for (const DiagRow& d : run.training) {
        w.row(run.agent, run.seed, d.episode, d.critic_loss, d.neg_j, d.mean_reward, d.sigma,
              d.d_e);
      }
    }
  }
  {
    CsvWriter w(outputs.dir / "comparison.csv");
    w.row("agent", "seed", "t", "k", "z", "s", "a", "c", "r");
    for (const ScenarioRunResult& run : outputs.runs) {
      for (const SeriesRow& r : run.eval.series) {
        w.row(run.agent, run.seed, r.t, r.k, r.z, r.s, r.a, r.c, r.r);
      }
    }
  }
  write_report(sc, outputs.runs, outputs.dir / "report.md");
  return outputs;
}

}  // namespace growthlab
