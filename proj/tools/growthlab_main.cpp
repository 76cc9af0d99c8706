// growthlab command line front end.
//
//   growthlab train --config run.toml            train and evaluate a scenario
//   growthlab simulate --config run.toml --re    closed-form benchmark path
//   growthlab simulate --config run.toml --checkpoint actor.ckpt
//   growthlab compare --config run.toml --checkpoint a.ckpt [--checkpoint b.ckpt]
//   growthlab verify-oracle [--config run.toml]  Bellman residual self-check
//   growthlab report <scenario dir>              re-render report.md from artifacts
//
// Exit codes: 0 success, 1 config error, 2 verification failure, 3 IO error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "growthlab/config.hpp"
#include "growthlab/re_oracle.hpp"
#include "growthlab/scenario_lab.hpp"

namespace fs = std::filesystem;
using namespace growthlab;

namespace {

// Options shared by every config-driven subcommand. Flag values override the
// corresponding config fields before the resolved config is echoed.
struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool greedy_eval = false;
  CLI::Option* out_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* greedy_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool config_required) {
  auto* config = cmd->add_option("--config", c.config_path, "TOML run configuration");
  if (config_required) config->required();
  c.out_opt = cmd->add_option("--out", c.out_dir, "output directory (default from config)");
  c.seed_opt = cmd->add_option("--seed", c.seed, "replace the config seed list with one seed");
  c.jobs_opt = cmd->add_option("--jobs", c.jobs, "parallel scenario workers (default 1)");
  c.greedy_opt = cmd->add_flag("--greedy-eval", c.greedy_eval,
                               "evaluate with exploration fully off");
}

RunConfig resolve_config(const CommonOpts& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) {
    cfg = parse_run_config(parse_toml_file(c.config_path));
  }
  if (c.out_opt && c.out_opt->count() > 0) cfg.out_dir = c.out_dir;
  if (c.seed_opt && c.seed_opt->count() > 0) cfg.seeds = {c.seed};
  if (c.jobs_opt && c.jobs_opt->count() > 0) cfg.jobs = c.jobs;
  if (c.greedy_opt && c.greedy_opt->count() > 0) cfg.greedy_eval = true;
  validate(cfg);
  return cfg;
}

int cmd_train(const CommonOpts& opts) {
  const RunConfig cfg = resolve_config(opts);
  const Scenario sc = make_scenario(cfg);
  const fs::path out(cfg.out_dir);
  write_resolved_config(cfg, out);
  const ScenarioOutputs res = run_scenario(sc, out, cfg.jobs);
  // A copy inside the scenario directory makes it self-contained for `report`.
  write_resolved_config(cfg, res.dir);
  for (const ScenarioRunResult& run : res.runs) {
    std::cout << "agent=" << run.agent << " seed=" << run.seed
              << " welfare=" << format_double(run.welfare_mean);
    if (!run.training.empty()) std::cout << " d_e=" << format_double(run.d_e_final);
    std::cout << "\n";
  }
  std::cout << "scenario outputs in " << res.dir.string() << "\n";
  return 0;
}

int cmd_verify_oracle(const CommonOpts& opts, double perturb_b) {
  const RunConfig cfg = resolve_config(opts);
  const ShockParams base = cfg.schedule.base;
  ReSolution sol = solve_re(cfg.env.alpha, cfg.agent.beta, base.mu, base.rho);
  sol.B += perturb_b;  // nonzero only in the self-test that must fail

  // 5x5 interior grid: capital around the deterministic steady state, shock
  // around the unconditional mean of ln z.
  const double lnz_mean = base.mu / (1.0 - base.rho);
  const double k_ss =
      std::pow(cfg.env.alpha * cfg.agent.beta * std::exp(lnz_mean), 1.0 / (1.0 - cfg.env.alpha));
  const double k_lo = std::max(cfg.env.k_min * 10.0, k_ss / 10.0);
  const double k_hi = std::min(cfg.env.k_max * 0.9, k_ss * 2.0);
  const ResidualGridReport rep =
      bellman_residual_grid(sol, base.eps_sigma, 21, k_lo, k_hi, 5, std::exp(lnz_mean - 0.5),
                            std::exp(lnz_mean + 0.5), 5);

  const fs::path dir = fs::path(cfg.out_dir) / "verify_oracle";
  write_resolved_config(cfg, dir);
  CsvWriter w(dir / "residuals.csv");
  w.row("k", "z", "residual", "rel_residual");
  for (const auto& r : rep.rows) w.row(r[0], r[1], r[2], r[3]);

  std::cout << "max relative bellman residual " << format_double(rep.max_rel_residual) << "\n";
  const bool ok = rep.max_rel_residual < 1e-6;
  std::cout << (ok ? "pass" : "fail") << " (threshold 1e-06, grid " << rep.rows.size()
            << " points, quadrature order 21)\n";
  return ok ? 0 : 2;
}

int cmd_simulate(const CommonOpts& opts, bool re_mode, const std::string& checkpoint) {
  const RunConfig cfg = resolve_config(opts);
  if (re_mode == !checkpoint.empty()) {
    throw ConfigError("simulate needs exactly one of --re or --checkpoint");
  }
  const fs::path dir = fs::path(cfg.out_dir) / "simulate";
  write_resolved_config(cfg, dir);
  const std::uint64_t eval_seed = derive_seed(cfg.seeds[0], kStreamEvalRun);
  RunArtifact art;
  if (re_mode) {
    art = simulate_re(cfg.env, cfg.schedule, cfg.agent.beta, cfg.horizon, eval_seed);
  } else {
    const Checkpoint ck = load_checkpoint(checkpoint);
    const double sigma = cfg.greedy_eval ? 0.0 : cfg.explore.sigma_min;
    art = simulate_policy(cfg.env, cfg.schedule, ck.net, ck.s_ref, cfg.horizon, eval_seed, sigma,
                          cfg.ou);
  }
  write_series_csv(art.series, dir / "series.csv");
  std::cout << "wrote " << (dir / "series.csv").string() << " (" << art.series.size()
            << " periods)\n";
  return 0;
}

int cmd_compare(const CommonOpts& opts, const std::vector<std::string>& checkpoints) {
  const RunConfig cfg = resolve_config(opts);
  for (const std::string& p : checkpoints) {
    if (!fs::exists(p)) throw IoError("missing checkpoint: " + p);
  }
  std::vector<Checkpoint> agents;
  agents.reserve(checkpoints.size());
  for (const std::string& p : checkpoints) agents.push_back(load_checkpoint(p));

  const ShockParams base = cfg.schedule.base;
  const ReSolution sol = solve_re(cfg.env.alpha, cfg.agent.beta, base.mu, base.rho);
  const fs::path dir = fs::path(cfg.out_dir) / "compare";
  write_resolved_config(cfg, dir);

  // The benchmark path defines the comparison region; every simulation below
  // shares its seed, so shock draws pair up period by period.
  const std::uint64_t eval_seed = derive_seed(cfg.seeds[0], kStreamEvalRun);
  const RunArtifact re_run = simulate_re(cfg.env, cfg.schedule, cfg.agent.beta, cfg.horizon,
                                         eval_seed);
  write_series_csv(re_run.series, dir / "sim_re.csv");
  std::vector<double> ks, zs;
  ks.reserve(re_run.series.size());
  zs.reserve(re_run.series.size());
  for (const SeriesRow& r : re_run.series) {
    ks.push_back(r.k);
    zs.push_back(r.z);
  }
  PolicyGrid grid = make_policy_grid(ks, zs, 20, 20, 0.05, 0.95);
  fill_analytic(grid, sol);

  std::vector<std::string> labels;
  std::vector<double> distances;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const Checkpoint& ck = agents[i];
    labels.push_back("agent" + std::to_string(i + 1));
    auto learned = [&](double k, double z) {
      return actor_next_capital(ck.net, ck.s_ref, cfg.env.alpha, k, z);
    };
    distances.push_back(policy_distance(grid, learned, sol));
    const RunArtifact sim = simulate_policy(cfg.env, cfg.schedule, ck.net, ck.s_ref, cfg.horizon,
                                            eval_seed, 0.0, cfg.ou);
    write_series_csv(sim.series, dir / ("sim_" + labels.back() + ".csv"));
  }

  {
    CsvWriter w(dir / "policy_grid.csv");
    std::vector<std::string> header{"k", "z", "k_star"};
    for (const std::string& l : labels) header.push_back(l);
    w.row_cells(header);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::vector<std::string> cells{format_double(grid.points[g][0]),
                                     format_double(grid.points[g][1]),
                                     format_double(grid.analytic[g])};
      for (const Checkpoint& ck : agents) {
        cells.push_back(format_double(
            actor_next_capital(ck.net, ck.s_ref, cfg.env.alpha, grid.points[g][0],
                               grid.points[g][1])));
      }
      w.row_cells(cells);
    }
  }
  {
    CsvWriter w(dir / "de_summary.csv");
    w.row("agent", "checkpoint", "d_e");
    for (std::size_t i = 0; i < agents.size(); ++i) {
      w.row(labels[i], checkpoints[i], distances[i]);
      std::cout << labels[i] << " d_e " << format_double(distances[i]) << " (" << checkpoints[i]
                << ")\n";
    }
  }
  std::cout << "comparison outputs in " << dir.string() << "\n";
  return 0;
}

std::vector<DiagRow> read_diag_rows(const fs::path& path) {
  const CsvFile f = read_csv(path);
  const std::size_t ce = f.col("episode"), cl = f.col("critic_loss"), cj = f.col("neg_j");
  const std::size_t cm = f.col("mean_reward"), cs = f.col("sigma"), cd = f.col("d_e");
  std::vector<DiagRow> rows;
  rows.reserve(f.rows.size());
  for (const auto& r : f.rows) {
    DiagRow d;
    d.episode = static_cast<long>(parse_double(r[ce], "episode"));
    d.critic_loss = parse_double(r[cl], "critic_loss");
    d.neg_j = parse_double(r[cj], "neg_j");
    d.mean_reward = parse_double(r[cm], "mean_reward");
    d.sigma = parse_double(r[cs], "sigma");
    d.d_e = parse_double(r[cd], "d_e");
    rows.push_back(d);
  }
  return rows;
}

int cmd_report(const std::string& dir_arg) {
  const fs::path dir(dir_arg);
  const fs::path cfg_path = dir / "resolved_config.toml";
  if (!fs::exists(cfg_path)) {
    throw IoError("no resolved_config.toml in " + dir.string() +
                  "; point report at a scenario output directory");
  }
  const RunConfig cfg = parse_run_config(parse_toml_file(cfg_path));
  const Scenario sc = make_scenario(cfg);

  std::vector<ScenarioRunResult> runs;
  auto load_run = [&](const std::string& agent, std::uint64_t seed, bool trained) {
    const fs::path run_dir = dir / agent / std::to_string(seed);
    ScenarioRunResult run;
    run.agent = agent;
    run.seed = seed;
    run.eval.series = read_series_csv(run_dir / "series.csv");
    if (trained) {
      run.training = read_diag_rows(run_dir / "training_diagnostics.csv");
      run.d_e_final = run.training.empty() ? 0.0 : run.training.back().d_e;
    }
    detail_scenario::score_run(sc, run);
    runs.push_back(std::move(run));
  };
  for (const ScenarioAgentSpec& spec : sc.agents) {
    for (const std::uint64_t seed : sc.seeds) load_run(spec.name, seed, true);
  }
  if (sc.include_re) {
    for (const std::uint64_t seed : sc.seeds) load_run("re", seed, false);
  }
  write_report(sc, runs, dir / "report.md");
  std::cout << "wrote " << (dir / "report.md").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic growth model lab: train, simulate, compare, verify"};
  app.require_subcommand(1);

  CommonOpts train_opts;
  CLI::App* train = app.add_subcommand("train", "train agents for the configured scenario");
  add_common(train, train_opts, true);

  CommonOpts sim_opts;
  bool sim_re = false;
  std::string sim_checkpoint;
  CLI::App* simulate = app.add_subcommand("simulate", "run one policy through the environment");
  add_common(simulate, sim_opts, true);
  simulate->add_flag("--re", sim_re, "simulate the closed-form consumption share");
  simulate->add_option("--checkpoint", sim_checkpoint, "simulate a trained actor checkpoint");

  CommonOpts cmp_opts;
  std::vector<std::string> cmp_checkpoints;
  CLI::App* compare = app.add_subcommand("compare", "score actor checkpoints against the closed form");
  add_common(compare, cmp_opts, true);
  compare->add_option("--checkpoint", cmp_checkpoints, "actor checkpoint (repeatable)")
      ->required();

  CommonOpts verify_opts;
  double perturb_b = 0.0;
  CLI::App* verify = app.add_subcommand("verify-oracle", "check the closed form against its Bellman equation");
  add_common(verify, verify_opts, false);
  verify->add_option("--perturb-b", perturb_b,
                     "offset the capital coefficient; the check must then fail");

  std::string report_dir;
  CLI::App* report = app.add_subcommand("report", "re-render report.md from scenario artifacts");
  report->add_option("dir", report_dir, "scenario output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(train)) return cmd_train(train_opts);
    if (app.got_subcommand(simulate)) return cmd_simulate(sim_opts, sim_re, sim_checkpoint);
    if (app.got_subcommand(compare)) return cmd_compare(cmp_opts, cmp_checkpoints);
    if (app.got_subcommand(verify)) return cmd_verify_oracle(verify_opts, perturb_b);
    if (app.got_subcommand(report)) return cmd_report(report_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
