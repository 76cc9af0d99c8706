#pragma once

// Run configuration: a strict TOML-subset parser, the schema that maps tables
// onto module parameter structs, and a renderer that echoes the fully
// resolved config (defaults applied) back out as TOML.
//
// Supported syntax: comments (#), [table] and [[array-of-table]] headers with
// dotted names, and key = value lines where a value is a double-quoted string
// (\\ and \" escapes), integer, float, boolean, or a single-line array of
// scalars. Anything else is rejected, as is any key the schema does not know.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "growthlab/csvio.hpp"
#include "growthlab/ddpg_agent.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/exploration.hpp"
#include "growthlab/growth_env.hpp"

namespace growthlab {

// ---------------------------------------------------------------------------
// TOML subset
// ---------------------------------------------------------------------------

struct TomlValue {
  enum class Kind { kString, kInt, kFloat, kBool, kArray };
  Kind kind = Kind::kInt;
  std::string str;
  long long integer = 0;
  double number = 0.0;
  bool boolean = false;
  std::vector<TomlValue> array;
  long line = 0;
};

struct TomlTable {
  std::map<std::string, TomlValue> values;
  std::map<std::string, TomlTable> tables;
  std::map<std::string, std::vector<TomlTable>> table_arrays;
  bool declared = false;  // appeared as an explicit [header]
  long line = 0;
};

namespace detail_toml {

[[noreturn]] inline void fail(long line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

inline bool bare_key_ok(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Strips a trailing comment, respecting quoted strings.
inline std::string_view strip_comment(std::string_view s, long line) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (in_string) {
      if (s[i] == '\\') {
        if (i + 1 >= s.size()) fail(line, "dangling escape in string");
        ++i;
      } else if (s[i] == '"') {
        in_string = false;
      }
    } else if (s[i] == '"') {
      in_string = true;
    } else if (s[i] == '#') {
      return s.substr(0, i);
    }
  }
  if (in_string) fail(line, "unterminated string");
  return s;
}

inline std::vector<std::string> split_dotted(std::string_view name, long line) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = name.find('.', start);
    std::string_view part = trim(name.substr(start, dot - start));
    if (!bare_key_ok(part)) fail(line, "bad table name component '" + std::string(part) + "'");
    parts.emplace_back(part);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

// Parses one scalar or array from the front of `s`; advances `s` past it.
inline TomlValue parse_value(std::string_view& s, long line) {
  s = trim(s);
  if (s.empty()) fail(line, "missing value");
  TomlValue v;
  v.line = line;
  if (s.front() == '"') {
    v.kind = TomlValue::Kind::kString;
    std::size_t i = 1;
    for (; i < s.size(); ++i) {
      if (s[i] == '\\') {
        if (i + 1 >= s.size()) fail(line, "dangling escape in string");
        const char e = s[i + 1];
        if (e == '"' || e == '\\') {
          v.str.push_back(e);
        } else if (e == 'n') {
          v.str.push_back('\n');
        } else if (e == 't') {
          v.str.push_back('\t');
        } else {
          fail(line, std::string("unsupported escape '\\") + e + "'");
        }
        ++i;
      } else if (s[i] == '"') {
        s.remove_prefix(i + 1);
        return v;
      } else {
        v.str.push_back(s[i]);
      }
    }
    fail(line, "unterminated string");
  }
  if (s.front() == '[') {
    v.kind = TomlValue::Kind::kArray;
    s.remove_prefix(1);
    s = trim(s);
    if (!s.empty() && s.front() == ']') {
      s.remove_prefix(1);
      return v;
    }
    while (true) {
      v.array.push_back(parse_value(s, line));
      s = trim(s);
      if (s.empty()) fail(line, "unterminated array");
      if (s.front() == ',') {
        s.remove_prefix(1);
        continue;
      }
      if (s.front() == ']') {
        s.remove_prefix(1);
        return v;
      }
      fail(line, "expected ',' or ']' in array");
    }
  }
  // Bare token: boolean or number. Read up to a delimiter.
  std::size_t end = 0;
  while (end < s.size() && s[end] != ',' && s[end] != ']' &&
         !std::isspace(static_cast<unsigned char>(s[end]))) {
    ++end;
  }
  const std::string_view tok = s.substr(0, end);
  s.remove_prefix(end);
  if (tok == "true" || tok == "false") {
    v.kind = TomlValue::Kind::kBool;
    v.boolean = tok == "true";
    return v;
  }
  const bool looks_float = tok.find_first_of(".eE") != std::string_view::npos &&
                           tok.find_first_of("0123456789") != std::string_view::npos;
  if (!looks_float) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    if (ec == std::errc() && ptr == tok.data() + tok.size()) {
      v.kind = TomlValue::Kind::kInt;
      v.integer = out;
      return v;
    }
  }
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (ec == std::errc() && ptr == tok.data() + tok.size()) {
    v.kind = TomlValue::Kind::kFloat;
    v.number = out;
    return v;
  }
  fail(line, "cannot parse value '" + std::string(tok) + "'");
}

inline TomlTable* descend(TomlTable* t, const std::vector<std::string>& parts,
                          std::size_t count, long line) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::string& part = parts[i];
    if (t->values.count(part)) fail(line, "'" + part + "' is already a value");
    if (t->table_arrays.count(part)) {
      // Keys under an array element attach to its latest entry.
      t = &t->table_arrays[part].back();
    } else {
      t = &t->tables[part];
    }
  }
  return t;
}

}  // namespace detail_toml

inline TomlTable parse_toml(std::string_view text) {
  using namespace detail_toml;
  TomlTable root;
  TomlTable* current = &root;
  long line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view s = trim(strip_comment(raw, line_no));
    if (s.empty()) continue;

    if (s.front() == '[') {
      const bool is_array = s.size() > 1 && s[1] == '[';
      const std::string_view closer = is_array ? "]]" : "]";
      const std::size_t close = s.find(closer);
      if (close == std::string_view::npos || trim(s.substr(close + closer.size())) != "") {
        fail(line_no, "malformed table header");
      }
      const std::string_view inner = trim(s.substr(is_array ? 2 : 1, close - (is_array ? 2 : 1)));
      const std::vector<std::string> parts = split_dotted(inner, line_no);
      TomlTable* parent = descend(&root, parts, parts.size() - 1, line_no);
      const std::string& leaf = parts.back();
      if (parent->values.count(leaf)) fail(line_no, "'" + leaf + "' is already a value");
      if (is_array) {
        if (parent->tables.count(leaf)) fail(line_no, "'" + leaf + "' is already a table");
        parent->table_arrays[leaf].emplace_back();
        current = &parent->table_arrays[leaf].back();
        current->declared = true;
        current->line = line_no;
      } else {
        if (parent->table_arrays.count(leaf)) fail(line_no, "'" + leaf + "' is already an array of tables");
        TomlTable& t = parent->tables[leaf];
        if (t.declared) fail(line_no, "duplicate table [" + std::string(inner) + "]");
        t.declared = true;
        t.line = line_no;
        current = &t;
      }
      continue;
    }

    const std::size_t eq = s.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const std::string_view key = trim(s.substr(0, eq));
    if (!bare_key_ok(key)) fail(line_no, "bad key '" + std::string(key) + "'");
    std::string_view rest = s.substr(eq + 1);
    TomlValue v = parse_value(rest, line_no);
    if (!trim(rest).empty()) fail(line_no, "trailing characters after value");
    const std::string key_s(key);
    if (current->values.count(key_s) || current->tables.count(key_s) ||
        current->table_arrays.count(key_s)) {
      fail(line_no, "duplicate key '" + key_s + "'");
    }
    current->values.emplace(key_s, std::move(v));
  }
  return root;
}

inline TomlTable parse_toml_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_toml(buf.str());
}

// ---------------------------------------------------------------------------
// Strict extraction: every key must be consumed, leftovers are errors.
// ---------------------------------------------------------------------------

class TableReader {
 public:
  TableReader(TomlTable& table, std::string where) : t_(&table), where_(std::move(where)) {}

  std::optional<double> take_double(const std::string& key) {
    auto node = t_->values.extract(key);
    if (!node) return std::nullopt;
    const TomlValue& v = node.mapped();
    if (v.kind == TomlValue::Kind::kFloat) return v.number;
    if (v.kind == TomlValue::Kind::kInt) return static_cast<double>(v.integer);
    detail_toml::fail(v.line, where_ + key + " must be a number");
  }

  std::optional<long long> take_int(const std::string& key) {
    auto node = t_->values.extract(key);
    if (!node) return std::nullopt;
    const TomlValue& v = node.mapped();
    if (v.kind != TomlValue::Kind::kInt) detail_toml::fail(v.line, where_ + key + " must be an integer");
    return v.integer;
  }

  std::optional<bool> take_bool(const std::string& key) {
    auto node = t_->values.extract(key);
    if (!node) return std::nullopt;
    const TomlValue& v = node.mapped();
    if (v.kind != TomlValue::Kind::kBool) detail_toml::fail(v.line, where_ + key + " must be a boolean");
    return v.boolean;
  }

  std::optional<std::string> take_string(const std::string& key) {
    auto node = t_->values.extract(key);
    if (!node) return std::nullopt;
    const TomlValue& v = node.mapped();
    if (v.kind != TomlValue::Kind::kString) detail_toml::fail(v.line, where_ + key + " must be a string");
    return v.str;
  }

  std::optional<std::vector<double>> take_double_array(const std::string& key) {
    auto node = t_->values.extract(key);
    if (!node) return std::nullopt;
    const TomlValue& v = node.mapped();
    if (v.kind != TomlValue::Kind::kArray) detail_toml::fail(v.line, where_ + key + " must be an array");
    std::vector<double> out;
    for (const TomlValue& e : v.array) {
      if (e.kind == TomlValue::Kind::kFloat) {
        out.push_back(e.number);
      } else if (e.kind == TomlValue::Kind::kInt) {
        out.push_back(static_cast<double>(e.integer));
      } else {
        detail_toml::fail(e.line, where_ + key + " must contain only numbers");
      }
    }
    return out;
  }

  std::optional<std::vector<long long>> take_int_array(const std::string& key) {
    auto node = t_->values.extract(key);
    if (!node) return std::nullopt;
    const TomlValue& v = node.mapped();
    if (v.kind != TomlValue::Kind::kArray) detail_toml::fail(v.line, where_ + key + " must be an array");
    std::vector<long long> out;
    for (const TomlValue& e : v.array) {
      if (e.kind != TomlValue::Kind::kInt) {
        detail_toml::fail(e.line, where_ + key + " must contain only integers");
      }
      out.push_back(e.integer);
    }
    return out;
  }

  std::optional<TomlTable> take_table(const std::string& key) {
    auto node = t_->tables.extract(key);
    if (!node) return std::nullopt;
    return std::move(node.mapped());
  }

  std::vector<TomlTable> take_table_array(const std::string& key) {
    auto node = t_->table_arrays.extract(key);
    if (!node) return {};
    return std::move(node.mapped());
  }

  // Anything still present was not consumed by the schema: reject it.
  void finish() const {
    if (!t_->values.empty()) {
      const auto& [key, v] = *t_->values.begin();
      detail_toml::fail(v.line, "unknown key '" + where_ + key + "'");
    }
    if (!t_->tables.empty()) {
      const auto& [key, tbl] = *t_->tables.begin();
      detail_toml::fail(tbl.line, "unknown table '" + where_ + key + "'");
    }
    if (!t_->table_arrays.empty()) {
      const auto& [key, arr] = *t_->table_arrays.begin();
      detail_toml::fail(arr.empty() ? 0 : arr.front().line, "unknown table array '" + where_ + key + "'");
    }
  }

 private:
  TomlTable* t_;
  std::string where_;  // "agent." etc., for error messages
};

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

struct MetricsConfig {
  int pre_window = 50;       // periods before the shock defining the baseline band
  int welfare_window = 15;   // periods around/after the event for mean utility
  int post_window = 100;     // periods after a permanent change for its mean
};

inline void validate(const MetricsConfig& m) {
  if (m.pre_window < 1 || m.welfare_window < 1 || m.post_window < 1) {
    throw ConfigError("metrics windows must be >= 1");
  }
}

inline const std::vector<std::string>& known_scenarios() {
  static const std::vector<std::string> names{
      "baseline_learning", "transitory_shock", "permanent_change",
      "exploration_comparison", "re_comparison"};
  return names;
}

struct RunConfig {
  std::string scenario;  // empty = plain training run
  std::string out_dir = "out";
  std::vector<std::uint64_t> seeds{0};
  long horizon = 512;  // evaluation simulation length
  bool greedy_eval = false;
  int jobs = 1;
  long checkpoint_every = 0;  // episodes between checkpoints; 0 = final only
  EnvParams env;
  RegimeSchedule schedule;
  AgentConfig agent;
  OuParams ou;
  ExploreSchedule explore;
  std::vector<double> sigma_min_levels{0.1, 0.3, 0.6};
  MetricsConfig metrics;
};

inline void validate(const RunConfig& cfg) {
  if (!cfg.scenario.empty()) {
    const auto& names = known_scenarios();
    if (std::find(names.begin(), names.end(), cfg.scenario) == names.end()) {
      throw ConfigError("unknown scenario '" + cfg.scenario + "'");
    }
  }
  if (cfg.seeds.empty()) throw ConfigError("seeds must not be empty");
  if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (cfg.checkpoint_every < 0) throw ConfigError("checkpoint_every must be >= 0");
  validate(cfg.env);
  validate(cfg.schedule);
  validate(cfg.agent);
  validate(cfg.ou);
  validate(cfg.explore);
  validate(cfg.metrics);
  if (cfg.sigma_min_levels.empty()) throw ConfigError("sigma_min_levels must not be empty");
  for (double v : cfg.sigma_min_levels) {
    if (!(v > 0.0)) throw ConfigError("sigma_min_levels entries must be > 0");
  }
}

namespace detail_toml {

inline ShockParams read_shock_fields(TableReader& r, const ShockParams& defaults) {
  ShockParams p = defaults;
  if (auto v = r.take_double("mu")) p.mu = *v;
  if (auto v = r.take_double("rho")) p.rho = *v;
  if (auto v = r.take_double("eps_sigma")) p.eps_sigma = *v;
  return p;
}

inline std::vector<int> to_layer_sizes(const std::vector<long long>& in, const char* what) {
  std::vector<int> out;
  out.reserve(in.size());
  for (long long v : in) {
    if (v < 1 || v > 1 << 20) throw ConfigError(std::string(what) + " layer sizes must be in [1, 2^20]");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace detail_toml

inline RunConfig parse_run_config(TomlTable root) {
  using detail_toml::read_shock_fields;
  RunConfig cfg;
  TableReader r(root, "");

  if (auto v = r.take_string("scenario")) cfg.scenario = *v;
  if (auto v = r.take_string("out_dir")) cfg.out_dir = *v;
  if (auto v = r.take_int_array("seeds")) {
    cfg.seeds.clear();
    for (long long s : *v) {
      if (s < 0) throw ConfigError("seeds must be >= 0");
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (auto v = r.take_int("horizon")) cfg.horizon = *v;
  if (auto v = r.take_bool("greedy_eval")) cfg.greedy_eval = *v;
  if (auto v = r.take_int("jobs")) cfg.jobs = static_cast<int>(*v);

  if (auto shock = r.take_table("shock")) {
    TableReader s(*shock, "shock.");
    cfg.schedule.base = read_shock_fields(s, cfg.schedule.base);
    for (TomlTable& t : s.take_table_array("permanent_change")) {
      TableReader c(t, "shock.permanent_change.");
      RegimeChange change;
      const auto period = c.take_int("period");
      if (!period) throw ConfigError("shock.permanent_change needs a period");
      change.period = *period;
      change.params = read_shock_fields(c, cfg.schedule.base);
      c.finish();
      cfg.schedule.permanent_changes.push_back(change);
    }
    for (TomlTable& t : s.take_table_array("override")) {
      TableReader c(t, "shock.override.");
      RegimeChange change;
      const auto period = c.take_int("period");
      if (!period) throw ConfigError("shock.override needs a period");
      change.period = *period;
      change.params = read_shock_fields(c, cfg.schedule.base);
      c.finish();
      cfg.schedule.one_period_overrides.push_back(change);
    }
    s.finish();
  }

  bool z0_given = false;
  if (auto env = r.take_table("env")) {
    TableReader e(*env, "env.");
    if (auto v = e.take_double("alpha")) cfg.env.alpha = *v;
    if (auto v = e.take_double("k_min")) cfg.env.k_min = *v;
    if (auto v = e.take_double("k_max")) cfg.env.k_max = *v;
    if (auto v = e.take_double("a_lo")) cfg.env.a_lo = *v;
    if (auto v = e.take_double("a_hi")) cfg.env.a_hi = *v;
    if (auto v = e.take_double("r_min")) cfg.env.r_min = *v;
    if (auto v = e.take_double("k0")) cfg.env.k0 = *v;
    if (auto v = e.take_double("z0")) {
      cfg.env.z0 = *v;
      z0_given = true;
    }
    e.finish();
  }
  // The default starting shock level tracks the base regime's mean.
  if (!z0_given) cfg.env.z0 = std::exp(cfg.schedule.base.mu);

  if (auto agent = r.take_table("agent")) {
    TableReader a(*agent, "agent.");
    if (auto v = a.take_double("beta")) cfg.agent.beta = *v;
    if (auto v = a.take_double("eta_actor")) cfg.agent.eta_actor = *v;
    if (auto v = a.take_double("eta_critic")) cfg.agent.eta_critic = *v;
    if (auto v = a.take_int("batch_n")) cfg.agent.batch_n = static_cast<int>(*v);
    if (auto v = a.take_int("episodes")) cfg.agent.episodes_e = static_cast<int>(*v);
    if (auto v = a.take_int("periods")) cfg.agent.periods_t = static_cast<int>(*v);
    if (auto v = a.take_double("target_tau")) cfg.agent.target_tau = *v;
    if (auto v = a.take_string("optimizer")) cfg.agent.optimizer = optimizer_from_name(*v);
    if (auto v = a.take_double("grad_clip")) cfg.agent.grad_clip = *v;
    if (auto v = a.take_double("s_ref")) cfg.agent.s_ref = *v;
    if (auto v = a.take_int("replay_capacity")) {
      if (*v < 1) throw ConfigError("agent.replay_capacity must be >= 1");
      cfg.agent.replay_capacity = static_cast<std::size_t>(*v);
    }
    if (auto v = a.take_int_array("actor_hidden")) {
      cfg.agent.actor_hidden = detail_toml::to_layer_sizes(*v, "agent.actor_hidden");
    }
    if (auto v = a.take_int_array("critic_hidden")) {
      cfg.agent.critic_hidden = detail_toml::to_layer_sizes(*v, "agent.critic_hidden");
    }
    if (auto v = a.take_int("checkpoint_every")) cfg.checkpoint_every = *v;
    a.finish();
  }

  if (auto ex = r.take_table("exploration")) {
    TableReader x(*ex, "exploration.");
    if (auto v = x.take_double("theta")) cfg.ou.theta = *v;
    if (auto v = x.take_double("mu_bar")) cfg.ou.mu_bar = *v;
    if (auto v = x.take_double("sigma_ou")) cfg.ou.sigma_ou = *v;
    if (auto v = x.take_double("sigma_start")) cfg.explore.sigma_start = *v;
    if (auto v = x.take_double("sigma_min")) cfg.explore.sigma_min = *v;
    if (auto v = x.take_int("decay_steps")) cfg.explore.decay_steps = *v;
    if (auto v = x.take_double_array("sigma_min_levels")) cfg.sigma_min_levels = *v;
    x.finish();
  }

  if (auto m = r.take_table("metrics")) {
    TableReader t(*m, "metrics.");
    if (auto v = t.take_int("pre_window")) cfg.metrics.pre_window = static_cast<int>(*v);
    if (auto v = t.take_int("welfare_window")) cfg.metrics.welfare_window = static_cast<int>(*v);
    if (auto v = t.take_int("post_window")) cfg.metrics.post_window = static_cast<int>(*v);
    t.finish();
  }

  r.finish();
  validate(cfg);
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(parse_toml_file(path));
}

// ---------------------------------------------------------------------------
// Resolved-config echo
// ---------------------------------------------------------------------------

inline std::string render_run_config(const RunConfig& cfg) {
  std::ostringstream out;
  auto num = [](double v) { return format_double(v); };
  if (!cfg.scenario.empty()) out << "scenario = \"" << cfg.scenario << "\"\n";
  out << "out_dir = \"" << cfg.out_dir << "\"\n";
  out << "seeds = [";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    out << (i ? ", " : "") << cfg.seeds[i];
  }
  out << "]\n";
  out << "horizon = " << cfg.horizon << "\n";
  out << "greedy_eval = " << (cfg.greedy_eval ? "true" : "false") << "\n";
  out << "jobs = " << cfg.jobs << "\n";

  out << "\n[env]\n";
  out << "alpha = " << num(cfg.env.alpha) << "\n";
  out << "k_min = " << num(cfg.env.k_min) << "\n";
  out << "k_max = " << num(cfg.env.k_max) << "\n";
  out << "a_lo = " << num(cfg.env.a_lo) << "\n";
  out << "a_hi = " << num(cfg.env.a_hi) << "\n";
  out << "r_min = " << num(cfg.env.r_min) << "\n";
  out << "k0 = " << num(cfg.env.k0) << "\n";
  out << "z0 = " << num(cfg.env.z0) << "\n";

  out << "\n[shock]\n";
  out << "mu = " << num(cfg.schedule.base.mu) << "\n";
  out << "rho = " << num(cfg.schedule.base.rho) << "\n";
  out << "eps_sigma = " << num(cfg.schedule.base.eps_sigma) << "\n";
  for (const RegimeChange& c : cfg.schedule.permanent_changes) {
    out << "\n[[shock.permanent_change]]\n";
    out << "period = " << c.period << "\n";
    out << "mu = " << num(c.params.mu) << "\n";
    out << "rho = " << num(c.params.rho) << "\n";
    out << "eps_sigma = " << num(c.params.eps_sigma) << "\n";
  }
  for (const RegimeChange& c : cfg.schedule.one_period_overrides) {
    out << "\n[[shock.override]]\n";
    out << "period = " << c.period << "\n";
    out << "mu = " << num(c.params.mu) << "\n";
    out << "rho = " << num(c.params.rho) << "\n";
    out << "eps_sigma = " << num(c.params.eps_sigma) << "\n";
  }

  out << "\n[agent]\n";
  out << "beta = " << num(cfg.agent.beta) << "\n";
  out << "eta_actor = " << num(cfg.agent.eta_actor) << "\n";
  out << "eta_critic = " << num(cfg.agent.eta_critic) << "\n";
  out << "batch_n = " << cfg.agent.batch_n << "\n";
  out << "episodes = " << cfg.agent.episodes_e << "\n";
  out << "periods = " << cfg.agent.periods_t << "\n";
  out << "target_tau = " << num(cfg.agent.target_tau) << "\n";
  out << "optimizer = \"" << optimizer_name(cfg.agent.optimizer) << "\"\n";
  out << "grad_clip = " << num(cfg.agent.grad_clip) << "\n";
  out << "s_ref = " << num(cfg.agent.s_ref) << "\n";
  out << "replay_capacity = " << cfg.agent.replay_capacity << "\n";
  auto layer_list = [&](const std::vector<int>& sizes) {
    std::string s = "[";
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      s += (i ? ", " : "") + std::to_string(sizes[i]);
    }
    return s + "]";
  };
  out << "actor_hidden = " << layer_list(cfg.agent.actor_hidden) << "\n";
  out << "critic_hidden = " << layer_list(cfg.agent.critic_hidden) << "\n";
  out << "checkpoint_every = " << cfg.checkpoint_every << "\n";

  out << "\n[exploration]\n";
  out << "theta = " << num(cfg.ou.theta) << "\n";
  out << "mu_bar = " << num(cfg.ou.mu_bar) << "\n";
  out << "sigma_ou = " << num(cfg.ou.sigma_ou) << "\n";
  out << "sigma_start = " << num(cfg.explore.sigma_start) << "\n";
  out << "sigma_min = " << num(cfg.explore.sigma_min) << "\n";
  out << "decay_steps = " << cfg.explore.decay_steps << "\n";
  out << "sigma_min_levels = [";
  for (std::size_t i = 0; i < cfg.sigma_min_levels.size(); ++i) {
    out << (i ? ", " : "") << num(cfg.sigma_min_levels[i]);
  }
  out << "]\n";

  out << "\n[metrics]\n";
  out << "pre_window = " << cfg.metrics.pre_window << "\n";
  out << "welfare_window = " << cfg.metrics.welfare_window << "\n";
  out << "post_window = " << cfg.metrics.post_window << "\n";
  return out.str();
}

inline void write_resolved_config(const RunConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / "resolved_config.toml";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << render_run_config(cfg);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace growthlab
