#include "magnav/sim_config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "magnav/errors.hpp"

namespace magnav {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Flat "key = value" file with '#' comments. Every key must be consumed by
// a getter; leftovers are reported as unknown keys so typos fail loudly
// instead of silently running with defaults.
class KeyValueFile {
 public:
  KeyValueFile(const std::string& path) : path_(path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::string body = trim(line);
      if (body.empty()) continue;
      auto eq = body.find('=');
      if (eq == std::string::npos)
        throw ConfigError(loc(lineno) + "expected 'key = value', got '" +
                          body + "'");
      std::string key = trim(body.substr(0, eq));
      std::string value = trim(body.substr(eq + 1));
      if (key.empty()) throw ConfigError(loc(lineno) + "empty key");
      if (value.empty())
        throw ConfigError(loc(lineno) + "empty value for key '" + key + "'");
      if (entries_.count(key))
        throw ConfigError(loc(lineno) + "duplicate key '" + key + "'");
      entries_[key] = {value, lineno, false};
    }
    if (in.bad()) throw IoError("load_config: read failure on '" + path + "'");
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end())
      throw ConfigError(path_ + ": missing required key '" + key + "'");
    it->second.consumed = true;
    return it->second.value;
  }

  double get_double(const std::string& key) {
    return parse_double(key, get_string(key));
  }
  double get_double(const std::string& key, double fallback) {
    return has(key) ? get_double(key) : fallback;
  }

  long get_int(const std::string& key) {
    const std::string raw = get_string(key);
    size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(raw, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != raw.size()) throw bad_value(key, raw, "an integer");
    return v;
  }
  long get_int(const std::string& key, long fallback) {
    return has(key) ? get_int(key) : fallback;
  }

  std::uint64_t get_uint64(const std::string& key) {
    const std::string raw = get_string(key);
    size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(raw, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != raw.size() || raw[0] == '-')
      throw bad_value(key, raw, "a non-negative integer");
    return v;
  }

  bool get_bool(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    std::string raw = get_string(key);
    std::string low = raw;
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (low == "true" || low == "1" || low == "yes" || low == "on")
      return true;
    if (low == "false" || low == "0" || low == "no" || low == "off")
      return false;
    throw bad_value(key, raw, "a boolean");
  }

  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) {
    if (!has(key)) return fallback;
    std::string raw = get_string(key);
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) throw bad_value(key, raw, "a comma-separated list");
      out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw bad_value(key, raw, "a comma-separated list");
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : entries_) {
      if (!entry.consumed)
        throw ConfigError(loc(entry.line) + "unknown key '" + key + "'");
    }
  }

  const std::string& path() const { return path_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
  };

  std::string loc(int line) const {
    std::ostringstream oss;
    oss << path_ << ":" << line << ": ";
    return oss.str();
  }

  ConfigError bad_value(const std::string& key, const std::string& raw,
                        const std::string& want) const {
    auto it = entries_.find(key);
    int line = it == entries_.end() ? 0 : it->second.line;
    return ConfigError(loc(line) + "value '" + raw + "' for key '" + key +
                       "' is not " + want);
  }

  double parse_double(const std::string& key, const std::string& raw) const {
    size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(raw, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != raw.size()) throw bad_value(key, raw, "a number");
    return v;
  }

  std::string path_;
  std::map<std::string, Entry> entries_;
};

std::string resolve_relative(const std::string& config_path,
                             const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_absolute()) return value;
  return (std::filesystem::path(config_path).parent_path() / p).string();
}

std::vector<double> deg_list_to_rad(std::vector<double> xs) {
  for (double& x : xs) x = deg2rad(x);
  return xs;
}

}  // namespace

SimConfig load_config(const std::string& path) {
  KeyValueFile kv(path);
  SimConfig cfg;

  std::string planner = kv.get_string("planner");
  if (planner == "observability")
    cfg.planner = PlannerKind::observability;
  else if (planner == "eer")
    cfg.planner = PlannerKind::eer;
  else if (planner == "straight")
    cfg.planner = PlannerKind::straight;
  else
    throw ConfigError(path + ": planner must be observability, eer or "
                      "straight, got '" + planner + "'");

  bool have_file = kv.has("map_file");
  bool have_spec = kv.has("map_spec");
  if (have_file == have_spec)
    throw ConfigError(path + ": exactly one of map_file / map_spec required");
  if (have_file)
    cfg.map_file = resolve_relative(path, kv.get_string("map_file"));
  else
    cfg.map_spec = resolve_relative(path, kv.get_string("map_spec"));

  cfg.start.x = kv.get_double("start_x");
  cfg.start.y = kv.get_double("start_y");
  cfg.start.theta = wrap_angle(kv.get_double("start_theta", 0.0));
  cfg.goal_x = kv.get_double("goal_x");
  cfg.goal_y = kv.get_double("goal_y");
  cfg.goal_radius = kv.get_double("goal_radius", cfg.goal_radius);
  cfg.max_steps = static_cast<int>(kv.get_int("max_steps", cfg.max_steps));
  cfg.seed = kv.get_uint64("seed");

  cfg.v = kv.get_double("v", cfg.v);
  cfg.dt = kv.get_double("dt", cfg.dt);

  cfg.noise.sigma_z = kv.get_double("sigma_z", cfg.noise.sigma_z);
  cfg.noise.sigma_xy_per_step =
      kv.get_double("sigma_xy_per_step", cfg.noise.sigma_xy_per_step);
  if (kv.has("sigma_theta_per_step_deg"))
    cfg.noise.sigma_theta_per_step =
        deg2rad(kv.get_double("sigma_theta_per_step_deg"));

  cfg.n_particles =
      static_cast<int>(kv.get_int("n_particles", cfg.n_particles));
  cfg.p0_sigma_x = kv.get_double("p0_sigma_x", cfg.p0_sigma_x);
  cfg.p0_sigma_y = kv.get_double("p0_sigma_y", cfg.p0_sigma_y);
  if (kv.has("p0_sigma_theta_deg"))
    cfg.p0_sigma_theta = deg2rad(kv.get_double("p0_sigma_theta_deg"));

  cfg.measurement_period = static_cast<int>(
      kv.get_int("measurement_period", cfg.measurement_period));
  cfg.fast_measurement_period = static_cast<int>(
      kv.get_int("fast_measurement_period", cfg.fast_measurement_period));
  cfg.obs_rate_threshold =
      kv.get_double("obs_rate_threshold", cfg.obs_rate_threshold);

  cfg.horizon = static_cast<int>(kv.get_int("horizon", cfg.horizon));
  if (kv.has("obs_actions_deg"))
    cfg.obs_actions = deg_list_to_rad(kv.get_double_list("obs_actions_deg", {}));
  cfg.w_goal = kv.get_double("w_goal", cfg.w_goal);
  cfg.w_obs = kv.get_double("w_obs", cfg.w_obs);
  cfg.eps_det = kv.get_double("eps_det", cfg.eps_det);
  cfg.include_terminal = kv.get_bool("include_terminal", cfg.include_terminal);

  if (kv.has("eer_actions_deg_s"))
    cfg.eer_actions =
        deg_list_to_rad(kv.get_double_list("eer_actions_deg_s", {}));
  cfg.belief_resolution =
      kv.get_double("belief_resolution", cfg.belief_resolution);
  cfg.kernel_sigma = kv.get_double("kernel_sigma", cfg.kernel_sigma);
  cfg.n_z = static_cast<int>(kv.get_int("n_z", cfg.n_z));

  kv.reject_unknown();

  // Range checks; anything wrong in a config should fail before a run.
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(path + ": " + what);
  };
  require(cfg.goal_radius > 0.0, "goal_radius must be > 0");
  require(cfg.max_steps > 0, "max_steps must be > 0");
  require(cfg.v >= 0.0, "v must be >= 0");
  require(cfg.dt > 0.0, "dt must be > 0");
  require(cfg.noise.sigma_z > 0.0, "sigma_z must be > 0");
  require(cfg.noise.sigma_xy_per_step >= 0.0, "sigma_xy_per_step must be >= 0");
  require(cfg.noise.sigma_theta_per_step >= 0.0,
          "sigma_theta_per_step_deg must be >= 0");
  require(cfg.n_particles > 0, "n_particles must be > 0");
  require(cfg.p0_sigma_x >= 0.0 && cfg.p0_sigma_y >= 0.0 &&
              cfg.p0_sigma_theta >= 0.0,
          "p0 sigmas must be >= 0");
  require(cfg.measurement_period >= 1, "measurement_period must be >= 1");
  require(cfg.fast_measurement_period >= 1,
          "fast_measurement_period must be >= 1");
  require(cfg.horizon >= 1, "horizon must be >= 1");
  require(!cfg.obs_actions.empty(), "obs_actions_deg must not be empty");
  require(cfg.w_goal >= 0.0, "w_goal must be >= 0");
  require(cfg.w_obs >= 0.0, "w_obs must be >= 0");
  require(cfg.eps_det > 0.0, "eps_det must be > 0");
  require(!cfg.eer_actions.empty(), "eer_actions_deg_s must not be empty");
  require(cfg.belief_resolution > 0.0, "belief_resolution must be > 0");
  require(cfg.n_z >= 1, "n_z must be >= 1");
  return cfg;
}

GridMap load_sim_map(const SimConfig& cfg) {
  if (!cfg.map_file.empty()) return load_map(cfg.map_file);
  if (!cfg.map_spec.empty()) return build_map(load_map_spec(cfg.map_spec));
  throw ConfigError("sim config names neither map_file nor map_spec");
}

ObsPlannerConfig make_obs_planner_config(const SimConfig& cfg) {
  ObsPlannerConfig out;
  out.horizon = cfg.horizon;
  out.action_set = cfg.obs_actions;
  out.v = cfg.v;
  out.dt = cfg.dt;
  out.weights = {cfg.w_goal, cfg.w_obs};
  out.goal_x = cfg.goal_x;
  out.goal_y = cfg.goal_y;
  out.eps_det = cfg.eps_det;
  out.include_terminal = cfg.include_terminal;
  return out;
}

EerPlannerConfig make_eer_planner_config(const SimConfig& cfg) {
  EerPlannerConfig out;
  out.action_set = cfg.eer_actions;
  out.v = cfg.v;
  out.dt = cfg.dt;
  out.weights = {cfg.w_goal, cfg.w_obs};
  out.goal_x = cfg.goal_x;
  out.goal_y = cfg.goal_y;
  out.sigma_z = cfg.noise.sigma_z;
  out.motion_kernel_sigma = effective_kernel_sigma(cfg);
  out.n_z = cfg.n_z;
  return out;
}

double effective_kernel_sigma(const SimConfig& cfg) {
  if (cfg.kernel_sigma >= 0.0) return cfg.kernel_sigma;
  // Auto: odometry noise scaled to the commanded step length.
  return cfg.noise.sigma_xy_per_step * (cfg.v * cfg.dt / kXyNoiseRefStep);
}

}  // namespace magnav
