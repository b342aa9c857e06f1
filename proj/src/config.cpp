#include "mslab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mslab/grid.hpp"

namespace mslab {

std::array<int, 3> ExperimentConfig::scaled_grid() const {
  std::array<int, 3> g;
  for (int axis = 0; axis < 3; ++axis) {
    g[axis] = std::max(5, static_cast<int>(std::lround((grid[axis] - 1) * grid_scale)) + 1);
  }
  return g;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("config: bad number '" + item + "' for key " + key);
    }
  }
  if (out.empty()) throw ConfigError("config: empty list for key " + key);
  return out;
}

double parse_num(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number '" + v + "' for key " + key);
  }
}

int parse_int(const std::string& v, const std::string& key) {
  const double x = parse_num(v, key);
  if (x != std::floor(x)) throw ConfigError("config: key " + key + " wants an integer");
  return static_cast<int>(x);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) throw ConfigError("config: empty value for " + key);

    if (key == "chart.preset") cfg.chart_preset = val;
    else if (key == "chart.n1") cfg.grid[0] = parse_int(val, key);
    else if (key == "chart.nr") cfg.grid[1] = parse_int(val, key);
    else if (key == "chart.ntheta") cfg.grid[2] = parse_int(val, key);
    else if (key == "coefficients.A") cfg.A_preset = val;
    else if (key == "coefficients.q") cfg.q_preset = val;
    else if (key == "coefficients.X") cfg.X_preset = val;
    else if (key == "coefficients.scenario") cfg.scenario = val;
    else if (key == "coefficients.gauge_phi") cfg.gauge_phi = val;
    else if (key == "coefficients.dq") cfg.dq_preset = val;
    else if (key == "ladders.h") cfg.h_ladder = parse_list(val, key);
    else if (key == "ladders.tau") cfg.tau_ladder = parse_list(val, key);
    else if (key == "ladders.carleman_h") cfg.carleman_h = parse_list(val, key);
    else if (key == "ladders.cgo_points_per_h") cfg.cgo_points_per_h = parse_int(val, key);
    else if (key == "cgo.kappa") cfg.kappa = parse_num(val, key);
    else if (key == "cgo.lambda") cfg.lambda = parse_num(val, key);
    else if (key == "cgo.sign") cfg.sign = parse_int(val, key);
    else if (key == "carleman.eps") cfg.eps = parse_num(val, key);
    else if (key == "carleman.samples") cfg.samples = parse_int(val, key);
    else if (key == "probes.lambda_count") cfg.lambda_count = parse_int(val, key);
    else if (key == "probes.lambda_max") cfg.lambda_max = parse_num(val, key);
    else if (key == "probes.b_count") cfg.b_count = parse_int(val, key);
    else if (key == "probes.functional_lambdas") cfg.functional_lambdas = parse_list(val, key);
    else if (key == "probes.functional_b_count") cfg.functional_b_count = parse_int(val, key);
    else if (key == "recover.reg") cfg.reg = parse_num(val, key);
    else if (key == "recover.noise_level") cfg.noise_level = parse_num(val, key);
    else if (key == "recover.reg_sweep") cfg.reg_sweep = parse_list(val, key);
    else if (key == "recover.resolvable_cut") cfg.resolvable_cut = parse_num(val, key);
    else if (key == "tolerances.gauge_rel_tol") cfg.gauge_rel_tol = parse_num(val, key);
    else if (key == "tolerances.ratio_floor") cfg.ratio_floor = parse_num(val, key);
    else if (key == "tolerances.bound_factor") cfg.bound_factor = parse_num(val, key);
    else if (key == "tolerances.coord_change_tol") cfg.coord_change_tol = parse_num(val, key);
    else if (key == "tolerances.advect_rel_tol") cfg.advect_rel_tol = parse_num(val, key);
    else if (key == "tolerances.recover_rel_tol") cfg.recover_rel_tol = parse_num(val, key);
    else if (key == "output.dir") cfg.out_dir = val;
    else if (key == "output.seed") cfg.seed = static_cast<std::uint64_t>(parse_num(val, key));
    else if (key == "output.grid_scale") cfg.grid_scale = parse_num(val, key);
    else throw ConfigError("config: unknown key " + key);
  }
  // validation
  auto strict_dec = [](const std::vector<double>& v, const char* what) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1]))
        throw ConfigError(std::string("config: ") + what + " must be strictly decreasing");
  };
  strict_dec(cfg.h_ladder, "ladders.h");
  strict_dec(cfg.tau_ladder, "ladders.tau");
  strict_dec(cfg.carleman_h, "ladders.carleman_h");
  if (cfg.sign != 1 && cfg.sign != -1) throw ConfigError("config: cgo.sign must be +-1");
  if (!(cfg.grid_scale > 0.0)) throw ConfigError("config: output.grid_scale must be positive");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

std::string default_config_text() {
  return
      "[chart]\n"
      "preset = flat-cylinder\n"
      "n1 = 25\n"
      "nr = 49\n"
      "ntheta = 13\n"
      "\n"
      "[coefficients]\n"
      "A = smooth\n"
      "q = bump\n"
      "X = swirl\n"
      "scenario = gauge\n"
      "gauge_phi = bump\n"
      "dq = bump\n"
      "\n"
      "[ladders]\n"
      "h = 0.4,0.2,0.1,0.05\n"
      "tau = 0.2,0.1,0.05,0.025\n"
      "carleman_h = 0.05,0.025\n"
      "\n"
      "[output]\n"
      "dir = out\n"
      "seed = 42\n";
}

}  // namespace mslab
