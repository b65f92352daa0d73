#include "vmlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vml {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::wave: return "wave";
    case Mode::burgers: return "burgers";
    case Mode::collision_test: return "collision-test";
    case Mode::burnett: return "burnett";
    case Mode::fluid_run: return "fluid-run";
    default: return "sweep";
  }
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

KeyValues KeyValues::parse(const std::string& text) {
  KeyValues kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config parse error at line " + std::to_string(lineno) +
                         ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("config parse error at line " + std::to_string(lineno) +
                         ": empty key");
    if (kv.values_.count(key))
      throw config_error("config parse error at line " + std::to_string(lineno) +
                         ": duplicate key '" + key + "'");
    kv.values_[key] = val;
    kv.line_of_[key] = lineno;
  }
  return kv;
}

double KeyValues::get_num(const std::string& key, double def) {
  consumed_.insert(key);
  auto it = values_.find(key);
  double v = def;
  if (it != values_.end()) {
    std::size_t pos = 0;
    try {
      v = std::stod(it->second, &pos);
    } catch (...) {
      throw config_error("config key '" + key + "': not a number: " + it->second);
    }
    if (pos != it->second.size())
      throw config_error("config key '" + key + "': not a number: " + it->second);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  echo_[key] = buf;
  return v;
}

double KeyValues::require_num(const std::string& key) {
  if (!has(key)) throw config_error("config key '" + key + "' is required");
  return get_num(key, 0.0);
}

int KeyValues::get_int(const std::string& key, int def) {
  double v = get_num(key, def);
  if (v != std::floor(v))
    throw config_error("config key '" + key + "': expected an integer");
  return static_cast<int>(v);
}

bool KeyValues::get_bool(const std::string& key, bool def) {
  consumed_.insert(key);
  auto it = values_.find(key);
  bool v = def;
  if (it != values_.end()) {
    if (it->second == "true" || it->second == "1")
      v = true;
    else if (it->second == "false" || it->second == "0")
      v = false;
    else
      throw config_error("config key '" + key + "': expected true/false");
  }
  echo_[key] = v ? "true" : "false";
  return v;
}

std::string KeyValues::get_str(const std::string& key, const std::string& def) {
  consumed_.insert(key);
  auto it = values_.find(key);
  std::string v = it != values_.end() ? it->second : def;
  echo_[key] = v;
  return v;
}

std::vector<double> KeyValues::get_list(const std::string& key,
                                        const std::vector<double>& def) {
  consumed_.insert(key);
  auto it = values_.find(key);
  std::vector<double> v;
  if (it == values_.end()) {
    v = def;
  } else {
    std::istringstream is(it->second);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      try {
        v.push_back(std::stod(tok));
      } catch (...) {
        throw config_error("config key '" + key + "': bad list entry '" + tok + "'");
      }
    }
  }
  std::string echo;
  char buf[64];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    echo += (i ? "," : "");
    echo += buf;
  }
  echo_[key] = echo;
  return v;
}

void KeyValues::check_all_consumed() const {
  for (const auto& [key, val] : values_) {
    if (consumed_.count(key)) continue;
    // nearest known key by edit distance
    std::string best;
    int bestd = 1 << 30;
    for (const auto& c : consumed_) {
      int d = edit_distance(key, c);
      if (d < bestd) {
        bestd = d;
        best = c;
      }
    }
    std::string hint = best.empty() ? "" : " (nearest known key: '" + best + "')";
    throw config_error("unknown config key '" + key + "' at line " +
                       std::to_string(line_of_.at(key)) + hint);
  }
}

ExperimentSpec parse_config(const std::string& text) {
  KeyValues kv = KeyValues::parse(text);
  ExperimentSpec spec;

  spec.name = kv.get_str("name", "experiment");
  std::string mode = kv.get_str("mode", "");
  if (mode == "wave")
    spec.mode = Mode::wave;
  else if (mode == "burgers")
    spec.mode = Mode::burgers;
  else if (mode == "collision-test")
    spec.mode = Mode::collision_test;
  else if (mode == "burnett")
    spec.mode = Mode::burnett;
  else if (mode == "fluid-run")
    spec.mode = Mode::fluid_run;
  else if (mode == "sweep")
    spec.mode = Mode::sweep;
  else
    throw config_error("config key 'mode' must be one of wave, burgers, "
                       "collision-test, burnett, fluid-run, sweep (got '" +
                       mode + "')");

  // Riemann data: the left state plus either an explicit right state or a
  // target wave strength resolved along the 3-rarefaction curve.
  GasState left(kv.get_num("riemann.rho_left", 1.0), kv.get_num("riemann.u_left", 0.0),
                kv.get_num("riemann.theta_left", 1.5));
  RiemannData data;
  if (kv.has("riemann.rho_right")) {
    GasState right(kv.require_num("riemann.rho_right"),
                   kv.get_num("riemann.u_right", 0.0),
                   kv.get_num("riemann.theta_right", 1.5));
    data = RiemannData{left, right};
  } else {
    double sigma = kv.get_num("riemann.sigma", 0.1);
    data = make_rarefaction_data(left, sigma);
  }
  spec.base.data = data;

  spec.base.eps = kv.get_num("epsilon", 1e-2);
  spec.base.a = kv.get_num("a", 0.5);
  if (!(spec.base.a > 1.0 / 3.0 && spec.base.a < 1.0))
    throw config_error("config key 'a' must lie in the admissible interval "
                       "(1/3, 1); got " + std::to_string(spec.base.a));
  spec.base.delta = kv.get_num("delta", 0.2);
  spec.base.nx = kv.get_int("nx", 800);
  spec.base.cfl = kv.get_num("cfl", 0.4);
  spec.base.t_end = kv.get_num("t_end", 1.0);
  spec.base.snapshots = kv.get_int("snapshots", 9);
  spec.base.x_lo = kv.get_num("domain.lo", 0.0);
  spec.base.x_hi = kv.get_num("domain.hi", 0.0);
  spec.base.collision.gamma = kv.get_num("gamma", -3.0);
  spec.base.collision.validate();
  spec.base.em_coupling = kv.get_bool("em_coupling", true);
  spec.base.sigma_drag = kv.get_bool("sigma_drag", true);
  spec.base.seed.n_amp = kv.get_num("seedpert.n_amp", 0.0);
  spec.base.seed.em_amp = kv.get_num("seedpert.em_amp", 0.0);
  spec.base.seed.center = kv.get_num("seedpert.center", 0.0);
  spec.base.seed.width = kv.get_num("seedpert.width", 1.0);

  spec.sweep_parameter = kv.get_str("sweep.parameter", "epsilon");
  spec.sweep_values = kv.get_list(
      "sweep.values", {4e-2, 2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3});
  spec.couple_delta = kv.get_bool("sweep.couple_delta", true);
  if (spec.mode == Mode::sweep) {
    if (spec.sweep_values.size() < 4)
      throw config_error("sweep.values: need at least 4 values");
    for (double v : spec.sweep_values)
      if (!(v > 0.0)) throw config_error("sweep.values must be positive");
    std::vector<double> sorted = spec.sweep_values;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    if (sorted != spec.sweep_values)
      throw config_error("sweep.values must be sorted (descending)");
  }

  auto nlist = kv.get_list("collision.n_list", {13, 17, 25});
  spec.grid_n_list.clear();
  for (double v : nlist) spec.grid_n_list.push_back(static_cast<int>(v));
  spec.burnett_n = kv.get_int("burnett.n", 25);
  spec.theta_list = kv.get_list("burnett.theta_list", {1.2, 1.5, 1.8});

  spec.diag.x_stride = kv.get_int("diag.x_stride", 0);
  spec.diag.n_diag = kv.get_int("diag.n", 17);
  spec.diag.n_ref = kv.get_int("diag.n_ref", 17);
  spec.diag.beta_blocks = kv.get_bool("diag.beta_blocks", false);
  spec.diag.h_min_fan = kv.get_num("diag.h_min_fan", 0.05);
  spec.diag.weight.l = kv.get_int("weight.l", 2);
  spec.diag.weight.q2 = kv.get_num("weight.q2", 0.25);
  double q1_def = q1_recipe(spec.base.eps, spec.base.a, spec.base.delta,
                            spec.base.t_end, spec.diag.weight.q2);
  spec.diag.weight.q1 = kv.get_num("weight.q1", q1_def);
  spec.diag.weight.validate();
  spec.energy_report = kv.get_bool("diag.energy_report", true);

  spec.seed = static_cast<unsigned long long>(kv.get_num("seed", 12345));
  spec.transport = kv.get_str("fluid.transport", "table");
  if (spec.transport != "table" && spec.transport != "constant")
    throw config_error("fluid.transport must be 'table' or 'constant'");
  spec.table_n = kv.get_int("fluid.table_n", 21);
  spec.table_knots = kv.get_int("fluid.table_knots", 4);
  spec.const_kappa1 = kv.get_num("fluid.kappa1", 0.0);
  spec.const_kappa2 = kv.get_num("fluid.kappa2", 0.0);
  spec.const_sigma = kv.get_num("fluid.sigma", 0.0);

  kv.check_all_consumed();
  spec.echo = kv.echo();
  return spec;
}

}  // namespace vml
