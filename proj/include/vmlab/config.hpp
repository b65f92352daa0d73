#ifndef VMLAB_CONFIG_HPP
#define VMLAB_CONFIG_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vmlab/diagnostics.hpp"

namespace vml {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { wave, burgers, collision_test, burnett, fluid_run, sweep };

std::string mode_name(Mode m);

/// Flat `key = value` configuration document: `#` comments, dotted keys.
/// Typed getters record every effective value (explicit or default) for the
/// manifest echo; unparsed keys are hard errors with a nearest-match hint.
class KeyValues {
 public:
  static KeyValues parse(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  double get_num(const std::string& key, double def);
  double require_num(const std::string& key);
  int get_int(const std::string& key, int def);
  bool get_bool(const std::string& key, bool def);
  std::string get_str(const std::string& key, const std::string& def);
  std::vector<double> get_list(const std::string& key, const std::vector<double>& def);

  void check_all_consumed() const;
  const std::map<std::string, std::string>& echo() const { return echo_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> line_of_;
  std::set<std::string> consumed_;
  std::map<std::string, std::string> echo_;
};

struct ExperimentSpec {
  std::string name = "experiment";
  Mode mode = Mode::wave;
  RunConfig base;
  // sweep
  std::string sweep_parameter = "epsilon";
  std::vector<double> sweep_values;
  bool couple_delta = true;  // Theorem-recipe delta(eps) coupling in sweeps
  // kinetic modes
  std::vector<int> grid_n_list{13, 17, 25};
  int burnett_n = 25;
  std::vector<double> theta_list{1.2, 1.5, 1.8};
  // diagnostics
  DiagOptions diag;
  bool energy_report = true;
  unsigned long long seed = 12345;
  // transport closure for fluid runs
  std::string transport = "table";  // or "constant"
  int table_n = 21;
  int table_knots = 4;
  double const_kappa1 = 0.0, const_kappa2 = 0.0, const_sigma = 0.0;

  std::map<std::string, std::string> echo;  // every effective knob
};

/// Parse and validate a configuration document into an ExperimentSpec.
ExperimentSpec parse_config(const std::string& text);

}  // namespace vml

#endif
