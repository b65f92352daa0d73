#ifndef VMLAB_HARNESS_HPP
#define VMLAB_HARNESS_HPP

#include <string>
#include <vector>

#include "vmlab/config.hpp"
#include "vmlab/diagnostics.hpp"
#include "vmlab/outputs.hpp"

namespace vml {

inline constexpr const char* kCodeVersion = "vmlab 1.0.0";
inline constexpr const char* kOutputRootEnv = "VMLAB_OUT";

struct Verdict {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct Manifest {
  std::string name;
  std::string mode;
  std::string config_hash;
  std::vector<Verdict> verdicts;
  std::vector<std::pair<std::string, std::string>> artifacts;  // (file, hash)
  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

struct RunOptions {
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};  // may include "svg"
  int threads = 1;
  unsigned long long seed_override = 0;  // 0 = use spec seed
};

/// Execute a parsed experiment; writes the artifact bundle (CSV/JSON/SVG +
/// manifest.json; wall time goes to timing.json, which is not part of the
/// reproducible bundle) and returns the manifest.
Manifest run_experiment(const ExperimentSpec& spec, const std::string& raw_config,
                        const RunOptions& opt);

/// Per-epsilon wave-error sweep with the delta(eps) coupling and rate fit.
struct SweepResult {
  std::vector<double> eps, delta, err;
  RateFit fit;
  double target_exponent = 0.0;
  bool monotone = false;
  bool pass = false;
};
SweepResult sweep_epsilon(const ExperimentSpec& spec, const RunOptions& opt,
                          std::vector<Verdict>* verdicts,
                          const std::function<double(double, double)>& error_source =
                              nullptr);

/// Shared transport table for fluid modes (built once per call signature).
std::shared_ptr<const TransportTable> make_transport_table(const ExperimentSpec& spec);

/// Smoothed-wave theta range helper for table knots.
std::pair<double, double> wave_theta_range(const RiemannData& d);

std::string manifest_json(const Manifest& m, const std::map<std::string, std::string>& echo);

}  // namespace vml

#endif
