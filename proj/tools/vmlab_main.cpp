// vmlab: numerical laboratory for rarefaction waves of a two-fluid
// Navier-Stokes-Maxwell closure with Landau-collision transport coefficients.
//
// Subcommands: wave, burgers, collision-test, burnett, fluid-run, sweep.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "vmlab/harness.hpp"

namespace {

int run_mode(const std::string& forced_mode, const std::string& config_path,
             const vml::RunOptions& opt) {
  std::string text = config_path.empty() ? std::string("mode = " + forced_mode)
                                         : vml::read_text_file(config_path);
  vml::ExperimentSpec spec = vml::parse_config(text);
  if (!forced_mode.empty() && vml::mode_name(spec.mode) != forced_mode) {
    if (!config_path.empty() && text.find("mode") != std::string::npos &&
        vml::mode_name(spec.mode) != forced_mode) {
      std::cerr << "config mode '" << vml::mode_name(spec.mode)
                << "' does not match subcommand '" << forced_mode << "'\n";
      return 2;
    }
  }
  vml::Manifest man = vml::run_experiment(spec, text, opt);
  for (const auto& v : man.verdicts)
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << " value=" << v.value
              << (v.threshold != 0.0 ? " threshold=" + std::to_string(v.threshold) : "")
              << "\n";
  std::cout << (man.all_pass() ? "OK" : "FAILED") << ": bundle in " << opt.out_dir
            << "\n";
  return man.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vmlab - rarefaction-wave / kinetic-closure laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  vml::RunOptions opt;
  if (const char* env = std::getenv(vml::kOutputRootEnv)) opt.out_dir = env;
  std::string formats = "csv,json";
  int threads = 1;
  unsigned long long seed = 0;

  app.add_option("--config", config_path, "configuration file (key = value lines)");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--formats", formats, "comma list: csv,json,svg");
  app.add_option("--threads", threads, "worker threads for sweeps");
  app.add_option("--seed", seed, "override the property-check seed");

  const char* names[] = {"wave", "burgers", "collision-test", "burnett",
                         "fluid-run", "sweep"};
  for (const char* n : names) app.add_subcommand(n, n)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  opt.formats.clear();
  std::string tok;
  for (char c : formats + ",") {
    if (c == ',') {
      if (!tok.empty()) opt.formats.push_back(tok);
      tok.clear();
    } else {
      tok += c;
    }
  }
  opt.threads = threads;
  opt.seed_override = seed;

  std::string mode;
  for (const char* n : names)
    if (app.get_subcommand(n)->parsed()) mode = n;

  try {
    return run_mode(mode, config_path, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
