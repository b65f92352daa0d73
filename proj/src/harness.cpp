#include "vmlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <random>

#include "json.hpp"

namespace vml {

namespace fs = std::filesystem;
using njson = nlohmann::ordered_json;

std::pair<double, double> wave_theta_range(const RiemannData& d) {
  double lo = std::min(d.left.theta, d.right.theta);
  double hi = std::max(d.left.theta, d.right.theta);
  return {lo, hi};
}

std::shared_ptr<const TransportTable> make_transport_table(const ExperimentSpec& spec) {
  if (spec.transport == "constant") {
    double k1 = spec.const_kappa1, k2 = spec.const_kappa2, sg = spec.const_sigma;
    if (k1 <= 0.0 || k2 <= 0.0 || sg <= 0.0) {
      // freeze the reference-profile values at the mid temperature
      auto ref = ReferenceProfiles::shared(spec.table_n, spec.base.collision);
      auto [lo, hi] = wave_theta_range(spec.base.data);
      double mid = 0.5 * (lo + hi);
      k1 = ref->kappa1(mid);
      k2 = ref->kappa2(mid);
      sg = ref->sigma(mid);
    }
    return std::make_shared<TransportTable>(TransportTable::constant(k1, k2, sg));
  }
  auto [lo, hi] = wave_theta_range(spec.base.data);
  lo *= 0.92;
  hi *= 1.08;
  int m = std::max(2, spec.table_knots);
  std::vector<double> knots;
  for (int i = 0; i < m; ++i) knots.push_back(lo + (hi - lo) * i / (m - 1));
  return std::make_shared<TransportTable>(
      TransportTable::build(spec.base.collision, knots, spec.table_n));
}

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void add_artifact(Manifest& m, const std::string& path) {
  m.artifacts.emplace_back(fs::path(path).filename().string(),
                           hex64(fnv1a_file(path)));
}

// deterministic smooth random fields for the property checks
struct SmoothFieldGen {
  std::mt19937_64 rng;
  explicit SmoothFieldGen(unsigned long long seed) : rng(seed) {}

  // analytic, grid-independent sample: sum of modulated Gaussians
  std::function<double(const Vec3&)> positive_sample() {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<std::array<double, 5>> comps;
    for (int k = 0; k < 3; ++k)
      comps.push_back({0.3 * U(rng), U(rng), U(rng), U(rng), 0.8 + 0.4 * std::abs(U(rng))});
    return [comps](const Vec3& v) {
      double mu = std::pow(2.0 * 3.14159265358979323846, -1.5) *
                  std::exp(-0.5 * dot(v, v));
      double mod = 1.2;
      for (const auto& c : comps)
        mod += c[0] * std::sin(c[1] * v[0] + c[2] * v[1] + c[3] * v[2]) *
               std::exp(-0.5 * dot(v, v) * (c[4] - 0.8));
      return mu * mod;
    };
  }

  std::function<double(const Vec3&)> signed_sample() {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<std::array<double, 5>> comps;
    for (int k = 0; k < 4; ++k)
      comps.push_back({U(rng), 1.5 * U(rng), 1.5 * U(rng), 1.5 * U(rng),
                       0.35 + 0.3 * std::abs(U(rng))});
    return [comps](const Vec3& v) {
      double acc = 0.0;
      for (const auto& c : comps)
        acc += c[0] * std::cos(c[1] * v[0] + c[2] * v[1] + c[3] * v[2]) *
               std::exp(-c[4] * dot(v, v));
      return acc;
    };
  }
};

KineticField sample_field(const VelocityGrid& g,
                          const std::function<double(const Vec3&)>& f) {
  KineticField out(g);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.node(i));
  return out;
}

// ---------------------------------------------------------------------------
// wave mode

void run_wave_mode(const ExperimentSpec& spec, const RunOptions& opt, Manifest& man) {
  WaveProfile wave(spec.base.data, spec.base.delta, WaveKind::smoothed);
  bool csv = std::count(opt.formats.begin(), opt.formats.end(), "csv") > 0;
  bool svg = std::count(opt.formats.begin(), opt.formats.end(), "svg") > 0;

  // profile CSV at a few times
  if (csv) {
    CsvWriter w(join_path(opt.out_dir, "wave_profile.csv"),
                {"t", "x", "rho_smooth", "u1_smooth", "theta_smooth", "rho_fan",
                 "u1_fan", "theta_fan"});
    for (double t : {1.0, 10.0, 100.0}) {
      double lo = wave.w_minus * t - 20.0 * spec.base.delta - 2.0;
      double hi = wave.w_plus * t + 20.0 * spec.base.delta + 2.0;
      for (int i = 0; i <= 400; ++i) {
        double x = lo + (hi - lo) * i / 400.0;
        GasState s = smooth_wave_state(wave, t, x);
        GasState f = exact_fan_3(spec.base.data, x / t);
        w.row({t, x, s.rho, s.u[0], s.theta, f.rho, f.u[0], f.theta});
      }
    }
    w.close();
    add_artifact(man, join_path(opt.out_dir, "wave_profile.csv"));
  }

  // Lemma-decay table over two decades
  std::vector<double> times;
  for (int i = 0; i <= 16; ++i) times.push_back(10.0 * std::pow(10.0, 2.0 * i / 16.0));
  const double inf = std::numeric_limits<double>::infinity();
  DecayReport rep = decay_report(wave, times, {1.0, 2.0, inf});
  if (csv) {
    CsvWriter w(join_path(opt.out_dir, "wave_decay.csv"),
                {"t", "p", "order", "norm", "bound"});
    for (const auto& r : rep.rows)
      w.row({r.t, std::isinf(r.p) ? -1.0 : r.p, static_cast<double>(r.order), r.norm,
             r.bound});
    w.close();
    add_artifact(man, join_path(opt.out_dir, "wave_decay.csv"));
  }
  for (std::size_t i = 0; i < rep.fits.size(); ++i) {
    if (rep.orders[i] != 1) continue;
    double p = rep.p_values[i];
    double expect = std::isinf(p) ? -1.0 : -1.0 + 1.0 / p;
    Verdict v;
    v.name = "decay_exponent_p" + (std::isinf(p) ? std::string("inf")
                                                 : std::to_string(static_cast<int>(p)));
    v.value = rep.fits[i].exponent;
    v.threshold = 0.05;
    v.pass = std::abs(rep.fits[i].exponent - expect) <= 0.05;
    man.verdicts.push_back(v);
  }

  // fan-approach ratio over t and delta
  std::vector<double> deltas{0.05, 0.1, 0.2, 0.4};
  if (csv) {
    CsvWriter w(join_path(opt.out_dir, "wave_fan_distance.csv"),
                {"delta", "t", "distance", "ratio"});
    double worst = 0.0;
    bool tail_ok = true;
    for (double dl : deltas) {
      WaveProfile wp(spec.base.data, dl, WaveKind::smoothed);
      double prev_ratio = 0.0;
      for (int i = 0; i <= 12; ++i) {
        double t = std::pow(10.0, 3.0 * i / 12.0);
        double d = fan_distance(wp, t);
        double ratio = d * t / (dl * (std::log1p(t) + std::abs(std::log(dl))));
        w.row({dl, t, d, ratio});
        worst = std::max(worst, ratio);
        if (i == 12 && ratio > 1.05 * worst) tail_ok = false;
        prev_ratio = ratio;
      }
      (void)prev_ratio;
    }
    w.close();
    add_artifact(man, join_path(opt.out_dir, "wave_fan_distance.csv"));
    Verdict v;
    v.name = "fan_ratio_bounded";
    v.value = worst;
    v.pass = std::isfinite(worst) && tail_ok;
    man.verdicts.push_back(v);
  }

  if (svg) {
    PlotSeries s1;
    s1.label = "||dx u1||_inf";
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
      if (std::isinf(rep.rows[i].p) && rep.rows[i].order == 1) {
        s1.x.push_back(rep.rows[i].t);
        s1.y.push_back(rep.rows[i].norm);
      }
    write_svg_plot(join_path(opt.out_dir, "wave_decay.svg"), "smoothed-wave decay",
                   {s1}, true);
    add_artifact(man, join_path(opt.out_dir, "wave_decay.svg"));
  }
}

// ---------------------------------------------------------------------------
// burgers mode

void run_burgers_mode(const ExperimentSpec& spec, const RunOptions& opt,
                      Manifest& man) {
  WaveProfile wave(spec.base.data, spec.base.delta, WaveKind::smoothed);
  bool csv = std::count(opt.formats.begin(), opt.formats.end(), "csv") > 0;
  double worst_res = 0.0;
  if (csv) {
    CsvWriter w(join_path(opt.out_dir, "burgers_solution.csv"),
                {"t", "x", "w", "x0", "wx", "residual"});
    for (double t : {0.0, 1.0, 5.0, 25.0}) {
      for (int i = 0; i <= 300; ++i) {
        double x = (wave.w_minus - 1.0) * t - 10.0 * spec.base.delta +
                   ((wave.w_plus + 1.0) * t + 20.0 * spec.base.delta) * i / 300.0;
        CharSolution c =
            solve_characteristics(wave.w_minus, wave.w_plus, spec.base.delta, t, x);
        double res = std::abs(x - c.x0 - c.w * t);
        worst_res = std::max(worst_res, res / (1.0 + std::abs(x)));
        w.row({t, x, c.w, c.x0, c.wx, res});
      }
    }
    w.close();
    add_artifact(man, join_path(opt.out_dir, "burgers_solution.csv"));
  }
  Verdict v;
  v.name = "characteristics_residual";
  v.value = worst_res;
  v.threshold = 1e-11;
  v.pass = worst_res <= 1e-11;
  man.verdicts.push_back(v);
}

// ---------------------------------------------------------------------------
// collision-test mode

void run_collision_mode(const ExperimentSpec& spec, const RunOptions& opt,
                        Manifest& man, njson& extra) {
  CollisionParams params = spec.base.collision;
  unsigned long long seed = opt.seed_override ? opt.seed_override : spec.seed;
  SmoothFieldGen gen(seed);
  auto sample = gen.positive_sample();

  njson table = njson::array();
  std::vector<double> hs, mom_res, en_res;
  double mass_worst = 0.0;
  for (int n : spec.grid_n_list) {
    VelocityGrid g(n, 8.0);
    auto eng = LandauEngine::shared(g, params);
    KineticField f = sample_field(g, sample);
    KineticField q = collide(f, f, *eng);
    Moments m = moments(q);
    double scale = field_l2(q) + 1e-300;
    double mass = std::abs(m.rho) / (field_l2(f) * std::sqrt(g.cell_volume()) + 1e-300);
    double mom = std::sqrt(dot(m.momentum, m.momentum));
    double en = std::abs(m.energy);
    KineticField qmu = collide(eng->mu(), eng->mu(), *eng);
    double mu_res = field_l2(qmu);
    njson row;
    row["n"] = n;
    row["h"] = g.h();
    row["mass_residual"] = mass;
    row["momentum_residual"] = mom;
    row["energy_residual"] = en;
    row["q_mu_mu_l2"] = mu_res;
    table.push_back(row);
    hs.push_back(g.h());
    mom_res.push_back(mom);
    en_res.push_back(en);
    mass_worst = std::max(mass_worst, mass);
    (void)scale;
  }
  extra["gamma"] = params.gamma;
  extra["vmax"] = 8.0;
  extra["refinement_table"] = table;

  Verdict vm;
  vm.name = "mass_conservation";
  vm.value = mass_worst;
  vm.threshold = 1e-12;
  vm.pass = mass_worst <= 1e-12;
  man.verdicts.push_back(vm);

  if (hs.size() >= 2) {
    auto order = [&](const std::vector<double>& r) {
      double o = std::log(r.front() / r.back()) / std::log(hs.front() / hs.back());
      return o;
    };
    Verdict vo;
    vo.name = "momentum_energy_order";
    vo.value = std::min(order(mom_res), order(en_res));
    vo.threshold = 1.8;
    vo.pass = vo.value >= 1.8;
    man.verdicts.push_back(vo);
  }

  // H-theorem sign on random positive fields at the mid grid
  {
    VelocityGrid g(spec.grid_n_list[spec.grid_n_list.size() / 2], 8.0);
    auto eng = LandauEngine::shared(g, params);
    double worst = -1e300;
    for (int k = 0; k < 20; ++k) {
      KineticField f = sample_field(g, gen.positive_sample());
      KineticField q = collide(f, f, *eng);
      double acc = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) acc += q[i] * std::log(f[i]);
      acc *= g.cell_volume();
      worst = std::max(worst, acc / (field_l2(q) + 1e-300));
    }
    Verdict vh;
    vh.name = "h_theorem_sign";
    vh.value = worst;
    vh.threshold = 1e-6;
    vh.pass = worst <= 1e-6;
    man.verdicts.push_back(vh);
  }
}

// ---------------------------------------------------------------------------
// burnett mode

void run_burnett_mode(const ExperimentSpec& spec, const RunOptions& opt, Manifest& man,
                      njson& extra) {
  CollisionParams params = spec.base.collision;
  njson rows = njson::array();
  bool all_pos = true;
  for (double th : spec.theta_list) {
    TransportCoeffs c = transport_coefficients(th, spec.burnett_n, params);
    njson r;
    r["theta"] = th;
    r["kappa1"] = c.kappa1;
    r["kappa2"] = c.kappa2;
    r["sigma_theta"] = c.sigma_theta;
    r["offdiag_max"] = c.offdiag_max;
    rows.push_back(r);
    all_pos = all_pos && c.kappa1 > 0.0 && c.kappa2 > 0.0 && c.sigma_theta > 0.0;
  }
  extra["gamma"] = params.gamma;
  extra["n"] = spec.burnett_n;
  extra["vmax_rule"] = "8 sqrt(R theta)";
  extra["transport"] = rows;
  Verdict v;
  v.name = "transport_positive";
  v.pass = all_pos;
  v.value = all_pos ? 1.0 : 0.0;
  man.verdicts.push_back(v);
  (void)opt;
}

// ---------------------------------------------------------------------------
// fluid-run mode

void write_snapshot_csv(const std::string& path, const FluidSolver::History& h,
                        Manifest& man) {
  CsvWriter w(path, {"t", "x", "rho", "u1", "u2", "u3", "theta", "n", "E1", "E2",
                     "E3", "B2", "B3"});
  for (const auto& s : h.snapshots)
    for (int i = 0; i < s.nx; ++i)
      w.row({s.time, s.x_center(i), s.rho[i], s.u1(i), s.u2(i), s.u3(i), s.theta(i),
             s.n[i], s.e1_center(i), s.e2[i], s.e3[i], s.b2[i], s.b3[i]});
  w.close();
  add_artifact(man, path);
}

void write_energy_csv(const std::string& path, const EnergyReport& rep, Manifest& man) {
  CsvWriter w(path, {"tau", "t", "E_tilde", "E_scaled", "D", "F_omega",
                     "entropy_integral", "gauss_residual", "fluid_sup_smoothed",
                     "fluid_sup_fan", "micro_f1", "micro_f2", "eb_sup"});
  for (const auto& r : rep.rows)
    w.row({r.tau, r.t, r.e_tilde, r.e_scaled, r.dissipation, r.f_omega,
           r.entropy_integral, r.gauss_residual, r.err_smoothed.fluid_sup,
           r.err_fan ? r.err_fan->fluid_sup : -1.0, r.err_smoothed.micro_f1,
           r.err_smoothed.micro_f2, r.err_smoothed.eb_sup});
  w.close();
  add_artifact(man, path);
}

void run_fluid_mode(const ExperimentSpec& spec, const RunOptions& opt, Manifest& man,
                    njson& extra) {
  auto table = make_transport_table(spec);
  FluidSolver solver(spec.base, table);
  FluidSolver::History h = solver.run();

  bool csv = std::count(opt.formats.begin(), opt.formats.end(), "csv") > 0;
  if (csv) write_snapshot_csv(join_path(opt.out_dir, "snapshots.csv"), h, man);

  double gauss0 = FluidSolver::gauss_residual(h.snapshots.front());
  double gauss_worst = 0.0;
  double rho_min = 1e300, theta_min = 1e300;
  for (const auto& s : h.snapshots) {
    gauss_worst = std::max(gauss_worst, FluidSolver::gauss_residual(s));
    for (int i = 0; i < s.nx; ++i) {
      rho_min = std::min(rho_min, s.rho[i]);
      theta_min = std::min(theta_min, s.theta(i));
    }
  }
  double gauss_floor = std::max(1e-12, 10.0 * gauss0);
  Verdict vg;
  vg.name = "gauss_residual";
  vg.value = gauss_worst;
  vg.threshold = gauss_floor;
  vg.pass = gauss_worst <= gauss_floor;
  man.verdicts.push_back(vg);
  Verdict vp;
  vp.name = "positivity";
  vp.value = std::min(rho_min, theta_min);
  vp.pass = rho_min > 0.0 && theta_min > 0.0;
  man.verdicts.push_back(vp);

  extra["invariant_maxima"]["gauss_residual"] = gauss_worst;
  extra["invariant_maxima"]["rho_min"] = rho_min;
  extra["invariant_maxima"]["theta_min"] = theta_min;

  if (spec.energy_report) {
    EnergyReport rep = energy_functionals(h, spec.diag);
    if (csv) write_energy_csv(join_path(opt.out_dir, "energy.csv"), rep, man);
    double et_max = 0.0;
    bool finite = true;
    for (const auto& r : rep.rows) {
      et_max = std::max(et_max, r.e_tilde);
      finite = finite && std::isfinite(r.e_tilde) && std::isfinite(r.dissipation);
    }
    extra["invariant_maxima"]["E_tilde_max"] = et_max;
    Verdict ve;
    ve.name = "energy_finite";
    ve.value = et_max;
    ve.pass = finite;
    man.verdicts.push_back(ve);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// sweep

SweepResult sweep_epsilon(const ExperimentSpec& spec, const RunOptions& opt,
                          std::vector<Verdict>* verdicts,
                          const std::function<double(double, double)>& error_source) {
  SweepResult res;
  const double a = spec.base.a;
  const double T = spec.base.t_end;
  double e1 = (1.0 - a) / 5.0, e2 = (3.0 * a - 1.0) / 5.0;
  res.target_exponent = std::min(e1, e2);

  std::vector<double> eps_list = spec.sweep_values;  // descending
  if (eps_list.size() < 4) throw domain_error("sweep: need >= 4 epsilon values");
  double decades = std::log10(eps_list.front() / eps_list.back());
  if (decades < 1.5 - 1e-12)
    throw domain_error("sweep: epsilon values must span >= 1.5 decades");

  auto delta_of = [&](double eps) {
    if (!spec.couple_delta) return spec.base.delta;
    return std::pow(1.0 + T, 0.4) *
           std::max(std::pow(eps, e1), std::pow(eps, e2));
  };

  // fixed domain across the sweep (largest delta governs)
  RunConfig domain_cfg = spec.base;
  domain_cfg.delta = delta_of(eps_list.front());
  auto_domain(domain_cfg);

  std::shared_ptr<const TransportTable> table;
  if (!error_source) table = make_transport_table(spec);

  auto run_one = [&](double eps) -> double {
    if (error_source) return error_source(eps, delta_of(eps));
    RunConfig cfg = spec.base;
    cfg.eps = eps;
    cfg.delta = delta_of(eps);
    cfg.x_lo = domain_cfg.x_lo;
    cfg.x_hi = domain_cfg.x_hi;
    FluidSolver solver(cfg, table);
    FluidSolver::History h = solver.run();
    WaveProfile fan(cfg.data, cfg.delta, WaveKind::smoothed);
    double theta_max = 0.0, u_max = 0.0;
    for (const auto& s : h.snapshots)
      for (int i = 0; i < s.nx; ++i) {
        theta_max = std::max(theta_max, s.theta(i));
        u_max = std::max(u_max, std::abs(s.u1(i)));
      }
    ClosureContext ctx(cfg, spec.diag, theta_max, u_max);
    double worst = 0.0;
    for (const auto& s : h.snapshots) {
      if (s.time < spec.diag.h_min_fan) continue;
      WaveProfile fanref = fan;
      fanref.kind = WaveKind::exact_fan;
      WaveError we = wave_error(s, fanref, ctx, WaveReference::exact_fan);
      worst = std::max(worst, we.micro_f1 + we.micro_f2 + we.eb_sup);
    }
    return worst;
  };

  std::vector<std::future<double>> futs;
  int threads = std::max(1, opt.threads);
  if (threads > 1 && !error_source) {
    for (double eps : eps_list)
      futs.push_back(std::async(std::launch::async, run_one, eps));
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
      res.eps.push_back(eps_list[i]);
      res.delta.push_back(delta_of(eps_list[i]));
      res.err.push_back(futs[i].get());
    }
  } else {
    for (double eps : eps_list) {
      res.eps.push_back(eps);
      res.delta.push_back(delta_of(eps));
      res.err.push_back(run_one(eps));
    }
  }

  res.fit = rate_fit(res.eps, res.err);
  res.monotone = true;
  for (std::size_t i = 0; i + 1 < res.err.size(); ++i)
    if (!(res.err[i] >= res.err[i + 1])) res.monotone = false;  // eps descending
  res.pass = res.fit.exponent >= 0.8 * res.target_exponent && res.monotone &&
             res.fit.r_squared >= 0.9;

  if (verdicts) {
    Verdict v1{"sweep_exponent", res.fit.exponent >= 0.8 * res.target_exponent,
               res.fit.exponent, 0.8 * res.target_exponent, ""};
    Verdict v2{"sweep_monotone", res.monotone, res.monotone ? 1.0 : 0.0, 1.0, ""};
    Verdict v3{"sweep_r_squared", res.fit.r_squared >= 0.9, res.fit.r_squared, 0.9, ""};
    verdicts->push_back(v1);
    verdicts->push_back(v2);
    verdicts->push_back(v3);
  }
  return res;
}

// ---------------------------------------------------------------------------

std::string manifest_json(const Manifest& m,
                          const std::map<std::string, std::string>& echo) {
  njson j;
  j["name"] = m.name;
  j["mode"] = m.mode;
  j["code_version"] = kCodeVersion;
  j["config_hash"] = m.config_hash;
  njson cfg = njson::object();
  for (const auto& [k, v] : echo) cfg[k] = v;
  j["config"] = cfg;
  njson verdicts = njson::array();
  for (const auto& v : m.verdicts) {
    njson jv;
    jv["name"] = v.name;
    jv["pass"] = v.pass;
    jv["value"] = v.value;
    jv["threshold"] = v.threshold;
    if (!v.note.empty()) jv["note"] = v.note;
    verdicts.push_back(jv);
  }
  j["verdicts"] = verdicts;
  njson arts = njson::array();
  for (const auto& [f, hash] : m.artifacts) {
    njson ja;
    ja["file"] = f;
    ja["fnv1a"] = hash;
    arts.push_back(ja);
  }
  j["artifacts"] = arts;
  j["all_pass"] = m.all_pass();
  return j.dump(2) + "\n";
}

Manifest run_experiment(const ExperimentSpec& spec, const std::string& raw_config,
                        const RunOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(opt.out_dir);
  Manifest man;
  man.name = spec.name;
  man.mode = mode_name(spec.mode);
  man.config_hash = hex64(fnv1a(raw_config));

  njson extra;
  switch (spec.mode) {
    case Mode::wave: run_wave_mode(spec, opt, man); break;
    case Mode::burgers: run_burgers_mode(spec, opt, man); break;
    case Mode::collision_test: run_collision_mode(spec, opt, man, extra); break;
    case Mode::burnett: run_burnett_mode(spec, opt, man, extra); break;
    case Mode::fluid_run: run_fluid_mode(spec, opt, man, extra); break;
    case Mode::sweep: {
      SweepResult res = sweep_epsilon(spec, opt, &man.verdicts, nullptr);
      bool csv = std::count(opt.formats.begin(), opt.formats.end(), "csv") > 0;
      if (csv) {
        CsvWriter w(join_path(opt.out_dir, "sweep.csv"),
                    {"epsilon", "delta", "error"});
        for (std::size_t i = 0; i < res.eps.size(); ++i)
          w.row({res.eps[i], res.delta[i], res.err[i]});
        w.close();
        add_artifact(man, join_path(opt.out_dir, "sweep.csv"));
      }
      extra["rate_fit"]["exponent"] = res.fit.exponent;
      extra["rate_fit"]["r_squared"] = res.fit.r_squared;
      extra["rate_fit"]["target_exponent"] = res.target_exponent;
      if (std::count(opt.formats.begin(), opt.formats.end(), "svg") > 0) {
        PlotSeries data{"measured error", res.eps, res.err, true};
        PlotSeries fit{"fitted line", {}, {}, true};
        for (double e : res.eps) {
          fit.x.push_back(e);
          fit.y.push_back(std::exp(res.fit.intercept) *
                          std::pow(e, res.fit.exponent));
        }
        write_svg_plot(join_path(opt.out_dir, "sweep.svg"), "error vs epsilon",
                       {data, fit}, true);
        add_artifact(man, join_path(opt.out_dir, "sweep.svg"));
      }
      break;
    }
  }

  bool json = std::count(opt.formats.begin(), opt.formats.end(), "json") > 0;
  if (json && !extra.is_null()) {
    std::string p = join_path(opt.out_dir, "summary.json");
    write_text_file(p, extra.dump(2) + "\n");
    add_artifact(man, p);
  }

  write_text_file(join_path(opt.out_dir, "manifest.json"),
                  manifest_json(man, spec.echo));

  auto t1 = std::chrono::steady_clock::now();
  njson timing;
  timing["wall_time_seconds"] =
      std::chrono::duration<double>(t1 - t0).count();
  timing["note"] = "timing.json is excluded from the reproducible bundle";
  write_text_file(join_path(opt.out_dir, "timing.json"), timing.dump(2) + "\n");
  return man;
}

}  // namespace vml
