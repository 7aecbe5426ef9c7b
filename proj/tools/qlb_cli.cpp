// qlb: command-line front end for the kinetic-theory toolkit.
//
// Subcommands: coefficients, relax, fp, qlbe, rates.  Configuration comes
// from a flat key=value file (--config), overridden by repeatable --set
// key=value flags and the --seed/--workers shortcuts.  Every run writes a
// fully resolved config echo and a JSON run summary next to its outputs, so
// re-running on the echo reproduces the outputs byte-identically.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric-tolerance failure.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qlb/diffusive.hpp"
#include "qlb/errors.hpp"
#include "qlb/io.hpp"
#include "qlb/moments.hpp"
#include "qlb/qlbe_grid.hpp"
#include "qlb/rates.hpp"
#include "qlb/trajectories.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qlb;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  long seed = -1;     // -1: keep config value
  long workers = -1;  // -1: keep config value
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "key=value config file");
  cmd->add_option("--out", a.out_dir, "output directory (created if missing)");
  cmd->add_option("--seed", a.seed, "override mc.seed");
  cmd->add_option("--workers", a.workers, "override run.workers (0 = hardware)");
  cmd->add_option("--set", a.overrides, "override any config key, e.g. --set gas.m=0.5");
}

Config load_config(const CommonArgs& a) {
  Config c = a.config_path.empty() ? Config::from_text("", "<defaults>")
                                   : Config::from_file(a.config_path);
  for (const std::string& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size())
      throw ConfigError("--set expects key=value, got: " + kv);
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.seed >= 0) c.set("mc.seed", std::to_string(a.seed));
  if (a.workers >= 0) c.set("run.workers", std::to_string(a.workers));
  return c;
}

PhysicalParams read_params(Config& c) {
  PhysicalParams par;
  par.m = c.get_double("gas.m", 1.0);
  par.M = c.get_double("gas.M", 1.0);
  par.T = c.get_double("gas.T", 1.0);
  par.n_gas = c.get_double("gas.n", 1.0);
  par.sigma_tot = c.get_double("gas.sigma", 1.0);
  par.hbar = c.get_double("gas.hbar", 1.0);
  try {
    par.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return par;
}

// Writes the config echo and the JSON run summary; every command ends here.
void finalize_run(const std::string& command, Config& cfg, const fs::path& out,
                  json& summary, std::vector<std::string> outputs) {
  cfg.finish();
  const fs::path echo_path = out / "config_echo.txt";
  {
    std::ofstream f(echo_path);
    for (const auto& [k, v] : cfg.resolved()) f << k << " = " << v << '\n';
    if (!f) throw ConfigError("write failure: " + echo_path.string());
  }
  outputs.push_back(echo_path.filename().string());
  json echo = json::object();
  for (const auto& [k, v] : cfg.resolved()) echo[k] = v;
  summary["command"] = command;
  summary["config"] = echo;
  summary["outputs"] = outputs;
  std::ofstream f(out / "run_summary.json");
  f << summary.dump(2) << '\n';
  if (!f) throw ConfigError("write failure: " + (out / "run_summary.json").string());
}

int cmd_coefficients(const CommonArgs& args) {
  Config cfg = load_config(args);
  const PhysicalParams par = read_params(cfg);
  const fs::path out = fs::path(args.out_dir);
  fs::create_directories(out);

  const DiffusionCoefficients c = coefficients(par);
  const double eta_quad = eta_by_quadrature(par);
  const double ratio =
      c.eta > 0 ? 16.0 * c.D_pp * c.D_xx / (c.eta * c.eta * par.hbar * par.hbar) : 0.0;

  std::printf("eta_closed_form = %.17g\n", c.eta);
  std::printf("eta_quadrature = %.17g\n", eta_quad);
  std::printf("D_pp = %.17g\n", c.D_pp);
  std::printf("D_xx = %.17g\n", c.D_xx);
  std::printf("minimality_ratio = %.17g\n", ratio);
  std::printf("mass_ratio_warning = %s\n", c.mass_ratio_warning ? "true" : "false");
  if (par.n_gas == 0) std::printf("warning: n_gas = 0, all coefficients vanish\n");
  if (c.mass_ratio_warning)
    std::printf("warning: m/M = %g exceeds the diffusive-limit validity bound %g\n",
                par.mass_ratio(), kDiffusiveMassRatioLimit);

  json summary;
  summary["eta_closed_form"] = c.eta;
  summary["eta_quadrature"] = eta_quad;
  summary["D_pp"] = c.D_pp;
  summary["D_xx"] = c.D_xx;
  summary["minimality_ratio"] = ratio;
  summary["mass_ratio_warning"] = c.mass_ratio_warning;
  finalize_run("coefficients", cfg, out, summary, {});
  return 0;
}

int cmd_relax(const CommonArgs& args) {
  Config cfg = load_config(args);
  const PhysicalParams par = read_params(cfg);
  const long n_traj = cfg.get_long("mc.n_traj", 1000);
  const long seed = cfg.get_long("mc.seed", 1);
  const long workers = cfg.get_long("run.workers", 0);
  const double u0 = cfg.get_double("relax.u0", 2.0);
  const double t_max_eta = cfg.get_double("relax.t_max_eta", 3.0);
  const long n_times = cfg.get_long("relax.n_times", 25);
  if (n_traj < 2 || n_times < 2 || t_max_eta <= 0)
    throw ConfigError("relax: need mc.n_traj >= 2, relax.n_times >= 2, relax.t_max_eta > 0");
  const fs::path out = fs::path(args.out_dir);
  fs::create_directories(out);

  const DiffusionCoefficients c = coefficients(par);
  if (!(c.eta > 0)) throw ConfigError("relax: friction rate is zero (gas.n = 0?)");
  const DerivedScales d = derive_scales(par);
  const double t_max = t_max_eta / c.eta;
  std::vector<double> grid(n_times);
  for (long i = 0; i < n_times; ++i) grid[i] = t_max * static_cast<double>(i) / (n_times - 1);
  const Vec3 P0{0, 0, u0 * par.M * d.v_beta};
  const double E0 = P0.norm2() / (2.0 * par.M);

  const EnsembleStats mc =
      ensemble_moments(InitialCondition::delta(P0), static_cast<int>(n_traj), grid, par,
                       CrossSectionModel::constant(), static_cast<std::uint64_t>(seed),
                       static_cast<int>(workers));
  const auto closure = integrate_moments({P0, E0}, grid, par, MomentMode::ExactClosure);
  const auto diffusive = integrate_moments({P0, E0}, grid, par, MomentMode::Diffusive);

  std::vector<std::vector<double>> mc_rows, cl_rows, df_rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mc_rows.push_back({grid[i], mc.mean_P[i].x, mc.mean_P[i].y, mc.mean_P[i].z, mc.se_P[i].x,
                       mc.se_P[i].y, mc.se_P[i].z, mc.mean_E[i], mc.se_E[i]});
    cl_rows.push_back({grid[i], closure[i].P.z, closure[i].E});
    const double decay = std::exp(-c.eta * grid[i]);
    df_rows.push_back({grid[i], diffusive[i].P.z, diffusive[i].E, P0.z * decay,
                       1.5 * par.T + (E0 - 1.5 * par.T) * decay * decay});
  }
  write_csv((out / "relax_mc.csv").string(),
            {"t", "mean_Px", "mean_Py", "mean_Pz", "se_Px", "se_Py", "se_Pz", "mean_E", "se_E"},
            mc_rows);
  write_csv((out / "relax_closure.csv").string(), {"t", "Pz", "E"}, cl_rows);
  write_csv((out / "relax_diffusive.csv").string(),
            {"t", "Pz", "E", "Pz_analytic", "E_analytic"}, df_rows);

  json summary;
  summary["eta"] = c.eta;
  summary["P0_z"] = P0.z;
  summary["final_mean_E"] = mc.mean_E.back();
  summary["equipartition_E"] = 1.5 * par.T;
  finalize_run("relax", cfg, out, summary,
               {"relax_mc.csv", "relax_closure.csv", "relax_diffusive.csv"});
  return 0;
}

int cmd_fp(const CommonArgs& args) {
  Config cfg = load_config(args);
  const PhysicalParams par = read_params(cfg);
  const std::string kind = cfg.get_string("fp.kind", "quantum");
  if (kind != "quantum" && kind != "classical" && kind != "both")
    throw ConfigError("fp.kind must be quantum, classical or both");
  const long nx = cfg.get_long("fp.nx", 32);
  const long np = cfg.get_long("fp.np", 32);
  const long n_snapshots = cfg.get_long("fp.snapshots", 2);
  const double dt = cfg.get_double("fp.dt", 0.0);
  if (nx < 2 || np < 3 || n_snapshots < 1) throw ConfigError("fp: grid or snapshot count too small");

  const DiffusionCoefficients c = coefficients(par);
  if (!(c.eta > 0)) throw ConfigError("fp: friction rate is zero (gas.n = 0?)");
  const double sigma_p = std::sqrt(c.D_pp / c.eta);
  const double t_final_in = cfg.get_double("fp.t_final", 0.0);
  // short default horizon: the spacing bar dp <= sigma_p/8 caps a 32-cell
  // momentum domain at +-2 sigma_p, which only holds narrow transients
  const double t_final = t_final_in > 0 ? t_final_in : 0.02 / c.eta;
  const double x_half = cfg.get_double("fp.x_half", 5.0);
  const double p_half_in = cfg.get_double("fp.p_half", 0.0);
  // default extent keeps the spacing exactly at the resolution bar sigma_p/8
  const double p_half = p_half_in > 0 ? p_half_in : static_cast<double>(np) * sigma_p / 16.0;
  const double x0 = cfg.get_double("fp.x0", 0.0);
  const double p0 = cfg.get_double("fp.p0", 0.0);
  const double var_x = cfg.get_double("fp.var_x", 1.0);
  const double var_p_in = cfg.get_double("fp.var_p", 0.0);
  const double var_p = var_p_in > 0 ? var_p_in : sigma_p * sigma_p / 16.0;
  const bool free_streaming = cfg.get_long("fp.free_streaming", 1) != 0;
  const fs::path out = fs::path(args.out_dir);
  fs::create_directories(out);

  const PhaseSpaceGrid grid{-x_half, x_half, -p_half, p_half,
                            static_cast<int>(nx), static_cast<int>(np)};
  const WignerField W0 = gaussian_wigner(grid, x0, p0, var_x, var_p);
  FPOptions opts;
  opts.dt = dt;
  opts.free_streaming = free_streaming;

  std::vector<std::string> outputs;
  std::vector<std::string> cols{"t"};
  for (const char* solver : {"quantum", "classical"})
    for (const char* q : {"mean_x", "mean_p", "var_x", "var_p", "cov_xp"})
      cols.push_back(std::string(solver) + "_" + q + "");
  for (const char* q : {"mean_x", "mean_p", "var_x", "var_p", "cov_xp"})
    cols.push_back(std::string("oracle_") + q);
  std::vector<std::vector<double>> rows;

  const PhaseSpaceMoments init_m = field_moments(W0);
  WignerField Wq = W0, Wc = W0;
  for (long s = 1; s <= n_snapshots; ++s) {
    const double t = t_final * static_cast<double>(s) / n_snapshots;
    std::vector<double> row{t};
    PhaseSpaceMoments mq{}, mcl{};
    if (kind != "classical") {
      Wq = evolve_quantum_fp(Wq, t, c, par.M, opts);
      mq = field_moments(Wq);
      const std::string name = "fp_quantum_" + std::to_string(s) + ".bin";
      write_wigner_binary((out / name).string(), Wq);
      outputs.push_back(name);
    }
    if (kind != "quantum") {
      Wc = evolve_classical_fp(Wc, t, c, par.M, opts);
      mcl = field_moments(Wc);
      const std::string name = "fp_classical_" + std::to_string(s) + ".bin";
      write_wigner_binary((out / name).string(), Wc);
      outputs.push_back(name);
    }
    for (double v : {mq.mean_x, mq.mean_p, mq.var_x, mq.var_p, mq.cov_xp}) row.push_back(v);
    for (double v : {mcl.mean_x, mcl.mean_p, mcl.var_x, mcl.var_p, mcl.cov_xp}) row.push_back(v);
    const PhaseSpaceMoments o =
        gaussian_moment_oracle(init_m, t, c, par.M, kind != "classical", free_streaming);
    for (double v : {o.mean_x, o.mean_p, o.var_x, o.var_p, o.cov_xp}) row.push_back(v);
    rows.push_back(row);
  }
  write_csv((out / "fp_moments.csv").string(), cols, rows);
  outputs.push_back("fp_moments.csv");

  json summary;
  summary["eta"] = c.eta;
  summary["sigma_p"] = sigma_p;
  summary["t_final"] = t_final;
  summary["final_mass"] = (kind != "classical" ? Wq : Wc).mass();
  finalize_run("fp", cfg, out, summary, outputs);
  return 0;
}

int cmd_qlbe(const CommonArgs& args) {
  Config cfg = load_config(args);
  const PhysicalParams par = read_params(cfg);
  const std::string mode = cfg.get_string("qlbe.mode", "scan");
  const long n = cfg.get_long("qlbe.n", 15);
  const long workers = cfg.get_long("run.workers", 0);
  const fs::path out = fs::path(args.out_dir);
  fs::create_directories(out);
  json summary;
  std::vector<std::string> outputs;

  if (mode == "scan") {
    const long k_points = cfg.get_long("qlbe.k_points", 6);
    const double k_max_pb = cfg.get_double("qlbe.k_max_pb", 20.0);
    if (k_points < 2 || k_max_pb <= 0)
      throw ConfigError("qlbe scan: need qlbe.k_points >= 2 and qlbe.k_max_pb > 0");
    const double p_beta = derive_scales(par).p_beta;
    std::vector<std::vector<double>> rows;
    double last = 0.0;
    for (long i = 0; i < k_points; ++i) {
      const double f = k_max_pb * static_cast<double>(i) / (k_points - 1);
      last = coherence_decay_rate({0, 0, f * p_beta}, par, CrossSectionModel::constant(),
                                  static_cast<int>(n), static_cast<int>(workers));
      rows.push_back({f, last});
    }
    write_csv((out / "qlbe_rates.csv").string(), {"k_over_pbeta", "decay_rate"}, rows);
    outputs.push_back("qlbe_rates.csv");
    summary["max_rate"] = last;
  } else if (mode == "thermalize") {
    const double t_final_in = cfg.get_double("qlbe.t_final", 0.0);
    const long n_snapshots = cfg.get_long("qlbe.snapshots", 4);
    const bool allow_coarse = cfg.get_long("qlbe.allow_coarse", 0) != 0;
    if (n_snapshots < 1) throw ConfigError("qlbe thermalize: qlbe.snapshots >= 1");
    const MomentumGrid3D g = make_momentum_grid(par, static_cast<int>(n));
    const double offset = cfg.get_double("qlbe.p_offset", 1.5 * std::sqrt(par.M * par.T));

    // off-center thermal-width population bump
    CoherenceSlice s;
    s.grid = g;
    s.values.resize(g.size());
    double sum = 0.0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          const Vec3 P = g.node(i, j, k) - Vec3{0, 0, offset};
          const double v = std::exp(-P.norm2() / (2.0 * par.M * par.T));
          s.values[g.index(i, j, k)] = v;
          sum += v;
        }
    for (auto& v : s.values) v /= sum * std::pow(g.dp(), 3);

    const double rate0 = m_out_classical({0, 0, 0}, par, CrossSectionModel::constant());
    const double corner =
        m_out_classical({std::sqrt(3.0) * g.p_max, 0, 0}, par, CrossSectionModel::constant());
    const double t_final = t_final_in > 0 ? t_final_in : 4.0 / rate0;
    const double dt = cfg.get_double("qlbe.dt", 0.09 / corner);
    GeneratorOptions opts;
    opts.allow_coarse = allow_coarse;
    opts.n_workers = static_cast<int>(workers);

    const CoherenceSlice mb = maxwell_slice(g, {0, 0, 0}, par);
    std::vector<std::vector<double>> rows;
    for (long snap = 1; snap <= n_snapshots; ++snap) {
      const double t = t_final * static_cast<double>(snap) / n_snapshots;
      s = propagate_slice(s, t, dt, par, CrossSectionModel::constant(), opts);
      double l1_to_mb = 0.0;
      for (std::size_t i = 0; i < s.values.size(); ++i)
        l1_to_mb += std::abs(s.values[i] - mb.values[i]);
      l1_to_mb *= std::pow(g.dp(), 3);
      rows.push_back({t, s.trace().real(), std::abs(s.trace() - 1.0), l1_to_mb});
      const std::string name = "qlbe_slice_" + std::to_string(snap) + ".bin";
      write_slice_binary((out / name).string(), s);
      outputs.push_back(name);
    }
    write_csv((out / "qlbe_diagnostics.csv").string(),
              {"t", "trace", "trace_error", "l1_to_equilibrium"}, rows);
    outputs.push_back("qlbe_diagnostics.csv");
    summary["final_trace_error"] = std::abs(s.trace() - 1.0);
    summary["final_l1_to_equilibrium"] = rows.back()[3];
  } else {
    throw ConfigError("qlbe.mode must be scan or thermalize");
  }
  finalize_run("qlbe", cfg, out, summary, outputs);
  return 0;
}

int cmd_rates(const CommonArgs& args) {
  Config cfg = load_config(args);
  const PhysicalParams par = read_params(cfg);
  const long n_p = cfg.get_long("rates.n_p", 9);
  const long n_q = cfg.get_long("rates.n_q", 9);
  const long n_angle = cfg.get_long("rates.n_angle", 5);
  if (n_p < 1 || n_q < 1 || n_angle < 1) throw ConfigError("rates: grid sizes must be positive");
  const DerivedScales d = derive_scales(par);
  const double p_max_in = cfg.get_double("rates.p_max", 0.0);
  const double q_max_in = cfg.get_double("rates.q_max", 0.0);
  const double p_max = p_max_in > 0 ? p_max_in : 3.0 * std::max(d.p_beta, std::sqrt(par.M * par.T));
  const double q_max = q_max_in > 0 ? q_max_in : 4.0 * std::max(d.p_beta, d.m_star * d.v_beta);
  const fs::path out = fs::path(args.out_dir);
  fs::create_directories(out);

  // M_in^cl on P = p zhat arriving via Q with magnitude q at angle theta to zhat
  const auto model = CrossSectionModel::constant();
  std::vector<std::vector<double>> in_rows;
  for (long ip = 0; ip < n_p; ++ip)
    for (long iq = 1; iq <= n_q; ++iq)
      for (long ia = 0; ia < n_angle; ++ia) {
        const double p = p_max * static_cast<double>(ip) / std::max<long>(n_p - 1, 1);
        const double q = q_max * static_cast<double>(iq) / n_q;
        const double cth = n_angle == 1
                               ? 1.0
                               : -1.0 + 2.0 * static_cast<double>(ia) / (n_angle - 1);
        const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
        const Vec3 Q{q * sth, 0.0, q * cth};
        in_rows.push_back({p, q, cth, m_in_classical({0, 0, p}, Q, par, model)});
      }
  write_csv((out / "rates_in.csv").string(), {"p", "q", "cos_theta", "m_in_cl"}, in_rows);

  std::vector<std::vector<double>> out_rows;
  for (long ip = 0; ip < n_p; ++ip) {
    const double p = p_max * static_cast<double>(ip) / std::max<long>(n_p - 1, 1);
    out_rows.push_back({p, m_out_classical({0, 0, p}, par, model)});
  }
  write_csv((out / "rates_out.csv").string(), {"p", "m_out_cl"}, out_rows);

  json summary;
  summary["p_max"] = p_max;
  summary["q_max"] = q_max;
  summary["m_out_at_rest"] = out_rows.front()[1];
  finalize_run("rates", cfg, out, summary, {"rates_in.csv", "rates_out.csv"});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum linear Boltzmann equation toolkit"};
  app.require_subcommand(1);
  CommonArgs a[5];
  CLI::App* sub[5];
  const char* names[5] = {"coefficients", "relax", "fp", "qlbe", "rates"};
  const char* descs[5] = {"diffusive-limit transport coefficients",
                          "momentum/energy relaxation: Monte Carlo vs moment ODEs",
                          "phase-space Fokker-Planck evolution",
                          "momentum-grid master-equation runs",
                          "tabulate collision-rate kernels"};
  for (int i = 0; i < 5; ++i) {
    sub[i] = app.add_subcommand(names[i], descs[i]);
    add_common(sub[i], a[i]);
  }
  try {
    app.parse(argc, argv);
    if (sub[0]->parsed()) return cmd_coefficients(a[0]);
    if (sub[1]->parsed()) return cmd_relax(a[1]);
    if (sub[2]->parsed()) return cmd_fp(a[2]);
    if (sub[3]->parsed()) return cmd_qlbe(a[3]);
    if (sub[4]->parsed()) return cmd_rates(a[4]);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
