#include "cli_commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "qtrunc/errors.hpp"
#include "qtrunc/verify.hpp"

namespace qtrunc::cli {

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(Level v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>) s += format_double(xs[i]);
    else s += std::to_string(xs[i]);
  }
  return s;
}

std::vector<std::pair<std::string, std::string>> config_pairs(const RunConfig& c) {
  return {
      {"model", c.model},
      {"n_sites", join(c.n_sites)},
      {"n_max", fmt(c.n_max)},
      {"field_cap", fmt(c.field_cap)},
      {"n_spins", fmt(c.n_spins)},
      {"g", fmt(c.g)},
      {"g_lin", fmt(c.g_lin)},
      {"omega0", fmt(c.omega0)},
      {"hop", fmt(c.hop)},
      {"u", fmt(c.u)},
      {"mu", fmt(c.mu)},
      {"periodic", c.periodic ? "true" : "false"},
      {"omega_c", fmt(c.omega_c)},
      {"omega_z", fmt(c.omega_z)},
      {"g_m", fmt(c.g_m)},
      {"g_gm", fmt(c.g_gm)},
      {"g_e", fmt(c.g_e)},
      {"chi", fmt(c.chi)},
      {"r", fmt(c.r)},
      {"lambda0", join(c.lambda0)},
      {"eps", join(c.eps)},
      {"t", join(c.t)},
      {"tmax", fmt(c.tmax)},
      {"tstep", fmt(c.tstep)},
      {"lambda_tilde", join(c.lambda_tilde)},
      {"delta", fmt(c.delta)},
      {"deltas", join(c.deltas)},
      {"delta_max", fmt(c.delta_max)},
      {"optimize_lambda", c.optimize_lambda ? "true" : "false"},
      {"mode", c.mode < 0 ? std::string("all") : fmt(c.mode)},
      {"lambda_bar", fmt(c.lambda_bar)},
      {"gap", fmt(c.gap)},
      {"e_f_ground", fmt(c.e_f_ground)},
      {"e_total", fmt(c.e_total)},
      {"p", fmt(c.p)},
      {"taus", join(c.taus)},
      {"window", fmt(c.window)},
      {"kind", c.kind},
      {"max_rows", std::to_string(c.max_rows)},
      {"format", c.format},
      {"seed", std::to_string(c.seed)},
      {"jobs", std::to_string(c.jobs)},
      {"tol", fmt(c.tol)},
  };
}

WalkProfile profile_for(const RunConfig& cfg, const ParamRecord& rec) {
  WalkProfile p = profile_of(rec);
  if (!std::isnan(cfg.chi)) p.chi = cfg.chi;
  if (!std::isnan(cfg.r)) p.r = cfg.r;
  validate(p);
  return p;
}

VerifyConfig verify_config(const RunConfig& cfg) {
  VerifyConfig v;
  v.evolve.tolerance = cfg.tol;
  v.delta_max = cfg.delta_max;
  v.seed = cfg.seed;
  return v;
}

std::optional<std::size_t> basis_mode(const RunConfig& cfg, const ParamRecord& rec) {
  if (cfg.mode < 0) return std::nullopt;
  const ModelInstance probe = build_model(with_cutoff(rec, 1));
  const auto modes = probe.truncated_modes();
  if (static_cast<std::size_t>(cfg.mode) >= modes.size()) {
    throw std::invalid_argument("--mode " + std::to_string(cfg.mode) + " exceeds the " +
                                std::to_string(modes.size()) + " truncated modes");
  }
  return modes[static_cast<std::size_t>(cfg.mode)];
}

// One grid point of a threshold table.
struct Point {
  int n_sites;
  Level lambda0;
  double eps;
  double t;
};

std::vector<Point> grid(const RunConfig& cfg, bool uses_time) {
  const std::vector<double> times = uses_time ? time_grid(cfg) : std::vector<double>{0.0};
  const std::size_t rows = cfg.n_sites.size() * cfg.lambda0.size() * cfg.eps.size() * times.size();
  if (rows > cfg.max_rows) {
    throw CapExceeded("grid has " + std::to_string(rows) + " rows, above the cap of " +
                      std::to_string(cfg.max_rows));
  }
  std::vector<Point> pts;
  pts.reserve(rows);
  for (int n : cfg.n_sites) {
    for (Level l0 : cfg.lambda0) {
      for (double e : cfg.eps) {
        for (double t : times) pts.push_back({n, l0, e, t});
      }
    }
  }
  return pts;
}

using Row = std::vector<std::string>;

Table state_table(const RunConfig& cfg) {
  Table tab;
  tab.columns = {"model", "n_sites", "n_modes", "lambda0", "t", "eps", "eps_mode", "lambda_ours", "bound", "delta",
                 "j_count"};
  if (cfg.optimize_lambda) {
    tab.columns.push_back("alt_lambda");
    tab.columns.push_back("alt_delta");
  }
  const auto pts = grid(cfg, true);
  auto rows = parallel_map(pts.size(), cfg.jobs, [&](std::size_t i) {
    const Point& pt = pts[i];
    const ParamRecord rec = make_record(cfg, pt.n_sites);
    const int n_modes = truncated_mode_count(rec);
    const double eps_mode = pt.eps / std::sqrt(static_cast<double>(n_modes));
    StateThresholdOptions opts;
    opts.delta_max = cfg.delta_max;
    opts.optimize_lambda = cfg.optimize_lambda;
    const BoundReport b = minimal_state_threshold(profile_for(cfg, rec), {pt.lambda0, pt.t, eps_mode}, opts);
    Row row{cfg.model,   fmt(pt.n_sites), fmt(n_modes),       fmt(pt.lambda0),     fmt(pt.t),
            fmt(pt.eps), fmt(eps_mode),   fmt(b.lambda),      fmt(b.bound),        fmt(b.delta_used),
            std::to_string(b.j_count)};
    if (cfg.optimize_lambda) {
      row.push_back(fmt(*b.alt_lambda));
      row.push_back(fmt(*b.alt_delta));
    }
    return row;
  });
  for (auto& r : rows) tab.add_row(std::move(r));
  return tab;
}

Table ham_table(const RunConfig& cfg) {
  Table tab;
  tab.columns = {"model", "n_sites", "n_modes", "lambda0", "t", "eps", "lambda_tilde", "bound", "delta"};
  const auto pts = grid(cfg, true);
  auto rows = parallel_map(pts.size(), cfg.jobs, [&](std::size_t i) {
    const Point& pt = pts[i];
    const ParamRecord rec = make_record(cfg, pt.n_sites);
    const int n_modes = truncated_mode_count(rec);
    const BoundReport b = minimal_hamiltonian_threshold(profile_for(cfg, rec), {pt.lambda0, pt.t, pt.eps}, n_modes,
                                                        comm_norm_of(rec), Level{1} << 40, cfg.delta_max);
    return Row{cfg.model,      fmt(pt.n_sites), fmt(n_modes),  fmt(pt.lambda0), fmt(pt.t),
               fmt(pt.eps),    fmt(b.lambda),   fmt(b.bound),  fmt(b.delta_used)};
  });
  for (auto& r : rows) tab.add_row(std::move(r));
  return tab;
}

Table energy_table(const RunConfig& cfg) {
  Table tab;
  if (cfg.model != "single" && cfg.model != "hh") {
    throw std::invalid_argument("energy thresholds are defined for the single and hh models");
  }
  tab.columns = {"model", "n_sites", "lambda0", "eps", "e_f_ground", "e_total", "lambda_energy"};
  const auto pts = grid(cfg, false);
  auto rows = parallel_map(pts.size(), cfg.jobs, [&](std::size_t i) {
    const Point& pt = pts[i];
    Level lam = 0;
    double e_total = cfg.e_total;
    int n = pt.n_sites;
    if (cfg.model == "single") {
      n = 1;
      lam = energy_threshold_single_mode(cfg.omega0, pt.lambda0, pt.eps);
    } else {
      if (std::isnan(e_total)) e_total = cfg.e_f_ground + hh_initial_energy_excess(cfg.omega0, cfg.g, n, pt.lambda0);
      lam = energy_threshold_hubbard_holstein(cfg.omega0, cfg.g, n, pt.lambda0, cfg.e_f_ground, e_total, pt.eps);
    }
    return Row{cfg.model,           fmt(n),        fmt(pt.lambda0), fmt(pt.eps),
               fmt(cfg.e_f_ground), fmt(e_total),  fmt(lam)};
  });
  for (auto& r : rows) tab.add_row(std::move(r));
  return tab;
}

Table tail_table(const RunConfig& cfg) {
  Table tab;
  tab.columns = {"model", "n_sites", "lambda_bar", "gap", "eps", "lambda", "bound", "delta",
                 "sigma", "t_window", "overlap_floor", "core"};
  const auto pts = grid(cfg, false);
  auto rows = parallel_map(pts.size(), cfg.jobs, [&](std::size_t i) {
    const Point& pt = pts[i];
    const ParamRecord rec = make_record(cfg, pt.n_sites);
    double lambda_bar = cfg.lambda_bar;
    double gap = cfg.gap;
    if (std::isnan(lambda_bar) || std::isnan(gap)) {
      // Measure the missing ground-state data on the desk-scale model.
      const ModelInstance m = build_model(rec);
      EigenConfig ecfg;
      ecfg.seed = cfg.seed;
      const auto pairs = lowest_eigenpairs(m.hamiltonian, 2, ecfg);
      if (std::isnan(gap)) gap = pairs[1].energy - pairs[0].energy;
      if (std::isnan(lambda_bar)) {
        const auto modes = m.truncated_modes();
        const std::size_t nu = modes.at(cfg.mode < 0 ? 0 : static_cast<std::size_t>(cfg.mode));
        double mean = 0.0;
        for (std::size_t k = 0; k < m.basis.dimension(); ++k) {
          mean += std::norm(pairs[0].state[static_cast<Eigen::Index>(k)]) *
                  std::abs(m.basis.quantum_number(k, nu));
        }
        lambda_bar = mean;
      }
    }
    if (!(gap > 1e-8)) throw PreconditionError("spectral gap must exceed 1e-8, got " + fmt(gap));
    const TailReport tr = tail_threshold(profile_for(cfg, rec), {lambda_bar, gap, pt.eps}, cfg.delta_max);
    return Row{cfg.model,   fmt(pt.n_sites),  fmt(lambda_bar),       fmt(gap),     fmt(pt.eps),
               fmt(tr.lambda), fmt(tr.bound), fmt(tr.delta_used),    fmt(tr.sigma), fmt(tr.t_window),
               fmt(tr.overlap_floor), fmt(tr.core)};
  });
  for (auto& r : rows) tab.add_row(std::move(r));
  return tab;
}

struct SuiteOutcome {
  std::vector<ExperimentReport> reports;
  bool guard = false;
};

ExperimentReport guard_report(const std::string& suite, const std::string& what) {
  ExperimentReport r;
  r.id = suite;
  r.empirical = std::numeric_limits<double>::quiet_NaN();
  r.analytic = std::numeric_limits<double>::quiet_NaN();
  r.margin = std::numeric_limits<double>::quiet_NaN();
  r.sound = false;
  r.note = "guard: " + what;
  return r;
}

std::vector<ExperimentReport> run_suite(const RunConfig& cfg, const std::string& suite) {
  const ParamRecord rec = make_record(cfg, cfg.n_sites.front());
  const VerifyConfig vcfg = verify_config(cfg);
  const Level lambda0 = cfg.lambda0.front();
  if (suite == "state") {
    std::vector<int> deltas = cfg.deltas;
    if (deltas.empty()) deltas = {1, 2, 3, 4, 5, 6};
    std::vector<double> times = cfg.t.empty() && cfg.tmax <= 0.0 ? std::vector<double>{0.5, 1.0, 2.0} : time_grid(cfg);
    return verify_state_truncation(rec, lambda0, times, deltas, basis_mode(cfg, rec), vcfg);
  }
  if (suite == "ham") {
    std::vector<Level> tildes = cfg.lambda_tilde;
    if (tildes.empty()) tildes = {lambda0 + 2};
    const double t = time_grid(cfg).front();
    std::vector<ExperimentReport> out;
    for (Level lt : tildes) out.push_back(verify_hamiltonian_truncation(rec, lambda0, lt, t, vcfg));
    return out;
  }
  if (suite == "tail") {
    return verify_tail(rec, cfg.eps, basis_mode(cfg, rec), vcfg).reports;
  }
  if (suite == "trotter") {
    std::vector<double> taus = cfg.taus;
    if (taus.empty()) taus = {0.2, 0.1, 0.05, 0.025};
    return verify_trotter(rec, cfg.p, taus, cfg.window, vcfg).reports;
  }
  if (suite == "coherent") {
    std::vector<double> times = cfg.t;
    if (times.empty()) {
      const double tmax = cfg.tmax > 0.0 ? cfg.tmax : 3.0;
      for (int k = 1; k * cfg.tstep <= tmax * (1.0 + 1e-12); ++k) times.push_back(k * cfg.tstep);
    }
    return coherent_oracle_check(times);
  }
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

CommandOutput verify_output(const RunConfig& cfg, const std::vector<std::string>& suites) {
  CommandOutput out;
  std::vector<ExperimentReport> all;
  bool guard = false;
  for (const auto& suite : suites) {
    try {
      auto reps = run_suite(cfg, suite);
      all.insert(all.end(), reps.begin(), reps.end());
    } catch (const std::invalid_argument&) {
      if (suites.size() == 1) throw;
      all.push_back(guard_report(suite, "not applicable to model " + cfg.model));
      guard = true;
    } catch (const std::domain_error&) {
      if (suites.size() == 1) throw;
      all.push_back(guard_report(suite, "not applicable to model " + cfg.model));
      guard = true;
    } catch (const std::exception& e) {
      all.push_back(guard_report(suite, e.what()));
      guard = true;
    }
  }
  out.table = reports_table(all);
  bool unsound = false;
  for (const auto& r : all) {
    if (!r.sound && r.note.rfind("guard: ", 0) != 0) unsound = true;
  }
  out.exit_code = unsound ? kUnsound : (guard ? kGuard : kOk);
  return out;
}

CommandOutput schedule_output(const RunConfig& cfg) {
  const ParamRecord rec = make_record(cfg, cfg.n_sites.front());
  const double horizon = cfg.tmax > 0.0 ? cfg.tmax : time_grid(cfg).back();
  const Schedule s = adaptive_schedule(profile_for(cfg, rec), cfg.lambda0.front(), cfg.delta, horizon);
  CommandOutput out;
  out.table.columns = {"j", "t", "lambda"};
  for (std::size_t j = 0; j < s.steps.size(); ++j) {
    out.table.add_row({std::to_string(j), fmt(s.steps[j].t), fmt(s.steps[j].lambda)});
  }
  out.header.config.emplace_back("no_growth", s.no_growth ? "true" : "false");
  return out;
}

CommandOutput compare_output(const RunConfig& cfg) {
  if (cfg.model != "hh") throw std::invalid_argument("compare is defined for the hh model");
  CompareParams prm;
  prm.n_sites = cfg.n_sites.front();
  prm.epsilon = cfg.eps.front();
  prm.lambda0 = cfg.lambda0.front();
  prm.omega0 = cfg.omega0;
  prm.g = cfg.g;
  prm.times = time_grid(cfg);
  const CompareTable ct = compare_thresholds(prm);
  CommandOutput out;
  out.table.columns = {"t", "lambda_ours", "lambda_energy", "bound", "delta"};
  for (const auto& r : ct.rows) {
    out.table.add_row({fmt(r.t), fmt(r.lambda_ours), fmt(r.lambda_energy), fmt(r.bound), fmt(r.delta)});
  }
  out.header.config.emplace_back("crossover_t", ct.crossover_t ? fmt(*ct.crossover_t) : std::string("none"));
  return out;
}

std::string artifact_name(const std::string& command, OutputFormat f) {
  std::string s = command;
  for (char& ch : s) {
    if (ch == ' ') ch = '_';
  }
  return s + (f == OutputFormat::json ? ".json" : ".csv");
}

template <class T>
void add_list(CLI::App& app, const std::string& names, std::vector<T>& target, const std::string& desc) {
  app.add_option(names, target, desc)->delimiter(',')->expected(1, -1)->capture_default_str();
}

}  // namespace

ParamRecord make_record(const RunConfig& c, int n_sites) {
  ParamRecord rec;
  rec.model = c.model;
  if (c.model == "single") {
    rec.set("g_lin", c.g_lin).set("omega0", c.omega0).set("n_max", c.n_max);
  } else if (c.model == "hh") {
    rec.set("n_sites", n_sites).set("hop", c.hop).set("u", c.u).set("mu", c.mu).set("g", c.g);
    rec.set("omega0", c.omega0).set("n_max", c.n_max).set("open_boundary", c.periodic ? 0 : 1);
  } else if (c.model == "dicke") {
    rec.set("n_spins", c.n_spins).set("omega_c", c.omega_c).set("omega_z", c.omega_z).set("g", c.g);
    rec.set("n_max", c.n_max);
  } else if (c.model == "u1") {
    rec.set("n_sites", n_sites).set("g_m", c.g_m).set("g_gm", c.g_gm).set("g_e", c.g_e);
    rec.set("field_cap", c.field_cap);
  } else {
    throw std::invalid_argument("unknown model '" + c.model + "' (single, hh, dicke, u1)");
  }
  return rec;
}

std::vector<double> time_grid(const RunConfig& cfg) {
  if (!cfg.t.empty()) return cfg.t;
  if (cfg.tmax > 0.0) {
    if (!(cfg.tstep > 0.0)) throw std::invalid_argument("--tstep must be > 0");
    std::vector<double> ts;
    for (long k = 1; static_cast<double>(k) * cfg.tstep <= cfg.tmax * (1.0 + 1e-12); ++k) {
      ts.push_back(static_cast<double>(k) * cfg.tstep);
    }
    if (ts.empty()) ts.push_back(cfg.tmax);
    return ts;
  }
  return {1.0};
}

Table threshold_table(const RunConfig& cfg, const std::string& kind) {
  if (cfg.n_sites.empty() || cfg.lambda0.empty() || cfg.eps.empty()) {
    throw std::invalid_argument("n_sites, lambda0 and eps need at least one value");
  }
  if (kind == "state") return state_table(cfg);
  if (kind == "ham") return ham_table(cfg);
  if (kind == "energy") return energy_table(cfg);
  if (kind == "tail") return tail_table(cfg);
  throw std::invalid_argument("unknown threshold kind '" + kind + "' (state, ham, energy, tail)");
}

CommandOutput run_command(const RunConfig& cfg) {
  CommandOutput out;
  const std::string& c = cfg.command;
  if (c.rfind("threshold ", 0) == 0) {
    out.table = threshold_table(cfg, c.substr(10));
  } else if (c == "sweep") {
    out.table = threshold_table(cfg, cfg.kind);
  } else if (c == "verify") {
    out = verify_output(cfg, {});
  } else if (c == "verify all") {
    out = verify_output(cfg, {"coherent", "state", "ham", "tail", "trotter"});
  } else if (c.rfind("verify ", 0) == 0) {
    out = verify_output(cfg, {c.substr(7)});
  } else if (c == "schedule") {
    out = schedule_output(cfg);
  } else if (c == "compare") {
    out = compare_output(cfg);
  } else {
    throw std::invalid_argument("unknown command '" + c + "'");
  }
  auto extra = std::move(out.header.config);
  out.header.command = c;
  out.header.config = config_pairs(cfg);
  out.header.config.insert(out.header.config.end(), extra.begin(), extra.end());
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Certified truncation thresholds for bosonic and gauge-link quantum numbers"};
  app.set_version_flag("--version", std::string(version()));
  app.set_config("--config", "", "key=value file of option defaults; command-line flags take precedence");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--model", cfg.model, "single | hh | dicke | u1")->capture_default_str();
  add_list(app, "--n-sites,--n_sites", cfg.n_sites, "lattice sites (list)");
  app.add_option("--n-max,--n_max", cfg.n_max, "boson cutoff of the finite proxy")->capture_default_str();
  app.add_option("--field-cap,--field_cap", cfg.field_cap, "gauge-link cutoff of the finite proxy")
      ->capture_default_str();
  app.add_option("--n-spins,--n_spins", cfg.n_spins, "Dicke spins")->capture_default_str();
  app.add_option("--g", cfg.g, "electron-phonon / spin-boson coupling")->capture_default_str();
  app.add_option("--g-lin,--g_lin", cfg.g_lin, "single-mode displacement coupling")->capture_default_str();
  app.add_option("--omega0", cfg.omega0, "boson frequency")->capture_default_str();
  app.add_option("--hop", cfg.hop, "hopping amplitude")->capture_default_str();
  app.add_option("--u", cfg.u, "on-site repulsion")->capture_default_str();
  app.add_option("--mu", cfg.mu, "chemical potential")->capture_default_str();
  app.add_flag("--periodic", cfg.periodic, "periodic boundary");
  app.add_option("--omega-c,--omega_c", cfg.omega_c, "Dicke cavity frequency")->capture_default_str();
  app.add_option("--omega-z,--omega_z", cfg.omega_z, "Dicke spin splitting")->capture_default_str();
  app.add_option("--g-m,--g_m", cfg.g_m, "gauge model mass")->capture_default_str();
  app.add_option("--g-gm,--g_gm", cfg.g_gm, "gauge-matter coupling")->capture_default_str();
  app.add_option("--g-e,--g_e", cfg.g_e, "electric coupling")->capture_default_str();
  app.add_option("--chi", cfg.chi, "walk-profile chi override");
  app.add_option("--r", cfg.r, "walk-profile exponent override");

  add_list(app, "--lambda0", cfg.lambda0, "initial ceiling (list)");
  add_list(app, "--eps", cfg.eps, "target error (list)");
  add_list(app, "--t", cfg.t, "evolution times (list)");
  app.add_option("--tmax", cfg.tmax, "time grid end (grid tstep, 2 tstep, ...)")->capture_default_str();
  app.add_option("--tstep", cfg.tstep, "time grid step")->capture_default_str();
  add_list(app, "--lambda-tilde,--lambda_tilde", cfg.lambda_tilde, "Hamiltonian truncation levels (list)");
  app.add_option("--delta", cfg.delta, "segment growth for schedule")->capture_default_str();
  add_list(app, "--deltas", cfg.deltas, "segment growths for verify state (list)");
  app.add_option("--delta-max,--delta_max", cfg.delta_max, "largest segment growth scanned")->capture_default_str();
  app.add_flag("--optimize-lambda,--optimize_lambda", cfg.optimize_lambda, "also report the smallest lambda over delta");
  app.add_option("--mode", cfg.mode, "truncated mode ordinal (-1: all)")->capture_default_str();
  app.add_option("--lambda-bar,--lambda_bar", cfg.lambda_bar, "mean quantum number (default: measured)");
  app.add_option("--gap", cfg.gap, "spectral gap (default: measured)");
  app.add_option("--e-f-ground,--e_f_ground", cfg.e_f_ground, "fermionic ground energy")->capture_default_str();
  app.add_option("--e-total,--e_total", cfg.e_total, "total energy (default: ground + initial excess)");
  app.add_option("--p", cfg.p, "product-formula order")->capture_default_str();
  add_list(app, "--taus", cfg.taus, "Trotter step sizes (list)");
  app.add_option("--window", cfg.window, "Trotter window ceiling")->capture_default_str();
  app.add_option("--max-rows,--max_rows", cfg.max_rows, "row cap for grids")->capture_default_str();

  app.add_option("-o,--output", cfg.output, "output file (default: stdout or $QTRUNC_OUTPUT_DIR)");
  app.add_option("--format", cfg.format, "csv | json")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "parallel width")->capture_default_str()->check(CLI::Range(1u, 1024u));
  app.add_option("--tol", cfg.tol, "evolution tolerance")->capture_default_str();

  auto* threshold = app.add_subcommand("threshold", "minimal truncation thresholds over a grid");
  threshold->require_subcommand(1);
  for (const char* k : {"state", "ham", "energy", "tail"}) threshold->add_subcommand(k, std::string(k) + " threshold");
  auto* verify = app.add_subcommand("verify", "empirical soundness suites");
  verify->require_subcommand(0, 1);
  for (const char* k : {"state", "ham", "tail", "trotter", "coherent", "all"}) {
    verify->add_subcommand(k, std::string(k) + " suite");
  }
  auto* sweep = app.add_subcommand("sweep", "parallel threshold sweep over list-valued options");
  sweep->add_option("--kind", cfg.kind, "state | ham | energy | tail")->capture_default_str();
  app.add_subcommand("schedule", "adaptive time schedule");
  app.add_subcommand("compare", "leakage versus energy thresholds (hh)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  for (auto* sub : app.get_subcommands()) {
    cfg.command = sub->get_name();
    for (auto* inner : sub->get_subcommands()) cfg.command += " " + inner->get_name();
  }

  try {
    const OutputFormat fmt_kind = parse_format(cfg.format);
    CommandOutput res = run_command(cfg);
    if (const CLI::Option* conf = app.get_config_ptr(); conf != nullptr && conf->count() > 0) {
      res.header.config.emplace_back("config", conf->results().front());
    }
    const std::string text = render(res.table, res.header, fmt_kind);
    std::filesystem::path path = cfg.output;
    if (path.empty()) {
      if (const char* dir = std::getenv("QTRUNC_OUTPUT_DIR"); dir && *dir) {
        path = std::filesystem::path(dir) / artifact_name(cfg.command, fmt_kind);
      }
    }
    if (path.empty()) {
      out << text;
    } else {
      write_atomic(path, text);
      err << "wrote " << path.string() << "\n";
    }
    return res.exit_code;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kGuard;
  }
}

}  // namespace qtrunc::cli
