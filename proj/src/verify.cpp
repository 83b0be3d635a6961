#include "qtrunc/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "qtrunc/errors.hpp"
#include "qtrunc/stats.hpp"

namespace qtrunc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Columns exp(-i t H) e_j for every j in cols.
Eigen::MatrixXcd evolved_columns(const SparseOperator& h, const std::vector<std::size_t>& cols, double t,
                                 const EvolveConfig& cfg) {
  require_hermitian(h);
  EvolveConfig inner = cfg;
  inner.check_hermitian = false;
  const auto n = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXcd out(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    Vec e = Vec::Zero(n);
    e[static_cast<Eigen::Index>(cols[j])] = 1.0;
    out.col(static_cast<Eigen::Index>(j)) = evolve(h, e, t, inner);
  }
  return out;
}

// Largest singular value of the rows of m that fall outside the window.
double outside_norm(const Eigen::MatrixXcd& m, const CompositeBasis& basis, const ProjectorSpec& window) {
  const auto keep = window_mask(basis, window);
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (!keep[i]) rows.push_back(static_cast<Eigen::Index>(i));
  }
  if (rows.empty() || m.cols() == 0) return 0.0;
  Eigen::MatrixXcd sub(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) sub.row(static_cast<Eigen::Index>(r)) = m.row(rows[r]);
  return gram_norm(sub);
}

ProjectorSpec ball(std::optional<std::size_t> mode, Level lambda) { return ProjectorSpec::ball(mode, lambda); }

}  // namespace

void finalize(ExperimentReport& r, double slack) {
  r.margin = r.analytic - r.empirical;
  r.sound = r.empirical <= r.analytic + slack;
}

bool all_sound(const std::vector<ExperimentReport>& reports) {
  for (const auto& r : reports) {
    if (!r.sound) return false;
  }
  return true;
}

std::vector<ExperimentReport> verify_state_truncation(const ParamRecord& rec, Level lambda0,
                                                      const std::vector<double>& times,
                                                      const std::vector<int>& deltas,
                                                      std::optional<std::size_t> mode, const VerifyConfig& cfg) {
  const ModelInstance model = build_model(rec);
  const Level cutoff = model.cutoff;
  if (lambda0 < 0 || lambda0 >= cutoff) throw PreconditionError("lambda0 must lie below the model cutoff");
  if (mode && !model.basis.mode(*mode).truncatable()) throw KindError("state truncation needs a truncatable mode");
  const double union_factor = mode ? 1.0 : std::sqrt(static_cast<double>(model.n_truncated()));
  const ProjectorSpec window0 = ball(mode, lambda0);
  const auto cols = window_indices(model.basis, window0);

  std::optional<ModelInstance> padded;
  std::vector<std::size_t> padded_cols;
  if (cfg.check_padding) {
    padded = build_model(with_cutoff(rec, static_cast<int>(2 * cutoff)));
    padded_cols = window_indices(padded->basis, window0);
  }

  std::vector<ExperimentReport> out;
  for (double t : times) {
    const auto start = Clock::now();
    const Eigen::MatrixXcd cols_t = evolved_columns(model.hamiltonian, cols, t, cfg.evolve);
    Eigen::MatrixXcd padded_t;
    if (padded) padded_t = evolved_columns(padded->hamiltonian, padded_cols, t, cfg.evolve);
    const double shared = seconds_since(start);

    struct Check {
      std::string kind;
      int delta;
      Level lambda;
      double bound;
    };
    std::vector<Check> checks;
    const double window_t = short_time_window(model.profile, lambda0);
    for (int delta : deltas) {
      if (delta >= 1 && std::abs(t) <= window_t) {
        checks.push_back({"short", delta, lambda0 + delta - 1, short_time_bound(model.profile, lambda0, delta, t)});
      }
      if (delta >= 2) {
        const BoundReport lt = long_time_bound(model.profile, lambda0, delta, std::abs(t));
        checks.push_back({"long", delta, lt.lambda, lt.bound});
      }
    }
    for (const auto& c : checks) {
      const auto t0 = Clock::now();
      const Level clipped = std::min<Level>(c.lambda, cutoff - 1);
      ExperimentReport r;
      r.id = "state/" + c.kind;
      std::ostringstream in;
      in << "model=" << rec.model << " lambda0=" << lambda0 << " t=" << fmt(t) << " delta=" << c.delta
         << " lambda=" << c.lambda << " mode=" << (mode ? std::to_string(*mode) : std::string("all"));
      r.inputs = in.str();
      r.empirical = outside_norm(cols_t, model.basis, ball(mode, clipped));
      r.analytic = union_factor * c.bound;
      finalize(r, cfg.engine_slack());
      if (clipped < c.lambda) r.note = "window clipped to cutoff-1=" + std::to_string(clipped);
      if (padded) {
        const double emp2 = outside_norm(padded_t, padded->basis, ball(mode, clipped));
        const double delta_pad = std::abs(emp2 - r.empirical);
        if (delta_pad > std::max(r.margin, cfg.engine_slack())) {
          throw PaddingError("state truncation: doubling the cutoff moved the leakage by " + fmt(delta_pad) +
                             " (margin " + fmt(r.margin) + ") at " + r.inputs);
        }
        r.note += (r.note.empty() ? "" : "; ") + std::string("padding_delta=") + fmt(delta_pad);
      }
      r.runtime_s = seconds_since(t0) + shared / static_cast<double>(checks.size());
      out.push_back(std::move(r));
    }
  }
  return out;
}

namespace {

double truncation_difference(const ModelInstance& m, Level lambda0, Level lambda_tilde, double t,
                             const EvolveConfig& cfg) {
  const auto cols = window_indices(m.basis, ball(std::nullopt, lambda0));
  const SparseOperator ht = truncate_hamiltonian(m, lambda_tilde);
  return gram_norm(evolved_columns(m.hamiltonian, cols, t, cfg) - evolved_columns(ht, cols, t, cfg));
}

}  // namespace

ExperimentReport verify_hamiltonian_truncation(const ParamRecord& rec, Level lambda0, Level lambda_tilde, double t,
                                               const VerifyConfig& cfg) {
  const auto start = Clock::now();
  const ModelInstance model = build_model(rec);
  const Level cutoff = model.cutoff;
  if (lambda0 < 0 || lambda_tilde < lambda0 + 2) throw PreconditionError("lambda_tilde must be >= lambda0 + 2");
  if (lambda_tilde < cutoff && cutoff < lambda_tilde + 2) {
    throw PreconditionError("cutoff must be >= lambda_tilde + 2 (or equal to lambda_tilde)");
  }
  EvolveConfig ecfg = cfg.evolve;
  ecfg.tolerance = std::min(ecfg.tolerance, 1e-3 * cfg.padding_tol);

  ExperimentReport r;
  r.id = "ham";
  std::ostringstream in;
  in << "model=" << rec.model << " lambda0=" << lambda0 << " lambda_tilde=" << lambda_tilde << " t=" << fmt(t)
     << " cutoff=" << cutoff;
  r.inputs = in.str();
  r.empirical = truncation_difference(model, lambda0, lambda_tilde, t, ecfg);

  const double cn = comm_norm_exact(model, lambda_tilde, lambda_tilde < cutoff).exact;
  HamTruncationQuery hq;
  hq.n_modes = model.n_truncated();
  hq.comm_norm = [cn](Level) { return cn; };
  hq.query = {lambda0, std::abs(t), 1.0};
  hq.lambda_tilde = lambda_tilde;
  r.analytic = hamiltonian_truncation_bound(model.profile, hq, cfg.delta_max);
  finalize(r, cfg.engine_slack());
  r.note = "comm_norm=" + fmt(cn);

  if (cfg.check_padding && lambda_tilde < cutoff) {
    const ModelInstance padded = build_model(with_cutoff(rec, static_cast<int>(2 * cutoff)));
    const double emp2 = truncation_difference(padded, lambda0, lambda_tilde, t, ecfg);
    const double delta_pad = std::abs(emp2 - r.empirical);
    if (delta_pad >= cfg.padding_tol) {
      throw PaddingError("hamiltonian truncation: doubling the cutoff moved the error by " + fmt(delta_pad));
    }
    r.note += "; padding_delta=" + fmt(delta_pad);
  }
  r.runtime_s = seconds_since(start);
  return r;
}

TailResult verify_tail(const ParamRecord& rec, const std::vector<double>& epsilons, std::optional<std::size_t> mode,
                       const VerifyConfig& cfg) {
  const auto start = Clock::now();
  const ModelInstance model = build_model(rec);
  const auto truncated = model.truncated_modes();
  if (truncated.empty()) throw KindError("tail check needs a truncatable mode");
  const std::size_t nu = mode.value_or(truncated.front());
  if (!model.basis.mode(nu).truncatable()) throw KindError("tail check needs a truncatable mode");

  EigenConfig ecfg;
  ecfg.seed = cfg.seed;
  const auto pairs = lowest_eigenpairs(model.hamiltonian, 2, ecfg);
  TailResult res;
  res.gap = pairs[1].energy - pairs[0].energy;
  if (!(res.gap > 1e-8)) {
    throw PreconditionError("ground space is near-degenerate: the two lowest eigenvalues differ by " + fmt(res.gap));
  }
  const Vec& psi = pairs[0].state;
  const int cutoff = model.cutoff;
  std::vector<double> prob(static_cast<std::size_t>(cutoff) + 1, 0.0);
  for (std::size_t i = 0; i < model.basis.dimension(); ++i) {
    const int q = std::abs(model.basis.quantum_number(i, nu));
    prob[static_cast<std::size_t>(q)] += std::norm(psi[static_cast<Eigen::Index>(i)]);
  }
  for (std::size_t q = 0; q < prob.size(); ++q) res.lambda_bar += static_cast<double>(q) * prob[q];
  res.tail.assign(prob.size(), 0.0);
  double acc = 0.0;
  for (std::size_t q = prob.size(); q-- > 0;) {
    res.tail[q] = std::sqrt(acc);
    acc += prob[q];
  }

  std::vector<double> xs, ys;
  for (std::size_t q = 0; q < res.tail.size(); ++q) {
    if (res.tail[q] > 1e-9) {
      xs.push_back(std::sqrt(static_cast<double>(q)));
      ys.push_back(std::log(res.tail[q]));
    }
  }
  res.slope = xs.size() >= 2 ? linear_fit(xs, ys).slope : std::numeric_limits<double>::quiet_NaN();
  const double shared = seconds_since(start);

  for (double eps : epsilons) {
    const TailReport tr = tail_threshold(model.profile, {res.lambda_bar, res.gap, eps}, cfg.delta_max);
    ExperimentReport r;
    r.id = "tail";
    std::ostringstream in;
    in << "model=" << rec.model << " mode=" << nu << " eps=" << fmt(eps) << " lambda=" << tr.lambda
       << " lambda_bar=" << fmt(res.lambda_bar) << " gap=" << fmt(res.gap);
    r.inputs = in.str();
    const Level clipped = std::min<Level>(tr.lambda, cutoff - 1);
    r.empirical = res.tail[static_cast<std::size_t>(clipped)];
    r.analytic = eps;
    finalize(r, cfg.engine_slack());
    r.note = "sigma=" + fmt(tr.sigma) + "; T=" + fmt(tr.t_window);
    if (clipped < tr.lambda) r.note += "; window clipped to cutoff-1";
    r.runtime_s = shared / static_cast<double>(epsilons.size());
    res.reports.push_back(std::move(r));
  }
  return res;
}

std::vector<ExperimentReport> coherent_oracle_check(const std::vector<double>& t_grid, std::optional<int> n_max) {
  std::vector<ExperimentReport> out;
  double t_max = 0.0;
  for (double t : t_grid) t_max = std::max(t_max, std::abs(t));
  const int required = static_cast<int>(std::ceil(4.0 * t_max * t_max + 40.0));
  if (n_max && *n_max < required) {
    throw PreconditionError("coherent check needs n_max >= 4 T^2 + 40 = " + std::to_string(required));
  }
  EvolveConfig cfg;
  cfg.tolerance = 1e-12;
  for (double t : t_grid) {
    const auto start = Clock::now();
    const int nm = n_max.value_or(static_cast<int>(std::ceil(4.0 * t * t + 40.0)));
    const ModelInstance m = single_mode(1.0, 0.0, nm);
    Vec psi = Vec::Zero(static_cast<Eigen::Index>(m.basis.dimension()));
    psi[0] = 1.0;
    psi = evolve(m.hamiltonian, psi, t, cfg);
    const double mu = t * t;
    double mean = 0.0;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
      const double p = std::norm(psi[k]);
      const double kd = static_cast<double>(k);
      const double poisson =
          mu == 0.0 ? (k == 0 ? 1.0 : 0.0) : std::exp(-mu + kd * std::log(mu) - std::lgamma(kd + 1.0));
      worst = std::max(worst, std::abs(p - poisson));
      mean += kd * p;
    }
    ExperimentReport r;
    r.id = "coherent";
    r.inputs = "T=" + fmt(t) + " n_max=" + std::to_string(nm);
    r.empirical = worst;
    r.analytic = 1e-8;
    r.margin = r.analytic - r.empirical;
    const double mean_err = std::abs(mean - mu);
    r.sound = worst <= 1e-8 && mean_err <= 1e-6;
    r.note = "mean=" + fmt(mean) + "; mean_error=" + fmt(mean_err);
    r.runtime_s = seconds_since(start);
    out.push_back(std::move(r));
  }
  return out;
}

TrotterSuiteResult verify_trotter(const ParamRecord& rec, int p, const std::vector<double>& taus, Level window,
                                  const VerifyConfig& cfg) {
  const auto start = Clock::now();
  const ModelInstance model = build_model(rec);
  CouplingSummary summary;
  if (rec.model == "single") {
    summary = summarize_single_mode(rec.get_or("g_lin", 1.0), rec.get_or("omega0", 1.0));
  } else if (rec.model == "hh") {
    HubbardHolsteinParams hp;
    hp.n_sites = static_cast<int>(rec.get_or("n_sites", hp.n_sites));
    hp.hop = rec.get_or("hop", hp.hop);
    hp.u = rec.get_or("u", hp.u);
    hp.mu = rec.get_or("mu", hp.mu);
    hp.g = rec.get_or("g", hp.g);
    hp.omega0 = rec.get_or("omega0", hp.omega0);
    hp.open_boundary = rec.get_or("open_boundary", 1.0) != 0.0;
    summary = summarize_hubbard_holstein(hp);
  } else {
    throw std::invalid_argument("trotter budgets are defined for the single and hh models");
  }
  const Level lambda1 = model.cutoff - 2 * (p + 1);
  if (lambda1 < window) throw PreconditionError("cutoff too small for the Trotter window guard");
  const CommutatorBudget budget = ab_quantities(summary, lambda1, p, model.cutoff);

  TrotterSuiteResult res;
  res.beta = beta_comm(budget);
  std::vector<SparseOperator> parts;
  for (const auto& [name, op] : model.parts) parts.push_back(op);
  EvolveConfig ecfg = cfg.evolve;
  ecfg.tolerance = std::min(ecfg.tolerance, 1e-12);
  res.scan = empirical_trotter_error(parts, model.basis, ProjectorSpec::ball(std::nullopt, window), p, taus,
                                     res.beta, ecfg);
  const double per = seconds_since(start) / static_cast<double>(std::max<std::size_t>(taus.size(), 1));
  for (const auto& pt : res.scan.points) {
    ExperimentReport r;
    r.id = "trotter/step";
    r.inputs = "model=" + rec.model + " p=" + std::to_string(p) + " tau=" + fmt(pt.tau) +
               " window=" + std::to_string(window) + " lambda1=" + std::to_string(lambda1);
    r.empirical = pt.error;
    r.analytic = pt.bound;
    finalize(r, 10.0 * ecfg.tolerance);
    r.runtime_s = per;
    res.reports.push_back(std::move(r));
  }
  ExperimentReport slope;
  slope.id = "trotter/slope";
  slope.inputs = "model=" + rec.model + " p=" + std::to_string(p);
  slope.empirical = std::abs(res.scan.slope - (p + 1));
  slope.analytic = 0.2;
  slope.margin = slope.analytic - slope.empirical;
  slope.sound = slope.empirical <= slope.analytic;
  slope.note = "slope=" + fmt(res.scan.slope);
  res.reports.push_back(std::move(slope));
  return res;
}

CompareTable compare_thresholds(const CompareParams& prm) {
  if (prm.n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  const WalkProfile profile = profile_hubbard_holstein(prm.g);
  const double per_mode_eps = prm.epsilon / std::sqrt(static_cast<double>(prm.n_sites));
  const double excess = hh_initial_energy_excess(prm.omega0, prm.g, prm.n_sites, prm.lambda0);
  const Level energy =
      energy_threshold_hubbard_holstein(prm.omega0, prm.g, prm.n_sites, prm.lambda0, 0.0, excess, prm.epsilon);
  CompareTable table;
  for (double t : prm.times) {
    const BoundReport b = minimal_state_threshold(profile, {prm.lambda0, t, per_mode_eps});
    table.rows.push_back({t, b.lambda, energy, b.bound, b.delta_used});
    if (!table.crossover_t && b.lambda >= energy) table.crossover_t = t;
  }
  return table;
}

}  // namespace qtrunc
