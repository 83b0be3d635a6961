#include "qtrunc/trotter.hpp"

#include <cmath>
#include <stdexcept>

#include "qtrunc/errors.hpp"
#include "qtrunc/stats.hpp"

namespace qtrunc {

void validate(const CouplingSummary& s) {
  const double vals[] = {s.t_max_row, s.t_total, s.v_max_row, s.v_total, s.g_max_fermion, s.g_max_mode,
                         s.g_total,   s.h_max_fermion, s.h_max_mode, s.h_total, s.omega_max, s.omega_total};
  for (double v : vals) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("coupling summaries must be finite and >= 0");
  }
}

namespace {

struct ModeSums {
  double max_fermion = 0.0;
  double max_mode = 0.0;
  double total = 0.0;
};

ModeSums mode_sums(const std::vector<Eigen::MatrixXd>& g, const std::vector<double>& offset, Eigen::Index nf) {
  ModeSums out;
  const std::size_t n_modes = std::max(g.size(), offset.size());
  Eigen::VectorXd per_fermion = Eigen::VectorXd::Zero(nf);
  for (std::size_t a = 0; a < n_modes; ++a) {
    double mode_sum = a < offset.size() ? std::abs(offset[a]) : 0.0;
    if (a < g.size()) {
      if (g[a].rows() != nf || g[a].cols() != nf) throw std::invalid_argument("coupling matrix has the wrong shape");
      const Eigen::MatrixXd ab = g[a].cwiseAbs();
      mode_sum += ab.sum();
      per_fermion += ab.colwise().sum().transpose();
    }
    out.max_mode = std::max(out.max_mode, mode_sum);
    out.total += mode_sum;
  }
  out.max_fermion = nf > 0 ? per_fermion.maxCoeff() : 0.0;
  return out;
}

}  // namespace

CouplingSummary summarize_couplings(const Eigen::MatrixXd& t, const Eigen::MatrixXd& v,
                                    const std::vector<Eigen::MatrixXd>& g, const std::vector<Eigen::MatrixXd>& h,
                                    const std::vector<double>& omega, const std::vector<double>& g_offset,
                                    const std::vector<double>& h_offset) {
  if (t.rows() != t.cols() || v.rows() != t.rows() || v.cols() != t.cols()) {
    throw std::invalid_argument("t and V must be square and of equal size");
  }
  const Eigen::Index nf = t.rows();
  CouplingSummary s;
  if (nf > 0) {
    s.t_max_row = t.cwiseAbs().rowwise().sum().maxCoeff();
    s.v_max_row = v.cwiseAbs().rowwise().sum().maxCoeff();
  }
  s.t_total = t.cwiseAbs().sum();
  s.v_total = v.cwiseAbs().sum();
  const ModeSums gs = mode_sums(g, g_offset, nf);
  const ModeSums hs = mode_sums(h, h_offset, nf);
  s.g_max_fermion = gs.max_fermion;
  s.g_max_mode = gs.max_mode;
  s.g_total = gs.total;
  s.h_max_fermion = hs.max_fermion;
  s.h_max_mode = hs.max_mode;
  s.h_total = hs.total;
  for (double w : omega) {
    s.omega_max = std::max(s.omega_max, std::abs(w));
    s.omega_total += std::abs(w);
  }
  return s;
}

CouplingSummary summarize_hubbard_holstein(const HubbardHolsteinParams& p) {
  if (p.n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  const Eigen::Index nf = 2 * p.n_sites;
  auto f = [](int site, int spin) { return static_cast<Eigen::Index>(2 * site + spin); };
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(nf, nf);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(nf, nf);
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < p.n_sites; ++i) bonds.emplace_back(i, i + 1);
  if (!p.open_boundary && p.n_sites > 2) bonds.emplace_back(p.n_sites - 1, 0);
  for (const auto& [i, j] : bonds) {
    for (int s = 0; s < 2; ++s) {
      t(f(i, s), f(j, s)) += -p.hop;
      t(f(j, s), f(i, s)) += -p.hop;
    }
  }
  std::vector<Eigen::MatrixXd> g;
  std::vector<double> offset;
  const double gx = std::sqrt(2.0) * p.g;
  for (int i = 0; i < p.n_sites; ++i) {
    for (int s = 0; s < 2; ++s) t(f(i, s), f(i, s)) += -p.mu - 0.5 * p.u;
    v(f(i, 0), f(i, 1)) = 0.5 * p.u;
    v(f(i, 1), f(i, 0)) = 0.5 * p.u;
    Eigen::MatrixXd ga = Eigen::MatrixXd::Zero(nf, nf);
    ga(f(i, 0), f(i, 0)) = gx;
    ga(f(i, 1), f(i, 1)) = gx;
    g.push_back(ga);
    offset.push_back(-gx);
  }
  const std::vector<double> omega(static_cast<std::size_t>(p.n_sites), p.omega0);
  return summarize_couplings(t, v, g, {}, omega, offset, {});
}

CouplingSummary summarize_single_mode(double g_lin, double omega0) {
  return summarize_couplings(Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, 0), {}, {}, {omega0},
                             {std::sqrt(2.0) * g_lin}, {});
}

CommutatorBudget ab_quantities(const CouplingSummary& s, Level lambda1_prime, int p, Level lambda_tilde) {
  validate(s);
  if (p < 1) throw std::invalid_argument("product formula order p must be >= 1");
  if (lambda1_prime < 0) throw std::invalid_argument("lambda1_prime must be >= 0");
  if (lambda_tilde < lambda1_prime + 2 * (p + 1)) {
    throw PreconditionError("window guard: lambda_tilde must be >= lambda1_prime + 2(p+1)");
  }
  const double w = 2.0 * (static_cast<double>(lambda1_prime) + 1.0);
  const double sw = std::sqrt(w);
  CommutatorBudget b;
  b.p = p;
  b.lambda1_prime = lambda1_prime;
  for (int q = 1; q <= p; ++q) {
    const double qd = q;
    b.a_values.push_back({
        2.0 * qd * s.t_max_row,
        4.0 * qd * s.v_max_row,
        2.0 * qd * s.g_max_fermion * sw + qd * s.g_max_mode / sw,
        2.0 * qd * s.h_max_fermion * sw + qd * s.h_max_mode / sw,
        qd * s.omega_max,
        qd * s.omega_max,
    });
  }
  const double lp1 = static_cast<double>(lambda1_prime) + 1.0;
  b.b_values = {s.t_total, s.v_total, s.g_total * sw, s.h_total * sw, s.omega_total * lp1, s.omega_total * lp1};
  return b;
}

double beta_comm(const CommutatorBudget& budget) {
  double beta = 0.0;
  for (double x : budget.b_values) beta += x;
  for (const auto& a : budget.a_values) {
    double sum = 0.0;
    for (double x : a) sum += x;
    beta *= sum;
  }
  return beta;
}

TrotterPlan trotter_steps(double t_total, double epsilon, int p, double beta, double prefactor) {
  if (!(t_total > 0.0) || !std::isfinite(t_total)) throw std::invalid_argument("T must be finite and > 0");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (!(beta >= 0.0) || !(prefactor > 0.0)) throw std::invalid_argument("beta must be >= 0 and prefactor > 0");
  const double inv_p = 1.0 / p;
  const double raw = prefactor * std::pow(t_total, 1.0 + inv_p) * std::pow(beta, inv_p) * std::pow(epsilon, -inv_p);
  if (!(raw < 9.0e18)) throw CapExceeded("trotter_steps: step count overflows");
  TrotterPlan plan;
  plan.steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
  plan.tau = t_total / static_cast<double>(plan.steps);
  plan.prefactor = prefactor;
  plan.beta = beta;
  return plan;
}

double per_step_bound(double beta, int p, double tau) {
  double c = 0.0;
  if (p == 1) c = 0.5;
  else if (p == 2) c = 1.0 / 12.0;
  else throw std::invalid_argument("per_step_bound: certified constants exist for p = 1, 2 only");
  return c * beta * std::pow(std::abs(tau), p + 1);
}

std::vector<std::pair<std::size_t, double>> product_formula(std::size_t n_parts, int p) {
  if (n_parts == 0) throw std::invalid_argument("product_formula: no parts");
  std::vector<std::pair<std::size_t, double>> seq;
  if (p == 1) {
    for (std::size_t i = 0; i < n_parts; ++i) seq.emplace_back(i, 1.0);
    return seq;
  }
  if (p == 2) {
    for (std::size_t i = 0; i + 1 < n_parts; ++i) seq.emplace_back(i, 0.5);
    seq.emplace_back(n_parts - 1, 1.0);
    for (std::size_t i = n_parts - 1; i-- > 0;) seq.emplace_back(i, 0.5);
    return seq;
  }
  if (p < 1 || p % 2 != 0) throw std::invalid_argument("product_formula: order must be 1 or even");
  const int k = p / 2;
  const double u = 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0)));
  const auto inner = product_formula(n_parts, p - 2);
  auto append = [&](double scale) {
    for (const auto& [part, frac] : inner) {
      if (!seq.empty() && seq.back().first == part) seq.back().second += frac * scale;
      else seq.emplace_back(part, frac * scale);
    }
  };
  append(u);
  append(u);
  append(1.0 - 4.0 * u);
  append(u);
  append(u);
  return seq;
}

double trotter_error(const std::vector<SparseOperator>& parts, const CompositeBasis& basis,
                     const ProjectorSpec& window, int p, double tau, const EvolveConfig& cfg) {
  if (parts.empty()) throw std::invalid_argument("trotter_error: no parts");
  SparseOperator h(parts.front().dim());
  for (const auto& part : parts) {
    require_hermitian(part);
    h += part;
  }
  const auto seq = product_formula(parts.size(), p);
  const auto cols = window_indices(basis, window);
  EvolveConfig inner = cfg;
  inner.check_hermitian = false;
  const auto n = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXcd diff(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    Vec e = Vec::Zero(n);
    e[static_cast<Eigen::Index>(cols[j])] = 1.0;
    Vec s = e;
    // The rightmost exponential acts first.
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) s = evolve(parts[it->first], s, it->second * tau, inner);
    diff.col(static_cast<Eigen::Index>(j)) = s - evolve(h, e, tau, inner);
  }
  return gram_norm(diff);
}

TrotterScan empirical_trotter_error(const std::vector<SparseOperator>& parts, const CompositeBasis& basis,
                                    const ProjectorSpec& window, int p, const std::vector<double>& taus,
                                    double beta, const EvolveConfig& cfg) {
  TrotterScan scan;
  scan.p = p;
  std::vector<double> lx, ly;
  for (double tau : taus) {
    TrotterPoint pt;
    pt.tau = tau;
    pt.error = trotter_error(parts, basis, window, p, tau, cfg);
    if (beta > 0.0 && p <= 2) pt.bound = per_step_bound(beta, p, tau);
    scan.points.push_back(pt);
    if (pt.error > 0.0 && tau > 0.0) {
      lx.push_back(std::log(tau));
      ly.push_back(std::log(pt.error));
    }
  }
  if (lx.size() >= 2) scan.slope = linear_fit(lx, ly).slope;
  return scan;
}

}  // namespace qtrunc
