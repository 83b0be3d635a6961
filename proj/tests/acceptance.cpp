// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qtrunc/bounds.hpp"
#include "qtrunc/errors.hpp"
#include "qtrunc/models.hpp"
#include "qtrunc/propagate.hpp"
#include "qtrunc/stats.hpp"
#include "qtrunc/verify.hpp"

using namespace qtrunc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

ParamRecord single_rec(double g, double w, int n_max) {
  ParamRecord r;
  r.model = "single";
  r.set("g_lin", g).set("omega0", w).set("n_max", n_max);
  return r;
}

ParamRecord hh_rec(int n_max) {
  ParamRecord r;
  r.model = "hh";
  r.set("n_sites", 2).set("omega0", 1.0).set("g", 0.5).set("hop", 1.0).set("n_max", n_max);
  return r;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Outcome formula_exactness() {
  Outcome o;
  const WalkProfile lin{1.0, 0.0, ""};
  const BoundReport lt = long_time_bound(lin, 0, 2, 1.0);
  const double st = short_time_bound(lin, 0, 3, short_time_window(lin, 0));
  o.pass = lt.lambda == 2 && lt.bound == 0.5 && st == 1.0 / 24.0;
  o.detail = "long_time=(" + std::to_string(lt.lambda) + ", " + num(lt.bound) + "), short_time=" + num(st);
  return o;
}

Outcome coherent_oracle() {
  Outcome o;
  const auto reps = coherent_oracle_check({0.5, 1.0, 2.0, 3.0});
  double worst = 0.0;
  for (const auto& r : reps) {
    o.pass = o.pass && r.sound;
    worst = std::max(worst, r.empirical);
  }
  o.pass = o.pass && reps.size() == 4;
  o.detail = "max pmf deviation " + num(worst);
  return o;
}

Outcome short_time_soundness() {
  Outcome o;
  const ParamRecord rec = single_rec(1.0, 1.0, 64);
  const WalkProfile prof = profile_of(rec);
  int checks = 0;
  double worst_margin = 1e300;
  for (Level l0 : {0, 2, 4}) {
    const double t = 1.0 / (4.0 * std::sqrt(static_cast<double>(l0) + 1.0));
    if (std::abs(t - short_time_window(prof, l0)) > 1e-15) o.pass = false;
    const auto reps = verify_state_truncation(rec, l0, {t}, {1, 2, 3, 4, 5, 6}, std::size_t{0});
    int delta = 0;
    for (const auto& r : reps) {
      if (r.id != "state/short") continue;
      ++delta;
      const double bound = std::pow(2.0, 1 - delta) / std::sqrt(std::tgamma(delta + 1.0));
      ++checks;
      worst_margin = std::min(worst_margin, bound - r.empirical);
      if (!(r.empirical <= bound + 1e-9)) o.pass = false;
    }
  }
  o.pass = o.pass && checks == 18;
  o.detail = std::to_string(checks) + " checks, min margin " + num(worst_margin);
  return o;
}

Outcome long_time_soundness() {
  Outcome o;
  const ParamRecord rec = hh_rec(12);
  VerifyConfig cfg;
  std::size_t n = 0;
  double worst_margin = 1e300;
  for (std::optional<std::size_t> mode : {std::optional<std::size_t>{2}, std::optional<std::size_t>{}}) {
    const auto reps = verify_state_truncation(rec, 0, {0.5, 1.0, 2.0}, {2, 3, 4, 5}, mode, cfg);
    for (const auto& r : reps) {
      if (r.id != "state/long") continue;
      ++n;
      worst_margin = std::min(worst_margin, r.margin);
      o.pass = o.pass && r.sound;
    }
  }
  o.pass = o.pass && n == 24;
  o.detail = std::to_string(n) + " reports, min margin " + num(worst_margin);
  return o;
}

Outcome hamiltonian_soundness() {
  Outcome o;
  double worst_pad = 0.0;
  double worst_margin = 1e300;
  for (Level lt : {6, 10, 14}) {
    const ExperimentReport r = verify_hamiltonian_truncation(single_rec(1.0, 1.0, 48), 0, lt, 1.0);
    const ExperimentReport d = verify_hamiltonian_truncation(single_rec(1.0, 1.0, 96), 0, lt, 1.0);
    const double pad = std::abs(r.empirical - d.empirical);
    worst_pad = std::max(worst_pad, pad);
    worst_margin = std::min(worst_margin, r.analytic - r.empirical);
    o.pass = o.pass && r.sound && r.empirical <= r.analytic && pad < 1e-10;
  }
  o.detail = "min margin " + num(worst_margin) + ", max padding change " + num(worst_pad);
  return o;
}

Outcome comparison_curves() {
  Outcome o;
  CompareParams a;
  a.n_sites = 100;
  a.epsilon = 1e-2;
  for (int k = 1; k <= 40; ++k) a.times.push_back(0.25 * k);
  const CompareTable ta = compare_thresholds(a);
  bool below = true;
  for (const auto& r : ta.rows) below = below && r.lambda_ours < r.lambda_energy;

  CompareParams b = a;
  b.times.clear();
  std::vector<double> ts, roots;
  for (int k = 0; k <= 90; ++k) b.times.push_back(5.0 + 0.5 * k);
  for (const auto& r : compare_thresholds(b).rows) {
    ts.push_back(r.t);
    roots.push_back(std::sqrt(static_cast<double>(r.lambda_ours)));
  }
  const LinearFit fit = linear_fit(ts, roots);

  CompareParams c;
  c.n_sites = 5;
  c.epsilon = 0.1;
  for (int k = 1; k <= 200; ++k) c.times.push_back(0.25 * k);
  const CompareTable tc = compare_thresholds(c);
  const bool crossover = tc.crossover_t && *tc.crossover_t > 0.0 && *tc.crossover_t <= 50.0;

  o.pass = below && fit.r2 > 0.99 && crossover;
  o.detail = std::string("(a) ") + (below ? "below" : "NOT below") + " energy threshold " +
             std::to_string(ta.rows.front().lambda_energy) + "; (b) R^2=" + num(fit.r2) + "; (c) crossover T=" +
             (tc.crossover_t ? num(*tc.crossover_t) : std::string("none"));
  return o;
}

Outcome tail_soundness() {
  Outcome o;
  const std::vector<double> eps{1e-2, 1e-4, 1e-6};
  const TailResult res = verify_tail(hh_rec(16), eps);
  o.pass = res.gap > 1e-8 && res.slope < 0.0 && res.reports.size() == eps.size();
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    const TailReport tr = tail_threshold(profile_of(hh_rec(16)), {res.lambda_bar, res.gap, eps[i]});
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(tr.lambda), res.tail.size() - 1);
    o.pass = o.pass && res.reports[i].sound && res.tail[idx] <= eps[i];
  }
  o.detail = "gap " + num(res.gap) + ", slope " + num(res.slope);
  return o;
}

Outcome trotter_scaling() {
  Outcome o;
  const std::vector<double> taus{0.2, 0.1, 0.05, 0.025};
  const TrotterSuiteResult s1 = verify_trotter(single_rec(1.0, 1.0, 32), 1, taus, 2);
  const TrotterSuiteResult s2 = verify_trotter(hh_rec(10), 2, taus, 2);
  auto per_step_ok = [](const TrotterSuiteResult& s) {
    for (const auto& pt : s.scan.points) {
      if (!(pt.error <= pt.bound)) return false;
    }
    return !s.scan.points.empty();
  };
  o.pass = std::abs(s1.scan.slope - 2.0) <= 0.2 && std::abs(s2.scan.slope - 3.0) <= 0.2 && per_step_ok(s1) &&
           per_step_ok(s2) && all_sound(s1.reports) && all_sound(s2.reports);
  o.detail = "slopes p=1: " + num(s1.scan.slope) + ", p=2: " + num(s2.scan.slope);
  return o;
}

Outcome engine_oracles() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> dim(2, 512);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_evolve = 0.0;
  double worst_energy = 0.0;
  double worst_state = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const std::size_t n = static_cast<std::size_t>(dim(rng));
    const double density = std::min(1.0, 8.0 / static_cast<double>(n));
    std::bernoulli_distribution keep(density);
    std::vector<Entry> es;
    for (std::size_t i = 0; i < n; ++i) {
      es.push_back({i, i, cplx(2.0 * u(rng), 0.0)});
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!keep(rng)) continue;
        const cplx v(u(rng), u(rng));
        es.push_back({i, j, v});
        es.push_back({j, i, std::conj(v)});
      }
    }
    const SparseOperator h = SparseOperator::from_entries(n, es);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> dense(h.dense());
    const Vec psi = random_unit_vector(n, static_cast<std::uint64_t>(draw) + 1);
    const double t = 0.5 + 2.0 * std::abs(u(rng));
    const Eigen::VectorXcd phase = (dense.eigenvalues().cast<cplx>() * cplx(0, -t)).array().exp().matrix();
    const Vec exact = dense.eigenvectors() * phase.asDiagonal() * (dense.eigenvectors().adjoint() * psi);
    worst_evolve = std::max(worst_evolve, (evolve(h, psi, t) - exact).norm());

    const Eigenpair g = ground_state(h, 1e-12);
    worst_energy = std::max(worst_energy, std::abs(g.energy - dense.eigenvalues()[0]));
    const double gap = n > 1 ? dense.eigenvalues()[1] - dense.eigenvalues()[0] : 1.0;
    if (gap > 1e-3) {
      const double overlap = std::abs(g.state.dot(dense.eigenvectors().col(0)));
      worst_state = std::max(worst_state, std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap)));
    }
  }
  o.pass = worst_evolve <= 1e-9 && worst_energy <= 1e-9 && worst_state <= 1e-9;
  o.detail = "evolve " + num(worst_evolve) + ", energy " + num(worst_energy) + ", state " + num(worst_state);
  return o;
}

Outcome energy_exactness() {
  Outcome o;
  const Level v = energy_threshold_single_mode(1.0, 4, 0.1);
  o.pass = v == 1694;
  o.detail = "Lambda=" + std::to_string(v);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "formula exactness", 1.0, formula_exactness},
      {2, "coherent-state oracle", 10.0, coherent_oracle},
      {3, "short-time soundness", 30.0, short_time_soundness},
      {4, "long-time soundness", 300.0, long_time_soundness},
      {5, "hamiltonian-truncation soundness", 120.0, hamiltonian_soundness},
      {6, "threshold comparison curves", 60.0, comparison_curves},
      {7, "tail soundness", 180.0, tail_soundness},
      {8, "trotter order scaling", 300.0, trotter_scaling},
      {9, "engine oracles", 60.0, engine_oracles},
      {10, "energy-threshold exactness", 1.0, energy_exactness},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > c.limit_s) {
      o.pass = false;
      o.detail += "; runtime limit " + num(c.limit_s) + " s exceeded";
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %2d %-34s %s  %s  (%.2f s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
