#include "qtrunc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qtrunc/errors.hpp"

namespace qtrunc {

namespace {

constexpr Level kLevelCap = Level{1} << 62;

void check_delta(int delta, int lowest) {
  if (delta < lowest) {
    throw std::invalid_argument("delta must be >= " + std::to_string(lowest));
  }
}

// Continuous ceiling reached after time t when each segment adds (delta-1). Segment j lasts
// 1/(2 chi (lambda_{j-1}+1)^r), so integrating w^{-r} from lambda0+1 never overcounts elapsed time
// and the resulting segment count is never below the adaptive schedule's.
double growth_extent(const WalkProfile& p, Level lambda0, int delta, double t) {
  const double l0 = static_cast<double>(lambda0);
  const double step = 2.0 * p.chi * t * (1.0 - p.r) * static_cast<double>(delta - 1);
  if (p.r == 0.0) return l0 + step;
  return std::pow(std::pow(l0 + 1.0, 1.0 - p.r) + step, 1.0 / (1.0 - p.r)) - 1.0;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

void validate(const TruncationQuery& q) {
  if (q.lambda0 < 0) throw std::invalid_argument("lambda0 must be >= 0");
  if (!(q.time >= 0.0) || !std::isfinite(q.time)) {
    throw std::invalid_argument("time must be finite and >= 0");
  }
  if (!(q.epsilon > 0.0 && q.epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  }
}

double log_segment_bound(double r, int delta) {
  check_delta(delta, 1);
  return (1.0 - delta) * std::numbers::ln2 - (1.0 - r) * std::lgamma(delta + 1.0);
}

double segment_bound(double r, int delta) {
  check_delta(delta, 1);
  if (delta <= 170) return std::ldexp(1.0, 1 - delta) / std::pow(factorial(delta), 1.0 - r);
  return std::exp(log_segment_bound(r, delta));
}

double short_time_window(const WalkProfile& profile, Level lambda0) {
  validate(profile);
  if (lambda0 < 0) throw std::invalid_argument("lambda0 must be >= 0");
  if (profile.chi == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * profile.chi * std::pow(static_cast<double>(lambda0) + 1.0, profile.r));
}

double short_time_bound(const WalkProfile& profile, Level lambda0, int delta, double t) {
  check_delta(delta, 1);
  const double window = short_time_window(profile, lambda0);
  if (!(std::abs(t) <= window)) {
    std::ostringstream os;
    os << "short_time_bound: |t| = " << std::abs(t) << " exceeds the admissible " << window;
    throw ValidityError(os.str(), window);
  }
  return segment_bound(profile.r, delta);
}

Schedule adaptive_schedule(const WalkProfile& profile, Level lambda0, int delta, double horizon) {
  validate(profile);
  check_delta(delta, 2);
  if (lambda0 < 0) throw std::invalid_argument("lambda0 must be >= 0");
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be >= 0");

  Schedule s;
  s.delta = delta;
  if (horizon == 0.0) return s;
  if (profile.chi == 0.0) {
    s.no_growth = true;
    s.steps.push_back({std::numeric_limits<double>::infinity(), lambda0 + delta - 1});
    return s;
  }
  double t = 0.0;
  Level lam = lambda0;
  while (t < horizon) {
    t += 1.0 / (2.0 * profile.chi * std::pow(static_cast<double>(lam) + 1.0, profile.r));
    if (lam > kLevelCap - delta) throw CapExceeded("adaptive_schedule: level overflow");
    lam += delta - 1;
    s.steps.push_back({t, lam});
  }
  return s;
}

BoundReport long_time_bound(const WalkProfile& profile, Level lambda0, int delta, double t) {
  validate(profile);
  check_delta(delta, 2);
  if (lambda0 < 0) throw std::invalid_argument("lambda0 must be >= 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be finite and >= 0");

  BoundReport rep;
  rep.delta_used = delta;
  if (t == 0.0 || profile.chi == 0.0) {
    rep.lambda = lambda0;
    rep.details = "no segments required";
    return rep;
  }
  const double extent = growth_extent(profile, lambda0, delta, t);
  const double j = std::max(0.0, std::ceil((extent - static_cast<double>(lambda0)) / (delta - 1)));
  if (!(j * (delta - 1) < static_cast<double>(kLevelCap - lambda0))) {
    throw CapExceeded("long_time_bound: threshold exceeds the representable range");
  }
  rep.j_count = static_cast<std::int64_t>(j);
  rep.lambda = lambda0 + rep.j_count * (delta - 1);
  rep.bound = std::min(1.0, j * segment_bound(profile.r, delta));
  std::ostringstream os;
  os << "J=" << rep.j_count << " segments of growth " << delta - 1;
  rep.details = os.str();
  return rep;
}

double leakage_bound_at(const WalkProfile& profile, Level lambda0, Level lambda, double t,
                        int delta_max) {
  validate(profile);
  check_delta(delta_max, 2);
  if (lambda < lambda0) return 1.0;
  if (t == 0.0 || profile.chi == 0.0) return 0.0;
  double best = 1.0;
  for (int delta = 2; delta <= delta_max; ++delta) {
    if (growth_extent(profile, lambda0, delta, t) > static_cast<double>(lambda)) break;
    const BoundReport rep = long_time_bound(profile, lambda0, delta, t);
    if (rep.lambda <= lambda) best = std::min(best, rep.bound);
  }
  return best;
}

BoundReport minimal_state_threshold(const WalkProfile& profile, const TruncationQuery& query,
                                    const StateThresholdOptions& options) {
  validate(profile);
  validate(query);
  check_delta(options.delta_max, 2);

  std::optional<BoundReport> first;
  std::optional<BoundReport> smallest;
  for (int delta = 2; delta <= options.delta_max; ++delta) {
    BoundReport rep;
    try {
      rep = long_time_bound(profile, query.lambda0, delta, query.time);
    } catch (const CapExceeded&) {
      break;
    }
    if (rep.bound > query.epsilon) continue;
    if (!first) {
      first = rep;
      if (!options.optimize_lambda) break;
    }
    if (!smallest || rep.lambda < smallest->lambda) smallest = rep;
  }
  if (!first) {
    throw CapExceeded("minimal_state_threshold: no delta <= " + std::to_string(options.delta_max) +
                      " meets epsilon");
  }
  BoundReport out = *first;
  if (options.optimize_lambda) {
    out.alt_lambda = smallest->lambda;
    out.alt_delta = smallest->delta_used;
  }
  return out;
}

double hamiltonian_truncation_bound(const WalkProfile& profile, const HamTruncationQuery& hq,
                                    int delta_max) {
  validate(profile);
  validate(hq.query);
  if (hq.n_modes < 1) throw std::invalid_argument("n_modes must be >= 1");
  if (!hq.comm_norm) throw std::invalid_argument("comm_norm callback is required");
  if (hq.lambda_tilde < hq.query.lambda0 + 2) {
    throw PreconditionError("lambda_tilde must be >= lambda0 + 2");
  }
  const double t = hq.query.time;
  const double leak = leakage_bound_at(profile, hq.query.lambda0, hq.lambda_tilde - 2, t, delta_max);
  if (leak == 0.0) return 0.0;
  return 0.5 * t * t * hq.comm_norm(hq.lambda_tilde) * std::sqrt(static_cast<double>(hq.n_modes)) *
         leak;
}

BoundReport minimal_hamiltonian_threshold(const WalkProfile& profile, const TruncationQuery& query,
                                          int n_modes, const std::function<double(Level)>& comm_norm,
                                          Level cap, int delta_max) {
  validate(profile);
  validate(query);
  check_delta(delta_max, 2);

  // The bound only decreases where the leakage factor steps down, i.e. at
  // lambda_tilde - 2 equal to some long-time threshold.
  std::vector<std::pair<Level, int>> candidates{{query.lambda0 + 2, 0}};
  for (int delta = 2; delta <= delta_max; ++delta) {
    try {
      const BoundReport rep = long_time_bound(profile, query.lambda0, delta, query.time);
      if (rep.lambda + 2 <= cap) candidates.emplace_back(rep.lambda + 2, delta);
    } catch (const CapExceeded&) {
      break;
    }
  }
  std::sort(candidates.begin(), candidates.end());

  HamTruncationQuery hq{n_modes, comm_norm, query, 0};
  Level last = -1;
  for (const auto& [lt, delta] : candidates) {
    if (lt == last || lt > cap) continue;
    last = lt;
    hq.lambda_tilde = lt;
    const double b = hamiltonian_truncation_bound(profile, hq, delta_max);
    if (b <= query.epsilon) {
      BoundReport rep;
      rep.lambda = lt;
      rep.bound = b;
      rep.delta_used = delta;
      std::ostringstream os;
      os << "breakpoint scan over " << candidates.size() << " candidates";
      rep.details = os.str();
      return rep;
    }
  }
  throw CapExceeded("minimal_hamiltonian_threshold: no lambda_tilde <= " + std::to_string(cap) +
                    " meets epsilon");
}

namespace {

Level markov_level(double mean, double epsilon) {
  const double x = std::ceil(mean / (epsilon * epsilon));
  if (!(x < static_cast<double>(kLevelCap))) throw CapExceeded("energy threshold overflow");
  return std::max<Level>(0, static_cast<Level>(x) - 1);
}

void check_energy_inputs(double omega0, Level lambda0, double epsilon) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  if (lambda0 < 0) throw std::invalid_argument("lambda0 must be >= 0");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
}

}  // namespace

Level energy_threshold_single_mode(double omega0, Level lambda0, double epsilon) {
  check_energy_inputs(omega0, lambda0, epsilon);
  const double s = 2.0 / omega0 + std::sqrt(static_cast<double>(lambda0) + 1.0);
  return markov_level(s * s - 1.0, epsilon);
}

double hh_initial_energy_excess(double omega0, double g, int n_sites, Level lambda0) {
  if (n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  const double l0 = static_cast<double>(lambda0);
  return n_sites * (omega0 * l0 + 2.0 * std::abs(g) * std::sqrt(l0 + 1.0));
}

double hh_occupation_bound(double omega0, double g, int n_sites, double e_f_ground,
                           double e_total) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
  if (n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  const double ag = std::abs(g);
  const double rhs = e_total - e_f_ground + (n_sites - 1) * (ag * ag / omega0 + omega0);
  const double disc = ag * ag + omega0 * (omega0 + rhs);
  if (disc < 0.0) return 0.0;
  const double s = (ag + std::sqrt(disc)) / omega0;
  return std::max(0.0, s * s - 1.0);
}

Level energy_threshold_hubbard_holstein(double omega0, double g, int n_sites, Level lambda0,
                                        double e_f_ground, double e_total, double epsilon) {
  check_energy_inputs(omega0, lambda0, epsilon);
  if (std::isnan(e_total)) e_total = e_f_ground + hh_initial_energy_excess(omega0, g, n_sites, lambda0);
  const double n = hh_occupation_bound(omega0, g, n_sites, e_f_ground, e_total);
  if (n <= 0.0) return 0;
  return markov_level(n * n_sites, epsilon);
}

TailReport tail_threshold(const WalkProfile& profile, const TailQuery& tq, int delta_max) {
  validate(profile);
  check_delta(delta_max, 2);
  if (!(tq.gap > 0.0)) throw std::invalid_argument("gap must be > 0");
  if (!(tq.epsilon > 0.0 && tq.epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!(tq.lambda_bar >= 0.0)) throw std::invalid_argument("lambda_bar must be >= 0");

  const double c = 12.0 * std::numbers::sqrt2;
  TailReport rep;
  rep.sigma = tq.gap / std::sqrt(2.0 * std::log(c / tq.epsilon));
  rep.t_window = std::sqrt(2.0 * std::log(c * std::sqrt(2.0 / std::numbers::pi) / tq.epsilon)) / rep.sigma;
  rep.overlap_floor = 1.0 / (2.0 * std::numbers::sqrt2);
  rep.core = static_cast<Level>(std::ceil(2.0 * tq.lambda_bar));

  const double target = tq.epsilon / 3.0;
  bool found = false;
  for (int delta = 2; delta <= delta_max; ++delta) {
    BoundReport b;
    try {
      b = long_time_bound(profile, rep.core, delta, rep.t_window);
    } catch (const CapExceeded&) {
      break;
    }
    if (2.0 * std::numbers::sqrt2 * b.bound > target) continue;
    if (!found || b.lambda < rep.lambda) {
      rep.lambda = b.lambda;
      rep.bound = b.bound;
      rep.delta_used = b.delta_used;
      rep.j_count = b.j_count;
      found = true;
    }
  }
  if (!found) throw CapExceeded("tail_threshold: no delta meets epsilon / 3");
  std::ostringstream os;
  os << "sigma=" << rep.sigma << " T=" << rep.t_window << " core=" << rep.core;
  rep.details = os.str();
  return rep;
}

}  // namespace qtrunc
