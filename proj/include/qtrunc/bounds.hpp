#pragma once

// Closed-form leakage bounds and the truncation thresholds derived from them.
//
// Every certified number here comes from the constant-explicit long-time
// bound (a union of short-time Dyson-series segments) plus an enumeration
// over the per-segment growth Delta. Nothing relies on asymptotic constants.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtrunc/walk_profiles.hpp"

namespace qtrunc {

using Level = std::int64_t;

inline constexpr int kDefaultDeltaMax = 512;

struct TruncationQuery {
  Level lambda0 = 0;
  double time = 0.0;
  double epsilon = 1.0;
};

void validate(const TruncationQuery& query);

struct ScheduleStep {
  double t;
  Level lambda;
};

struct Schedule {
  int delta = 2;
  std::vector<ScheduleStep> steps;
  // Set when chi == 0: H_W vanishes and a single unbounded segment covers all time.
  bool no_growth = false;

  std::size_t j_count() const { return steps.size(); }
};

struct BoundReport {
  Level lambda = 0;
  double bound = 0.0;
  int delta_used = 0;
  std::int64_t j_count = 0;
  std::string details;
  // Filled by minimal_state_threshold when optimize_lambda is requested.
  std::optional<Level> alt_lambda;
  std::optional<int> alt_delta;
};

struct HamTruncationQuery {
  int n_modes = 1;
  std::function<double(Level)> comm_norm;
  TruncationQuery query;
  Level lambda_tilde = 0;
};

struct TailQuery {
  double lambda_bar = 0.0;
  double gap = 1.0;
  double epsilon = 1e-2;
};

struct TailReport : BoundReport {
  double sigma = 0.0;
  double t_window = 0.0;
  double overlap_floor = 0.0;
  Level core = 0;  // ceil(2 * lambda_bar), the Markov window the bound starts from
};

/// log(2^{1-delta} (delta!)^{-(1-r)}), finite for every delta >= 1.
double log_segment_bound(double r, int delta);
/// 2^{1-delta} (delta!)^{-(1-r)}; exact double arithmetic while delta! is representable.
double segment_bound(double r, int delta);

/// Largest |t| admitted by the short-time bound at ceiling lambda0.
double short_time_window(const WalkProfile& profile, Level lambda0);

/// Certifies leakage outside (-lambda0-delta, lambda0+delta) for |t| within the window.
/// Throws ValidityError (carrying the admissible maximum) outside it.
double short_time_bound(const WalkProfile& profile, Level lambda0, int delta, double t);

Schedule adaptive_schedule(const WalkProfile& profile, Level lambda0, int delta, double horizon);

/// Threshold Lambda(t) and its certified leakage for a fixed segment growth delta > 1.
/// J = ceil((((lambda0+1)^{1-r} + 2 chi t (1-r)(delta-1))^{1/(1-r)} - 1 - lambda0) / (delta-1)),
/// which is at least the adaptive schedule's step count (equal to it for r = 0).
BoundReport long_time_bound(const WalkProfile& profile, Level lambda0, int delta, double t);

/// Best certified leakage outside [-lambda, lambda] over delta in [2, delta_max].
double leakage_bound_at(const WalkProfile& profile, Level lambda0, Level lambda, double t,
                        int delta_max = kDefaultDeltaMax);

struct StateThresholdOptions {
  int delta_max = kDefaultDeltaMax;
  bool optimize_lambda = false;
};

/// First delta (scanning upward) whose long-time bound meets epsilon.
BoundReport minimal_state_threshold(const WalkProfile& profile, const TruncationQuery& query,
                                    const StateThresholdOptions& options = {});

/// (t^2 / 2) * A(lambda_tilde) * sqrt(n_modes) * leakage_bound_at(lambda0, lambda_tilde - 2, t).
double hamiltonian_truncation_bound(const WalkProfile& profile, const HamTruncationQuery& hquery,
                                    int delta_max = kDefaultDeltaMax);

/// Smallest lambda_tilde >= lambda0 + 2 meeting epsilon. Requires comm_norm nondecreasing.
BoundReport minimal_hamiltonian_threshold(const WalkProfile& profile, const TruncationQuery& query,
                                          int n_modes, const std::function<double(Level)>& comm_norm,
                                          Level cap = Level{1} << 40,
                                          int delta_max = kDefaultDeltaMax);

/// Markov threshold for H = b + b^dag + omega0 n starting from <= lambda0 bosons.
Level energy_threshold_single_mode(double omega0, Level lambda0, double epsilon);

/// Upper bound on E - E_f0 for a product of the fermionic ground state and bosons with
/// at most lambda0 quanta per site.
double hh_initial_energy_excess(double omega0, double g, int n_sites, Level lambda0);

/// Per-site mean occupation bound from omega0 n - 2|g| sqrt(n+1) <= rhs.
double hh_occupation_bound(double omega0, double g, int n_sites, double e_f_ground,
                           double e_total);

/// Energy-based threshold for all sites of a Hubbard-Holstein chain (per-site error eps/sqrt(N)).
/// A NaN e_total is replaced by e_f_ground + hh_initial_energy_excess(..., lambda0).
Level energy_threshold_hubbard_holstein(double omega0, double g, int n_sites, Level lambda0,
                                        double e_f_ground, double e_total, double epsilon);

TailReport tail_threshold(const WalkProfile& profile, const TailQuery& tquery,
                          int delta_max = kDefaultDeltaMax);

}  // namespace qtrunc
