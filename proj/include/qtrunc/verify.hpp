#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtrunc/bounds.hpp"
#include "qtrunc/models.hpp"
#include "qtrunc/propagate.hpp"
#include "qtrunc/trotter.hpp"

namespace qtrunc {

struct ExperimentReport {
  std::string id;
  std::string inputs;
  double empirical = 0.0;
  double analytic = 0.0;
  bool sound = true;
  double margin = 0.0;  // analytic - empirical
  double runtime_s = 0.0;
  std::string note;
};

struct VerifyConfig {
  EvolveConfig evolve{};
  bool check_padding = true;
  double padding_tol = 1e-10;  // Hamiltonian-truncation padding criterion
  int delta_max = kDefaultDeltaMax;
  std::uint64_t seed = kDefaultSeed;  // Lanczos start vectors

  double engine_slack() const { return 10.0 * evolve.tolerance; }
};

/// Fills margin and sound (empirical <= analytic + slack).
void finalize(ExperimentReport& r, double slack);
bool all_sound(const std::vector<ExperimentReport>& reports);

/// Leakage experiments against the short-time (t within the validity window) and long-time
/// bounds for every delta. mode = nullopt applies the union bound over all truncated modes.
std::vector<ExperimentReport> verify_state_truncation(const ParamRecord& model, Level lambda0,
                                                      const std::vector<double>& times,
                                                      const std::vector<int>& deltas,
                                                      std::optional<std::size_t> mode,
                                                      const VerifyConfig& cfg = {});

ExperimentReport verify_hamiltonian_truncation(const ParamRecord& model, Level lambda0, Level lambda_tilde,
                                               double t, const VerifyConfig& cfg = {});

struct TailResult {
  std::vector<ExperimentReport> reports;
  double lambda_bar = 0.0;
  double gap = 0.0;
  double slope = 0.0;  // log tail vs sqrt(lambda)
  std::vector<double> tail;  // ||(1 - Pi_[0,L]) Psi|| for L = 0 .. cutoff
};

/// Ground-state tail against tail_threshold on one truncated mode (default: the first).
TailResult verify_tail(const ParamRecord& model, const std::vector<double>& epsilons,
                       std::optional<std::size_t> mode = std::nullopt, const VerifyConfig& cfg = {});

/// Vacuum evolved under b + b^dag against Poisson(T^2), one report per T.
std::vector<ExperimentReport> coherent_oracle_check(const std::vector<double>& t_grid,
                                                    std::optional<int> n_max = std::nullopt);

struct TrotterSuiteResult {
  std::vector<ExperimentReport> reports;
  TrotterScan scan;
  double beta = 0.0;
};

/// Per-step error against c_p beta tau^{p+1}, plus the order-slope report.
TrotterSuiteResult verify_trotter(const ParamRecord& model, int p, const std::vector<double>& taus,
                                  Level window, const VerifyConfig& cfg = {});

struct CompareParams {
  int n_sites = 100;
  double epsilon = 1e-2;
  Level lambda0 = 4;
  double omega0 = 1.0;
  double g = 0.5;
  std::vector<double> times;
};

struct CompareRow {
  double t = 0.0;
  Level lambda_ours = 0;
  Level lambda_energy = 0;
  double bound = 0.0;
  int delta = 0;
};

struct CompareTable {
  std::vector<CompareRow> rows;
  std::optional<double> crossover_t;  // first T with lambda_ours >= lambda_energy
};

/// Leakage-based versus energy-based thresholds for the Hubbard-Holstein chain.
CompareTable compare_thresholds(const CompareParams& params);

}  // namespace qtrunc
