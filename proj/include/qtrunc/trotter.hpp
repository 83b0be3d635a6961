#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qtrunc/bounds.hpp"
#include "qtrunc/fock_algebra.hpp"
#include "qtrunc/models.hpp"
#include "qtrunc/propagate.hpp"

namespace qtrunc {

/// Row maxima and totals of |coefficient| for the six-term boson-fermion form
///   t c^dag c,  V n n,  g c^dag c X,  h c^dag c P,  omega X^2 / 2,  omega P^2 / 2.
struct CouplingSummary {
  double t_max_row = 0.0;
  double t_total = 0.0;
  double v_max_row = 0.0;
  double v_total = 0.0;
  double g_max_fermion = 0.0;  // max_j sum_{alpha, i} |g^(alpha)_ij|
  double g_max_mode = 0.0;     // max_alpha sum_{ij} |g^(alpha)_ij|
  double g_total = 0.0;
  double h_max_fermion = 0.0;
  double h_max_mode = 0.0;
  double h_total = 0.0;
  double omega_max = 0.0;
  double omega_total = 0.0;
};

void validate(const CouplingSummary& s);

/// Bare-X couplings (alpha-dependent multiples of the identity on the fermions) enter as
/// g_offset / h_offset per mode and are added to the mode maxima and totals.
CouplingSummary summarize_couplings(const Eigen::MatrixXd& t, const Eigen::MatrixXd& v,
                                    const std::vector<Eigen::MatrixXd>& g,
                                    const std::vector<Eigen::MatrixXd>& h,
                                    const std::vector<double>& omega,
                                    const std::vector<double>& g_offset = {},
                                    const std::vector<double>& h_offset = {});

/// Hubbard-Holstein written in the six-term form; constant shifts dropped.
CouplingSummary summarize_hubbard_holstein(const HubbardHolsteinParams& p);
/// g_lin (b + b^dag) + omega0 n, i.e. a bare sqrt(2) g_lin X plus the oscillator.
CouplingSummary summarize_single_mode(double g_lin, double omega0);

struct CommutatorBudget {
  int p = 1;
  std::vector<std::array<double, 6>> a_values;  // a_values[q-1][gamma]
  std::array<double, 6> b_values{};
  Level lambda1_prime = 0;
};

/// Throws PreconditionError unless lambda_tilde >= lambda1_prime + 2(p+1).
CommutatorBudget ab_quantities(const CouplingSummary& s, Level lambda1_prime, int p, Level lambda_tilde);

/// prod_{q=1..p} (sum_gamma A^(q)_gamma) * sum_gamma B_gamma.
double beta_comm(const CommutatorBudget& budget);

struct TrotterPlan {
  std::int64_t steps = 1;
  double tau = 0.0;
  double prefactor = 1.0;
  double beta = 0.0;
};

/// R = max(1, ceil(prefactor T^{1+1/p} beta^{1/p} eps^{-1/p})); the prefactor is not certified.
TrotterPlan trotter_steps(double t_total, double epsilon, int p, double beta, double prefactor = 1.0);

/// Certified per-step error c_p beta tau^{p+1} with c_1 = 1/2 (Lie) and c_2 = 1/12 (Strang).
double per_step_bound(double beta, int p, double tau);

/// Exponential sequence (part index, fraction of tau) for order p in {1, 2, 4, 6, ...}.
std::vector<std::pair<std::size_t, double>> product_formula(std::size_t n_parts, int p);

struct TrotterPoint {
  double tau = 0.0;
  double error = 0.0;
  double bound = 0.0;
};

struct TrotterScan {
  int p = 1;
  std::vector<TrotterPoint> points;
  double slope = 0.0;  // least-squares slope of log error vs log tau
};

/// ||(S_p(tau) - exp(-i tau H)) Pi_window||, H the sum of parts, exact over window columns.
double trotter_error(const std::vector<SparseOperator>& parts, const CompositeBasis& basis,
                     const ProjectorSpec& window, int p, double tau, const EvolveConfig& cfg = {});

/// Error per tau and its log-log slope; bound filled when beta > 0 and p <= 2.
TrotterScan empirical_trotter_error(const std::vector<SparseOperator>& parts, const CompositeBasis& basis,
                                    const ProjectorSpec& window, int p, const std::vector<double>& taus,
                                    double beta = 0.0, const EvolveConfig& cfg = {});

}  // namespace qtrunc
