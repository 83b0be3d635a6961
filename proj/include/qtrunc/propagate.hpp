#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qtrunc/fock_algebra.hpp"

namespace qtrunc {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2024ULL;

struct EvolveConfig {
  double tolerance = 1e-10;  // global 2-norm error budget
  int max_krylov = 32;
  int max_halvings = 60;
  bool check_hermitian = true;
};

/// Throws std::invalid_argument when sqrt(||H - H^dag||_1 ||H - H^dag||_inf) > tol.
void require_hermitian(const SparseOperator& h, double tol = 1e-10);

/// exp(-i t H) psi0 by Lanczos with a-posteriori substep control.
Vec evolve(const SparseOperator& h, const Vec& psi0, double t, const EvolveConfig& cfg = {});

struct Eigenpair {
  double energy = 0.0;
  Vec state;
};

struct EigenConfig {
  double tol = 1e-10;  // residual ||H x - e x||
  int krylov = 200;
  int max_restarts = 400;
  std::uint64_t seed = kDefaultSeed;
};

/// The k lowest eigenpairs (ascending) by restarted Lanczos with deflation.
std::vector<Eigenpair> lowest_eigenpairs(const SparseOperator& h, int k, const EigenConfig& cfg = {});
Eigenpair ground_state(const SparseOperator& h, double tol = 1e-10);

using LinearMap = std::function<Vec(const Vec&)>;

/// Largest eigenvalue of a Hermitian positive semidefinite map of dimension n.
double largest_eigenvalue(const LinearMap& op, std::size_t n, double rel_tol, std::uint64_t seed,
                          int krylov = 48, int max_restarts = 200);

/// Largest singular value, maximised over two seeded Lanczos runs on A^dag A.
double op_norm(const SparseOperator& a, double tol = 1e-10, std::uint64_t seed = kDefaultSeed);

struct LeakageOptions {
  std::size_t gram_cap = std::size_t{1} << 22;  // |window0| * dim below which columns are evolved
  std::uint64_t seed = kDefaultSeed;
};

struct LeakageResult {
  double value = 0.0;
  std::string method;  // "gram" or "lanczos"
  std::size_t columns = 0;
};

/// ||(1 - Pi_window1) exp(-i t H) Pi_window0||.
LeakageResult leakage_analysis(const SparseOperator& h, const CompositeBasis& basis,
                               const ProjectorSpec& window0, const ProjectorSpec& window1, double t,
                               const EvolveConfig& cfg = {}, const LeakageOptions& opts = {});
double leakage_norm(const SparseOperator& h, const CompositeBasis& basis, const ProjectorSpec& window0,
                    const ProjectorSpec& window1, double t, const EvolveConfig& cfg = {});

/// Largest singular value of a dense matrix through its Gram matrix.
double gram_norm(const Eigen::MatrixXcd& m);

Vec random_unit_vector(std::size_t n, std::uint64_t seed);

}  // namespace qtrunc
