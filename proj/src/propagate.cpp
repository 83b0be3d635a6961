#include "qtrunc/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qtrunc/errors.hpp"

namespace qtrunc {

namespace {

struct Krylov {
  std::vector<Vec> basis;
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis[j] and basis[j+1]; the last is the residual norm
  bool exhausted = false;    // invariant subspace reached
};

void project_out(Vec& w, const std::vector<Vec>& vs) {
  for (const auto& v : vs) w -= v * v.dot(w);
}

Krylov build_krylov(const LinearMap& op, const Vec& start, std::size_t m, const std::vector<Vec>* deflate) {
  Krylov k;
  k.basis.push_back(start);
  double scale = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    Vec w = op(k.basis[j]);
    if (deflate) project_out(w, *deflate);
    const double a = k.basis[j].dot(w).real();
    k.alpha.push_back(a);
    // Two passes of classical Gram-Schmidt keep the basis orthonormal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      project_out(w, k.basis);
      if (deflate) project_out(w, *deflate);
    }
    const double b = w.norm();
    scale = std::max(scale, std::abs(a) + b);
    k.beta.push_back(b);
    if (b <= 1e-13 * std::max(scale, 1e-300) || b == 0.0) {
      k.beta.back() = 0.0;
      k.exhausted = true;
      break;
    }
    if (j + 1 < m) k.basis.push_back(w / b);
  }
  return k;
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tridiagonal_eigen(const Krylov& k) {
  const auto m = static_cast<Eigen::Index>(k.alpha.size());
  Eigen::VectorXd d(m);
  Eigen::VectorXd e(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index i = 0; i < m; ++i) d[i] = k.alpha[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < m; ++i) e[i] = k.beta[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  return es;
}

Vec combine_basis(const Krylov& k, const Eigen::VectorXcd& y) {
  Vec x = Vec::Zero(k.basis.front().size());
  for (Eigen::Index i = 0; i < y.size(); ++i) x += y[i] * k.basis[static_cast<std::size_t>(i)];
  return x;
}

}  // namespace

Vec random_unit_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Vec v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = cplx(nd(rng), nd(rng));
  return v / v.norm();
}

void require_hermitian(const SparseOperator& h, double tol) {
  const double d = h.hermiticity_defect();
  if (d > tol) {
    std::ostringstream os;
    os << "operator is not Hermitian (defect " << d << ")";
    throw std::invalid_argument(os.str());
  }
}

Vec evolve(const SparseOperator& h, const Vec& psi0, double t, const EvolveConfig& cfg) {
  if (static_cast<std::size_t>(psi0.size()) != h.dim()) throw std::invalid_argument("evolve: dimension mismatch");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("evolve: tolerance must be > 0");
  if (cfg.max_krylov < 2) throw std::invalid_argument("evolve: max_krylov must be >= 2");
  if (!std::isfinite(t)) throw std::invalid_argument("evolve: t must be finite");
  if (cfg.check_hermitian) require_hermitian(h);
  if (t == 0.0 || psi0.norm() == 0.0) return psi0;

  const double total = std::abs(t);
  const double sign = t > 0.0 ? 1.0 : -1.0;
  const std::size_t n = h.dim();
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(cfg.max_krylov), n);
  const LinearMap op = [&h](const Vec& v) -> Vec { return h.matrix() * v; };

  Vec v = psi0;
  double remaining = total;
  double tau = total;
  int halvings = 0;
  while (remaining > 0.0) {
    const double beta0 = v.norm();
    const Krylov k = build_krylov(op, v / beta0, m, nullptr);
    const auto es = tridiagonal_eigen(k);
    const Eigen::MatrixXd& q = es.eigenvectors();
    const Eigen::VectorXd& theta = es.eigenvalues();
    const auto mm = static_cast<Eigen::Index>(k.alpha.size());
    const bool exact = k.exhausted || static_cast<std::size_t>(mm) == n;

    Eigen::VectorXcd y;
    double step = 0.0;
    double err = 0.0;
    for (;;) {
      step = std::min(tau, remaining);
      Eigen::VectorXcd phase(mm);
      for (Eigen::Index i = 0; i < mm; ++i) phase[i] = std::exp(cplx(0.0, -sign * step * theta[i])) * q(0, i);
      y = q.cast<cplx>() * phase;
      err = exact ? 0.0 : beta0 * k.beta.back() * std::abs(y[mm - 1]);
      if (err <= 0.1 * cfg.tolerance * step / total) break;
      tau = 0.5 * step;
      if (++halvings > cfg.max_halvings) {
        throw ConvergenceError("evolve: substep halving cap reached");
      }
    }
    v = beta0 * combine_basis(k, y);
    remaining = step >= remaining ? 0.0 : remaining - step;
    if (err < 1e-3 * cfg.tolerance * step / total) tau = 2.0 * step;
  }
  return v;
}

std::vector<Eigenpair> lowest_eigenpairs(const SparseOperator& h, int k, const EigenConfig& cfg) {
  require_hermitian(h);
  const std::size_t n = h.dim();
  if (k < 1 || static_cast<std::size_t>(k) > n) throw std::invalid_argument("lowest_eigenpairs: bad k");
  const LinearMap op = [&h](const Vec& v) -> Vec { return h.matrix() * v; };

  std::vector<Vec> found;
  std::vector<Eigenpair> out;
  for (int target = 0; target < k; ++target) {
    Vec x = random_unit_vector(n, cfg.seed + static_cast<std::uint64_t>(target));
    project_out(x, found);
    x /= x.norm();
    bool converged = false;
    for (int restart = 0; restart < cfg.max_restarts && !converged; ++restart) {
      const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(cfg.krylov), n - found.size());
      const Krylov kr = build_krylov(op, x, m, &found);
      const auto es = tridiagonal_eigen(kr);
      const Eigen::VectorXcd y = es.eigenvectors().col(0).cast<cplx>();
      x = combine_basis(kr, y);
      project_out(x, found);
      x /= x.norm();
      const double e = es.eigenvalues()[0];
      const double res = (op(x) - e * x).norm();
      if (res <= cfg.tol) {
        out.push_back({e, x});
        converged = true;
      }
    }
    if (!converged) throw ConvergenceError("lowest_eigenpairs: restart cap reached");
    found.push_back(x);
  }
  std::sort(out.begin(), out.end(), [](const Eigenpair& a, const Eigenpair& b) { return a.energy < b.energy; });
  return out;
}

Eigenpair ground_state(const SparseOperator& h, double tol) {
  EigenConfig cfg;
  cfg.tol = tol;
  return lowest_eigenpairs(h, 1, cfg).front();
}

double largest_eigenvalue(const LinearMap& op, std::size_t n, double rel_tol, std::uint64_t seed, int krylov,
                          int max_restarts) {
  if (n == 0) return 0.0;
  Vec x = random_unit_vector(n, seed);
  double prev = -1.0;
  double theta = 0.0;
  for (int restart = 0; restart < max_restarts; ++restart) {
    const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(krylov), n);
    const Krylov kr = build_krylov(op, x, m, nullptr);
    const auto es = tridiagonal_eigen(kr);
    const auto last = es.eigenvalues().size() - 1;
    theta = es.eigenvalues()[last];
    x = combine_basis(kr, es.eigenvectors().col(last).cast<cplx>());
    const double xn = x.norm();
    if (xn == 0.0) return 0.0;
    x /= xn;
    const double res = (op(x) - theta * x).norm();
    if (theta <= 0.0 && res == 0.0) return std::max(theta, 0.0);
    if (kr.exhausted || res <= rel_tol * std::abs(theta)) break;
    if (restart >= 2 && std::abs(theta - prev) <= 1e-2 * rel_tol * std::abs(theta)) break;
    prev = theta;
  }
  return theta;
}

double op_norm(const SparseOperator& a, double tol, std::uint64_t seed) {
  if (a.dim() == 0 || a.is_zero()) return 0.0;
  const SpMat adj = a.matrix().adjoint();
  const LinearMap gram = [&](const Vec& v) -> Vec { return adj * (a.matrix() * v); };
  double best = 0.0;
  for (std::uint64_t s = 0; s < 2; ++s) {
    best = std::max(best, largest_eigenvalue(gram, a.dim(), tol, seed + 7919 * s));
  }
  return std::sqrt(std::max(best, 0.0));
}

double gram_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::MatrixXcd g = m.cols() <= m.rows() ? Eigen::MatrixXcd(m.adjoint() * m) : Eigen::MatrixXcd(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

LeakageResult leakage_analysis(const SparseOperator& h, const CompositeBasis& basis, const ProjectorSpec& window0,
                               const ProjectorSpec& window1, double t, const EvolveConfig& cfg,
                               const LeakageOptions& opts) {
  if (basis.dimension() != h.dim()) throw std::invalid_argument("leakage: basis/operator dimension mismatch");
  const auto cols = window_indices(basis, window0);
  const auto keep1 = window_mask(basis, window1);
  std::vector<std::size_t> out_rows;
  for (std::size_t i = 0; i < keep1.size(); ++i) {
    if (!keep1[i]) out_rows.push_back(i);
  }
  LeakageResult res;
  res.columns = cols.size();
  if (cols.empty() || out_rows.empty()) {
    res.method = "empty";
    return res;
  }
  if (cfg.check_hermitian) require_hermitian(h);
  EvolveConfig inner = cfg;
  inner.check_hermitian = false;
  const std::size_t n = h.dim();

  if (cols.size() * n <= opts.gram_cap) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(out_rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      Vec e = Vec::Zero(static_cast<Eigen::Index>(n));
      e[static_cast<Eigen::Index>(cols[j])] = 1.0;
      const Vec v = evolve(h, e, t, inner);
      for (std::size_t r = 0; r < out_rows.size(); ++r) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v[static_cast<Eigen::Index>(out_rows[r])];
      }
    }
    res.value = gram_norm(m);
    res.method = "gram";
    return res;
  }

  const LinearMap op = [&](const Vec& x) -> Vec {
    Vec full = Vec::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < cols.size(); ++j) full[static_cast<Eigen::Index>(cols[j])] = x[static_cast<Eigen::Index>(j)];
    Vec v = evolve(h, full, t, inner);
    for (std::size_t i = 0; i < n; ++i) {
      if (keep1[i]) v[static_cast<Eigen::Index>(i)] = 0.0;
    }
    const Vec back = evolve(h, v, -t, inner);
    Vec y(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) y[static_cast<Eigen::Index>(j)] = back[static_cast<Eigen::Index>(cols[j])];
    return y;
  };
  res.value = std::sqrt(std::max(largest_eigenvalue(op, cols.size(), 1e-8, opts.seed), 0.0));
  res.method = "lanczos";
  return res;
}

double leakage_norm(const SparseOperator& h, const CompositeBasis& basis, const ProjectorSpec& window0,
                    const ProjectorSpec& window1, double t, const EvolveConfig& cfg) {
  return leakage_analysis(h, basis, window0, window1, t, cfg).value;
}

}  // namespace qtrunc
