#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "qtrunc/fock_algebra.hpp"
#include "qtrunc/propagate.hpp"

using namespace qtrunc;

namespace {

SparseOperator random_hermitian(std::size_t n, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Entry> es;
  for (std::size_t i = 0; i < n; ++i) {
    es.push_back({i, i, cplx(u(rng) * 2.0, 0.0)});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!keep(rng)) continue;
      const cplx v(u(rng), u(rng));
      es.push_back({i, j, v});
      es.push_back({j, i, std::conj(v)});
    }
  }
  return SparseOperator::from_entries(n, es);
}

Vec dense_evolve(const SparseOperator& h, const Vec& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
  const Eigen::VectorXcd phase = (es.eigenvalues().cast<cplx>() * cplx(0, -t)).array().exp().matrix();
  return es.eigenvectors() * phase.asDiagonal() * (es.eigenvectors().adjoint() * psi);
}

}  // namespace

TEST_CASE("diagonal evolution is a phase") {
  const CompositeBasis b = build_basis({ModeSpec::boson(4)});
  const SparseOperator h = 0.7 * mode_operator(b, 0, OpKind::number);
  Vec psi = Vec::Zero(5);
  psi[1] = 1.0;
  const Vec out = evolve(h, psi, 2.0);
  CHECK(std::abs(out[1] - std::exp(cplx(0, -0.7 * 2.0))) < 1e-12);
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolve matches dense exponentiation") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 7u, 60u, 200u}) {
    const SparseOperator h = random_hermitian(n, 0.1, rng);
    const Vec psi = random_unit_vector(n, 5 + n);
    for (double t : {0.0, 0.3, 5.0, -2.0}) {
      CHECK((evolve(h, psi, t) - dense_evolve(h, psi, t)).norm() < 1e-9);
    }
  }
}

TEST_CASE("evolve rejects non-Hermitian input") {
  const SparseOperator a = SparseOperator::from_entries(2, {{0, 1, 1.0}});
  CHECK_THROWS_AS(evolve(a, random_unit_vector(2, 1), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(require_hermitian(a), std::invalid_argument);
}

TEST_CASE("lowest eigenpairs match dense diagonalisation") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {5u, 80u, 300u}) {
    const SparseOperator h = random_hermitian(n, 0.05, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
    const auto pairs = lowest_eigenpairs(h, 3);
    REQUIRE(pairs.size() == 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(pairs[static_cast<std::size_t>(k)].energy == doctest::Approx(es.eigenvalues()[k]).epsilon(1e-10));
      const Vec& v = pairs[static_cast<std::size_t>(k)].state;
      CHECK((h.apply(v) - pairs[static_cast<std::size_t>(k)].energy * v).norm() < 1e-8);
    }
    const Eigenpair g = ground_state(h);
    CHECK(std::abs(std::abs(g.state.dot(es.eigenvectors().col(0))) - 1.0) < 1e-9);
  }
}

TEST_CASE("ground state of a diagonal operator") {
  const SparseOperator h = SparseOperator::diagonal({3.0, -1.5, 2.0, 0.0});
  const Eigenpair g = ground_state(h);
  CHECK(g.energy == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(std::abs(std::abs(g.state[1]) - 1.0) < 1e-10);
}

TEST_CASE("operator norm") {
  CHECK(op_norm(SparseOperator::identity(10)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(op_norm(SparseOperator::diagonal({3.0, -5.0})) == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(op_norm(SparseOperator(4)) == 0.0);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  std::vector<Entry> es;
  for (int k = 0; k < 400; ++k) es.push_back({rng() % 90, rng() % 90, cplx(nd(rng), nd(rng))});
  const auto a = SparseOperator::from_entries(90, es);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.dense());
  CHECK(op_norm(a) == doctest::Approx(svd.singularValues()[0]).epsilon(1e-9));

  // Position on a truncated boson approaches sqrt(2 (L + 1)) from below.
  double prev_ratio = 0.0;
  for (int lam : {4, 16, 64, 256}) {
    const CompositeBasis b = build_basis({ModeSpec::boson(lam)});
    const double x = op_norm(mode_operator(b, 0, OpKind::position));
    const double cap = std::sqrt(2.0 * (lam + 1));
    CHECK(x <= cap);
    CHECK(x / cap > prev_ratio);
    prev_ratio = x / cap;
  }
  CHECK(prev_ratio > 0.9);
}

TEST_CASE("gram norm") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(30, 7);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  CHECK(gram_norm(m) == doctest::Approx(svd.singularValues()[0]).epsilon(1e-12));
}

TEST_CASE("leakage analysis") {
  const CompositeBasis b = build_basis({ModeSpec::boson(20)});
  const auto a = mode_operator(b, 0, OpKind::annihilate);
  const SparseOperator h = a + a.adjoint() + mode_operator(b, 0, OpKind::number);
  const auto w0 = ProjectorSpec::ball(std::nullopt, 2);
  CHECK(leakage_norm(h, b, w0, ProjectorSpec::ball(std::nullopt, 20), 1.0) < 1e-14);
  CHECK(leakage_norm(h, b, w0, ProjectorSpec::ball(std::nullopt, 3), 0.0) < 1e-14);

  // Dense oracle and agreement of both methods.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
  const double t = 0.8;
  const Eigen::MatrixXcd u = es.eigenvectors() *
                             (es.eigenvalues().cast<cplx>() * cplx(0, -t)).array().exp().matrix().asDiagonal() *
                             es.eigenvectors().adjoint();
  const Eigen::MatrixXcd block = u.block(4, 0, 17, 3);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
  const auto w1 = ProjectorSpec::ball(std::nullopt, 3);
  const LeakageResult gram = leakage_analysis(h, b, w0, w1, t);
  CHECK(gram.method == "gram");
  CHECK(gram.value == doctest::Approx(svd.singularValues()[0]).epsilon(1e-9));
  LeakageOptions force;
  force.gram_cap = 0;
  const LeakageResult lz = leakage_analysis(h, b, w0, w1, t, {}, force);
  CHECK(lz.method == "lanczos");
  CHECK(lz.value == doctest::Approx(gram.value).epsilon(1e-8));
}
