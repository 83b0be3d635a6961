#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "qtrunc/errors.hpp"
#include "qtrunc/fock_algebra.hpp"

using namespace qtrunc;

TEST_CASE("basis dimensions") {
  CHECK(build_basis({ModeSpec::boson(3)}).dimension() == 4);
  CHECK(build_basis({ModeSpec::fermion(), ModeSpec::fermion(), ModeSpec::boson(1)}).dimension() == 8);
  CHECK(build_basis({}).dimension() == 1);
  CHECK(build_basis({ModeSpec::rotor(2)}).dimension() == 5);
  CHECK_THROWS_AS(build_basis({ModeSpec::boson(1 << 14), ModeSpec::boson(1 << 14)}), ResourceError);
  CHECK_THROWS_AS(build_basis({ModeSpec::boson(100)}, 50), ResourceError);
}

TEST_CASE("mixed-radix codec round trip") {
  const CompositeBasis b = build_basis({ModeSpec::fermion(), ModeSpec::boson(3), ModeSpec::rotor(1), ModeSpec::spin_half()});
  CHECK(b.dimension() == 2 * 4 * 3 * 2);
  for (std::size_t i = 0; i < b.dimension(); ++i) {
    const auto d = b.decode(i);
    CHECK(b.encode(d) == i);
    for (std::size_t m = 0; m < b.n_modes(); ++m) CHECK(b.digit(i, m) == d[m]);
  }
  const std::array<int, 4> first{1, 0, 0, 0};
  CHECK(b.encode(first) == b.stride(0));
  CHECK(b.quantum_number(b.encode(std::array<int, 4>{0, 2, 0, 1}), 2) == -1);
  CHECK(b.truncatable_modes() == std::vector<std::size_t>{1, 2});
  CHECK_THROWS(b.encode(std::array<int, 4>{0, 4, 0, 0}));
}

TEST_CASE("ladder conventions") {
  const CompositeBasis b = build_basis({ModeSpec::boson(2)});
  const SparseOperator a = mode_operator(b, 0, OpKind::annihilate);
  CHECK(a.nnz() == 2);
  CHECK(a.coeff(0, 1) == cplx(1.0));
  CHECK(std::abs(a.coeff(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(approx_equal(mode_operator(b, 0, OpKind::create), a.adjoint()));
  const SparseOperator x = mode_operator(b, 0, OpKind::position);
  CHECK(approx_equal(x, (1.0 / std::sqrt(2.0)) * (a + a.adjoint()), 1e-15));
  const SparseOperator p = mode_operator(b, 0, OpKind::momentum);
  CHECK(approx_equal(p, cplx(0, 1.0 / std::sqrt(2.0)) * (a.adjoint() - a), 1e-15));
  CHECK(approx_equal(mode_operator(b, 0, OpKind::number), a.adjoint() * a, 1e-14));

  const CompositeBasis r = build_basis({ModeSpec::rotor(1)});
  const SparseOperator e = mode_operator(r, 0, OpKind::efield);
  CHECK(e.coeff(0, 0) == cplx(-1.0));
  CHECK(e.coeff(1, 1) == cplx(0.0));
  CHECK(e.coeff(2, 2) == cplx(1.0));
  const SparseOperator lo = mode_operator(r, 0, OpKind::lower_link);
  CHECK(lo.nnz() == 2);
  CHECK(lo.coeff(0, 1) == cplx(1.0));
  CHECK(lo.coeff(1, 2) == cplx(1.0));
  CHECK(approx_equal(mode_operator(r, 0, OpKind::raise_link), lo.adjoint()));

  CHECK_THROWS_AS(mode_operator(r, 0, OpKind::annihilate), KindError);
  CHECK_THROWS_AS(mode_operator(b, 0, OpKind::efield), KindError);
  CHECK_THROWS_AS(mode_operator(b, 0, OpKind::pauli_z), KindError);
}

TEST_CASE("fermion anticommutation with Jordan-Wigner strings") {
  const CompositeBasis b = build_basis({ModeSpec::fermion(), ModeSpec::boson(1), ModeSpec::fermion(), ModeSpec::fermion()});
  const std::size_t f[] = {0, 2, 3};
  const auto id = SparseOperator::identity(b.dimension());
  for (std::size_t i : f) {
    for (std::size_t j : f) {
      const auto ci = mode_operator(b, i, OpKind::annihilate);
      const auto cj = mode_operator(b, j, OpKind::annihilate);
      const auto cjd = mode_operator(b, j, OpKind::create);
      const auto anti = ci * cjd + cjd * ci;
      CHECK(approx_equal(anti, i == j ? id : SparseOperator(b.dimension()), 1e-15));
      CHECK((ci * cj + cj * ci).is_zero());
    }
  }
  // Fermions commute with the boson.
  const auto c0 = mode_operator(b, 0, OpKind::annihilate);
  const auto bb = mode_operator(b, 1, OpKind::annihilate);
  CHECK(commutator(c0, bb).is_zero());
}

TEST_CASE("spin operators") {
  const CompositeBasis b = build_basis({ModeSpec::spin_half()});
  const auto z = mode_operator(b, 0, OpKind::pauli_z);
  CHECK(z.coeff(1, 1) == cplx(1.0));
  CHECK(z.coeff(0, 0) == cplx(-1.0));
  const auto x = mode_operator(b, 0, OpKind::pauli_x);
  CHECK(approx_equal(x * x, SparseOperator::identity(2)));
}

TEST_CASE("canonical commutators on the truncated space") {
  const int n = 6;
  const CompositeBasis b = build_basis({ModeSpec::boson(n)});
  const auto a = mode_operator(b, 0, OpKind::annihilate);
  const auto c = commutator(a, a.adjoint());
  for (int k = 0; k < n; ++k) CHECK(std::abs(c.coeff(k, k) - 1.0) < 1e-13);
  CHECK(std::abs(c.coeff(n, n) + static_cast<double>(n)) < 1e-13);

  const auto xp = commutator(mode_operator(b, 0, OpKind::position), mode_operator(b, 0, OpKind::momentum));
  for (int k = 0; k < n; ++k) CHECK(std::abs(xp.coeff(k, k) - cplx(0, 1)) < 1e-13);
}

TEST_CASE("projectors") {
  const CompositeBasis b = build_basis({ModeSpec::boson(3)});
  const auto p = projector(b, {0, 0, 1});
  CHECK(approx_equal(p, SparseOperator::diagonal({1, 1, 0, 0})));
  CHECK(approx_equal(complement(p), SparseOperator::diagonal({0, 0, 1, 1})));
  CHECK(approx_equal(projector(b, ProjectorSpec::ball(std::nullopt, 3)), SparseOperator::identity(4)));

  const CompositeBasis two = build_basis({ModeSpec::boson(2), ModeSpec::fermion(), ModeSpec::rotor(2)});
  const auto mask = window_mask(two, ProjectorSpec::ball(std::nullopt, 1));
  std::size_t kept = 0;
  for (std::size_t i = 0; i < two.dimension(); ++i) {
    const bool in = two.quantum_number(i, 0) <= 1 && std::abs(two.quantum_number(i, 2)) <= 1;
    CHECK(static_cast<bool>(mask[i]) == in);
    kept += in;
  }
  CHECK(window_indices(two, ProjectorSpec::ball(std::nullopt, 1)).size() == kept);
  CHECK_THROWS_AS(window_mask(two, ProjectorSpec::ball(std::size_t{1}, 1)), KindError);
}

TEST_CASE("operator algebra") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<Entry> es;
  for (int k = 0; k < 30; ++k) es.push_back({rng() % 9, rng() % 9, cplx(nd(rng), nd(rng))});
  const auto a = SparseOperator::from_entries(9, es);
  CHECK((a + cplx(-1.0) * a).is_zero());
  CHECK(approx_equal((a * a).adjoint(), a.adjoint() * a.adjoint(), 1e-13));
  const Eigen::MatrixXcd d = a.dense();
  CHECK(((a * a).dense() - d * d).norm() < 1e-12);
  CHECK(a.hermiticity_defect() > 0.0);
  CHECK((a + a.adjoint()).hermiticity_defect() < 1e-14);

  const auto d1 = SparseOperator::diagonal({1, 2, 3});
  const auto d2 = SparseOperator::diagonal({4, 5, 6});
  CHECK(approx_equal(d1 * d2, SparseOperator::diagonal({4, 10, 18})));
  CHECK(approx_equal(combine({{2.0, d1}, {1.0, d2}}, CombineMode::sum), SparseOperator::diagonal({6, 9, 12})));
  CHECK(approx_equal(combine({{2.0, d1}, {0.5, d2}}, CombineMode::product), SparseOperator::diagonal({4, 10, 18})));

  // Duplicates are summed and tiny entries dropped.
  const auto e = SparseOperator::from_entries(2, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 0, 1e-17}});
  CHECK(e.nnz() == 1);
  CHECK(e.coeff(0, 1) == cplx(3.0));
  std::ostringstream os;
  e.dump(os);
  CHECK(os.str().find("0 1 3") != std::string::npos);
  CHECK_THROWS(SparseOperator(2) + SparseOperator(3));
}
