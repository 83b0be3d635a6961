#include "qtrunc/fock_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "qtrunc/errors.hpp"

namespace qtrunc {

ModeSpec ModeSpec::boson(int n_max, std::string label) {
  if (n_max < 0) throw std::invalid_argument("boson cutoff must be >= 0");
  return {ModeKind::boson, n_max, std::move(label)};
}
ModeSpec ModeSpec::fermion(std::string label) { return {ModeKind::fermion, 0, std::move(label)}; }
ModeSpec ModeSpec::spin_half(std::string label) { return {ModeKind::spin_half, 0, std::move(label)}; }
ModeSpec ModeSpec::rotor(int field_cap, std::string label) {
  if (field_cap < 0) throw std::invalid_argument("rotor field cap must be >= 0");
  return {ModeKind::rotor, field_cap, std::move(label)};
}

int ModeSpec::local_dim() const {
  switch (kind) {
    case ModeKind::boson: return cap + 1;
    case ModeKind::rotor: return 2 * cap + 1;
    default: return 2;
  }
}

std::string to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::boson: return "boson";
    case ModeKind::fermion: return "fermion";
    case ModeKind::spin_half: return "spin_half";
    case ModeKind::rotor: return "rotor";
  }
  return "?";
}

CompositeBasis::CompositeBasis(std::vector<ModeSpec> modes, std::size_t dim_cap)
    : modes_(std::move(modes)), strides_(modes_.size()) {
  for (const auto& m : modes_) {
    if (m.cap < 0) throw std::invalid_argument("mode cap must be >= 0");
  }
  dim_ = 1;
  for (std::size_t i = modes_.size(); i-- > 0;) {
    strides_[i] = dim_;
    const auto ld = static_cast<std::size_t>(modes_[i].local_dim());
    if (dim_ > dim_cap / ld) {
      throw ResourceError("basis dimension exceeds the cap of " + std::to_string(dim_cap));
    }
    dim_ *= ld;
  }
}

std::size_t CompositeBasis::encode(std::span<const int> local) const {
  if (local.size() != modes_.size()) throw std::invalid_argument("encode: wrong tuple length");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (local[i] < 0 || local[i] >= modes_[i].local_dim()) {
      throw std::out_of_range("encode: local state out of range");
    }
    idx += static_cast<std::size_t>(local[i]) * strides_[i];
  }
  return idx;
}

std::vector<int> CompositeBasis::decode(std::size_t index) const {
  if (index >= dim_) throw std::out_of_range("decode: index out of range");
  std::vector<int> out(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) out[i] = digit(index, i);
  return out;
}

std::vector<std::size_t> CompositeBasis::truncatable_modes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].truncatable()) out.push_back(i);
  }
  return out;
}

CompositeBasis build_basis(std::vector<ModeSpec> specs, std::size_t dim_cap) {
  return CompositeBasis(std::move(specs), dim_cap);
}

// SparseOperator

SparseOperator::SparseOperator(std::size_t dim) : m_(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) {}

SparseOperator::SparseOperator(SpMat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("SparseOperator must be square");
  normalize();
}

void SparseOperator::normalize() {
  m_.prune([](Eigen::Index, Eigen::Index, const cplx& v) { return std::abs(v) > kDropTolerance; });
  m_.makeCompressed();
}

SparseOperator SparseOperator::from_entries(std::size_t dim, const std::vector<Entry>& entries) {
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row >= dim || e.col >= dim) throw std::out_of_range("from_entries: index out of range");
    trip.emplace_back(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col), e.value);
  }
  SpMat m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(trip.begin(), trip.end());
  return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::identity(std::size_t dim) {
  SpMat m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setIdentity();
  return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::diagonal(const std::vector<cplx>& diag) {
  std::vector<Entry> e;
  e.reserve(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) e.push_back({i, i, diag[i]});
  return from_entries(diag.size(), e);
}

cplx SparseOperator::coeff(std::size_t row, std::size_t col) const {
  return m_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

std::vector<Entry> SparseOperator::entries() const {
  std::vector<Entry> out;
  out.reserve(nnz());
  for (Eigen::Index r = 0; r < m_.outerSize(); ++r) {
    for (SpMat::InnerIterator it(m_, r); it; ++it) {
      out.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value()});
    }
  }
  return out;
}

Vec SparseOperator::apply(const Vec& v) const {
  if (static_cast<std::size_t>(v.size()) != dim()) throw std::invalid_argument("apply: dimension mismatch");
  return m_ * v;
}

SparseOperator SparseOperator::adjoint() const {
  SpMat a = m_.adjoint();
  return SparseOperator(std::move(a));
}

Eigen::MatrixXcd SparseOperator::dense() const { return Eigen::MatrixXcd(m_); }

double SparseOperator::hermiticity_defect() const {
  SpMat d = m_ - SpMat(m_.adjoint());
  if (d.nonZeros() == 0) return 0.0;
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(d.rows());
  Eigen::VectorXd cols = Eigen::VectorXd::Zero(d.cols());
  for (Eigen::Index r = 0; r < d.outerSize(); ++r) {
    for (SpMat::InnerIterator it(d, r); it; ++it) {
      rows[it.row()] += std::abs(it.value());
      cols[it.col()] += std::abs(it.value());
    }
  }
  return std::sqrt(rows.maxCoeff() * cols.maxCoeff());
}

void SparseOperator::dump(std::ostream& os) const {
  const auto old = os.precision(17);
  for (const auto& e : entries()) {
    os << e.row << ' ' << e.col << ' ' << e.value.real() << ' ' << e.value.imag() << '\n';
  }
  os.precision(old);
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& o) {
  if (o.dim() != dim()) throw std::invalid_argument("operator sum: dimension mismatch");
  m_ += o.m_;
  normalize();
  return *this;
}

SparseOperator& SparseOperator::operator-=(const SparseOperator& o) {
  if (o.dim() != dim()) throw std::invalid_argument("operator difference: dimension mismatch");
  m_ -= o.m_;
  normalize();
  return *this;
}

SparseOperator& SparseOperator::operator*=(cplx s) {
  m_ *= s;
  normalize();
  return *this;
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator product: dimension mismatch");
  SpMat p = a.m_ * b.m_;
  return SparseOperator(std::move(p));
}

bool operator==(const SparseOperator& a, const SparseOperator& b) { return approx_equal(a, b, 0.0); }

bool approx_equal(const SparseOperator& a, const SparseOperator& b, double tol) {
  if (a.dim() != b.dim()) return false;
  SpMat d = a.matrix() - b.matrix();
  for (Eigen::Index r = 0; r < d.outerSize(); ++r) {
    for (SpMat::InnerIterator it(d, r); it; ++it) {
      if (std::abs(it.value()) > tol) return false;
    }
  }
  return true;
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) { return a * b - b * a; }

std::string to_string(OpKind kind) {
  switch (kind) {
    case OpKind::annihilate: return "annihilate";
    case OpKind::create: return "create";
    case OpKind::position: return "position";
    case OpKind::momentum: return "momentum";
    case OpKind::number: return "number";
    case OpKind::efield: return "efield";
    case OpKind::lower_link: return "lower_link";
    case OpKind::raise_link: return "raise_link";
    case OpKind::pauli_x: return "pauli_x";
    case OpKind::pauli_z: return "pauli_z";
  }
  return "?";
}

namespace {

struct LocalTerm {
  int to;
  cplx amp;
};

bool compatible(ModeKind mk, OpKind k) {
  switch (k) {
    case OpKind::annihilate:
    case OpKind::create: return mk == ModeKind::boson || mk == ModeKind::fermion;
    case OpKind::position:
    case OpKind::momentum: return mk == ModeKind::boson;
    case OpKind::number: return mk == ModeKind::boson || mk == ModeKind::fermion;
    case OpKind::efield:
    case OpKind::lower_link:
    case OpKind::raise_link: return mk == ModeKind::rotor;
    case OpKind::pauli_x:
    case OpKind::pauli_z: return mk == ModeKind::spin_half;
  }
  return false;
}

// Local matrix column s: the image of |s> as a list of (target, amplitude).
std::vector<LocalTerm> local_action(const ModeSpec& m, OpKind k, int s) {
  const int top = m.local_dim() - 1;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<LocalTerm> out;
  switch (k) {
    case OpKind::annihilate:
      if (s > 0) out.push_back({s - 1, std::sqrt(static_cast<double>(s))});
      break;
    case OpKind::create:
      if (s < top) out.push_back({s + 1, std::sqrt(static_cast<double>(s + 1))});
      break;
    case OpKind::position:
      if (s > 0) out.push_back({s - 1, std::sqrt(static_cast<double>(s)) * inv_sqrt2});
      if (s < top) out.push_back({s + 1, std::sqrt(static_cast<double>(s + 1)) * inv_sqrt2});
      break;
    case OpKind::momentum:
      // i (b^dag - b) / sqrt(2)
      if (s > 0) out.push_back({s - 1, cplx(0.0, -std::sqrt(static_cast<double>(s)) * inv_sqrt2)});
      if (s < top) out.push_back({s + 1, cplx(0.0, std::sqrt(static_cast<double>(s + 1)) * inv_sqrt2)});
      break;
    case OpKind::number: out.push_back({s, static_cast<double>(s)}); break;
    case OpKind::efield: out.push_back({s, static_cast<double>(m.quantum_number(s))}); break;
    case OpKind::lower_link:
      if (s > 0) out.push_back({s - 1, 1.0});
      break;
    case OpKind::raise_link:
      if (s < top) out.push_back({s + 1, 1.0});
      break;
    case OpKind::pauli_x: out.push_back({1 - s, 1.0}); break;
    case OpKind::pauli_z: out.push_back({s, s == 1 ? 1.0 : -1.0}); break;
  }
  return out;
}

}  // namespace

SparseOperator mode_operator(const CompositeBasis& basis, std::size_t mode, OpKind kind) {
  if (mode >= basis.n_modes()) throw std::out_of_range("mode_operator: mode index out of range");
  const ModeSpec& m = basis.mode(mode);
  if (!compatible(m.kind, kind)) {
    throw KindError("operator " + to_string(kind) + " does not act on a " + to_string(m.kind) + " mode");
  }
  const bool jw = m.kind == ModeKind::fermion && (kind == OpKind::annihilate || kind == OpKind::create);
  std::vector<std::size_t> preceding;
  if (jw) {
    for (std::size_t i = 0; i < mode; ++i) {
      if (basis.mode(i).kind == ModeKind::fermion) preceding.push_back(i);
    }
  }

  const int ld = m.local_dim();
  std::vector<std::vector<LocalTerm>> table(static_cast<std::size_t>(ld));
  for (int s = 0; s < ld; ++s) table[static_cast<std::size_t>(s)] = local_action(m, kind, s);

  const std::size_t dim = basis.dimension();
  const std::size_t stride = basis.stride(mode);
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(dim * 2);
  for (std::size_t col = 0; col < dim; ++col) {
    const int s = basis.digit(col, mode);
    const auto& terms = table[static_cast<std::size_t>(s)];
    if (terms.empty()) continue;
    double sign = 1.0;
    for (std::size_t f : preceding) {
      if (basis.digit(col, f) == 1) sign = -sign;
    }
    for (const auto& t : terms) {
      const std::size_t row = col - static_cast<std::size_t>(s) * stride + static_cast<std::size_t>(t.to) * stride;
      trip.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), sign * t.amp);
    }
  }
  SpMat mat(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  mat.setFromTriplets(trip.begin(), trip.end());
  return SparseOperator(std::move(mat));
}

std::vector<char> window_mask(const CompositeBasis& basis, const ProjectorSpec& spec) {
  if (spec.lo > spec.hi) throw std::invalid_argument("projector window must be nonempty");
  std::vector<std::size_t> modes;
  if (spec.mode) {
    if (*spec.mode >= basis.n_modes()) throw std::out_of_range("projector: mode index out of range");
    if (!basis.mode(*spec.mode).truncatable()) {
      throw KindError("projector: mode " + std::to_string(*spec.mode) + " carries no truncatable quantum number");
    }
    modes.push_back(*spec.mode);
  } else {
    modes = basis.truncatable_modes();
  }
  std::vector<char> keep(basis.dimension(), 1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t m : modes) {
      const int q = basis.quantum_number(i, m);
      if (q < spec.lo || q > spec.hi) {
        keep[i] = 0;
        break;
      }
    }
  }
  return keep;
}

std::vector<std::size_t> window_indices(const CompositeBasis& basis, const ProjectorSpec& spec) {
  const auto keep = window_mask(basis, spec);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) out.push_back(i);
  }
  return out;
}

SparseOperator projector(const CompositeBasis& basis, const ProjectorSpec& spec) {
  const auto keep = window_mask(basis, spec);
  std::vector<Entry> e;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) e.push_back({i, i, 1.0});
  }
  return SparseOperator::from_entries(basis.dimension(), e);
}

SparseOperator complement(const SparseOperator& p) { return SparseOperator::identity(p.dim()) - p; }

SparseOperator combine(const std::vector<std::pair<cplx, SparseOperator>>& ops, CombineMode mode) {
  if (ops.empty()) throw std::invalid_argument("combine: empty operator list");
  const std::size_t dim = ops.front().second.dim();
  for (const auto& [w, op] : ops) {
    if (op.dim() != dim) throw std::invalid_argument("combine: dimension mismatch");
  }
  if (mode == CombineMode::sum) {
    SpMat acc(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& [w, op] : ops) acc += w * op.matrix();
    return SparseOperator(std::move(acc));
  }
  cplx weight = 1.0;
  SpMat acc = ops.front().second.matrix();
  weight *= ops.front().first;
  for (std::size_t i = 1; i < ops.size(); ++i) {
    acc = SpMat(acc * ops[i].second.matrix());
    weight *= ops[i].first;
  }
  acc *= weight;
  return SparseOperator(std::move(acc));
}

}  // namespace qtrunc
