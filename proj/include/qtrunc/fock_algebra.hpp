#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace qtrunc {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Vec = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultDimCap = std::size_t{1} << 26;
inline constexpr double kDropTolerance = 1e-15;

/// Raised when an operator kind does not act on the requested mode.
class KindError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ModeKind { boson, fermion, spin_half, rotor };

struct ModeSpec {
  ModeKind kind = ModeKind::boson;
  int cap = 0;  // boson cutoff n_max, or rotor field cap K; unused otherwise
  std::string label;

  static ModeSpec boson(int n_max, std::string label = {});
  static ModeSpec fermion(std::string label = {});
  static ModeSpec spin_half(std::string label = {});
  static ModeSpec rotor(int field_cap, std::string label = {});

  int local_dim() const;
  /// Boson occupations and rotor fields carry a truncatable quantum number.
  bool truncatable() const { return kind == ModeKind::boson || kind == ModeKind::rotor; }
  /// Quantum number of local state s: m for bosons, s - K for rotors, s otherwise.
  int quantum_number(int s) const { return kind == ModeKind::rotor ? s - cap : s; }
};

std::string to_string(ModeKind kind);

/// Mixed-radix product basis; mode 0 is the most significant digit.
class CompositeBasis {
 public:
  CompositeBasis() : CompositeBasis(std::vector<ModeSpec>{}) {}
  explicit CompositeBasis(std::vector<ModeSpec> modes, std::size_t dim_cap = kDefaultDimCap);

  std::size_t dimension() const { return dim_; }
  std::size_t n_modes() const { return modes_.size(); }
  const std::vector<ModeSpec>& modes() const { return modes_; }
  const ModeSpec& mode(std::size_t i) const { return modes_.at(i); }
  std::size_t stride(std::size_t i) const { return strides_.at(i); }

  std::size_t encode(std::span<const int> local) const;
  std::vector<int> decode(std::size_t index) const;
  int digit(std::size_t index, std::size_t mode) const {
    return static_cast<int>((index / strides_[mode]) % static_cast<std::size_t>(modes_[mode].local_dim()));
  }
  int quantum_number(std::size_t index, std::size_t mode) const {
    return modes_[mode].quantum_number(digit(index, mode));
  }
  std::vector<std::size_t> truncatable_modes() const;

 private:
  std::vector<ModeSpec> modes_;
  std::vector<std::size_t> strides_;
  std::size_t dim_ = 1;
};

/// Throws ResourceError when the product of local dimensions exceeds dim_cap.
CompositeBasis build_basis(std::vector<ModeSpec> specs, std::size_t dim_cap = kDefaultDimCap);

struct Entry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Square sparse matrix, row-major, deduplicated, entries below kDropTolerance removed.
class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(std::size_t dim);
  explicit SparseOperator(SpMat m);

  static SparseOperator from_entries(std::size_t dim, const std::vector<Entry>& entries);
  static SparseOperator identity(std::size_t dim);
  static SparseOperator diagonal(const std::vector<cplx>& diag);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t nnz() const { return static_cast<std::size_t>(m_.nonZeros()); }
  const SpMat& matrix() const { return m_; }

  cplx coeff(std::size_t row, std::size_t col) const;
  std::vector<Entry> entries() const;
  Vec apply(const Vec& v) const;
  SparseOperator adjoint() const;
  Eigen::MatrixXcd dense() const;

  /// Upper bound on ||A - A^dag|| via sqrt(||D||_1 ||D||_inf).
  double hermiticity_defect() const;
  bool is_zero() const { return m_.nonZeros() == 0; }

  /// Coordinate text, one "row col re im" line per stored entry.
  void dump(std::ostream& os) const;

  SparseOperator& operator+=(const SparseOperator& o);
  SparseOperator& operator-=(const SparseOperator& o);
  SparseOperator& operator*=(cplx s);

  friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
  friend SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a -= b; }
  friend SparseOperator operator*(cplx s, SparseOperator a) { return a *= s; }
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
  friend bool operator==(const SparseOperator& a, const SparseOperator& b);

 private:
  void normalize();
  SpMat m_;
};

/// Exact sparse equality up to an absolute entrywise tolerance.
bool approx_equal(const SparseOperator& a, const SparseOperator& b, double tol = 0.0);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

enum class OpKind {
  annihilate,
  create,
  position,
  momentum,
  number,
  efield,
  lower_link,
  raise_link,
  pauli_x,
  pauli_z,
};

std::string to_string(OpKind kind);

/// Single-mode operator embedded in the full basis. Fermion ladder operators carry
/// Jordan-Wigner strings over the preceding fermion modes. Throws KindError on a mismatch.
SparseOperator mode_operator(const CompositeBasis& basis, std::size_t mode, OpKind kind);

/// Quantum-number window [lo, hi] on one truncatable mode, or on all of them when mode is empty.
struct ProjectorSpec {
  std::optional<std::size_t> mode;
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  /// [-lambda, lambda]; bosons see this clipped to [0, lambda].
  static ProjectorSpec ball(std::optional<std::size_t> mode, std::int64_t lambda) {
    return {mode, -lambda, lambda};
  }
};

/// Per-index membership of the window (true = retained).
std::vector<char> window_mask(const CompositeBasis& basis, const ProjectorSpec& spec);
std::vector<std::size_t> window_indices(const CompositeBasis& basis, const ProjectorSpec& spec);

SparseOperator projector(const CompositeBasis& basis, const ProjectorSpec& spec);
SparseOperator complement(const SparseOperator& projector);

enum class CombineMode { sum, product };

/// Weighted sum, or ordered product with the weights multiplied together.
SparseOperator combine(const std::vector<std::pair<cplx, SparseOperator>>& ops, CombineMode mode);

}  // namespace qtrunc
