#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qtrunc/bounds.hpp"
#include "qtrunc/fock_algebra.hpp"
#include "qtrunc/walk_profiles.hpp"

namespace qtrunc {

/// Plain key=value record of model inputs; round-trips through text.
struct ParamRecord {
  std::string model;
  std::map<std::string, double> values;

  double get(const std::string& key) const;
  double get_or(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  ParamRecord& set(const std::string& key, double v) {
    values[key] = v;
    return *this;
  }

  std::string to_text() const;
  static ParamRecord parse(const std::string& text);
};

/// "n_max" for bosonic models, "field_cap" for gauge links.
std::string cutoff_key(const std::string& model);
ParamRecord with_cutoff(ParamRecord record, int cutoff);

struct ModelInstance {
  std::string name;
  CompositeBasis basis;
  SparseOperator hamiltonian;
  std::vector<std::pair<std::string, SparseOperator>> parts;
  WalkProfile profile;
  std::function<double(Level)> comm_norm;  // analytic upper bound on ||[H, Pi H Pi]||
  std::function<SparseOperator(std::size_t)> walk;  // coupling part that moves the given mode's number
  ParamRecord params;
  int cutoff = 0;

  const SparseOperator& part(const std::string& key) const;
  std::vector<std::size_t> truncated_modes() const { return basis.truncatable_modes(); }
  int n_truncated() const { return static_cast<int>(basis.truncatable_modes().size()); }
};

ModelInstance single_mode(double g_lin, double omega0, int n_max);

struct HubbardHolsteinParams {
  int n_sites = 2;
  double hop = 1.0;
  double u = 0.0;
  double mu = 0.0;
  double g = 0.5;
  double omega0 = 1.0;
  int n_max = 8;
  bool open_boundary = true;
};

/// Per site [fermion up, fermion down, boson].
ModelInstance hubbard_holstein_1d(const HubbardHolsteinParams& p);
ModelInstance dicke(int n_spins, double omega_c, double omega_z, double g, int n_max);
/// Modes [site 0, link 0, site 1, link 1, ..., site N-1].
ModelInstance u1_lgt_1d(int n_sites, double g_m, double g_gm, double g_e, int field_cap);

ModelInstance build_model(const ParamRecord& record);

// Analytic data available without assembling any matrix (any system size).
WalkProfile profile_of(const ParamRecord& record);
std::function<double(Level)> comm_norm_of(const ParamRecord& record);
int truncated_mode_count(const ParamRecord& record);
HubbardHolsteinParams hubbard_holstein_params(const ParamRecord& record);

/// H_W for one truncated mode, as built by the model.
SparseOperator walk_hamiltonian(const ModelInstance& model, std::size_t mode);

/// Pi^all H Pi^all with every truncated mode restricted to [-lambda, lambda].
SparseOperator truncate_hamiltonian(const ModelInstance& model, Level lambda_tilde);

struct CommNorm {
  double exact = 0.0;
  double analytic_fallback = 0.0;
};

/// ||[H, Pi H Pi]|| at lambda_tilde. The padding check demands cutoff >= lambda_tilde + 2.
CommNorm comm_norm_exact(const ModelInstance& model, Level lambda_tilde, bool require_padding = true);

}  // namespace qtrunc
