#include "qtrunc/models.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qtrunc/errors.hpp"
#include "qtrunc/propagate.hpp"

namespace qtrunc {

double ParamRecord::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw std::invalid_argument("missing model parameter '" + key + "'");
  return it->second;
}

double ParamRecord::get_or(const std::string& key, double fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

int ParamRecord::get_int(const std::string& key) const {
  const double v = get(key);
  if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("parameter '" + key + "' must be an integer");
  }
  return static_cast<int>(v);
}

std::string ParamRecord::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "model=" << model << '\n';
  for (const auto& [k, v] : values) os << k << '=' << v << '\n';
  return os.str();
}

ParamRecord ParamRecord::parse(const std::string& text) {
  ParamRecord rec;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw std::invalid_argument("malformed parameter line: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "model") {
      rec.model = val;
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("non-numeric value for '" + key + "'");
    }
    if (used != val.size()) throw std::invalid_argument("non-numeric value for '" + key + "'");
    rec.values[key] = v;
  }
  if (rec.model.empty()) throw std::invalid_argument("parameter record lacks a model name");
  return rec;
}

std::string cutoff_key(const std::string& model) { return model == "u1" ? "field_cap" : "n_max"; }

ParamRecord with_cutoff(ParamRecord record, int cutoff) {
  record.values[cutoff_key(record.model)] = cutoff;
  return record;
}

const SparseOperator& ModelInstance::part(const std::string& key) const {
  for (const auto& [name, op] : parts) {
    if (name == key) return op;
  }
  throw std::out_of_range("model has no part '" + key + "'");
}

namespace {

SparseOperator sum_parts(const std::vector<std::pair<std::string, SparseOperator>>& parts, std::size_t dim) {
  SparseOperator h(dim);
  for (const auto& [name, op] : parts) h += op;
  return h;
}

SparseOperator hermitian_part_sum(const SparseOperator& a) { return a + a.adjoint(); }

std::function<double(Level)> squared_comm(std::function<double(Level)> h_norm) {
  return [h_norm = std::move(h_norm)](Level lam) {
    const double h = h_norm(std::max<Level>(lam, 0));
    return 2.0 * h * h;
  };
}

void check_cutoff(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

}  // namespace

ModelInstance single_mode(double g_lin, double omega0, int n_max) {
  check_cutoff(n_max, "n_max");
  ModelInstance m;
  m.name = "single";
  m.basis = build_basis({ModeSpec::boson(n_max, "b")});
  const auto b = mode_operator(m.basis, 0, OpKind::annihilate);
  const auto h_fb = g_lin * hermitian_part_sum(b);
  const auto h_b = omega0 * mode_operator(m.basis, 0, OpKind::number);
  m.parts = {{"H_fb", h_fb}, {"H_b", h_b}};
  m.hamiltonian = sum_parts(m.parts, m.basis.dimension());
  m.walk = [h_fb](std::size_t mode) {
    if (mode != 0) throw std::out_of_range("single mode model has one mode");
    return h_fb;
  };
  m.params.model = "single";
  m.params.set("g_lin", g_lin).set("omega0", omega0).set("n_max", n_max);
  m.cutoff = n_max;
  m.profile = profile_of(m.params);
  m.comm_norm = comm_norm_of(m.params);
  return m;
}

ModelInstance hubbard_holstein_1d(const HubbardHolsteinParams& p) {
  if (p.n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  check_cutoff(p.n_max, "n_max");
  if (!(p.omega0 >= 0.0)) throw std::invalid_argument("omega0 must be >= 0");
  ModelInstance m;
  m.name = "hh";
  std::vector<ModeSpec> specs;
  for (int i = 0; i < p.n_sites; ++i) {
    specs.push_back(ModeSpec::fermion("up" + std::to_string(i)));
    specs.push_back(ModeSpec::fermion("dn" + std::to_string(i)));
    specs.push_back(ModeSpec::boson(p.n_max, "b" + std::to_string(i)));
  }
  m.basis = build_basis(std::move(specs));
  const std::size_t dim = m.basis.dimension();
  const auto id = SparseOperator::identity(dim);
  auto up = [](int i) { return static_cast<std::size_t>(3 * i); };
  auto dn = [](int i) { return static_cast<std::size_t>(3 * i + 1); };
  auto bo = [](int i) { return static_cast<std::size_t>(3 * i + 2); };

  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < p.n_sites; ++i) bonds.emplace_back(i, i + 1);
  if (!p.open_boundary && p.n_sites > 2) bonds.emplace_back(p.n_sites - 1, 0);

  SparseOperator h_f(dim);
  for (const auto& [i, j] : bonds) {
    for (std::size_t spin = 0; spin < 2; ++spin) {
      const auto ci_dag = mode_operator(m.basis, up(i) + spin, OpKind::create);
      const auto cj = mode_operator(m.basis, up(j) + spin, OpKind::annihilate);
      h_f += cplx(-p.hop) * hermitian_part_sum(ci_dag * cj);
    }
  }
  std::vector<SparseOperator> density(static_cast<std::size_t>(p.n_sites));
  for (int i = 0; i < p.n_sites; ++i) {
    const auto nu = mode_operator(m.basis, up(i), OpKind::number);
    const auto nd = mode_operator(m.basis, dn(i), OpKind::number);
    h_f += cplx(p.u) * ((nu - 0.5 * id) * (nd - 0.5 * id));
    h_f += cplx(-p.mu) * (nu + nd);
    density[static_cast<std::size_t>(i)] = nu + nd - id;
  }

  std::vector<SparseOperator> walks;
  SparseOperator h_fb(dim);
  SparseOperator h_b(dim);
  for (int i = 0; i < p.n_sites; ++i) {
    const auto b = mode_operator(m.basis, bo(i), OpKind::annihilate);
    walks.push_back(cplx(p.g) * (hermitian_part_sum(b) * density[static_cast<std::size_t>(i)]));
    h_fb += walks.back();
    h_b += cplx(p.omega0) * mode_operator(m.basis, bo(i), OpKind::number);
  }
  m.parts = {{"H_f", h_f}, {"H_fb", h_fb}, {"H_b", h_b}};
  m.hamiltonian = sum_parts(m.parts, dim);
  m.walk = [walks, n_sites = p.n_sites](std::size_t mode) {
    if (mode % 3 != 2 || mode / 3 >= static_cast<std::size_t>(n_sites)) {
      throw std::out_of_range("walk Hamiltonian requested for a non-boson mode");
    }
    return walks[mode / 3];
  };
  m.params.model = "hh";
  m.params.set("n_sites", p.n_sites).set("hop", p.hop).set("u", p.u).set("mu", p.mu);
  m.params.set("g", p.g).set("omega0", p.omega0).set("n_max", p.n_max).set("open_boundary", p.open_boundary ? 1 : 0);
  m.cutoff = p.n_max;
  m.profile = profile_of(m.params);
  m.comm_norm = comm_norm_of(m.params);
  return m;
}

ModelInstance dicke(int n_spins, double omega_c, double omega_z, double g, int n_max) {
  if (n_spins < 1) throw std::invalid_argument("n_spins must be >= 1");
  check_cutoff(n_max, "n_max");
  ModelInstance m;
  m.name = "dicke";
  std::vector<ModeSpec> specs{ModeSpec::boson(n_max, "b")};
  for (int i = 0; i < n_spins; ++i) specs.push_back(ModeSpec::spin_half("s" + std::to_string(i)));
  m.basis = build_basis(std::move(specs));
  const std::size_t dim = m.basis.dimension();

  const auto h_b = cplx(omega_c) * mode_operator(m.basis, 0, OpKind::number);
  SparseOperator h_z(dim);
  SparseOperator sx(dim);
  for (int i = 0; i < n_spins; ++i) {
    h_z += cplx(omega_z) * mode_operator(m.basis, static_cast<std::size_t>(i + 1), OpKind::pauli_z);
    sx += mode_operator(m.basis, static_cast<std::size_t>(i + 1), OpKind::pauli_x);
  }
  const auto b = mode_operator(m.basis, 0, OpKind::annihilate);
  const auto h_sb = cplx(g / std::sqrt(static_cast<double>(n_spins))) * (hermitian_part_sum(b) * sx);
  m.parts = {{"H_b", h_b}, {"H_z", h_z}, {"H_sb", h_sb}};
  m.hamiltonian = sum_parts(m.parts, dim);
  m.walk = [h_sb](std::size_t mode) {
    if (mode != 0) throw std::out_of_range("walk Hamiltonian requested for a spin mode");
    return h_sb;
  };
  m.params.model = "dicke";
  m.params.set("n_spins", n_spins).set("omega_c", omega_c).set("omega_z", omega_z).set("g", g).set("n_max", n_max);
  m.cutoff = n_max;
  m.profile = profile_of(m.params);
  m.comm_norm = comm_norm_of(m.params);
  return m;
}

ModelInstance u1_lgt_1d(int n_sites, double g_m, double g_gm, double g_e, int field_cap) {
  if (n_sites < 2) throw std::invalid_argument("n_sites must be >= 2");
  if (field_cap < 0) throw std::invalid_argument("field_cap must be >= 0");
  ModelInstance m;
  m.name = "u1";
  std::vector<ModeSpec> specs;
  for (int x = 0; x < n_sites; ++x) {
    specs.push_back(ModeSpec::fermion("phi" + std::to_string(x)));
    if (x + 1 < n_sites) specs.push_back(ModeSpec::rotor(field_cap, "U" + std::to_string(x)));
  }
  m.basis = build_basis(std::move(specs));
  const std::size_t dim = m.basis.dimension();
  auto site = [](int x) { return static_cast<std::size_t>(2 * x); };
  auto link = [](int x) { return static_cast<std::size_t>(2 * x + 1); };

  SparseOperator h_m(dim);
  SparseOperator h_e(dim);
  SparseOperator h_gm(dim);
  std::vector<SparseOperator> walks;
  for (int x = 0; x < n_sites; ++x) {
    const double stagger = (x % 2 == 0) ? 1.0 : -1.0;
    h_m += cplx(g_m * stagger) * mode_operator(m.basis, site(x), OpKind::number);
    if (x + 1 == n_sites) continue;
    const auto e = mode_operator(m.basis, link(x), OpKind::efield);
    h_e += cplx(g_e) * (e * e);
    const auto hop = combine({{1.0, mode_operator(m.basis, site(x), OpKind::create)},
                              {1.0, mode_operator(m.basis, link(x), OpKind::lower_link)},
                              {1.0, mode_operator(m.basis, site(x + 1), OpKind::annihilate)}},
                             CombineMode::product);
    walks.push_back(cplx(g_gm) * hermitian_part_sum(hop));
    h_gm += walks.back();
  }
  m.parts = {{"H_M", h_m}, {"H_GM", h_gm}, {"H_E", h_e}};
  m.hamiltonian = sum_parts(m.parts, dim);
  m.walk = [walks](std::size_t mode) {
    if (mode % 2 != 1 || mode / 2 >= walks.size()) throw std::out_of_range("walk Hamiltonian requested for a site mode");
    return walks[mode / 2];
  };
  m.params.model = "u1";
  m.params.set("n_sites", n_sites).set("g_m", g_m).set("g_gm", g_gm).set("g_e", g_e).set("field_cap", field_cap);
  m.cutoff = field_cap;
  m.profile = profile_of(m.params);
  m.comm_norm = comm_norm_of(m.params);
  return m;
}

ModelInstance build_model(const ParamRecord& r) {
  if (r.model == "single") {
    return single_mode(r.get_or("g_lin", 1.0), r.get_or("omega0", 1.0), r.get_int("n_max"));
  }
  if (r.model == "hh") return hubbard_holstein_1d(hubbard_holstein_params(r));
  if (r.model == "dicke") {
    return dicke(static_cast<int>(r.get_or("n_spins", 2)), r.get_or("omega_c", 1.0), r.get_or("omega_z", 0.5),
                 r.get_or("g", 0.5), r.get_int("n_max"));
  }
  if (r.model == "u1") {
    return u1_lgt_1d(static_cast<int>(r.get_or("n_sites", 2)), r.get_or("g_m", 1.0), r.get_or("g_gm", 1.0),
                     r.get_or("g_e", 1.0), r.get_int("field_cap"));
  }
  throw std::invalid_argument("unknown model '" + r.model + "'");
}

HubbardHolsteinParams hubbard_holstein_params(const ParamRecord& r) {
  HubbardHolsteinParams p;
  p.n_sites = static_cast<int>(r.get_or("n_sites", p.n_sites));
  p.hop = r.get_or("hop", p.hop);
  p.u = r.get_or("u", p.u);
  p.mu = r.get_or("mu", p.mu);
  p.g = r.get_or("g", p.g);
  p.omega0 = r.get_or("omega0", p.omega0);
  p.n_max = static_cast<int>(r.get_or("n_max", p.n_max));
  p.open_boundary = r.get_or("open_boundary", 1.0) != 0.0;
  return p;
}

WalkProfile profile_of(const ParamRecord& r) {
  if (r.model == "single") return {2.0 * std::abs(r.get_or("g_lin", 1.0)), 0.5, "single-mode"};
  if (r.model == "hh") return profile_hubbard_holstein(std::abs(r.get_or("g", 0.5)));
  if (r.model == "dicke") {
    return profile_dicke(std::abs(r.get_or("g", 0.5)), static_cast<int>(r.get_or("n_spins", 2)));
  }
  if (r.model == "u1") return profile_u1(0.0, r.get_or("g_gm", 1.0));
  throw std::invalid_argument("unknown model '" + r.model + "'");
}

std::function<double(Level)> comm_norm_of(const ParamRecord& r) {
  if (r.model == "single") {
    const double ag = std::abs(r.get_or("g_lin", 1.0));
    const double aw = std::abs(r.get_or("omega0", 1.0));
    return squared_comm([ag, aw](Level lam) {
      const double l = static_cast<double>(lam);
      return 2.0 * ag * std::sqrt(l + 1.0) + aw * l;
    });
  }
  if (r.model == "hh") {
    const HubbardHolsteinParams p = hubbard_holstein_params(r);
    const double n = p.n_sites;
    double bonds = std::max(0, p.n_sites - 1);
    if (!p.open_boundary && p.n_sites > 2) bonds += 1.0;
    const double fixed = std::abs(p.hop) * bonds * 2.0 + n * std::abs(p.u) / 4.0 + 2.0 * n * std::abs(p.mu);
    const double ag = std::abs(p.g);
    const double aw = std::abs(p.omega0);
    return squared_comm([=](Level lam) {
      const double l = static_cast<double>(lam);
      return fixed + 2.0 * n * ag * std::sqrt(l + 1.0) + n * aw * l;
    });
  }
  if (r.model == "dicke") {
    const double ns = r.get_or("n_spins", 2);
    const double wc = std::abs(r.get_or("omega_c", 1.0));
    const double wz = std::abs(r.get_or("omega_z", 0.5));
    const double ag = std::abs(r.get_or("g", 0.5));
    return squared_comm([=](Level lam) {
      const double l = static_cast<double>(lam);
      return wc * l + ns * wz + 2.0 * ag * std::sqrt(ns) * std::sqrt(l + 1.0);
    });
  }
  if (r.model == "u1") {
    const double n = r.get_or("n_sites", 2);
    const double gm = std::abs(r.get_or("g_m", 1.0));
    const double ggm = std::abs(r.get_or("g_gm", 1.0));
    const double ge = std::abs(r.get_or("g_e", 1.0));
    return squared_comm([=](Level lam) {
      const double l = static_cast<double>(lam);
      return n * gm + 2.0 * ggm * (n - 1.0) + ge * (n - 1.0) * l * l;
    });
  }
  throw std::invalid_argument("unknown model '" + r.model + "'");
}

int truncated_mode_count(const ParamRecord& r) {
  if (r.model == "single" || r.model == "dicke") return 1;
  if (r.model == "hh") return static_cast<int>(r.get_or("n_sites", 2));
  if (r.model == "u1") return static_cast<int>(r.get_or("n_sites", 2)) - 1;
  throw std::invalid_argument("unknown model '" + r.model + "'");
}

SparseOperator walk_hamiltonian(const ModelInstance& model, std::size_t mode) { return model.walk(mode); }

SparseOperator truncate_hamiltonian(const ModelInstance& model, Level lambda_tilde) {
  const auto pi = projector(model.basis, ProjectorSpec::ball(std::nullopt, lambda_tilde));
  return pi * model.hamiltonian * pi;
}

CommNorm comm_norm_exact(const ModelInstance& model, Level lambda_tilde, bool require_padding) {
  if (lambda_tilde < 0) throw std::invalid_argument("lambda_tilde must be >= 0");
  if (require_padding && static_cast<Level>(model.cutoff) < lambda_tilde + 2) {
    throw PreconditionError("comm_norm_exact: cutoff " + std::to_string(model.cutoff) +
                            " is below lambda_tilde + 2 = " + std::to_string(lambda_tilde + 2));
  }
  const auto pi = projector(model.basis, ProjectorSpec::ball(std::nullopt, lambda_tilde));
  const auto ht = pi * model.hamiltonian * pi;
  CommNorm out;
  out.exact = op_norm(commutator(model.hamiltonian, ht), 1e-12);
  double s = 0.0;
  for (const auto& [name, op] : model.parts) s += op_norm(op * pi, 1e-12);
  out.analytic_fallback = 2.0 * s * s;
  return out;
}

}  // namespace qtrunc
