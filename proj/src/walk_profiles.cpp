#include "qtrunc/walk_profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace qtrunc {

void validate(const WalkProfile& profile) {
  if (!(profile.chi >= 0.0) || !std::isfinite(profile.chi)) {
    throw std::invalid_argument("walk profile: chi must be finite and >= 0");
  }
  if (!(profile.r >= 0.0 && profile.r < 1.0)) {
    throw std::invalid_argument("walk profile: r must lie in [0, 1)");
  }
}

WalkProfile profile_hubbard_holstein(double g) {
  if (!(g >= 0.0)) throw std::invalid_argument("profile_hubbard_holstein: g must be >= 0");
  return {2.0 * g, 0.5, "hubbard-holstein"};
}

WalkProfile profile_boson_fermion_general(double max_trace_g, double max_trace_h) {
  if (!(max_trace_g >= 0.0) || !(max_trace_h >= 0.0)) {
    throw std::invalid_argument("profile_boson_fermion_general: trace norms must be >= 0");
  }
  return {std::sqrt(2.0) * (max_trace_g + max_trace_h), 0.5, "boson-fermion"};
}

WalkProfile profile_u1(double g_b, double g_gm) {
  return {4.0 * std::abs(g_b) + 2.0 * std::abs(g_gm), 0.0, "u1-lgt"};
}

WalkProfile profile_su2(double g_b, double g_gm) {
  return {16.0 * std::abs(g_b) + 8.0 * std::abs(g_gm), 0.0, "su2-lgt"};
}

WalkProfile profile_dicke(double g, int n_spins) {
  if (n_spins < 1) throw std::invalid_argument("profile_dicke: n_spins must be >= 1");
  if (!(g >= 0.0)) throw std::invalid_argument("profile_dicke: g must be >= 0");
  return {2.0 * g * std::sqrt(static_cast<double>(n_spins)), 0.5, "dicke"};
}

}  // namespace qtrunc
