#pragma once

#include <string>

namespace qtrunc {

/// Growth parameters of a local quantum number: ||H_W Pi_[-L,L]|| <= chi (L+1)^r.
struct WalkProfile {
  double chi = 0.0;
  double r = 0.0;
  std::string label;
};

/// Throws std::invalid_argument unless chi >= 0 and 0 <= r < 1.
void validate(const WalkProfile& profile);

// Boson-fermion couplings carry r = 1/2, gauge links r = 0.
WalkProfile profile_hubbard_holstein(double g);
WalkProfile profile_boson_fermion_general(double max_trace_g, double max_trace_h);
WalkProfile profile_u1(double g_b, double g_gm);
/// The magnetic coefficient multiplies g_B (four link components, each of norm <= 1).
WalkProfile profile_su2(double g_b, double g_gm);
WalkProfile profile_dicke(double g, int n_spins);

}  // namespace qtrunc
