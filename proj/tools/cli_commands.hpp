#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "qtrunc/bounds.hpp"
#include "qtrunc/models.hpp"
#include "qtrunc/report_io.hpp"

namespace qtrunc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kGuard = 2, kUnsound = 3 };

/// Everything a command needs. List-valued fields span the (N, eps, T, lambda0) grid.
struct RunConfig {
  std::string command;  // e.g. "threshold state"

  // model
  std::string model = "hh";
  std::vector<int> n_sites{2};
  int n_max = 8;
  int field_cap = 4;
  int n_spins = 2;
  double g = 0.5;
  double g_lin = 1.0;
  double omega0 = 1.0;
  double hop = 1.0;
  double u = 0.0;
  double mu = 0.0;
  bool periodic = false;
  double omega_c = 1.0;
  double omega_z = 0.5;
  double g_m = 1.0;
  double g_gm = 1.0;
  double g_e = 1.0;
  double chi = std::numeric_limits<double>::quiet_NaN();  // profile overrides (NaN: model value)
  double r = std::numeric_limits<double>::quiet_NaN();

  // query
  std::vector<Level> lambda0{0};
  std::vector<double> eps{1e-2};
  std::vector<double> t;  // explicit times; otherwise the tstep..tmax grid; otherwise t = 1
  double tmax = 0.0;
  double tstep = 0.5;
  std::vector<Level> lambda_tilde;
  int delta = 2;
  std::vector<int> deltas;
  int delta_max = kDefaultDeltaMax;
  bool optimize_lambda = false;
  int mode = -1;  // ordinal among truncated modes; -1 means all
  double lambda_bar = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  double e_f_ground = 0.0;
  double e_total = std::numeric_limits<double>::quiet_NaN();
  int p = 1;
  std::vector<double> taus;
  Level window = 2;
  std::string kind = "state";  // sweep target
  std::size_t max_rows = 100000;

  // run
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 0x5eed2024ULL;
  unsigned jobs = 1;
  double tol = 1e-10;
};

struct CommandOutput {
  Table table;
  OutputHeader header;
  int exit_code = kOk;
};

/// Model record for one system size.
ParamRecord make_record(const RunConfig& cfg, int n_sites);
/// Time grid: explicit --t values, else tstep, 2 tstep, ... <= tmax, else {1}.
std::vector<double> time_grid(const RunConfig& cfg);

Table threshold_table(const RunConfig& cfg, const std::string& kind);
CommandOutput run_command(const RunConfig& cfg);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qtrunc::cli
