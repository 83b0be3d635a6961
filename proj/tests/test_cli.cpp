#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_commands.hpp"

using namespace qtrunc;
using namespace qtrunc::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qtrunc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> body(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) != 0) lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_CASE("energy threshold") {
  const Run r = run({"threshold", "energy", "--model", "single", "--omega0", "1", "--lambda0", "4", "--eps", "0.1"});
  CHECK(r.code == kOk);
  const auto rows = body(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "model,n_sites,lambda0,eps,e_f_ground,e_total,lambda_energy");
  CHECK(rows[1].substr(rows[1].rfind(',') + 1) == "1694");
}

TEST_CASE("state threshold at t = 0 returns lambda0") {
  const Run r = run({"threshold", "state", "--model", "hh", "--lambda0", "4", "--t", "0"});
  CHECK(r.code == kOk);
  const auto rows = body(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].find(",4,0,2,0") != std::string::npos);
}

TEST_CASE("compare curve") {
  const Run r = run({"threshold", "state", "--model", "hh", "--omega0", "1", "--g", "0.5", "--lambda0", "4",
                     "--eps", "1e-2", "--tmax", "10", "--n-sites", "100"});
  CHECK(r.code == kOk);
  CHECK(body(r.out).size() == 21);
  CHECK(r.out.find("# command=threshold state") != std::string::npos);
  CHECK(r.out.find("# n_sites=100") != std::string::npos);
}

TEST_CASE("sweep matches scalar calls row by row") {
  const Run s = run({"sweep", "--kind", "state", "--n-sites", "5,20,100", "--eps", "1e-1,1e-2,1e-3", "--t", "3",
                     "--lambda0", "4", "--jobs", "4"});
  CHECK(s.code == kOk);
  const auto rows = body(s.out);
  REQUIRE(rows.size() == 10);
  std::size_t k = 1;
  for (const char* n : {"5", "20", "100"}) {
    for (const char* e : {"1e-1", "1e-2", "1e-3"}) {
      const Run one = run({"threshold", "state", "--n-sites", n, "--eps", e, "--t", "3", "--lambda0", "4"});
      const auto r1 = body(one.out);
      REQUIRE(r1.size() == 2);
      CHECK(r1[1] == rows[k++]);
    }
  }

  const Run a = run({"sweep", "--kind", "ham", "--t", "2", "--seed", "1"});
  const Run b = run({"sweep", "--kind", "ham", "--t", "2", "--seed", "99"});
  CHECK(body(a.out) == body(b.out));
  const Run single = run({"threshold", "ham", "--t", "2"});
  CHECK(body(single.out) == body(a.out));

  const Run cap = run({"sweep", "--n-sites", "1,2,3", "--eps", "0.1,0.2", "--max-rows", "5"});
  CHECK(cap.code == kGuard);
  CHECK(cap.out.empty());
}

TEST_CASE("config file with flags taking precedence") {
  namespace fs = std::filesystem;
  const fs::path cfg = fs::temp_directory_path() / "qtrunc_cli_test.ini";
  {
    std::ofstream f(cfg);
    f << "model=single\nomega0=1\nlambda0=4\neps=0.5\n";
  }
  const Run r = run({"threshold", "energy", "--config", cfg.string(), "--eps", "0.1"});
  CHECK(r.code == kOk);
  const auto rows = body(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == "single,1,4,0.1,0,nan,1694");
  CHECK(r.out.find("# config=" + cfg.string()) != std::string::npos);

  {
    std::ofstream f(cfg);
    f << "model=hh\nn_sites=5,20\neps=0.1\n";
  }
  const Run lists = run({"threshold", "state", "--config", cfg.string()});
  CHECK(body(lists.out).size() == 3);
  fs::remove(cfg);
}

TEST_CASE("verify suites and exit codes") {
  const Run empty = run({"verify"});
  CHECK(empty.code == kOk);
  CHECK(body(empty.out).size() == 1);

  const Run coh = run({"verify", "coherent", "--tmax", "1"});
  CHECK(coh.code == kOk);
  CHECK(body(coh.out).size() == 3);

  const Run st = run({"verify", "state", "--model", "single", "--n-max", "24", "--lambda0", "1", "--t", "0.5",
                      "--deltas", "1,2,3"});
  CHECK(st.code == kOk);
  CHECK(st.out.find(",false,") == std::string::npos);

  const Run usage = run({"threshold", "state", "--bogus"});
  CHECK(usage.code == kUsage);
  const Run bad_model = run({"threshold", "state", "--model", "nope"});
  CHECK(bad_model.code == kUsage);
  const Run guard = run({"verify", "ham", "--model", "single", "--n-max", "13", "--lambda-tilde", "12"});
  CHECK(guard.code == kGuard);
  const Run none = run({});
  CHECK(none.code == kUsage);
}

TEST_CASE("schedule and compare") {
  const Run s = run({"schedule", "--chi", "1", "--r", "0", "--lambda0", "0", "--delta", "2", "--tmax", "1"});
  CHECK(s.code == kOk);
  const auto rows = body(s.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1] == "0,0.5,1");
  CHECK(rows[2] == "1,1,2");

  const Run c = run({"compare", "--n-sites", "5", "--eps", "0.1", "--lambda0", "4", "--tmax", "50", "--tstep", "5"});
  CHECK(c.code == kOk);
  CHECK(c.out.find("# crossover_t=") != std::string::npos);
  CHECK(c.out.find("# crossover_t=none") == std::string::npos);
}

TEST_CASE("json output and output directory") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qtrunc_cli_outdir";
  fs::remove_all(dir);
  setenv("QTRUNC_OUTPUT_DIR", dir.string().c_str(), 1);
  const Run r = run({"threshold", "energy", "--model", "single", "--lambda0", "4", "--eps", "0.1", "--format", "json"});
  unsetenv("QTRUNC_OUTPUT_DIR");
  CHECK(r.code == kOk);
  CHECK(r.out.empty());
  std::ifstream f(dir / "threshold_energy.json");
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"lambda_energy\": \"1694\"") != std::string::npos);
  fs::remove_all(dir);

  const fs::path bad = fs::temp_directory_path() / "qtrunc_should_not_exist.csv";
  fs::remove(bad);
  const Run fail = run({"threshold", "state", "--eps", "0", "-o", bad.string()});
  CHECK(fail.code != kOk);
  CHECK_FALSE(fs::exists(bad));
}
