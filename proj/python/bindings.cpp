#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtrunc/bounds.hpp"
#include "qtrunc/errors.hpp"
#include "qtrunc/models.hpp"
#include "qtrunc/propagate.hpp"
#include "qtrunc/report_io.hpp"
#include "qtrunc/trotter.hpp"
#include "qtrunc/verify.hpp"
#include "qtrunc/walk_profiles.hpp"

namespace py = pybind11;
using namespace qtrunc;

namespace {

ParamRecord record_from(const std::string& model, const std::map<std::string, double>& values) {
  ParamRecord rec;
  rec.model = model;
  rec.values = values;
  return rec;
}

// Ordinal among truncated modes to basis index.
std::optional<std::size_t> mode_arg(const ParamRecord& rec, int mode) {
  if (mode < 0) return std::nullopt;
  const std::vector<std::size_t> modes = build_model(with_cutoff(rec, 1)).truncated_modes();
  if (static_cast<std::size_t>(mode) >= modes.size()) throw std::out_of_range("mode ordinal out of range");
  return modes[static_cast<std::size_t>(mode)];
}

VerifyConfig verify_config(double tol, std::uint64_t seed) {
  VerifyConfig cfg;
  cfg.evolve.tolerance = tol;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_qtrunc, m) {
  m.doc() = "Certified truncation thresholds for bosonic modes and gauge links";
  m.attr("__version__") = version();

  py::register_exception<ValidityError>(m, "ValidityError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<PaddingError>(m, "PaddingError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<WalkProfile>(m, "WalkProfile")
      .def(py::init([](double chi, double r, std::string label) {
             WalkProfile p{chi, r, std::move(label)};
             validate(p);
             return p;
           }),
           py::arg("chi"), py::arg("r"), py::arg("label") = "")
      .def_readonly("chi", &WalkProfile::chi)
      .def_readonly("r", &WalkProfile::r)
      .def_readonly("label", &WalkProfile::label)
      .def("__repr__", [](const WalkProfile& p) {
        return "WalkProfile(chi=" + std::to_string(p.chi) + ", r=" + std::to_string(p.r) + ")";
      });

  m.def("profile_hubbard_holstein", &profile_hubbard_holstein, py::arg("g"));
  m.def("profile_boson_fermion_general", &profile_boson_fermion_general, py::arg("max_trace_g"),
        py::arg("max_trace_h"));
  m.def("profile_u1", &profile_u1, py::arg("g_b"), py::arg("g_gm"));
  m.def("profile_su2", &profile_su2, py::arg("g_b"), py::arg("g_gm"));
  m.def("profile_dicke", &profile_dicke, py::arg("g"), py::arg("n_spins"));

  py::class_<ScheduleStep>(m, "ScheduleStep")
      .def_readonly("t", &ScheduleStep::t)
      .def_readonly("lambda_", &ScheduleStep::lambda);
  py::class_<Schedule>(m, "Schedule")
      .def_readonly("delta", &Schedule::delta)
      .def_readonly("steps", &Schedule::steps)
      .def_readonly("no_growth", &Schedule::no_growth)
      .def_property_readonly("j_count", &Schedule::j_count);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("lambda_", &BoundReport::lambda)
      .def_readonly("bound", &BoundReport::bound)
      .def_readonly("delta_used", &BoundReport::delta_used)
      .def_readonly("j_count", &BoundReport::j_count)
      .def_readonly("details", &BoundReport::details)
      .def_readonly("alt_lambda", &BoundReport::alt_lambda)
      .def_readonly("alt_delta", &BoundReport::alt_delta);
  py::class_<TailReport, BoundReport>(m, "TailReport")
      .def_readonly("sigma", &TailReport::sigma)
      .def_readonly("t_window", &TailReport::t_window)
      .def_readonly("overlap_floor", &TailReport::overlap_floor)
      .def_readonly("core", &TailReport::core);

  m.def("segment_bound", &segment_bound, py::arg("r"), py::arg("delta"));
  m.def("short_time_window", &short_time_window, py::arg("profile"), py::arg("lambda0"));
  m.def("short_time_bound", &short_time_bound, py::arg("profile"), py::arg("lambda0"), py::arg("delta"),
        py::arg("t"));
  m.def("adaptive_schedule", &adaptive_schedule, py::arg("profile"), py::arg("lambda0"), py::arg("delta"),
        py::arg("horizon"));
  m.def("long_time_bound", &long_time_bound, py::arg("profile"), py::arg("lambda0"), py::arg("delta"),
        py::arg("t"));
  m.def("leakage_bound_at", &leakage_bound_at, py::arg("profile"), py::arg("lambda0"), py::arg("lambda_"),
        py::arg("t"), py::arg("delta_max") = kDefaultDeltaMax);
  m.def(
      "minimal_state_threshold",
      [](const WalkProfile& p, Level lambda0, double t, double eps, int delta_max, bool optimize) {
        TruncationQuery q{lambda0, t, eps};
        return minimal_state_threshold(p, q, StateThresholdOptions{delta_max, optimize});
      },
      py::arg("profile"), py::arg("lambda0"), py::arg("t"), py::arg("eps"),
      py::arg("delta_max") = kDefaultDeltaMax, py::arg("optimize_lambda") = false);
  m.def(
      "minimal_hamiltonian_threshold",
      [](const WalkProfile& p, Level lambda0, double t, double eps, int n_modes,
         const std::function<double(Level)>& comm_norm) {
        return minimal_hamiltonian_threshold(p, TruncationQuery{lambda0, t, eps}, n_modes, comm_norm);
      },
      py::arg("profile"), py::arg("lambda0"), py::arg("t"), py::arg("eps"), py::arg("n_modes"),
      py::arg("comm_norm"));
  m.def(
      "tail_threshold",
      [](const WalkProfile& p, double lambda_bar, double gap, double eps) {
        return tail_threshold(p, TailQuery{lambda_bar, gap, eps});
      },
      py::arg("profile"), py::arg("lambda_bar"), py::arg("gap"), py::arg("eps"));
  m.def("energy_threshold_single_mode", &energy_threshold_single_mode, py::arg("omega0"), py::arg("lambda0"),
        py::arg("eps"));
  m.def("energy_threshold_hubbard_holstein", &energy_threshold_hubbard_holstein, py::arg("omega0"),
        py::arg("g"), py::arg("n_sites"), py::arg("lambda0"), py::arg("e_f_ground"), py::arg("e_total"),
        py::arg("eps"));

  py::class_<TrotterPlan>(m, "TrotterPlan")
      .def_readonly("steps", &TrotterPlan::steps)
      .def_readonly("tau", &TrotterPlan::tau)
      .def_readonly("prefactor", &TrotterPlan::prefactor)
      .def_readonly("beta", &TrotterPlan::beta);
  m.def("trotter_steps", &trotter_steps, py::arg("t_total"), py::arg("eps"), py::arg("p"), py::arg("beta"),
        py::arg("prefactor") = 1.0);

  m.def(
      "model_summary",
      [](const std::string& model, const std::map<std::string, double>& values) {
        const ModelInstance inst = build_model(record_from(model, values));
        py::dict d;
        d["name"] = inst.name;
        d["dim"] = inst.basis.dimension();
        d["cutoff"] = inst.cutoff;
        d["truncated_modes"] = inst.truncated_modes();
        d["chi"] = inst.profile.chi;
        d["r"] = inst.profile.r;
        d["ground_energy"] = ground_state(inst.hamiltonian).energy;
        return d;
      },
      py::arg("model"), py::arg("params"));
  m.def(
      "profile_of", [](const std::string& model, const std::map<std::string, double>& values) {
        return profile_of(record_from(model, values));
      },
      py::arg("model"), py::arg("params"));

  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_readonly("id", &ExperimentReport::id)
      .def_readonly("inputs", &ExperimentReport::inputs)
      .def_readonly("empirical", &ExperimentReport::empirical)
      .def_readonly("analytic", &ExperimentReport::analytic)
      .def_readonly("sound", &ExperimentReport::sound)
      .def_readonly("margin", &ExperimentReport::margin)
      .def_readonly("runtime_s", &ExperimentReport::runtime_s)
      .def_readonly("note", &ExperimentReport::note);

  m.def(
      "verify_state_truncation",
      [](const std::string& model, const std::map<std::string, double>& values, Level lambda0,
         const std::vector<double>& times, const std::vector<int>& deltas, int mode, double tol,
         std::uint64_t seed) {
        const ParamRecord rec = record_from(model, values);
        return verify_state_truncation(rec, lambda0, times, deltas, mode_arg(rec, mode), verify_config(tol, seed));
      },
      py::arg("model"), py::arg("params"), py::arg("lambda0"), py::arg("times"), py::arg("deltas"),
      py::arg("mode") = -1, py::arg("tol") = 1e-10, py::arg("seed") = kDefaultSeed,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "verify_hamiltonian_truncation",
      [](const std::string& model, const std::map<std::string, double>& values, Level lambda0,
         Level lambda_tilde, double t, double tol) {
        return verify_hamiltonian_truncation(record_from(model, values), lambda0, lambda_tilde, t,
                                             verify_config(tol, kDefaultSeed));
      },
      py::arg("model"), py::arg("params"), py::arg("lambda0"), py::arg("lambda_tilde"), py::arg("t"),
      py::arg("tol") = 1e-10, py::call_guard<py::gil_scoped_release>());
  m.def(
      "coherent_oracle_check",
      [](const std::vector<double>& t_grid, int n_max) {
        return coherent_oracle_check(t_grid, n_max > 0 ? std::optional<int>(n_max) : std::nullopt);
      },
      py::arg("t_grid"), py::arg("n_max") = 0, py::call_guard<py::gil_scoped_release>());

  py::class_<CompareRow>(m, "CompareRow")
      .def_readonly("t", &CompareRow::t)
      .def_readonly("lambda_ours", &CompareRow::lambda_ours)
      .def_readonly("lambda_energy", &CompareRow::lambda_energy)
      .def_readonly("bound", &CompareRow::bound)
      .def_readonly("delta", &CompareRow::delta);
  py::class_<CompareTable>(m, "CompareTable")
      .def_readonly("rows", &CompareTable::rows)
      .def_readonly("crossover_t", &CompareTable::crossover_t);
  m.def(
      "compare_thresholds",
      [](int n_sites, double eps, Level lambda0, double omega0, double g, const std::vector<double>& times) {
        return compare_thresholds(CompareParams{n_sites, eps, lambda0, omega0, g, times});
      },
      py::arg("n_sites") = 100, py::arg("eps") = 1e-2, py::arg("lambda0") = 4, py::arg("omega0") = 1.0,
      py::arg("g") = 0.5, py::arg("times") = std::vector<double>{});
}
