#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <sstream>

#include "dwlab/config.hpp"
#include "dwlab/dynamics.hpp"
#include "dwlab/entropy.hpp"
#include "dwlab/errors.hpp"
#include "dwlab/experiment.hpp"
#include "dwlab/profile.hpp"
#include "dwlab/scaling.hpp"
#include "dwlab/thermo.hpp"
#include "dwlab/verify.hpp"

namespace py = pybind11;
using namespace dwlab;

PYBIND11_MODULE(_dwlab, m) {
  m.doc() = "Damped Euler relative-entropy laboratory";

  auto base = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<VacuumViolation>(m, "VacuumViolation", base.ptr());
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DegenerateFit>(m, "DegenerateFit", PyExc_RuntimeError);

  // thermo
  py::class_<PressureLaw>(m, "PressureLaw")
      .def(py::init<double, double>(), py::arg("k"), py::arg("gamma"))
      .def_property_readonly("k", &PressureLaw::k)
      .def_property_readonly("gamma", &PressureLaw::gamma)
      .def("p", &PressureLaw::p)
      .def("dp", &PressureLaw::dp)
      .def("dh", &PressureLaw::dh);

  m.def("pressure", [](const PressureLaw& law, double z) {
    const PressureValue v = pressure_eval(law, z);
    return py::make_tuple(v.p, v.dp);
  });
  m.def("potential", [](const PressureLaw& law, double z) {
    const PotentialValue v = potential_eval(law, z);
    return py::make_tuple(v.h, v.dh, v.d2h);
  });
  m.def("relative_quantities", [](const PressureLaw& law, double rho, double rho_bar) {
    const RelativeValue v = relative_quantities(law, rho, rho_bar);
    return py::make_tuple(v.h_rel, v.p_rel);
  });
  m.def("entropy_generator", &entropy_generator, py::arg("p"), py::arg("z"));
  m.def("vacuum_admissible", [](const PressureLaw& law) {
    const VacuumAdmissibility v = vacuum_admissible(law);
    return py::make_tuple(v.ok, v.c ? py::cast(*v.c) : py::none());
  });

  // profile
  py::class_<LimitSpec>(m, "LimitSpec")
      .def(py::init([](double rm, double rp, double a) { return LimitSpec{rm, rp, a}; }), py::arg("rho_minus"),
           py::arg("rho_plus"), py::arg("alpha") = 1.0)
      .def_readwrite("rho_minus", &LimitSpec::rho_minus)
      .def_readwrite("rho_plus", &LimitSpec::rho_plus)
      .def_readwrite("alpha", &LimitSpec::alpha);

  py::class_<SimilarityProfile, std::shared_ptr<SimilarityProfile>>(m, "SimilarityProfile")
      .def_property_readonly("y", [](const SimilarityProfile& p) { return p.grid.points(); })
      .def_readonly("rho", &SimilarityProfile::rho)
      .def_readonly("n", &SimilarityProfile::n)
      .def_readonly("rho_y", &SimilarityProfile::rho_y)
      .def_readonly("r_star", &SimilarityProfile::r_star)
      .def_readonly("ode_residual", &SimilarityProfile::ode_residual)
      .def_readonly("theta", &SimilarityProfile::theta)
      .def_readonly("mu", &SimilarityProfile::mu)
      .def_readonly("K", &SimilarityProfile::K)
      .def_readonly("newton_iterations", &SimilarityProfile::newton_iterations);

  m.def(
      "solve_profile",
      [](const LimitSpec& lim, const PressureLaw& law, double L, double dy) {
        return std::make_shared<SimilarityProfile>(solve_profile(lim, law, L, dy));
      },
      py::arg("limits"), py::arg("law"), py::arg("L"), py::arg("dy"));
  m.def("check_tail", &check_tail, py::arg("profile"), py::arg("limits"), py::arg("tol") = 1e-10);

  // dynamics and scaling
  py::class_<PhysicalState>(m, "PhysicalState")
      .def(py::init([](double x0, double dx, std::vector<double> rho, std::vector<double> mom, double t) {
             PhysicalState s;
             s.x = UniformGrid{x0, dx, rho.size()};
             s.rho = std::move(rho);
             s.m = std::move(mom);
             s.t = t;
             return s;
           }),
           py::arg("x0"), py::arg("dx"), py::arg("rho"), py::arg("m"), py::arg("t") = 0.0)
      .def_property_readonly("x", [](const PhysicalState& s) { return s.x.points(); })
      .def_readonly("rho", &PhysicalState::rho)
      .def_readonly("m", &PhysicalState::m)
      .def_readonly("t", &PhysicalState::t)
      .def("mass", &PhysicalState::mass)
      .def("momentum", &PhysicalState::momentum);

  m.def("numerical_flux", [](double rl, double ml, double rr, double mr, const PressureLaw& law) {
    const Conserved f = numerical_flux({rl, ml}, {rr, mr}, law);
    return py::make_tuple(f.rho, f.m);
  });
  m.def("physical_flux", [](double rho, double mom, const PressureLaw& law) {
    const Conserved f = physical_flux({rho, mom}, law);
    return py::make_tuple(f.rho, f.m);
  });

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("snapshots", &RunResult::snapshots)
      .def_readonly("steps", &RunResult::steps)
      .def_readonly("boundary_disturbed", &RunResult::boundary_disturbed)
      .def_readonly("max_boundary_deviation", &RunResult::max_boundary_deviation);

  m.def(
      "run",
      [](const PhysicalState& init, const PressureLaw& law, const LimitSpec& lim, double t_end,
         std::vector<double> times, int order, double cfl) {
        SolverConfig sc;
        sc.order = order;
        sc.cfl = cfl;
        sc.snapshot_times = std::move(times);
        return run(init, sc, law, lim, t_end);
      },
      py::arg("initial"), py::arg("law"), py::arg("limits"), py::arg("t_end"),
      py::arg("snapshot_times") = std::vector<double>{}, py::arg("order") = 2, py::arg("cfl") = 0.45);

  py::class_<ScaledField>(m, "ScaledField")
      .def_readonly("tau", &ScaledField::tau)
      .def_property_readonly("y", [](const ScaledField& f) { return f.y.points(); })
      .def_readonly("rho", &ScaledField::rho)
      .def_readonly("n", &ScaledField::n)
      .def("mass", &ScaledField::mass);

  m.def("tau_of_time", &tau_of_time);
  m.def("time_of_tau", &time_of_tau);
  m.def(
      "to_scaled",
      [](const PhysicalState& s, double L_y, double dy) { return to_scaled(s, cell_grid(-L_y, L_y, dy)); },
      py::arg("state"), py::arg("L_y"), py::arg("dy"));

  // entropy
  m.def(
      "relative_entropy_density",
      [](double tau, double rho, double n, double rb, double nb, const PressureLaw& law) {
        const EntropyDensity e = relative_entropy_density(tau, rho, n, rb, nb, law);
        return py::make_tuple(e.eta, e.q);
      },
      py::arg("tau"), py::arg("rho"), py::arg("n"), py::arg("rho_bar"), py::arg("n_bar"), py::arg("law"));

  py::class_<ReferencePair>(m, "ReferencePair")
      .def_static("constant", &ReferencePair::constant)
      .def_static("smoothed_step", &ReferencePair::smoothed_step, py::arg("limits"), py::arg("radius") = 1.0)
      .def_static(
          "profile",
          [](std::shared_ptr<SimilarityProfile> p, const LimitSpec& lim) { return ReferencePair::profile(p, lim); },
          py::arg("profile"), py::arg("limits"));

  m.def(
      "total_relative_entropy",
      [](const ScaledField& f, const ReferencePair& ref, double alpha, const PressureLaw& law) {
        const TotalEntropy t = total_relative_entropy(f, ref, alpha, law);
        return py::make_tuple(t.E, t.D_alpha);
      },
      py::arg("field"), py::arg("reference"), py::arg("alpha"), py::arg("law"));
  m.def(
      "error_terms",
      [](const ScaledField& f, const ReferencePair& ref, double alpha, const PressureLaw& law) {
        const ErrorTerms e = error_terms(f, ref, alpha, law);
        return py::make_tuple(e.Xi1, e.Xi2, e.Xi3);
      },
      py::arg("field"), py::arg("reference"), py::arg("alpha"), py::arg("law"));
  m.def(
      "exchange_identity_residual",
      [](double tau, std::pair<double, double> u, std::pair<double, double> u1, std::pair<double, double> u2,
         const PressureLaw& law) {
        return exchange_identity_residual(tau, {u.first, u.second}, {u1.first, u1.second}, {u2.first, u2.second},
                                          law)
            .relative();
      },
      py::arg("tau"), py::arg("u"), py::arg("u1"), py::arg("u2"), py::arg("law"));
  m.def("gronwall_bound", &gronwall_bound, py::arg("E0"), py::arg("grid"), py::arg("a"), py::arg("b"),
        py::arg("tau"));

  // lab
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("load", [](const std::filesystem::path& p) { return load_config(p); })
      .def_static("parse",
                  [](const std::string& text) {
                    std::istringstream is(text);
                    return parse_config(is);
                  })
      .def("set", &set_config_value)
      .def("validate", &ExperimentConfig::validate)
      .def("__str__", [](const ExperimentConfig& c) {
        std::ostringstream os;
        write_config(os, c);
        return os.str();
      });

  py::class_<EntropyReport>(m, "EntropyReport")
      .def_readonly("tau", &EntropyReport::tau)
      .def_readonly("E", &EntropyReport::E)
      .def_readonly("D_alpha", &EntropyReport::D_alpha)
      .def_readonly("Xi1", &EntropyReport::Xi1)
      .def_readonly("Xi2", &EntropyReport::Xi2)
      .def_readonly("Xi3", &EntropyReport::Xi3)
      .def_readonly("envelope", &EntropyReport::envelope)
      .def_readonly("ineq_residual", &EntropyReport::ineq_residual)
      .def_readonly("reference", &EntropyReport::reference)
      .def_readonly("theta", &EntropyReport::theta)
      .def_readonly("mu", &EntropyReport::mu)
      .def_readonly("K", &EntropyReport::K)
      .def_readonly("E0", &EntropyReport::E0)
      .def_readonly("same_limits", &EntropyReport::same_limits)
      .def_readonly("fit_rate", &EntropyReport::fit_rate)
      .def_readonly("mass_drift", &EntropyReport::mass_drift)
      .def_readonly("min_density", &EntropyReport::min_density);

  m.def("run_experiment", &run_experiment, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("theoretical_bound", &theoretical_bound, py::arg("tau"), py::arg("E0"), py::arg("theta"), py::arg("mu"),
        py::arg("K"), py::arg("same_limits"));
  m.def(
      "fit_decay_rate",
      [](const EntropyReport& r, double lo, double hi) {
        const DecayRate d = fit_decay_rate(r, lo, hi);
        return py::make_tuple(d.rate, d.rms);
      },
      py::arg("report"), py::arg("tau_min"), py::arg("tau_max"));
  m.def(
      "envelope_check",
      [](const EntropyReport& r, double slack) {
        const EnvelopeCheck e = envelope_check(r, slack);
        return py::make_tuple(e.pass, e.worst_ratio);
      },
      py::arg("report"), py::arg("slack"));

  m.def(
      "verify",
      [](int id, std::size_t samples) {
        AcceptanceOptions opt;
        opt.samples = samples;
        AcceptanceSuite suite(opt);
        const CriterionResult r = suite.run(id);
        return py::make_tuple(r.passed, r.detail);
      },
      py::arg("criterion"), py::arg("samples") = 100000, py::call_guard<py::gil_scoped_release>());
}
