// Python bindings for the chemopp core library.
#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "chemopp/analysis.hpp"
#include "chemopp/integrator.hpp"
#include "chemopp/model.hpp"
#include "chemopp/sweep.hpp"
#include "chemopp/verify.hpp"

namespace py = pybind11;
using namespace chemopp;

namespace {

std::vector<double> rhs_of(SystemKind kind, const py::object& params,
                           const std::vector<double>& state) {
    std::vector<double> out(state.size());
    if (py::isinstance<ChemostatParams>(params))
        vector_field(kind, params.cast<const ChemostatParams&>(), state, out);
    else
        vector_field(kind, params.cast<const ReducedParams&>(), state, out);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Chemostat-derived predator-prey model family: simulation, stability "
              "analysis, Lyapunov certificates, limit cycles and bifurcation sweeps";

    py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
    py::register_exception<NoReturnError>(m, "NoReturnError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<MultiplicityAlarm>(m, "MultiplicityAlarm", PyExc_RuntimeError);
    py::register_exception<IntegrationFailure>(m, "IntegrationFailure", PyExc_RuntimeError);

    py::enum_<SystemKind>(m, "SystemKind")
        .value("Chemostat3D", SystemKind::Chemostat3D)
        .value("SurfaceExact", SystemKind::SurfaceExact)
        .value("LogisticCoupled", SystemKind::LogisticCoupled)
        .value("LogisticClassical", SystemKind::LogisticClassical)
        .value("ReducedCoupled", SystemKind::ReducedCoupled);

    py::class_<ChemostatParams>(m, "ChemostatParams")
        .def(py::init<double, double, double, double, double, double, double, double>(),
             py::arg("C"), py::arg("D"), py::arg("a"), py::arg("b"), py::arg("m"), py::arg("A"),
             py::arg("B"), py::arg("M"))
        .def_readonly("C", &ChemostatParams::C)
        .def_readonly("D", &ChemostatParams::D)
        .def_readonly("a", &ChemostatParams::a)
        .def_readonly("b", &ChemostatParams::b)
        .def_readonly("m", &ChemostatParams::m)
        .def_readonly("A", &ChemostatParams::A)
        .def_readonly("B", &ChemostatParams::B)
        .def_readonly("M", &ChemostatParams::M)
        .def("__repr__", [](const ChemostatParams& p) {
            std::ostringstream ss;
            ss << "ChemostatParams(C=" << p.C << ", D=" << p.D << ", a=" << p.a << ", b=" << p.b
               << ", m=" << p.m << ", A=" << p.A << ", B=" << p.B << ", M=" << p.M << ")";
            return ss.str();
        });

    py::class_<ReducedParams>(m, "ReducedParams")
        .def(py::init<double, double, double, double>(), py::arg("eps"), py::arg("beta"),
             py::arg("mu"), py::arg("lam"))
        .def_readonly("eps", &ReducedParams::epsilon)
        .def_readonly("beta", &ReducedParams::beta)
        .def_readonly("mu", &ReducedParams::mu)
        .def_readonly("lam", &ReducedParams::lambda)
        .def("__repr__", [](const ReducedParams& p) {
            std::ostringstream ss;
            ss << "ReducedParams(eps=" << p.epsilon << ", beta=" << p.beta << ", mu=" << p.mu
               << ", lam=" << p.lambda << ")";
            return ss.str();
        });

    m.def("vector_field", &rhs_of, py::arg("kind"), py::arg("params"), py::arg("state"),
          "Right-hand side of the selected system at the given state");

    m.def(
        "H_function",
        [](const ChemostatParams& p, double s, double x, double y) {
            return H_function(p, {s, x, y});
        },
        py::arg("params"), py::arg("s"), py::arg("x"), py::arg("y"),
        "H(s,x,y) = m s + x + y/M - m C; satisfies dH/dt = -D H");

    py::class_<ReductionScales>(m, "ReductionScales")
        .def_readonly("xi_per_x", &ReductionScales::xi_per_x)
        .def_readonly("eta_per_y", &ReductionScales::eta_per_y)
        .def_readonly("tau_per_t", &ReductionScales::tau_per_t);
    py::class_<Reduction>(m, "Reduction")
        .def_readonly("params", &Reduction::params)
        .def_readonly("scales", &Reduction::scales);
    m.def("reparametrize", &reparametrize, py::arg("params"),
          "Dimensionless parameters (eps, beta, mu, lam) plus coordinate/time scales");

    py::class_<IsoclineForm>(m, "IsoclineForm")
        .def("f", &IsoclineForm::f)
        .def("f_prime", &IsoclineForm::f_prime)
        .def("F", &IsoclineForm::F)
        .def("F_prime", &IsoclineForm::F_prime)
        .def("F_prime_factored", &IsoclineForm::F_prime_factored)
        .def("psi", &IsoclineForm::psi)
        .def("psi_prime", &IsoclineForm::psi_prime);
    m.def("isocline_form", &isocline_form, py::arg("params"));

    py::class_<XiRoots>(m, "XiRoots")
        .def_readonly("plus", &XiRoots::plus)
        .def_readonly("minus", &XiRoots::minus);
    m.def("xi_roots", &xi_roots, py::arg("params"),
          "Roots of the F' numerator; plus > 0 iff beta > 1 + eps");

    m.def("growth_h", &growth_h, py::arg("params"), py::arg("x"));
    m.def("growth_h_argmax", &growth_h_argmax, py::arg("params"));

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init<>())
        .def_readwrite("rel_tol", &IntegratorConfig::rel_tol)
        .def_readwrite("abs_tol", &IntegratorConfig::abs_tol)
        .def_readwrite("max_step", &IntegratorConfig::max_step)
        .def_readwrite("max_steps", &IntegratorConfig::max_steps)
        .def_readwrite("event_tol", &IntegratorConfig::event_tol)
        .def_static("verification", &IntegratorConfig::verification)
        .def_static("sweeping", &IntegratorConfig::sweeping);

    py::class_<EventRecord>(m, "EventRecord")
        .def_readonly("t", &EventRecord::t)
        .def_readonly("state", &EventRecord::state)
        .def_readonly("event_id", &EventRecord::event_id)
        .def_readonly("direction", &EventRecord::direction);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("events", &Trajectory::events)
        .def_readonly("truncated", &Trajectory::truncated)
        .def_readonly("event_terminated", &Trajectory::event_terminated)
        .def("interpolate", py::overload_cast<double>(&Trajectory::interpolate, py::const_),
             py::arg("t"))
        .def("t_end", &Trajectory::t_end);

    m.def(
        "integrate",
        [](const py::object& params, SystemKind kind, const std::vector<double>& y0, double t0,
           double t1, const IntegratorConfig& cfg) {
            if (py::isinstance<ChemostatParams>(params))
                return integrate(kind, params.cast<const ChemostatParams&>(), y0, t0, t1, cfg);
            return integrate(make_rhs(params.cast<const ReducedParams&>()), y0, t0, t1, cfg);
        },
        py::arg("params"), py::arg("kind"), py::arg("y0"), py::arg("t0"), py::arg("t1"),
        py::arg("config") = IntegratorConfig{},
        "Adaptive Runge-Kutta integration with dense output");

    m.def(
        "integrate_reduced",
        [](const ReducedParams& p, double xi0, double eta0, double t1,
           const IntegratorConfig& cfg) {
            return integrate(p, {xi0, eta0}, 0.0, t1, cfg);
        },
        py::arg("params"), py::arg("xi0"), py::arg("eta0"), py::arg("t1"),
        py::arg("config") = IntegratorConfig{});

    py::class_<PoincareReturn>(m, "PoincareReturn")
        .def_readonly("eta", &PoincareReturn::eta)
        .def_readonly("period", &PoincareReturn::period)
        .def_readonly("degenerate", &PoincareReturn::degenerate);
    m.def("poincare_return", &poincare_return, py::arg("params"), py::arg("eta0"),
          py::arg("config") = IntegratorConfig{}, py::arg("t_max") = 1e4,
          "Next downward crossing of the section xi = lambda");

    py::class_<Mat2>(m, "Mat2")
        .def_readonly("a11", &Mat2::a11)
        .def_readonly("a12", &Mat2::a12)
        .def_readonly("a21", &Mat2::a21)
        .def_readonly("a22", &Mat2::a22)
        .def("trace", &Mat2::trace)
        .def("det", &Mat2::det);

    py::class_<ReducedState>(m, "ReducedState")
        .def(py::init([](double xi, double eta) { return ReducedState{xi, eta}; }), py::arg("xi"),
             py::arg("eta"))
        .def_readonly("xi", &ReducedState::xi)
        .def_readonly("eta", &ReducedState::eta);

    py::class_<EquilibriumReport>(m, "EquilibriumReport")
        .def_readonly("location", &EquilibriumReport::location)
        .def_readonly("jacobian", &EquilibriumReport::jac)
        .def_property_readonly("eigenvalues",
                               [](const EquilibriumReport& r) {
                                   return std::vector<std::complex<double>>{r.eig[0], r.eig[1]};
                               })
        .def_property_readonly("classification",
                               [](const EquilibriumReport& r) {
                                   return std::string(to_string(r.classification));
                               })
        .def_property_readonly("predicted", [](const EquilibriumReport& r) {
            return std::string(to_string(r.predicted));
        });

    m.def("find_equilibria", &find_equilibria, py::arg("params"));
    m.def(
        "jacobian",
        [](const ReducedParams& p, double xi, double eta) { return jacobian(p, {xi, eta}); },
        py::arg("params"), py::arg("xi"), py::arg("eta"));
    m.def("hopf_threshold", &hopf_threshold, py::arg("params"),
          "Hopf threshold in lambda (xi_+ when beta > 1 + eps, else 0)");
    m.def("trapping_level", &trapping_level, py::arg("params"));
    m.def(
        "boundedness_V",
        [](const ReducedParams& p, double xi, double eta) { return boundedness_V(p, {xi, eta}); },
        py::arg("params"), py::arg("xi"), py::arg("eta"));
    m.def("psi_over_f_integral", &psi_over_f_integral, py::arg("params"), py::arg("xi"));
    m.def("F_bar_theta", &F_bar_theta, py::arg("params"), py::arg("theta"), py::arg("xi"));
    m.def(
        "lyapunov_W",
        [](const ReducedParams& p, double theta, double xi, double eta) {
            return lyapunov_W(p, theta, {xi, eta});
        },
        py::arg("params"), py::arg("theta"), py::arg("xi"), py::arg("eta"));
    m.def(
        "lyapunov_Wdot",
        [](const ReducedParams& p, double theta, double xi, double eta) {
            return lyapunov_Wdot(p, theta, {xi, eta});
        },
        py::arg("params"), py::arg("theta"), py::arg("xi"), py::arg("eta"));
    m.def("certificate_theta", &certificate_theta, py::arg("params"));

    py::class_<LyapunovCertificate>(m, "LyapunovCertificate")
        .def_readonly("theta", &LyapunovCertificate::theta)
        .def_readonly("pass_", &LyapunovCertificate::pass)
        .def_readonly("sign_condition_ok", &LyapunovCertificate::sign_condition_ok)
        .def_readonly("trajectories_ok", &LyapunovCertificate::trajectories_ok)
        .def_readonly("worst_violation", &LyapunovCertificate::worst_violation)
        .def_readonly("worst_xi", &LyapunovCertificate::worst_xi)
        .def_readonly("max_Wdot", &LyapunovCertificate::max_Wdot)
        .def_readonly("detail", &LyapunovCertificate::detail);
    m.def(
        "global_stability_certificate",
        [](const ReducedParams& p, bool run_trajectories, double fan_time) {
            CertificateOptions opts;
            opts.run_trajectories = run_trajectories;
            opts.fan_time = fan_time;
            return global_stability_certificate(p, opts);
        },
        py::arg("params"), py::arg("run_trajectories") = true, py::arg("fan_time") = 2000.0);

    m.def("kuang_quartic", &kuang_quartic, py::arg("params"), py::arg("xi"));
    m.def("kuang_quartic_taylor", &kuang_quartic_taylor, py::arg("params"), py::arg("xi"));
    py::class_<UniquenessReport>(m, "UniquenessReport")
        .def_readonly("pass_", &UniquenessReport::pass)
        .def_readonly("max_value", &UniquenessReport::max_value)
        .def_readonly("max_xi", &UniquenessReport::max_xi);
    m.def("uniqueness_check", &uniqueness_check, py::arg("params"),
          py::arg("grid_points") = 10'000);
    m.def("solve_cubic_real", &solve_cubic_real, py::arg("a"), py::arg("b"), py::arg("c"),
          py::arg("d"));

    py::class_<CycleReport>(m, "CycleReport")
        .def_readonly("found", &CycleReport::found)
        .def_readonly("eta_star", &CycleReport::eta_star)
        .def_readonly("period", &CycleReport::period)
        .def_readonly("xi_min", &CycleReport::xi_min)
        .def_readonly("xi_max", &CycleReport::xi_max)
        .def_readonly("eta_min", &CycleReport::eta_min)
        .def_readonly("eta_max", &CycleReport::eta_max)
        .def_readonly("return_slope", &CycleReport::return_slope);
    m.def(
        "find_limit_cycle",
        [](const ReducedParams& p, const IntegratorConfig& cfg) {
            CycleOptions opts;
            opts.config = cfg;
            return find_limit_cycle(p, opts);
        },
        py::arg("params"), py::arg("config") = IntegratorConfig{});
    m.def(
        "return_map_fixed_point",
        [](const ReducedParams& p, double eta0, const IntegratorConfig& cfg) {
            CycleOptions opts;
            opts.config = cfg;
            return return_map_fixed_point(p, eta0, opts);
        },
        py::arg("params"), py::arg("eta0"), py::arg("config") = IntegratorConfig{});

    py::enum_<SweepParameter>(m, "SweepParameter")
        .value("Lambda", SweepParameter::Lambda)
        .value("Epsilon", SweepParameter::Epsilon)
        .value("Beta", SweepParameter::Beta)
        .value("Mu", SweepParameter::Mu);
    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init([](const ReducedParams& base, SweepParameter param, double lo, double hi,
                         int points) {
                 SweepSpec spec{base};
                 spec.parameter = param;
                 spec.lo = lo;
                 spec.hi = hi;
                 spec.points = points;
                 return spec;
             }),
             py::arg("base"), py::arg("parameter"), py::arg("lo"), py::arg("hi"),
             py::arg("points"))
        .def_readwrite("transient_time", &SweepSpec::transient_time)
        .def_readwrite("sample_time", &SweepSpec::sample_time)
        .def_readwrite("config", &SweepSpec::config);
    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("value", &SweepRecord::value)
        .def_property_readonly(
            "kind", [](const SweepRecord& r) { return std::string(to_string(r.kind)); })
        .def_readonly("xi_eq", &SweepRecord::xi_eq)
        .def_readonly("eta_eq", &SweepRecord::eta_eq)
        .def_readonly("cycle_xi_min", &SweepRecord::cycle_xi_min)
        .def_readonly("cycle_xi_max", &SweepRecord::cycle_xi_max)
        .def_readonly("period", &SweepRecord::period)
        .def_readonly("certificate_pass", &SweepRecord::certificate_pass)
        .def_readonly("discrepant", &SweepRecord::discrepant)
        .def_readonly("error", &SweepRecord::error);
    m.def("run_sweep", &run_sweep, py::arg("spec"), py::arg("workers") = 1);

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("pass_", &CheckResult::pass)
        .def_readonly("worst", &CheckResult::worst)
        .def_readonly("tolerance", &CheckResult::tolerance)
        .def_readonly("detail", &CheckResult::detail);
    m.def(
        "run_all_checks",
        [](std::uint64_t seed, double draw_scale) {
            VerifyOptions opts;
            opts.seed = seed;
            opts.draw_scale = draw_scale;
            return run_all_checks(opts);
        },
        py::arg("seed") = kDefaultSeed, py::arg("draw_scale") = 1.0,
        "Run the verification suite; draw_scale scales the randomized draw counts");

#ifdef CHEMOPP_VERSION
    m.attr("__version__") = CHEMOPP_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
