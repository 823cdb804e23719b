#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "abelwave/error.hpp"
#include "abelwave/observability.hpp"

namespace py = pybind11;
using namespace abelwave;

namespace {

py::dict report_dict(const ObservationReport& r) {
    py::dict d;
    d["kind"] = to_string(r.kind);
    d["a"] = r.a;
    d["tau"] = r.tau;
    d["tau_optimal"] = r.tau_optimal;
    d["integral"] = r.integral;
    d["norm_squared"] = r.norm_squared;
    d["lower_bound"] = r.lower_bound;
    d["upper_bound"] = r.upper_bound;
    d["lower_holds"] = r.lower_holds;
    d["upper_holds"] = r.upper_holds;
    d["constants"] = r.constants;
    d["values"] = r.values;
    py::list ids;
    for (const auto& c : r.identities) {
        py::dict e;
        e["name"] = c.name;
        e["computed"] = c.computed;
        e["expected"] = c.expected;
        e["rel_err"] = c.rel_err;
        e["pass"] = c.pass;
        ids.append(e);
    }
    d["identities"] = ids;
    d["notes"] = r.notes;
    d["pass"] = r.pass;
    return d;
}

}  // namespace

PYBIND11_MODULE(_abelwave, m) {
    m.doc() = "Series solutions of the 1D wave equation on moving domains via Abel's equation.";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_ValueError);
    py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<Family>(m, "Family")
        .value("LINEAR", Family::Linear)
        .value("PARABOLIC", Family::Parabolic)
        .value("HYPERBOLIC", Family::Hyperbolic)
        .value("SHRINKING", Family::Shrinking)
        .value("CUSTOM", Family::Custom);

    py::enum_<AbelMethod>(m, "AbelMethod")
        .value("CLOSED_FORM", AbelMethod::ClosedForm)
        .value("PRODUCT_EXPANSIVE", AbelMethod::ProductExpansive)
        .value("PRODUCT_PARABOLIC", AbelMethod::ProductParabolic)
        .value("LEVY", AbelMethod::Levy);

    py::class_<BoundaryCurve>(m, "BoundaryCurve")
        .def_static("make", [](const std::string& family, double eps) {
            return BoundaryCurve::make(family_from_string(family), eps);
        }, py::arg("family"), py::arg("epsilon"))
        .def_static("from_samples", &BoundaryCurve::from_samples, py::arg("t"), py::arg("s"))
        .def("s", &BoundaryCurve::s)
        .def("s_prime", &BoundaryCurve::s_prime)
        .def_property_readonly("family", [](const BoundaryCurve& c) { return to_string(c.family()); })
        .def_property_readonly("epsilon", &BoundaryCurve::epsilon)
        .def_property_readonly("sup_s_prime", &BoundaryCurve::sup_s_prime)
        .def_property_readonly("monotonicity", &BoundaryCurve::monotonicity);

    py::class_<CharMaps>(m, "CharMaps")
        .def(py::init<BoundaryCurve>(), py::arg("curve"))
        .def_property_readonly("curve", &CharMaps::curve)
        .def_property_readonly("beta_limit", &CharMaps::beta_limit)
        .def("alpha", &CharMaps::alpha)
        .def("beta", &CharMaps::beta)
        .def("beta_inv", &CharMaps::beta_inv)
        .def("alpha_inv", &CharMaps::alpha_inv)
        .def("gamma", &CharMaps::gamma)
        .def("gamma_inv", &CharMaps::gamma_inv)
        .def("gamma_prime", &CharMaps::gamma_prime);

    m.def("optimal_times", [](const CharMaps& maps) {
        const auto t = optimal_times(maps);
        py::dict d;
        d["left"] = t.left;
        d["right"] = t.right;
        d["right_literal"] = t.right_literal;
        d["t0"] = t.t0;
        return d;
    });
    m.def("interior_time", &interior_time, py::arg("maps"), py::arg("a"));

    py::class_<AbelSolution>(m, "AbelSolution")
        .def("phi", [](const AbelSolution& s, double x) { return s.phi(x); })
        .def("phi_prime", [](const AbelSolution& s, double x) { return s.phi_prime(x); })
        .def_property_readonly("method", [](const AbelSolution& s) { return to_string(s.method); })
        .def_readonly("normalization", &AbelSolution::normalization)
        .def_readonly("residual_sup", &AbelSolution::residual_sup)
        .def_readonly("tolerance", &AbelSolution::tolerance)
        .def_readonly("t_max", &AbelSolution::t_max)
        .def_readonly("diagnostics", &AbelSolution::diagnostics)
        .def_property_readonly("certified", &AbelSolution::certified);

    m.def("solve_abel", [](const CharMaps& maps, std::optional<std::string> method, double tol) {
        AbelOptions opt;
        opt.tol = tol;
        std::optional<AbelMethod> mm;
        if (method) mm = abel_method_from_string(*method);
        return solve_abel(maps, mm, opt);
    }, py::arg("maps"), py::arg("method") = py::none(), py::arg("tol") = 1e-6);
    m.def("orbit", [](const CharMaps& maps, double x0, int n) { return orbit(maps, x0, n).values; },
          py::arg("maps"), py::arg("x0"), py::arg("n"));

    py::class_<InitialData>(m, "InitialData")
        .def_static("bump", &InitialData::bump, py::arg("center"), py::arg("width"), py::arg("amplitude"),
                    py::arg("f_center"), py::arg("f_width"), py::arg("velocity"))
        .def_static("polynomial", &InitialData::polynomial, py::arg("amplitude"), py::arg("velocity"))
        .def_static("sine", &InitialData::sine, py::arg("k"))
        .def_static("zero", &InitialData::zero)
        .def_static("single_mode", &InitialData::single_mode, py::arg("abel"), py::arg("n"))
        .def_static("random_bump", [](std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            return InitialData::random_bump(rng);
        }, py::arg("seed"))
        .def_readonly("label", &InitialData::label);

    py::class_<WaveField>(m, "WaveField")
        .def("evaluate", [](const WaveField& f, double x, double t) {
            const auto v = f.evaluate(x, t);
            return py::make_tuple(v.u, v.u_x, v.u_t);
        }, py::arg("x"), py::arg("t"))
        .def_property_readonly("initial_norm_squared", &WaveField::initial_norm_squared)
        .def_property_readonly("coefficients", [](const WaveField& f) {
            return Eigen::VectorXcd(f.coefficients().A);
        })
        .def_property_readonly("weighted_tail",
                               [](const WaveField& f) { return f.coefficients().weighted_tail; });

    m.def("make_field", [](const CharMaps& maps, const AbelSolution& abel, const InitialData& data, int N) {
        return make_field(maps, abel, data, N);
    }, py::arg("maps"), py::arg("abel"), py::arg("data"), py::arg("modes") = 64);
    m.def("energy", [](const WaveField& f, double t) { return energy(f, t); }, py::arg("field"), py::arg("t"));
    m.def("energy_rate", &energy_rate, py::arg("field"), py::arg("t"));

    m.def("observe_left", [](const WaveField& f, double tau) { return report_dict(observe_left(f, tau)); },
          py::arg("field"), py::arg("tau") = 0.0);
    m.def("observe_right", [](const WaveField& f, double tau) { return report_dict(observe_right(f, tau)); },
          py::arg("field"), py::arg("tau") = 0.0);
    m.def("observe_interior", [](const WaveField& f, double a) { return report_dict(observe_interior(f, a)); },
          py::arg("field"), py::arg("a"));
    m.def("observe_moving", [](const WaveField& f, double a) { return report_dict(observe_moving(f, a)); },
          py::arg("field"), py::arg("a"));
    m.def("observe_simultaneous", [](const WaveField& f, const InitialData& fixed, double tau) {
        return report_dict(observe_simultaneous(f, FixedString::from_data(fixed), tau));
    }, py::arg("field"), py::arg("fixed_data"), py::arg("tau"));

    m.def("gram_analysis", [](const AbelSolution& abel, double tau, int N, double threshold) {
        const auto g = gram_analysis(abel, tau, N, threshold);
        py::dict d;
        d["sigma_min"] = g.sigma_min;
        d["sigma_max"] = g.sigma_max;
        d["observable"] = g.observable;
        d["gram"] = g.gram;
        return d;
    }, py::arg("abel"), py::arg("tau"), py::arg("N"), py::arg("threshold") = 0.05);
}
