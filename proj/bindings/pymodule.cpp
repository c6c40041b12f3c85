#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "threshold_lab/harness.hpp"
#include "threshold_lab/quasimode.hpp"
#include "threshold_lab/resonance.hpp"
#include "threshold_lab/spectrum.hpp"
#include "threshold_lab/threshold.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
    case json::value_t::null:
        return py::none();
    case json::value_t::boolean:
        return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
        return py::int_(j.get<long long>());
    case json::value_t::number_unsigned:
        return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float:
        return py::float_(j.get<double>());
    case json::value_t::string:
        return py::str(j.get<std::string>());
    case json::value_t::array: {
        py::list out;
        for (const auto& item : j)
            out.append(json_to_py(item));
        return out;
    }
    case json::value_t::object: {
        py::dict out;
        for (const auto& [key, value] : j.items())
            out[py::str(key)] = json_to_py(value);
        return out;
    }
    default:
        return py::none();
    }
}

json prediction_json(const tlab::ThresholdPrediction& p) {
    json conditions = json::array();
    for (const auto& c : p.conditions)
        conditions.push_back({{"name", c.name},
                              {"value", std::isnan(c.value) ? json() : json(c.value)},
                              {"satisfied", c.satisfied}});
    return {{"case", tlab::case_name(p.which)},
            {"k", p.k},
            {"theta", p.theta},
            {"rate", p.rate},
            {"conditions", conditions},
            {"conditions_ok", p.conditions_ok}};
}

tlab::HalfBoundState resonant_state(const tlab::PiecewisePotential& u, double tol) {
    const auto res = tlab::detect_resonance(u, tol);
    if (!res.resonant)
        throw tlab::Error("U has no zero-energy resonance (|h'(b)| = " +
                          std::to_string(res.mismatch) + ")");
    return *res.state;
}

json quasimode_json(const tlab::Quasimode& q) {
    const auto& je = q.junction_errors;
    return {{"lambda", q.lambda},
            {"alpha", q.alpha_lambda},
            {"eps", q.eps_lambda},
            {"omega", q.omega},
            {"k_lambda", q.k_lambda},
            {"a0", q.a0},
            {"a1", q.a1},
            {"norm", q.norm},
            {"residual", q.residual},
            {"accuracy_ratio", q.accuracy_ratio},
            {"junction_errors",
             {{"psi_left", je.psi_left},
              {"dpsi_left", je.dpsi_left},
              {"psi_right", je.psi_right},
              {"dpsi_right", je.dpsi_right},
              {"wprime_defect", je.wprime_defect}}}};
}

} // namespace

PYBIND11_MODULE(_threshold_lab, m) {
    m.doc() = "negative eigenvalues, zero-energy resonances and coupling "
              "constant thresholds of 1D Schrodinger operators";

    py::register_exception<tlab::ConfigError>(m, "ConfigError", PyExc_ValueError);
    static py::exception<tlab::Error> base_exc(m, "SolverError", PyExc_RuntimeError);

    py::class_<tlab::PiecewisePotential>(m, "Potential")
        .def_static("from_json", [](const std::string& text) {
            return tlab::potential_from_json(text);
        })
        .def("to_json", [](const tlab::PiecewisePotential& p) {
            return tlab::potential_to_json(p);
        })
        .def("__call__", [](const tlab::PiecewisePotential& p, double x) { return p(x); })
        .def_property_readonly("b", &tlab::PiecewisePotential::b)
        .def("moment", [](const tlab::PiecewisePotential& p, int n, const std::string& region) {
            auto r = tlab::MomentRegion::Full;
            if (region == "negative-half")
                r = tlab::MomentRegion::NegativeHalf;
            else if (region == "positive-half")
                r = tlab::MomentRegion::PositiveHalf;
            else if (region != "full")
                throw tlab::ConfigError("region must be full|negative-half|positive-half");
            return tlab::moment(p, n, r);
        }, py::arg("n") = 0, py::arg("region") = "full");

    py::class_<tlab::ScalingFamily>(m, "ScalingFamily")
        .def_static("from_json", [](const std::string& text) {
            return tlab::scaling_from_json(text);
        })
        .def("to_json", [](const tlab::ScalingFamily& f) { return tlab::scaling_to_json(f); })
        .def("alpha_at", &tlab::ScalingFamily::alpha_at)
        .def_property_readonly("limit_class", [](const tlab::ScalingFamily& f) {
            switch (f.limit_class()) {
            case tlab::LimitClass::FinitePositive:
                return "finite-positive";
            case tlab::LimitClass::Infinite:
                return "infinite";
            case tlab::LimitClass::Zero:
                return "zero";
            }
            return "finite-positive";
        });

    m.def("detect_resonance", [](const tlab::PiecewisePotential& u, double tol) {
        const auto res = tlab::detect_resonance(u, tol);
        json j{{"resonant", res.resonant}, {"mismatch", res.mismatch}};
        if (res.resonant) {
            j["theta"] = res.state->theta();
            j["u0"] = res.state->u_at_0();
            j["du0"] = res.state->du_at_0();
        }
        return json_to_py(j);
    }, py::arg("u"), py::arg("tol") = 1e-9);

    m.def("tune_to_resonance", &tlab::tune_to_resonance, py::arg("u"), py::arg("gamma_lo"),
          py::arg("gamma_hi"), py::arg("tol") = 1e-10);

    m.def("point_interaction_eigenvalue", [](double kappa, double beta) -> py::object {
        const auto e = tlab::point_interaction_eigenvalue({kappa, beta});
        return e ? py::object(py::float_(*e)) : py::object(py::none());
    }, py::arg("kappa"), py::arg("beta"));

    m.def("find_negative_eigenvalues",
          [](const tlab::PiecewisePotential& u, const tlab::PiecewisePotential& v,
             const tlab::ScalingFamily& f, double lambda) {
              const tlab::ScaledProblem problem{u, v, f, lambda};
              const auto result = tlab::find_negative_eigenvalues(problem.scaled_q());
              return json_to_py(json{{"eigenvalues", result.eigenvalues},
                                     {"omegas", result.omegas},
                                     {"residuals", result.residuals},
                                     {"bracket_count", result.bracket_count}});
          },
          py::arg("u"), py::arg("v"), py::arg("scaling"), py::arg("lambda_"));

    m.def("threshold_eigenvalue",
          [](const tlab::PiecewisePotential& u, const tlab::PiecewisePotential& v,
             const tlab::ScalingFamily& f, double lambda) -> py::object {
              const auto e = tlab::threshold_eigenvalue(tlab::ScaledProblem{u, v, f, lambda});
              return e ? py::object(py::float_(*e)) : py::object(py::none());
          },
          py::arg("u"), py::arg("v"), py::arg("scaling"), py::arg("lambda_"));

    m.def("predict",
          [](const tlab::PiecewisePotential& u, const tlab::PiecewisePotential& v,
             const tlab::ScalingFamily& f, const std::string& which, double tol) {
              const auto h = resonant_state(u, tol);
              tlab::ThresholdPrediction p;
              if (which == "auto" || which == "t1")
                  p = tlab::predict_order2(u, v, f, h);
              else if (which == "t2")
                  p = tlab::predict_t2(u, v, f, h);
              else if (which == "t3")
                  p = tlab::predict_t3(u, v, f, h);
              else if (which == "t4")
                  p = tlab::predict_t4(u, v, f, h);
              else
                  throw tlab::ConfigError("case must be auto|t1|t2|t3|t4");
              return json_to_py(prediction_json(p));
          },
          py::arg("u"), py::arg("v"), py::arg("scaling"), py::arg("case_") = "auto",
          py::arg("tol") = 1e-9);

    m.def("quasimode",
          [](const std::string& which, const tlab::PiecewisePotential& u,
             const tlab::PiecewisePotential& v, const tlab::ScalingFamily& f, double lambda,
             double tol) {
              const auto h = resonant_state(u, tol);
              tlab::Quasimode q;
              if (which == "t2") {
                  const auto eps = f.epsilon();
                  if (!eps)
                      throw tlab::ConfigError("t2 requires a const+power scaling family");
                  q = tlab::build_quasimode_t2(u, v, f, *eps, lambda, h);
              } else if (which == "t3") {
                  q = tlab::build_quasimode_t3(u, v, f, lambda, h);
              } else if (which == "t4") {
                  q = tlab::build_quasimode_t4(u, v, f, lambda, h);
              } else {
                  throw tlab::ConfigError("case must be t2|t3|t4");
              }
              return json_to_py(quasimode_json(q));
          },
          py::arg("case_"), py::arg("u"), py::arg("v"), py::arg("scaling"), py::arg("lambda_"),
          py::arg("tol") = 1e-9);

    m.def("sweep", [](const std::string& config_path) {
        const auto report = tlab::sweep(tlab::Experiment::load(config_path));
        return json_to_py(json::parse(report.to_json()));
    }, py::arg("config_path"));

    m.def("verify", [](const std::string& config_path) {
        const auto report = tlab::verify(tlab::Experiment::load(config_path));
        return json_to_py(json::parse(report.to_json()));
    }, py::arg("config_path"));
}
