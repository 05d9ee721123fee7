#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gdsarm/dantzig.hpp"
#include "gdsarm/error.hpp"
#include "gdsarm/gds.hpp"
#include "gdsarm/gdsarm.hpp"
#include "gdsarm/io.hpp"
#include "gdsarm/simplex.hpp"
#include "gdsarm/simulate.hpp"

namespace py = pybind11;
using namespace gdsarm;

namespace {

Design make_design(const Eigen::MatrixXd& settings, std::optional<std::vector<std::string>> names)
{
    return Design(settings, names.value_or(std::vector<std::string>{}));
}

GdsArmConfig arm_config(const Design& d, std::uint64_t seed, std::optional<std::size_t> nrep,
                        std::optional<std::size_t> nint, std::optional<std::size_t> ntop, std::optional<double> pkeep,
                        const std::string& heredity)
{
    auto c = default_config(d.runs(), d.factors(), seed);
    if (nrep) c.nrep = *nrep;
    if (nint) c.nint = *nint;
    if (ntop) c.ntop = *ntop;
    if (pkeep) c.pkeep = *pkeep;
    c.heredity = parse_heredity(heredity);
    return c;
}

std::string analyze(const Eigen::MatrixXd& settings, const std::vector<double>& y, const std::string& method,
                    std::optional<std::uint64_t> seed, std::optional<std::vector<std::string>> names,
                    std::optional<std::size_t> nrep, std::optional<std::size_t> nint, std::optional<std::size_t> ntop,
                    std::optional<double> pkeep, const std::string& heredity,
                    const std::vector<std::vector<std::string>>& compare)
{
    const auto d = make_design(settings, names);
    AnalysisReport report;
    report.method = method;
    {
        py::gil_scoped_release release;
        if (method == "gds-m") {
            report.result = gds_main_effects(d, y);
        } else if (method == "gds-m2fi") {
            report.result = gds_all_2fi(d, y);
        } else if (method == "gds-arm") {
            report.seed = seed.value_or(0);
            report.config = arm_config(d, *report.seed, nrep, nint, ntop, pkeep, heredity);
            report.result = gds_arm(d, y, *report.config);
        } else {
            throw ValidationError("unknown method '" + method + "'");
        }
    }
    for (const auto& group : compare) {
        std::vector<Effect> effects;
        for (const auto& label : group) effects.push_back(parse_effect_label(label, d.factor_names()));
        report.comparisons.push_back(compare_model(d, y, effects));
    }
    return to_json(report, d).dump();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("analyze", &analyze, py::arg("design"), py::arg("y"), py::arg("method") = "gds-arm",
          py::arg("seed") = py::none(), py::arg("names") = py::none(), py::arg("nrep") = py::none(),
          py::arg("nint") = py::none(), py::arg("ntop") = py::none(), py::arg("pkeep") = py::none(),
          py::arg("heredity") = "none", py::arg("compare") = std::vector<std::vector<std::string>>{},
          "Screen a two-level design; returns the JSON report text.");

    m.def(
        "default_config",
        [](std::size_t n, std::size_t mf) {
            const auto c = default_config(n, mf, 0);
            py::dict out;
            out["nrep"] = c.nrep;
            out["nint"] = c.nint;
            out["ntop"] = c.ntop;
            out["pkeep"] = c.pkeep;
            return out;
        },
        py::arg("n"), py::arg("m"));

    m.def(
        "lp_solve",
        [](const std::vector<double>& c, const Eigen::MatrixXd& a, const std::vector<double>& b) {
            const auto r = lp_solve(c, a, b);
            py::dict out;
            out["status"] = std::string(to_string(r.status));
            out["x"] = r.x;
            out["objective"] = r.objective;
            return out;
        },
        py::arg("c"), py::arg("a"), py::arg("b"), "min c'x subject to Ax <= b, x >= 0");

    m.def(
        "dantzig_select",
        [](const Eigen::MatrixXd& settings, const std::vector<double>& y, double delta) {
            const Design d(settings);
            const auto mm = build_model_matrix(d, main_effects(d.factors()), y);
            const auto s = dantzig_select(mm, delta);
            if (!s.ok()) throw NumericalError("Dantzig LP: " + std::string(to_string(s.lp_status)));
            return Eigen::VectorXd(s.beta);
        },
        py::arg("design"), py::arg("y"), py::arg("delta"),
        "Dantzig estimate on the normalized main-effect columns.");

    m.def(
        "split_two_means",
        [](const std::vector<double>& v) {
            const auto s = split_two_means(v);
            return py::make_tuple(s.low, s.high);
        },
        py::arg("values"));

    m.def(
        "simulate",
        [](const Eigen::MatrixXd& settings, const std::string& scenario, const std::string& method,
           std::size_t iterations, std::uint64_t seed, const std::string& truth_heredity, double effect_mean) {
            const Design d(settings);
            auto s = standard_scenario(scenario);
            s.truth_heredity = parse_heredity(truth_heredity);
            s.effect_mean = effect_mean;
            const auto mth = parse_method(method);
            SimReportEntry r;
            {
                py::gil_scoped_release release;
                r = run_scenario(d, s, mth, iterations, seed);
            }
            py::dict out;
            out["scenario"] = r.scenario;
            out["method"] = r.method;
            out["power"] = r.power;
            out["error"] = r.error;
            out["iterations"] = r.iterations;
            out["failures"] = r.failures;
            return out;
        },
        py::arg("design"), py::arg("scenario"), py::arg("method") = "gds-arm", py::arg("iterations") = 1000,
        py::arg("seed") = 0, py::arg("truth_heredity") = "weak", py::arg("effect_mean") = 5.0);

    m.def(
        "make_pb12", [](std::size_t mf) { return make_pb12(mf).settings(); }, py::arg("m") = 11);

    m.def(
        "load_design_csv",
        [](const std::string& path, bool zero_one) {
            const auto d = load_design_csv(path, {zero_one});
            return py::make_tuple(d.settings(), d.factor_names());
        },
        py::arg("path"), py::arg("zero_one") = false);

    m.def(
        "load_response_csv", [](const std::string& path) { return load_response_csv(path); }, py::arg("path"));
}
