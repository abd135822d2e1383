// Python module dhilb._core: the scenario runner plus direct tangent, oracle and truncation calls.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dhilb/ci_oracle.hpp"
#include "dhilb/derived_tangent.hpp"
#include "dhilb/error.hpp"
#include "dhilb/graded_algebra.hpp"
#include "dhilb/scenario.hpp"

namespace py = pybind11;

namespace {

dhilb::TangentOptions tangent_options(const std::string& field, int n_max) {
    dhilb::TangentOptions options;
    options.field = dhilb::Field::parse(field);
    options.n_max = n_max;
    return options;
}

py::dict report_dict(const dhilb::TangentReport& r) {
    py::dict d;
    d["p"] = r.p;
    d["q"] = r.q;
    d["m"] = r.m;
    d["dims"] = r.dims;
    d["classical_dim"] = r.classical_dim;
    d["euler_checked"] = r.euler_checked;
    d["euler_ok"] = r.euler_ok;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact derived tangent, Harrison and operad computations";

    // Exception classes mirror the CLI exit codes: 1 validation, 2 budget, 4 internal.
    static py::exception<dhilb::Error> base(m, "DhilbError");
    static py::exception<dhilb::ValidationError> validation(m, "ValidationError", base.ptr());
    static py::exception<dhilb::BudgetError> budget(m, "BudgetError", base.ptr());
    static py::exception<dhilb::InternalError> internal(m, "InternalError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const dhilb::ValidationError& e) {
            validation(e.what());
        } catch (const dhilb::BudgetError& e) {
            budget(e.what());
        } catch (const dhilb::InternalError& e) {
            internal(e.what());
        } catch (const dhilb::Error& e) {
            base(e.what());
        }
    });

    m.def("version", [] { return std::string(dhilb::tool_version()); });
    m.attr("REPORT_SCHEMA") = dhilb::kReportSchema;

    m.def(
        "run_scenario",
        [](const std::string& yaml, const std::string& source, std::optional<std::string> field, unsigned threads,
           std::optional<std::string> task) {
            dhilb::RunOptions options;
            options.field = std::move(field);
            options.threads = threads;
            options.task = std::move(task);
            dhilb::RunOutcome out;
            {
                py::gil_scoped_release release;
                out = dhilb::run_scenario(yaml, source, options);
            }
            return py::make_tuple(out.report.dump(), out.text, out.exit_code);
        },
        py::arg("yaml"), py::arg("source") = "<string>", py::arg("field") = py::none(), py::arg("threads") = 1u,
        py::arg("task") = py::none(), "Returns (report JSON text, text rendering, exit code). Never raises.");

    m.def(
        "truncation_dims",
        [](std::size_t n, const std::vector<std::string>& X, int p, int q) {
            const auto A = dhilb::coordinate_ring_truncation(dhilb::HomIdealPresentation::parse(n, X), p, q);
            std::map<int, std::size_t> dims;
            for (int d = p; d <= q; ++d) dims[d] = A.dim(d);
            return dims;
        },
        py::arg("n"), py::arg("X"), py::arg("p"), py::arg("q"));

    m.def(
        "tangent",
        [](std::size_t n, const std::vector<std::string>& X, const std::vector<std::string>& Z, int p, int q, int m_,
           const std::string& field, int n_max) {
            const auto PX = dhilb::HomIdealPresentation::parse(n, X);
            const auto PZ = dhilb::HomIdealPresentation::parse(n, Z);
            const auto options = tangent_options(field, n_max);
            dhilb::TangentReport r;
            {
                py::gil_scoped_release release;
                r = dhilb::derived_tangent(PX, PZ, p, q, m_, options);
            }
            return report_dict(r);
        },
        py::arg("n"), py::arg("X"), py::arg("Z"), py::arg("p"), py::arg("q"), py::arg("m") = 1,
        py::arg("field") = "q", py::arg("n_max") = 4);

    m.def(
        "ci_cohomology",
        [](std::size_t n, const std::vector<std::string>& forms, std::optional<int> e, const std::string& field) {
            const auto Z = dhilb::CIData::parse(n, forms);
            dhilb::CIOptions options;
            options.field = dhilb::Field::parse(field);
            return e ? dhilb::ci_twist_cohomology_all(Z, *e, options) : dhilb::ci_normal_cohomology_all(Z, options);
        },
        py::arg("n"), py::arg("forms"), py::arg("e") = py::none(), py::arg("field") = "q",
        "dims H^0..H^n of O_Z(e), or of the normal bundle when e is None.");
}
