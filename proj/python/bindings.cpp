#include "sympsturm/cli.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sympsturm;

namespace {

RunFlags make_flags(double tol, int grid, std::uint64_t seed, int jobs, const std::string& theorem, int trials, int dim,
                    double h, double e) {
    RunFlags f;
    f.tol = tol;
    f.grid = grid;
    f.seed = seed;
    f.jobs = jobs;
    f.theorem = theorem;
    f.trials = trials;
    f.dim = dim;
    f.h = h;
    f.e = e;
    return f;
}

SymplecticPathPtr constant_flow(const Mat& B, double T) {
    auto H = constant_hamiltonian(B, T);
    return integrate_fundamental(H, default_steps(H));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Symplectic intersection indices and Sturm-type theorem checks";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<DegeneratePathError>(m, "DegeneratePathError", PyExc_ArithmeticError);
    py::register_exception<RefinementError>(m, "RefinementError", PyExc_ArithmeticError);
    py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);

    m.attr("SCHEMA_VERSION") = kProblemSchema;
    m.def("commands", &commands);
    m.def("theorem_ids", &theorem_ids);
    m.def("parse_problem", [](const std::string& text, const std::string& command) {
        return parse_problem(text, command).dump();
    });
    m.def(
        "run_command",
        [](const std::string& command, const std::string& text, double tol, int grid, std::uint64_t seed, int jobs,
           const std::string& theorem, int trials, int dim, double h, double e, const std::string& format) {
            auto flags = make_flags(tol, grid, seed, jobs, theorem, trials, dim, h, e);
            CommandResult r;
            {
                py::gil_scoped_release release;
                r = run_command(command, parse_problem(text, command), flags);
            }
            return py::make_tuple(r.exit_code, r.json.dump(), emit(r, format));
        },
        py::arg("command"), py::arg("text"), py::arg("tol") = kDefaultTol, py::arg("grid") = 512,
        py::arg("seed") = 7, py::arg("jobs") = 1, py::arg("theorem") = "", py::arg("trials") = 10,
        py::arg("dim") = 0, py::arg("h") = -0.5, py::arg("e") = 0.0, py::arg("format") = "json");

    m.def(
        "clm_constant_flow",
        [](const Mat& reference, const Mat& frame, const Mat& B, double T, int grid) {
            const int n = static_cast<int>(B.rows()) / 2;
            LagrangianPairPath P{standard_space(n), std::make_shared<ConstantPath>(reference),
                                 std::make_shared<MovedFramePath>(constant_flow(B, T), frame), 0.0, T, grid};
            return clm_index(P).int_value();
        },
        py::arg("reference"), py::arg("frame"), py::arg("B"), py::arg("T"), py::arg("grid") = 512);
    m.def(
        "cz_constant_flow",
        [](const Mat& B, double T, int grid) {
            return cz_index(standard_space(static_cast<int>(B.rows()) / 2), constant_flow(B, T), grid).int_value();
        },
        py::arg("B"), py::arg("T"), py::arg("grid") = 512);
    m.def("triple_index", [](const Mat& a, const Mat& b, const Mat& c) {
        return triple_index(standard_space(static_cast<int>(a.rows()) / 2), a, b, c).value;
    });
    m.def("random_lagrangian", [](int n, std::uint64_t seed) { return random_lagrangian(standard_space(n), seed); });
    m.def("kepler_curvature", &kepler_curvature, py::arg("h"), py::arg("r"));
    m.def(
        "verify",
        [](const std::string& theorem, int trials, std::uint64_t seed, int dim, int jobs) {
            std::vector<TheoremReport> reports;
            {
                py::gil_scoped_release release;
                reports = verify(theorem, trials, seed, dim, jobs);
            }
            Json out = Json::array();
            for (const auto& r : reports) out.push_back(r.to_json());
            return out.dump();
        },
        py::arg("theorem"), py::arg("trials") = 10, py::arg("seed") = 7, py::arg("dim") = 0, py::arg("jobs") = 1);
}
