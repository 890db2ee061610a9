// Python bindings for the main flow operations: preset sampling, time
// stepping, energies, error metrics, and the continuous identity checks.

#include "willmore/cli_runner.hpp"
#include "willmore/identity_oracle.hpp"
#include "willmore/metrics.hpp"
#include "willmore/time_stepper.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>

namespace py = pybind11;
using namespace willmore;

namespace {

std::vector<std::pair<double, double>> nodes_as_pairs(const PolygonalCurve& curve) {
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<size_t>(curve.size()));
    for (const Vec2& p : curve.nodes()) out.emplace_back(p.x(), p.y());
    return out;
}

PolygonalCurve curve_from_pairs(const std::vector<std::pair<double, double>>& pts) {
    std::vector<Vec2> nodes;
    nodes.reserve(pts.size());
    for (const auto& [x, y] : pts) nodes.emplace_back(x, y);
    return PolygonalCurve(std::move(nodes));
}

}  // namespace

PYBIND11_MODULE(_willmore, m) {
    m.doc() = "Energy-stable parametric finite element solver for Willmore flow "
              "of closed planar curves";

    py::class_<PolygonalCurve>(m, "PolygonalCurve")
        .def(py::init(&curve_from_pairs), py::arg("nodes"))
        .def("__len__", &PolygonalCurve::size)
        .def_property_readonly("nodes", &nodes_as_pairs)
        .def("perimeter", &PolygonalCurve::perimeter)
        .def("area", [](const PolygonalCurve& c) { return polygon_area(c); })
        .def("roundness", [](const PolygonalCurve& c) { return roundness(c); });

    py::class_<InitialState>(m, "InitialState")
        .def_readonly("curve", &InitialState::curve)
        .def_readonly("V0", &InitialState::V0)
        .def_readonly("kappa0", &InitialState::kappa0);

    py::class_<FlowState>(m, "FlowState")
        .def_readonly("curve", &FlowState::curve)
        .def_readonly("V", &FlowState::V)
        .def_readonly("kappa", &FlowState::kappa);

    py::class_<StepReport>(m, "StepReport")
        .def_readonly("state", &StepReport::state)
        .def_readonly("newton_iterations", &StepReport::newton_iterations)
        .def_readonly("energy", &StepReport::energy)
        .def_readonly("nonlinear_residual", &StepReport::nonlinear_residual);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("initial_energy", &Trajectory::initial_energy)
        .def_readonly("times", &Trajectory::times)
        .def_readonly("steps", &Trajectory::steps)
        .def_readonly("error", &Trajectory::error)
        .def_property_readonly("final_state", &Trajectory::final_state)
        .def_property_readonly("energies", [](const Trajectory& traj) {
            std::vector<double> w;
            w.reserve(traj.steps.size() + 1);
            w.push_back(traj.initial_energy);
            for (const auto& s : traj.steps) w.push_back(s.energy);
            return w;
        });

    m.def(
        "sample_preset",
        [](const std::string& name, int n) {
            return sample_initial_state(preset_curve(name), n);
        },
        py::arg("preset"), py::arg("n"),
        "Sample an analytic preset curve (circle, circle_nonuniform, ellipse, "
        "threefold) into consistent initial data at n nodes");

    m.def(
        "run_flow",
        [](const InitialState& initial, double tau, double T_final, double tol) {
            return run_flow(initial, tau, T_final, tol);
        },
        py::arg("initial"), py::arg("tau"), py::arg("T_final"),
        py::arg("tol") = kDefaultNewtonTol,
        "Integrate the flow with backward-Euler steps of size tau up to T_final",
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "willmore_energy",
        [](const PolygonalCurve& curve, const NodalScalarField& kappa) {
            return discrete_willmore_energy(curve, kappa);
        },
        py::arg("curve"), py::arg("kappa"));

    m.def("manifold_distance", &manifold_distance, py::arg("curve1"), py::arg("curve2"),
          "Area of the symmetric difference of the enclosed regions");

    m.def("exact_circle_radius", &ExactCircleSolution::radius, py::arg("t"));
    m.def("exact_circle_curvature", &ExactCircleSolution::curvature, py::arg("t"));
    m.def("exact_circle_velocity", &ExactCircleSolution::velocity, py::arg("t"));

    m.def(
        "check_identities",
        [](double t, int grid_m) {
            const auto flow = exact_willmore_circle_flow();
            py::dict out;
            out["normal_velocity"] = check_normal_velocity_identity(flow, t, grid_m);
            out["curvature_evolution"] = check_curvature_evolution_identity(flow, t, grid_m);
            out["huisken"] = check_huisken_equivalence(flow, t, grid_m);
            return out;
        },
        py::arg("t") = 0.25, py::arg("grid_m") = 256,
        "Residuals of the continuous geometric identities on the exact circle flow");

    py::register_exception<DegenerateSegment>(m, "DegenerateSegmentError");
    py::register_exception<OrientationError>(m, "OrientationErrorPy");
    py::register_exception<UnknownPreset>(m, "UnknownPresetError");
    py::register_exception<NewtonDivergence>(m, "NewtonDivergenceError");
    py::register_exception<EnergyViolation>(m, "EnergyViolationError");
}
