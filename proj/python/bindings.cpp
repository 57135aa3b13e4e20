#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "degen/benchmark.hpp"
#include "degen/linear_system.hpp"
#include "degen/theory.hpp"

namespace py = pybind11;
using namespace degen;

namespace {

Eigen::MatrixXd vertex_array(const Mesh& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.num_vertices()), 2);
  for (std::size_t i = 0; i < m.num_vertices(); ++i) {
    out(static_cast<Eigen::Index>(i), 0) = m.vertices()[i].x;
    out(static_cast<Eigen::Index>(i), 1) = m.vertices()[i].y;
  }
  return out;
}

Eigen::MatrixXi cell_array(const Mesh& m) {
  Eigen::MatrixXi out(static_cast<Eigen::Index>(m.num_cells()), 3);
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) out(static_cast<Eigen::Index>(c), k) = m.cells()[c][k];
  }
  return out;
}

SparseMatrix compressed(SparseMatrix m) {
  m.makeCompressed();
  return m;
}

std::string csv_string(const std::vector<ExperimentResult>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_degen, m) {
  m.doc() = "Mixed finite element solvers for a degenerate parabolic benchmark";

  py::class_<Point>(m, "Point")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y)
      .def("__repr__", [](const Point& p) { return "Point(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")"; });

  py::class_<Mesh>(m, "Mesh")
      .def_static("structured_unit_square", &Mesh::structured_unit_square, py::arg("n"))
      .def_property_readonly("n", &Mesh::subdivisions)
      .def_property_readonly("h", &Mesh::h)
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_edges", &Mesh::num_edges)
      .def_property_readonly("num_cells", &Mesh::num_cells)
      .def_property_readonly("vertices", &vertex_array)
      .def_property_readonly("cells", &cell_array)
      .def("is_boundary_edge", &Mesh::is_boundary_edge)
      .def("cell_area", [](const Mesh& mesh, int c) { return cell_geometry(mesh, c).area; })
      .def("cell_barycenter", [](const Mesh& mesh, int c) { return cell_geometry(mesh, c).barycenter; });

  py::class_<AssembledForms>(m, "AssembledForms")
      .def_readonly("scalar_mass", &AssembledForms::scalar_mass)
      .def_property_readonly("flux_mass", [](const AssembledForms& f) { return compressed(f.flux_mass); })
      .def_property_readonly("divergence", [](const AssembledForms& f) { return compressed(f.divergence); })
      .def_readonly("dirichlet_functional", &AssembledForms::dirichlet_functional);
  m.def("assemble_forms", py::overload_cast<const Mesh&, double>(&assemble_forms), py::arg("mesh"),
        py::arg("dirichlet_value") = 0.0);
  m.def(
      "project_scalar",
      [](const Mesh& mesh, const std::function<double(double, double)>& fn) {
        return project_scalar(mesh, [&](const Point& p) { return fn(p.x, p.y); }).values;
      },
      py::arg("mesh"), py::arg("fn"));
  m.def(
      "scalar_norm", [](const Mesh& mesh, const Eigen::VectorXd& u) { return l2_norm(mesh, ScalarField(u)); },
      py::arg("mesh"), py::arg("u"));
  m.def(
      "flux_norm", [](const AssembledForms& f, const Eigen::VectorXd& q) { return l2_norm(f, FluxField(q)); },
      py::arg("forms"), py::arg("q"));

  py::class_<PowerLaw>(m, "PowerLaw")
      .def(py::init<double, double>(), py::arg("alpha") = 0.5, py::arg("holder_constant") = 1.0)
      .def_readwrite("alpha", &PowerLaw::alpha)
      .def_readwrite("holder_constant", &PowerLaw::holder_constant);
  py::enum_<RegularizationKind>(m, "RegularizationKind")
      .value("Linear", RegularizationKind::Linear)
      .value("Quadratic", RegularizationKind::Quadratic);
  py::class_<Regularization>(m, "Regularization")
      .def(py::init([](RegularizationKind kind, double eps, double shift, PowerLaw base) {
             Regularization r{kind, eps, shift, base};
             r.validate();
             return r;
           }),
           py::arg("kind") = RegularizationKind::Linear, py::arg("epsilon") = 1e-3, py::arg("shift") = 0.0,
           py::arg("base") = PowerLaw{})
      .def_readonly("kind", &Regularization::kind)
      .def_readonly("epsilon", &Regularization::epsilon)
      .def_readonly("shift", &Regularization::shift);
  m.def("b", py::vectorize([](double u, double alpha) { return b(PowerLaw{alpha, 1.0}, u); }), py::arg("u"),
        py::arg("alpha") = 0.5);
  m.def("b_eps", py::vectorize([](Regularization r, double u) { return b_eps(r, u); }), py::arg("spec"),
        py::arg("u"));
  m.def("b_eps_prime", py::vectorize([](Regularization r, double u) { return b_eps_prime(r, u); }),
        py::arg("spec"), py::arg("u"));
  m.def(
      "lipschitz_constants",
      [](const Regularization& r) {
        const auto lc = lipschitz_constants(r);
        return py::make_tuple(lc.value, lc.derivative);
      },
      py::arg("spec"));
  m.def("regularization_gap_bound", &regularization_gap_bound, py::arg("alpha"), py::arg("epsilon"));

  py::class_<TheoryConstants>(m, "TheoryConstants")
      .def(py::init<double, double, double, double>(), py::arg("c_omega") = 1.0, py::arg("sigma_omega") = 1.0,
           py::arg("alpha") = 0.5, py::arg("holder_constant") = 1.0)
      .def_readwrite("c_omega", &TheoryConstants::c_omega)
      .def_readwrite("sigma_omega", &TheoryConstants::sigma_omega)
      .def_readwrite("alpha", &TheoryConstants::alpha)
      .def_readwrite("holder_constant", &TheoryConstants::holder_constant);
  m.def("contraction_factor", &contraction_factor, py::arg("delta"), py::arg("tau"), py::arg("consts") = TheoryConstants{});
  m.def("c_alpha", &c_alpha, py::arg("consts") = TheoryConstants{});
  m.def("accumulated_error_bound", &accumulated_error_bound, py::arg("delta"), py::arg("tau"),
        py::arg("consts") = TheoryConstants{});
  m.def(
      "select_delta",
      [](double tol, double tau, const TheoryConstants& c) {
        const auto p = select_delta(tol, tau, c);
        return py::make_tuple(p.delta, p.L, p.delta_effective);
      },
      py::arg("tol"), py::arg("tau"), py::arg("consts") = TheoryConstants{});
  m.def("select_L_regularized", &select_L_regularized, py::arg("epsilon"), py::arg("spec") = PowerLaw{});

  m.def(
      "solve_saddle",
      [](const AssembledForms& forms, const Eigen::VectorXd& weights, double tau, const Eigen::VectorXd& rhs_scalar,
         const Eigen::VectorXd& rhs_flux) {
        const Factorization fact(assemble_saddle(forms, weights, tau));
        auto s = fact.solve(rhs_scalar, rhs_flux);
        return py::make_tuple(s.u.values, s.q.values);
      },
      py::arg("forms"), py::arg("weights"), py::arg("tau"), py::arg("rhs_scalar"), py::arg("rhs_flux"));

  py::class_<ManufacturedSolution>(m, "ManufacturedSolution")
      .def(py::init<>())
      .def_readonly("final_time", &ManufacturedSolution::final_time)
      .def_readonly("dirichlet_value", &ManufacturedSolution::dirichlet_value)
      .def("u", [](const ManufacturedSolution& p, double t, double x, double y) { return p.u(t, {x, y}); })
      .def("source", [](const ManufacturedSolution& p, double t_n, double t_prev, double x, double y) {
        return source_term(p, t_n, t_prev, {x, y});
      });

  py::enum_<SchemeKind>(m, "SchemeKind")
      .value("HL", SchemeKind::HL)
      .value("RegularizedL", SchemeKind::RegularizedL)
      .value("Newton", SchemeKind::Newton);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_property_readonly("scheme", [](const ExperimentResult& r) { return to_string(r.scheme); })
      .def_readonly("tol", &ExperimentResult::tol)
      .def_readonly("eps", &ExperimentResult::eps)
      .def_readonly("tau", &ExperimentResult::tau)
      .def_readonly("L", &ExperimentResult::L)
      .def_readonly("total_iterations", &ExperimentResult::total_iterations)
      .def_readonly("num_steps", &ExperimentResult::num_steps)
      .def_readonly("converged", &ExperimentResult::converged)
      .def_property_readonly("per_step", &ExperimentResult::per_step)
      .def_property_readonly("failure_reason", [](const ExperimentResult& r) -> std::optional<std::string> {
        if (!r.failure_reason) return std::nullopt;
        return to_string(*r.failure_reason);
      });

  py::class_<Benchmark>(m, "Benchmark")
      .def(py::init([](int n, std::optional<std::filesystem::path> cache_dir, double tol_for_L,
                       RegularizationKind regularization) {
             ReferenceOptions ro;
             ro.tol_for_L = tol_for_L;
             ro.cache_dir = std::move(cache_dir);
             return Benchmark(n, {}, ro, regularization);
           }),
           py::arg("n") = 32, py::arg("cache_dir") = std::nullopt, py::arg("tol_for_L") = 1e-9,
           py::arg("regularization") = RegularizationKind::Linear)
      .def("num_steps", &Benchmark::num_steps)
      .def_property_readonly("mesh", &Benchmark::mesh, py::return_value_policy::reference_internal)
      .def(
          "reference",
          [](Benchmark& bm, double tau) {
            const auto& ref = bm.reference(tau);
            std::vector<Eigen::VectorXd> u;
            for (const auto& f : ref.u) u.push_back(f.values);
            return py::make_tuple(ref.L, u, ref.iterations);
          },
          py::arg("tau"), py::call_guard<py::gil_scoped_release>())
      .def("run_experiment", &Benchmark::run_experiment, py::arg("kind"), py::arg("tol"), py::arg("eps") = std::nullopt,
           py::arg("tau") = 0.05, py::arg("L") = std::nullopt, py::call_guard<py::gil_scoped_release>())
      .def(
          "run_table",
          [](Benchmark& bm, SchemeKind kind, std::vector<double> tols, std::vector<double> eps, std::vector<double> taus) {
            return bm.run_table(kind, TableGrid{std::move(tols), std::move(eps), std::move(taus)});
          },
          py::arg("kind"), py::arg("tols") = std::vector<double>{1e-3, 1e-4, 1e-5},
          py::arg("eps") = std::vector<double>{1e-3, 1e-4, 1e-5},
          py::arg("taus") = std::vector<double>{0.05, 0.025, 0.0125}, py::call_guard<py::gil_scoped_release>());

  m.def("to_csv", &csv_string, py::arg("rows"));
  m.attr("CSV_HEADER") = kCsvHeader;
}
