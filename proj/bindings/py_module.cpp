#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "steklov/assemble.hpp"
#include "steklov/errors.hpp"
#include "steklov/json_io.hpp"
#include "steklov/mesh.hpp"
#include "steklov/oracle.hpp"
#include "steklov/runtime.hpp"
#include "steklov/shapegrad.hpp"
#include "steklov/spectrum.hpp"

namespace py = pybind11;
using namespace steklov;

namespace {

Eigen::MatrixX3i triangles_array(const DiskMesh& mesh) {
  Eigen::MatrixX3i t(mesh.num_triangles(), 3);
  for (int i = 0; i < mesh.num_triangles(); ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = mesh.triangles[i][j];
  return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steklov-type eigenvalues (Δu = u, ∂u/∂ν = λu) on deformed disks: "
            "pulled-back P1 assembly, cluster derivatives, criticality, flow";
  m.attr("__version__") = kVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<ShapeSpec>(m, "ShapeSpec")
      .def(py::init([](double rho0, std::vector<double> cos, std::vector<double> sin,
                       double blend_start) {
             return ShapeSpec{rho0, std::move(cos), std::move(sin), blend_start};
           }),
           py::arg("rho0") = 1.0, py::arg("cos") = std::vector<double>{},
           py::arg("sin") = std::vector<double>{}, py::arg("blend_start") = 0.3)
      .def_readwrite("rho0", &ShapeSpec::rho0)
      .def_readwrite("cos", &ShapeSpec::cos_coeffs)
      .def_readwrite("sin", &ShapeSpec::sin_coeffs)
      .def_readwrite("blend_start", &ShapeSpec::blend_start)
      .def("scaled", &ShapeSpec::scaled, py::arg("c"))
      .def("to_json", [](const ShapeSpec& s) { return shape_to_json(s); })
      .def_static("from_json", [](const std::string& text) { return shape_from_json(text); })
      .def("__repr__", [](const ShapeSpec& s) {
        return "ShapeSpec(" + shape_to_json(s) + ")";
      });

  py::class_<PerturbSpec>(m, "PerturbSpec")
      .def(py::init([](double eta0, std::vector<double> cos, std::vector<double> sin) {
             return PerturbSpec{eta0, std::move(cos), std::move(sin)};
           }),
           py::arg("eta0") = 0.0, py::arg("cos") = std::vector<double>{},
           py::arg("sin") = std::vector<double>{})
      .def_readwrite("eta0", &PerturbSpec::eta0)
      .def_readwrite("cos", &PerturbSpec::cos_coeffs)
      .def_readwrite("sin", &PerturbSpec::sin_coeffs)
      .def("to_json", [](const PerturbSpec& p) { return perturb_to_json(p); })
      .def_static("from_json",
                  [](const std::string& text) { return perturb_from_json(text); });

  m.def("perturbed", &perturbed, py::arg("shape"), py::arg("pert"), py::arg("eps"));

  py::class_<BoundaryFrame>(m, "BoundaryFrame")
      .def_readonly("t", &BoundaryFrame::t)
      .def_readonly("point", &BoundaryFrame::y)
      .def_readonly("tangent", &BoundaryFrame::tangent)
      .def_readonly("normal", &BoundaryFrame::normal)
      .def_readonly("curvature", &BoundaryFrame::curvature)
      .def_readonly("weight", &BoundaryFrame::weight)
      .def("normal_displacement", &BoundaryFrame::normal_displacement, py::arg("pert"));

  py::class_<DiffeoMap>(m, "DiffeoMap")
      .def(py::init<ShapeSpec>(), py::arg("shape"))
      .def_property_readonly("shape", &DiffeoMap::shape)
      .def("map", &DiffeoMap::map, py::arg("x"))
      .def("eval",
           [](const DiffeoMap& map, const Vec2& x) {
             const MapJet jet = map.eval(x);
             return py::make_tuple(jet.y, jet.J, jet.detJ);
           },
           py::arg("x"), "returns (y, jacobian, det)")
      .def("boundary_frame", &DiffeoMap::boundary_frame, py::arg("t"))
      .def("boundary_radius", &DiffeoMap::boundary_radius, py::arg("t"))
      .def("boundary_weight", &DiffeoMap::boundary_weight, py::arg("t"));

  m.def("volume", &volume, py::arg("map"), py::arg("panels") = kDefaultBoundaryPanels);
  m.def("perimeter", &perimeter, py::arg("map"), py::arg("panels") = kDefaultBoundaryPanels);
  m.def("d_volume", &d_volume, py::arg("map"), py::arg("pert"),
        py::arg("panels") = kDefaultBoundaryPanels);
  m.def("d_perimeter", &d_perimeter, py::arg("map"), py::arg("pert"),
        py::arg("panels") = kDefaultBoundaryPanels);
  m.def("surface_functional",
        [](const DiffeoMap& map, const std::function<double(const Vec2&)>& value,
           const std::function<Vec2(const Vec2&)>& gradient, int panels) {
          return surface_functional(map, ScalarField{value, gradient}, panels);
        },
        py::arg("map"), py::arg("value"), py::arg("gradient"),
        py::arg("panels") = kDefaultBoundaryPanels);
  m.def("d_surface_functional",
        [](const DiffeoMap& map, const std::function<double(const Vec2&)>& value,
           const std::function<Vec2(const Vec2&)>& gradient, const PerturbSpec& pert,
           int panels) {
          return d_surface_functional(map, ScalarField{value, gradient}, pert, panels);
        },
        py::arg("map"), py::arg("value"), py::arg("gradient"), py::arg("pert"),
        py::arg("panels") = kDefaultBoundaryPanels);

  py::class_<DiskMesh, std::shared_ptr<DiskMesh>>(m, "DiskMesh")
      .def_property_readonly("vertices",
                             [](const DiskMesh& mesh) { return mesh.vertices; })
      .def_property_readonly("triangles", &triangles_array)
      .def_property_readonly("boundary_vertices",
                             [](const DiskMesh& mesh) { return mesh.boundary_vertices; })
      .def_readonly("refinement_level", &DiskMesh::refinement_level)
      .def_property_readonly("num_vertices", &DiskMesh::num_vertices)
      .def_property_readonly("num_triangles", &DiskMesh::num_triangles)
      .def_property_readonly("num_boundary", &DiskMesh::num_boundary)
      .def("polygon_area", &DiskMesh::polygon_area);

  m.def("build_disk_mesh",
        [](int level) { return std::make_shared<DiskMesh>(build_disk_mesh(level)); },
        py::arg("level"));

  py::class_<AssembledPencil, std::shared_ptr<AssembledPencil>>(m, "AssembledPencil")
      .def_property_readonly("A", [](const AssembledPencil& p) { return p.A; })
      .def_property_readonly("B", [](const AssembledPencil& p) { return p.B; })
      .def_property_readonly("size", &AssembledPencil::size);

  m.def("assemble",
        [](std::shared_ptr<DiskMesh> mesh, const DiffeoMap& map) {
          return std::make_shared<AssembledPencil>(
              assemble(std::shared_ptr<const DiskMesh>(mesh), map));
        },
        py::arg("mesh"), py::arg("map"));

  py::enum_<Normalization>(m, "Normalization")
      .value("SOBOLEV", Normalization::SOBOLEV)
      .value("BOUNDARY", Normalization::BOUNDARY);

  py::enum_<Constraint>(m, "Constraint")
      .value("VOLUME", Constraint::VOLUME)
      .value("PERIMETER", Constraint::PERIMETER);

  py::class_<SpectralResult>(m, "SpectralResult")
      .def_property_readonly("lambdas",
                             [](const SpectralResult& r) { return r.lambdas; })
      .def_property_readonly("vectors",
                             [](const SpectralResult& r) { return r.vectors; })
      .def_readonly("norm_tag", &SpectralResult::norm_tag);

  m.def("solve_pencil",
        [](std::shared_ptr<AssembledPencil> pencil, int k) {
          return solve_pencil(std::shared_ptr<const AssembledPencil>(pencil), k);
        },
        py::arg("pencil"), py::arg("k"));
  m.def("pencil_residual", &pencil_residual, py::arg("pencil"), py::arg("lambda_"),
        py::arg("u"));

  py::class_<EigenCluster>(m, "EigenCluster")
      .def_readonly("indices", &EigenCluster::indices)
      .def_property_readonly("lambdas", [](const EigenCluster& c) { return c.lambdas; })
      .def_readonly("lambda_F", &EigenCluster::lambda_F)
      .def_property_readonly("basis", [](const EigenCluster& c) { return c.basis; })
      .def_readonly("norm_tag", &EigenCluster::norm_tag)
      .def_readonly("gap_ok", &EigenCluster::gap_ok);

  m.def("detect_cluster", &detect_cluster, py::arg("result"), py::arg("F"),
        py::arg("cluster_tol") = kClusterTol, py::arg("sep_tol") = kSepTol);
  m.def("sym_functions", &sym_functions, py::arg("cluster"));
  m.def("gamma_functions", &gamma_functions, py::arg("cluster"));
  m.def("renormalize", &renormalize, py::arg("cluster"), py::arg("target"));
  m.def("elementary_symmetric", &elementary_symmetric, py::arg("values"));

  py::class_<GradientDensity>(m, "GradientDensity")
      .def_property_readonly("t", [](const GradientDensity& d) { return d.t; })
      .def_property_readonly("H", [](const GradientDensity& d) { return d.H; })
      .def_property_readonly("w", [](const GradientDensity& d) { return d.w; })
      .def_property_readonly("weight", [](const GradientDensity& d) { return d.weight; })
      .def_property_readonly("v", [](const GradientDensity& d) { return d.v; })
      .def_property_readonly("dvdn", [](const GradientDensity& d) { return d.dvdn; })
      .def_property_readonly("v2_sum", [](const GradientDensity& d) { return d.v2_sum; })
      .def_property_readonly("gradT2_sum",
                             [](const GradientDensity& d) { return d.gradT2_sum; })
      .def_property_readonly("g", [](const GradientDensity& d) { return d.g; })
      .def_readonly("lambda_F", &GradientDensity::lambda_F);

  m.def("boundary_density", &boundary_density, py::arg("cluster"));
  m.def("bc_residual", &bc_residual, py::arg("density"));
  m.def("hadamard_derivative", &hadamard_derivative, py::arg("cluster"), py::arg("h"),
        py::arg("pert"), py::arg("normalization") = Normalization::SOBOLEV);
  m.def("fd_derivative",
        [](const ShapeSpec& shape, const std::vector<int>& F, int h,
           const PerturbSpec& pert, double eps, std::shared_ptr<DiskMesh> mesh,
           double sep_tol) {
          return fd_derivative(shape, F, h, pert, eps,
                               std::shared_ptr<const DiskMesh>(mesh), sep_tol);
        },
        py::arg("shape"), py::arg("F"), py::arg("h"), py::arg("pert"), py::arg("eps"),
        py::arg("mesh"), py::arg("sep_tol") = kSepTol);

  py::class_<CriticalityReport>(m, "CriticalityReport")
      .def_readonly("constraint", &CriticalityReport::constraint)
      .def_readonly("fitted_constant", &CriticalityReport::fitted_constant)
      .def_readonly("residual", &CriticalityReport::residual)
      .def_readonly("multiplier", &CriticalityReport::multiplier)
      .def_readonly("lambda_F", &CriticalityReport::lambda_F);

  m.def("criticality_report", &criticality_report, py::arg("cluster"),
        py::arg("constraint"));

  py::class_<FlowParams>(m, "FlowParams")
      .def(py::init<>())
      .def_readwrite("F", &FlowParams::F)
      .def_readwrite("h", &FlowParams::h)
      .def_readwrite("constraint", &FlowParams::constraint)
      .def_readwrite("steps", &FlowParams::steps)
      .def_readwrite("step_size", &FlowParams::step_size)
      .def_readwrite("level", &FlowParams::level)
      .def_readwrite("max_mode", &FlowParams::max_mode)
      .def_readwrite("cluster_tol", &FlowParams::cluster_tol)
      .def_readwrite("sep_tol", &FlowParams::sep_tol);

  py::class_<FlowState>(m, "FlowState")
      .def_readonly("step", &FlowState::step)
      .def_readonly("shape", &FlowState::shape)
      .def_readonly("Lambda", &FlowState::Lambda)
      .def_readonly("residual", &FlowState::residual)
      .def_readonly("volume", &FlowState::volume)
      .def_readonly("perimeter", &FlowState::perimeter)
      .def_readonly("mode_energy", &FlowState::mode_energy);

  m.def("constrained_flow", &constrained_flow, py::arg("shape0"), py::arg("params"),
        py::call_guard<py::gil_scoped_release>());

  auto oracle_mod = m.def_submodule("oracle", "independent Bessel/FD ground truth");
  oracle_mod.def("bessel_i", &oracle::bessel_i, py::arg("n"), py::arg("x"));
  oracle_mod.def("bessel_i_prime", &oracle::bessel_i_prime, py::arg("n"), py::arg("x"));
  oracle_mod.def("disk_eigenvalue", &oracle::disk_eigenvalue, py::arg("n"), py::arg("R"));
  oracle_mod.def("disk_spectrum", &oracle::disk_spectrum, py::arg("R"), py::arg("k"));
  oracle_mod.def("disk_dilation_derivative", &oracle::disk_dilation_derivative,
                 py::arg("n"), py::arg("R"));
  oracle_mod.def("richardson_diff",
                 [](const std::function<double(double)>& f, double eps0, int levels) {
                   const auto r = oracle::richardson_diff(f, eps0, levels);
                   return py::make_tuple(r.derivative, r.error_estimate);
                 },
                 py::arg("f"), py::arg("eps0"), py::arg("levels") = 4);
}
