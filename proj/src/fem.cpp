#include "degen/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace degen {

namespace {

using Triplet = Eigen::Triplet<double>;

double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
Point minus(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }

void check_size(Eigen::Index actual, std::size_t expected, const char* what) {
  if (static_cast<std::size_t>(actual) != expected) {
    throw std::invalid_argument(std::string(what) + ": field size does not match mesh");
  }
}

}  // namespace

Point rt0_basis(const Mesh& mesh, int cell, int local_edge, const Point& x) {
  const auto geo = cell_geometry(mesh, cell);
  const auto& cv = mesh.cells()[cell];
  const Point& opposite = mesh.vertices()[cv[local_edge]];
  const double scale = mesh.cell_edges()[cell][local_edge].sign / (2.0 * geo.area);
  return {scale * (x.x - opposite.x), scale * (x.y - opposite.y)};
}

AssembledForms assemble_forms(const Mesh& mesh, const ScalarFunction& dirichlet_trace) {
  const auto num_cells = static_cast<Eigen::Index>(mesh.num_cells());
  const auto num_edges = static_cast<Eigen::Index>(mesh.num_edges());

  AssembledForms forms;
  forms.scalar_mass.resize(num_cells);
  forms.dirichlet_functional = Eigen::VectorXd::Zero(num_edges);

  std::vector<Triplet> mass_entries;
  std::vector<Triplet> div_entries;
  mass_entries.reserve(9 * mesh.num_cells());
  div_entries.reserve(3 * mesh.num_cells());

  const auto verts = mesh.vertices();
  for (Eigen::Index c = 0; c < num_cells; ++c) {
    const auto geo = cell_geometry(mesh, static_cast<int>(c));
    const auto& cv = mesh.cells()[c];
    const auto& ce = mesh.cell_edges()[c];
    forms.scalar_mass[c] = geo.area;

    // Edge-midpoint rule, exact for the quadratic integrands phi_E . phi_F.
    for (int k = 0; k < 3; ++k) {
      const Point& pk = verts[cv[k]];
      for (int l = 0; l < 3; ++l) {
        const Point& pl = verts[cv[l]];
        double sum = 0.0;
        for (const auto& eg : geo.edges) {
          sum += dot(minus(eg.midpoint, pk), minus(eg.midpoint, pl));
        }
        const double value =
            ce[k].sign * ce[l].sign / (4.0 * geo.area * geo.area) * (geo.area / 3.0) * sum;
        mass_entries.emplace_back(ce[k].edge, ce[l].edge, value);
      }
      div_entries.emplace_back(c, ce[k].edge, static_cast<double>(ce[k].sign));
    }

    for (int k = 0; k < 3; ++k) {
      if (mesh.is_boundary_edge(ce[k].edge)) {
        // int_E phi_E . n = sign for the integrated-flux normalization
        forms.dirichlet_functional[ce[k].edge] =
            -dirichlet_trace(geo.edges[k].midpoint) * ce[k].sign;
      }
    }
  }

  forms.flux_mass.resize(num_edges, num_edges);
  forms.flux_mass.setFromTriplets(mass_entries.begin(), mass_entries.end());
  forms.divergence.resize(num_cells, num_edges);
  forms.divergence.setFromTriplets(div_entries.begin(), div_entries.end());
  return forms;
}

AssembledForms assemble_forms(const Mesh& mesh, double dirichlet_value) {
  return assemble_forms(mesh, [dirichlet_value](const Point&) { return dirichlet_value; });
}

ScalarField project_scalar(const Mesh& mesh, const ScalarFunction& fn) {
  ScalarField field = ScalarField::zeros(mesh);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    field.values[static_cast<Eigen::Index>(c)] =
        fn(cell_geometry(mesh, static_cast<int>(c)).barycenter);
  }
  return field;
}

FluxField interpolate_flux(const Mesh& mesh, const VectorFunction& fn) {
  FluxField field = FluxField::zeros(mesh);
  const auto verts = mesh.vertices();
  const auto edges = mesh.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Point& a = verts[edges[e].vertices[0]];
    const Point& b = verts[edges[e].vertices[1]];
    const Point mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const double length = std::hypot(b.x - a.x, b.y - a.y);
    field.values[static_cast<Eigen::Index>(e)] = length * dot(fn(mid), edges[e].normal);
  }
  return field;
}

double l2_norm(const Mesh& mesh, const ScalarField& u) {
  check_size(u.size(), mesh.num_cells(), "l2_norm");
  double sum = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const double v = u.values[static_cast<Eigen::Index>(c)];
    sum += cell_geometry(mesh, static_cast<int>(c)).area * v * v;
  }
  return std::sqrt(sum);
}

double l2_norm(const AssembledForms& forms, const ScalarField& u) {
  if (u.size() != forms.num_cells()) {
    throw std::invalid_argument("l2_norm: scalar field size does not match forms");
  }
  return std::sqrt(forms.scalar_mass.dot(u.values.cwiseAbs2()));
}

double l2_norm(const AssembledForms& forms, const FluxField& q) {
  if (q.size() != forms.num_edges()) {
    throw std::invalid_argument("l2_norm: flux field size does not match forms");
  }
  const double sq = q.values.dot(forms.flux_mass * q.values);
  return std::sqrt(std::max(sq, 0.0));
}

}  // namespace degen
