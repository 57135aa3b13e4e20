#pragma once

#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "degen/mesh.hpp"

namespace degen {

/// Piecewise constant scalar, one value per cell.
struct ScalarField {
  Eigen::VectorXd values;

  ScalarField() = default;
  explicit ScalarField(Eigen::VectorXd v) : values(std::move(v)) {}
  static ScalarField zeros(const Mesh& mesh) {
    return ScalarField(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_cells())));
  }
  Eigen::Index size() const { return values.size(); }
};

/// Lowest-order Raviart-Thomas field. One degree of freedom per edge: the
/// integrated normal flux through the edge along the global edge normal.
struct FluxField {
  Eigen::VectorXd values;

  FluxField() = default;
  explicit FluxField(Eigen::VectorXd v) : values(std::move(v)) {}
  static FluxField zeros(const Mesh& mesh) {
    return FluxField(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_edges())));
  }
  Eigen::Index size() const { return values.size(); }
};

using SparseMatrix = Eigen::SparseMatrix<double>;
using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Point(const Point&)>;

/// Discrete operators of the P0 / RT0 mixed method on one mesh.
struct AssembledForms {
  /// Diagonal of the P0 mass matrix, i.e. the cell areas |T|.
  Eigen::VectorXd scalar_mass;
  /// RT0 mass matrix (M_q)_{EF} = <phi_E, phi_F>, symmetric positive definite.
  SparseMatrix flux_mass;
  /// cells x edges, B_{TE} = <div phi_E, 1_T>, equal to the orientation sign.
  SparseMatrix divergence;
  /// Boundary functional g_E = -int_{E} g_D phi_E . n, zero on interior edges.
  Eigen::VectorXd dirichlet_functional;

  Eigen::Index num_cells() const { return scalar_mass.size(); }
  Eigen::Index num_edges() const { return dirichlet_functional.size(); }
};

AssembledForms assemble_forms(const Mesh& mesh, const ScalarFunction& dirichlet_trace);
AssembledForms assemble_forms(const Mesh& mesh, double dirichlet_value);

/// Value of the RT0 basis function of local edge `local_edge` of `cell` at x.
/// phi = sign / (2|T|) * (x - P), P the vertex opposite the edge, so the
/// integrated outward flux through its own edge is `sign`.
Point rt0_basis(const Mesh& mesh, int cell, int local_edge, const Point& x);

/// Cell values by barycenter evaluation.
ScalarField project_scalar(const Mesh& mesh, const ScalarFunction& fn);

/// RT0 interpolant: integrated normal flux through each edge, midpoint rule
/// (exact for fields in RT0, in particular for constants).
FluxField interpolate_flux(const Mesh& mesh, const VectorFunction& fn);

double l2_norm(const Mesh& mesh, const ScalarField& u);
double l2_norm(const AssembledForms& forms, const ScalarField& u);
double l2_norm(const AssembledForms& forms, const FluxField& q);

}  // namespace degen
