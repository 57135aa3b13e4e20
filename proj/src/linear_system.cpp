#include "degen/linear_system.hpp"

#include <cassert>
#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace degen {

Eigen::VectorXd SaddleSystem::apply(const ScalarField& u, const FluxField& q) const {
  Eigen::VectorXd x(size());
  x << u.values, q.values;
  return matrix * x;
}

SaddleSystem assemble_saddle(const AssembledForms& forms, const Eigen::VectorXd& weights, double tau) {
  const Eigen::Index nc = forms.num_cells();
  const Eigen::Index ne = forms.num_edges();
  if (weights.size() != nc) {
    throw std::invalid_argument("assemble_saddle: expected one weight per cell");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("assemble_saddle: tau must be positive and finite");
  }
  for (Eigen::Index c = 0; c < nc; ++c) {
    if (!std::isfinite(weights[c]) || weights[c] < 0.0) {
      throw std::invalid_argument("assemble_saddle: weight of cell " + std::to_string(c) +
                                  " is negative or not finite");
    }
  }

  SaddleSystem sys;
  sys.weights = weights;
  sys.tau = tau;
  sys.num_cells = nc;
  sys.num_edges = ne;

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(nc + 2 * forms.divergence.nonZeros() + forms.flux_mass.nonZeros()));
  for (Eigen::Index c = 0; c < nc; ++c) {
    // keep structural zeros so the sparsity pattern does not depend on the weights
    entries.emplace_back(c, c, weights[c] * forms.scalar_mass[c]);
  }
  for (Eigen::Index k = 0; k < forms.divergence.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(forms.divergence, k); it; ++it) {
      entries.emplace_back(it.row(), nc + it.col(), tau * it.value());
      entries.emplace_back(nc + it.col(), it.row(), -it.value());
    }
  }
  for (Eigen::Index k = 0; k < forms.flux_mass.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(forms.flux_mass, k); it; ++it) {
      entries.emplace_back(nc + it.row(), nc + it.col(), it.value());
    }
  }
  sys.matrix.resize(nc + ne, nc + ne);
  sys.matrix.setFromTriplets(entries.begin(), entries.end());
  sys.matrix.makeCompressed();
  return sys;
}

// Two interchangeable direct backends for the same block system.
//
// With all weights positive the system is quasi-definite after scaling the
// flux rows by -tau:
//   [ D       tau B  ]
//   [ tau B^T -tau M ]
// and admits an LDL^T factorization for any symmetric ordering. Zero weights
// (Newton on the degenerate region) break that property, so those systems
// go through a column-pivoted sparse LU of the unscaled matrix.
struct Factorization::Impl {
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  bool use_ldlt = false;
  Eigen::VectorXd weights;
  double tau = 0.0;
  Eigen::Index num_cells = 0;
  Eigen::Index num_edges = 0;
#ifndef NDEBUG
  SparseMatrix matrix;
#endif
};

Factorization::Factorization(const SaddleSystem& system) : impl_(std::make_unique<Impl>()) {
  impl_->weights = system.weights;
  impl_->tau = system.tau;
  impl_->num_cells = system.num_cells;
  impl_->num_edges = system.num_edges;
#ifndef NDEBUG
  impl_->matrix = system.matrix;
#endif
  impl_->use_ldlt = system.weights.size() > 0 && system.weights.minCoeff() > 0.0;

  if (impl_->use_ldlt) {
    Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(system.size());
    row_scale.tail(system.num_edges).setConstant(-system.tau);
    const SparseMatrix symmetric = row_scale.asDiagonal() * system.matrix;
    impl_->ldlt.compute(symmetric);
    if (impl_->ldlt.info() == Eigen::Success) return;
    impl_->use_ldlt = false;
  }
  impl_->lu.compute(system.matrix);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularSystemError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage());
  }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

bool Factorization::valid_for(const Eigen::VectorXd& weights, double tau) const {
  return tau == impl_->tau && weights.size() == impl_->weights.size() && weights == impl_->weights;
}

SaddleSolution Factorization::solve(const Eigen::VectorXd& rhs_scalar, const Eigen::VectorXd& rhs_flux) const {
  if (rhs_scalar.size() != impl_->num_cells || rhs_flux.size() != impl_->num_edges) {
    throw std::invalid_argument("Factorization::solve: right-hand side size mismatch");
  }
  Eigen::VectorXd rhs(impl_->num_cells + impl_->num_edges);
  Eigen::VectorXd x;
  if (impl_->use_ldlt) {
    rhs << rhs_scalar, -impl_->tau * rhs_flux;
    x = impl_->ldlt.solve(rhs);
  } else {
    rhs << rhs_scalar, rhs_flux;
    x = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success) throw SingularSystemError("sparse LU solve failed");
  }
#ifndef NDEBUG
  {
    Eigen::VectorXd b(rhs.size());
    b << rhs_scalar, rhs_flux;
    const double scale = std::max(b.norm(), 1e-300);
    assert((impl_->matrix * x - b).norm() <= 1e-10 * scale || b.norm() == 0.0);
  }
#endif
  return {ScalarField(x.head(impl_->num_cells)), FluxField(x.tail(impl_->num_edges))};
}

SaddleSolution Factorization::solve(const Eigen::VectorXd& weights, double tau, const Eigen::VectorXd& rhs_scalar,
                                    const Eigen::VectorXd& rhs_flux) const {
  if (!valid_for(weights, tau)) {
    throw StaleFactorizationError("factorization was built for different weights or tau");
  }
  return solve(rhs_scalar, rhs_flux);
}

const Factorization& FactorizationCache::get(const Eigen::VectorXd& weights, double tau) {
  if (!current_ || !current_->valid_for(weights, tau)) {
    current_.reset();
    current_ = std::make_unique<Factorization>(assemble_saddle(*forms_, weights, tau));
    ++count_;
  }
  return *current_;
}

}  // namespace degen
