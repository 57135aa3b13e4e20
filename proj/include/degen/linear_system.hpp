#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "degen/fem.hpp"

namespace degen {

/// Raised when the factorization of a saddle system fails.
class SingularSystemError : public std::runtime_error {
 public:
  explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a factorization is used for a system it was not built from.
class StaleFactorizationError : public std::logic_error {
 public:
  explicit StaleFactorizationError(const std::string& what) : std::logic_error(what) {}
};

/// Block system solved by every linearization step:
///
///   [ D      tau B ] [u]   [rhs_scalar]
///   [ -B^T   M_q   ] [q] = [rhs_flux  ]
///
/// with D = diag(d_T |T|). Unknowns are ordered cells first, then edges.
struct SaddleSystem {
  Eigen::VectorXd weights;  // d_T
  double tau = 0.0;
  Eigen::Index num_cells = 0;
  Eigen::Index num_edges = 0;
  SparseMatrix matrix;

  Eigen::Index size() const { return num_cells + num_edges; }
  Eigen::VectorXd apply(const ScalarField& u, const FluxField& q) const;
};

/// Throws std::invalid_argument for negative or non-finite weights or tau <= 0.
SaddleSystem assemble_saddle(const AssembledForms& forms, const Eigen::VectorXd& weights, double tau);

struct SaddleSolution {
  ScalarField u;
  FluxField q;
};

/// Sparse direct factorization of a SaddleSystem, tagged with the
/// (weights, tau) it was built from. Immutable once constructed; solves are
/// const. Systems with all weights positive use a symmetric LDL^T of the
/// quasi-definite form, the others a pivoted sparse LU.
class Factorization {
 public:
  /// Throws SingularSystemError if the decomposition fails.
  explicit Factorization(const SaddleSystem& system);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  bool valid_for(const Eigen::VectorXd& weights, double tau) const;

  /// Solve for the system the factorization was built from. Debug builds
  /// assert a relative residual of at most 1e-10.
  SaddleSolution solve(const Eigen::VectorXd& rhs_scalar, const Eigen::VectorXd& rhs_flux) const;

  /// Checked solve: throws StaleFactorizationError unless (weights, tau)
  /// match the snapshot taken at construction.
  SaddleSolution solve(const Eigen::VectorXd& weights, double tau, const Eigen::VectorXd& rhs_scalar,
                       const Eigen::VectorXd& rhs_flux) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Keeps the most recent factorization and rebuilds it only when the
/// requested (weights, tau) differ from its tag.
class FactorizationCache {
 public:
  explicit FactorizationCache(const AssembledForms& forms) : forms_(&forms) {}

  const Factorization& get(const Eigen::VectorXd& weights, double tau);
  int factorizations() const { return count_; }

 private:
  const AssembledForms* forms_;
  std::unique_ptr<Factorization> current_;
  int count_ = 0;
};

}  // namespace degen
