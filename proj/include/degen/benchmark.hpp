#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "degen/fem.hpp"
#include "degen/mesh.hpp"
#include "degen/nonlinearity.hpp"
#include "degen/schemes.hpp"

namespace degen {

/// u(t, x, y) = -1/2 + 16 x(1-x) y(1-y) (t + 1/2) on (0, 0.5] x (0,1)^2,
/// with b(u) = max{u, 0}^{1/2} and Dirichlet trace -1/2.
struct ManufacturedSolution {
  double final_time = 0.5;
  double dirichlet_value = -0.5;
  PowerLaw nonlinearity{0.5, 1.0};

  double u(double t, const Point& p) const;
  double laplacian(double t, const Point& p) const;

  /// Backward-Euler consistent source at point p:
  /// (b(u(t_n)) - b(u(t_prev))) / (t_n - t_prev) - Laplacian u(t_n).
  double source(double t_n, double t_prev, const Point& p) const;
};

double source_term(const ManufacturedSolution& problem, double t_n, double t_prev, const Point& barycenter);

/// Per-cell source of step n for time step tau (barycenter rule).
Eigen::VectorXd source_vector(const Mesh& mesh, const ManufacturedSolution& problem, double tau, int step);

struct ReferenceSolution {
  double tau = 0.0;
  double L = 0.0;
  std::vector<ScalarField> u;  // u[n-1] is the solution at step n
  std::vector<FluxField> q;
  std::vector<int> iterations;
};

struct ReferenceOptions {
  /// Tolerance handed to select_delta to obtain the reference L; well below
  /// the increment threshold so the accumulation floor does not interfere.
  double tol_for_L = 1e-9;
  /// Absolute and relative increment threshold.
  double increment_tol = 1e-8;
  int max_iterations = 200000;
  /// When set, reference solutions are stored in and reloaded from this
  /// directory, one binary file per (n, tau, L, increment_tol).
  std::optional<std::filesystem::path> cache_dir;
};

/// HL-scheme in increment-stopping mode for every time step. Throws
/// std::runtime_error when any step fails to converge.
ReferenceSolution compute_reference(const Mesh& mesh, const AssembledForms& forms,
                                    const ManufacturedSolution& problem, double tau, int num_steps,
                                    const ReferenceOptions& options = {});

/// Binary round trip used by the reference cache. `load_reference` returns
/// nullopt when the file is missing or does not match the expected sizes.
void save_reference(const std::filesystem::path& file, const ReferenceSolution& ref);
std::optional<ReferenceSolution> load_reference(const std::filesystem::path& file, Eigen::Index num_cells,
                                                Eigen::Index num_edges);

/// One cell of a scheme-comparison table.
struct ExperimentResult {
  SchemeKind scheme = SchemeKind::HL;
  double tol = 0.0;
  std::optional<double> eps;
  double tau = 0.0;
  double L = 0.0;  // 0 for Newton
  int total_iterations = 0;
  int num_steps = 0;
  bool converged = false;
  std::optional<FailureReason> failure_reason;

  double per_step() const { return num_steps > 0 ? static_cast<double>(total_iterations) / num_steps : 0.0; }
};

struct TableGrid {
  std::vector<double> tols{1e-3, 1e-4, 1e-5};
  std::vector<double> eps{1e-3, 1e-4, 1e-5};
  std::vector<double> taus{0.05, 0.025, 0.0125};
};

/// Owns the mesh, the assembled forms and one reference solution per tau
/// (computed on first use) for the manufactured benchmark.
class Benchmark {
 public:
  explicit Benchmark(int n, ManufacturedSolution problem = {}, ReferenceOptions reference_options = {},
                     RegularizationKind regularization = RegularizationKind::Linear);

  const Mesh& mesh() const { return mesh_; }
  const AssembledForms& forms() const { return forms_; }
  const ManufacturedSolution& problem() const { return problem_; }
  RegularizationKind regularization_kind() const { return regularization_; }

  int num_steps(double tau) const;
  ScalarField initial_condition() const;
  const ReferenceSolution& reference(double tau);

  /// L from the theory module when `L` is empty (ignored for Newton). A
  /// positive `shift` adds shift*u to b_eps and raises the default L to
  /// ceil((eps^{alpha-1} + shift) / 2).
  SchemeConfig make_config(SchemeKind kind, double tol, std::optional<double> eps, double tau,
                           std::optional<double> L = std::nullopt, double shift = 0.0) const;

  /// Time series stopped against the reference solution, over all steps
  /// or the first `num_steps`.
  TimeSeriesResult run(const SchemeConfig& config, bool record_flux_errors = false,
                       std::optional<int> num_steps = std::nullopt);

  ExperimentResult run_experiment(SchemeKind kind, double tol, std::optional<double> eps, double tau,
                                  std::optional<double> L = std::nullopt);

  /// Grid order: TOL outer, eps middle (absent for HL), tau inner.
  std::vector<ExperimentResult> run_table(SchemeKind kind, const TableGrid& grid);

 private:
  int n_;
  ManufacturedSolution problem_;
  ReferenceOptions reference_options_;
  RegularizationKind regularization_;
  Mesh mesh_;
  AssembledForms forms_;
  std::map<double, ReferenceSolution> references_;
};

inline constexpr const char* kCsvHeader = "scheme,tol,eps,tau,L,total_iterations,per_step,converged";

void write_csv(std::ostream& os, const std::vector<ExperimentResult>& rows);
void write_csv_row(std::ostream& os, const ExperimentResult& row);

/// Human-readable table: one line per (TOL, eps) with the tau values in braces.
void write_summary(std::ostream& os, SchemeKind kind, const std::vector<ExperimentResult>& rows);

}  // namespace degen
