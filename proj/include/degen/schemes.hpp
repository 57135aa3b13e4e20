#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "degen/fem.hpp"
#include "degen/linear_system.hpp"
#include "degen/nonlinearity.hpp"
#include "degen/theory.hpp"

namespace degen {

enum class SchemeKind { HL, RegularizedL, Newton };

enum class StoppingMode {
  /// ||u^i - u_ref|| < TOL
  AgainstReference,
  /// ||du|| + ||dq|| < TOL and ||du||/||u|| + ||dq||/||q|| < TOL
  Increment,
};

struct StoppingCriterion {
  StoppingMode mode = StoppingMode::AgainstReference;
  double tol = 1e-3;
  /// Required for AgainstReference.
  std::optional<ScalarField> reference;
  /// Optional; when present the flux error is recorded (never used to stop).
  std::optional<FluxField> reference_flux;
};

enum class FailureReason { MaxIterations, Divergence, SingularSystem };

struct IterationReport {
  int iterations_used = 0;
  bool converged = false;
  std::optional<FailureReason> failure_reason;
  /// ||u^{n,0} - u_ref|| (AgainstReference mode only).
  std::optional<double> initial_error;
  /// One entry per iteration: ||u^i - u_ref|| or the absolute increment sum.
  std::vector<double> error_history;
  /// ||q^i - q_ref||, filled when a reference flux is available.
  std::vector<double> flux_error_history;
};

struct SchemeConfig {
  SchemeKind kind = SchemeKind::HL;
  /// b for HL, b_eps for the regularized schemes.
  Nonlinearity nonlinearity;
  /// Stabilization for HL and RegularizedL; ignored by Newton.
  double L = 0.0;
  /// Present exactly for the regularized schemes built by the helpers below.
  std::optional<Regularization> regularization;
  double tau = 0.05;
  StoppingCriterion stopping;
  int max_iterations = 20000;
  double divergence_threshold = 1e6;

  /// Throws std::invalid_argument for inconsistent settings.
  void validate() const;

  static SchemeConfig hl(const PowerLaw& b, double L, double tau, StoppingCriterion stop);
  static SchemeConfig regularized_l(const Regularization& reg, double L, double tau, StoppingCriterion stop);
  static SchemeConfig newton(const Regularization& reg, double tau, StoppingCriterion stop);
};

struct StepResult {
  ScalarField u;
  FluxField q;
  IterationReport report;
};

/// Data of one time step n, shared by all three drivers.
struct StepInput {
  /// b(u^{n-1}) per cell, using the nonlinearity of the scheme.
  Eigen::VectorXd b_prev;
  /// Initial iterate u^{n,0}, usually u^{n-1}.
  ScalarField u_init;
  /// Flux paired with u_init; only used by the increment test of iteration 1.
  std::optional<FluxField> q_init;
  /// Source f evaluated per cell (entered as tau |T| f_T).
  Eigen::VectorXd source;
};

/// Hoelder L-scheme: weights L, raw b, one factorization for the whole run.
StepResult hl_iterate(const AssembledForms& forms, const SchemeConfig& config, const StepInput& input,
                      FactorizationCache& cache);

/// Standard L-scheme on the regularized problem.
StepResult regularized_l_iterate(const AssembledForms& forms, const SchemeConfig& config, const StepInput& input,
                                 FactorizationCache& cache);

/// Newton on the regularized problem: weights b_eps'(u^{n,i-1}), refactorized
/// every iteration.
StepResult newton_iterate(const AssembledForms& forms, const SchemeConfig& config, const StepInput& input,
                          FactorizationCache& cache);

/// Dispatches on config.kind.
StepResult iterate(const AssembledForms& forms, const SchemeConfig& config, const StepInput& input,
                   FactorizationCache& cache);

struct TimeSeriesOptions {
  /// Per-cell source for step n (1-based).
  std::function<Eigen::VectorXd(int)> source;
  /// Reference fields for step n, required in AgainstReference mode.
  std::function<ScalarField(int)> reference;
  std::function<FluxField(int)> reference_flux;
  bool abort_on_failure = true;
};

struct TimeSeriesResult {
  std::vector<StepResult> steps;
  bool converged = true;
  int total_iterations = 0;
  int factorizations = 0;
};

/// Marches n = 1..num_steps starting from u0, feeding u^{n-1} as initial
/// iterate and as the b(u^{n-1}) term.
TimeSeriesResult run_time_series(const AssembledForms& forms, const SchemeConfig& config, const ScalarField& u0,
                                 int num_steps, const TimeSeriesOptions& options);

/// Per-iteration check of
///   ||e_u^i||^2 + tau delta R ||e_q^i||^2 <= R ||e_u^{i-1}||^2 + 2 C(alpha) R delta^{2/(1-alpha)}
/// with an absolute slack.
std::vector<bool> theorem_bound_monitor(double initial_error, std::span<const double> errors_u,
                                        std::span<const double> errors_q, double delta, double tau,
                                        const TheoryConstants& consts, double slack = 1e-7);

std::string to_string(SchemeKind kind);
std::string to_string(FailureReason reason);

}  // namespace degen
