#include "degen/schemes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace degen {

namespace {

double relative(double diff, double norm) {
  if (norm > 0.0) return diff / norm;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

Eigen::VectorXd apply_pointwise(const std::function<double(double)>& fn, const Eigen::VectorXd& u) {
  Eigen::VectorXd out(u.size());
  for (Eigen::Index c = 0; c < u.size(); ++c) out[c] = fn(u[c]);
  return out;
}

void check_input(const AssembledForms& forms, const StepInput& input) {
  const Eigen::Index nc = forms.num_cells();
  if (input.b_prev.size() != nc || input.u_init.size() != nc || input.source.size() != nc) {
    throw std::invalid_argument("iterate: step input does not match the number of cells");
  }
  if (input.q_init && input.q_init->size() != forms.num_edges()) {
    throw std::invalid_argument("iterate: initial flux does not match the number of edges");
  }
}

// Shared linearization loop. Each iteration solves
//   d_T |T| u_T + tau (B q)_T = |T| (d_T u_T^{i-1} - b(u_T^{i-1}) + b_prev_T + tau f_T)
//   M_q q - B^T u = g
// with d_T = L for the L-type schemes and d_T = b'(u_T^{i-1}) for Newton.
StepResult linearization_loop(const AssembledForms& forms, const SchemeConfig& config, const StepInput& input,
                              FactorizationCache& cache) {
  config.validate();
  check_input(forms, input);
  const auto& stop = config.stopping;
  const bool newton = config.kind == SchemeKind::Newton;
  const Eigen::Index nc = forms.num_cells();

  const Eigen::VectorXd fixed_rhs =
      forms.scalar_mass.cwiseProduct(input.b_prev + config.tau * input.source);
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(nc, config.L);

  StepResult result{input.u_init, input.q_init.value_or(FluxField(Eigen::VectorXd::Zero(forms.num_edges()))), {}};
  IterationReport& report = result.report;
  if (stop.mode == StoppingMode::AgainstReference) {
    report.initial_error = l2_norm(forms, ScalarField(input.u_init.values - stop.reference->values));
  }

  bool have_previous_flux = input.q_init.has_value();
  for (int i = 1; i <= config.max_iterations; ++i) {
    const Eigen::VectorXd& u_prev = result.u.values;
    if (newton) weights = apply_pointwise(config.nonlinearity.derivative, u_prev);
    const Eigen::VectorXd b_iter = apply_pointwise(config.nonlinearity.value, u_prev);
    const Eigen::VectorXd rhs_scalar =
        fixed_rhs + forms.scalar_mass.cwiseProduct(weights.cwiseProduct(u_prev) - b_iter);

    SaddleSolution next;
    try {
      next = cache.get(weights, config.tau).solve(weights, config.tau, rhs_scalar, forms.dirichlet_functional);
    } catch (const SingularSystemError&) {
      report.failure_reason = FailureReason::SingularSystem;
      return result;
    } catch (const std::invalid_argument&) {
      // non-finite Newton weights
      report.failure_reason = FailureReason::Divergence;
      return result;
    }
    report.iterations_used = i;

    double error = 0.0;
    bool done = false;
    if (stop.mode == StoppingMode::AgainstReference) {
      error = l2_norm(forms, ScalarField(next.u.values - stop.reference->values));
      done = error < stop.tol;
    } else {
      const double du = l2_norm(forms, ScalarField(next.u.values - result.u.values));
      const double dq = l2_norm(forms, FluxField(next.q.values - result.q.values));
      error = du + dq;
      if (have_previous_flux) {
        const double rel = relative(du, l2_norm(forms, next.u)) + relative(dq, l2_norm(forms, next.q));
        done = error < stop.tol && rel < stop.tol;
      }
    }
    report.error_history.push_back(error);
    if (stop.reference_flux) {
      report.flux_error_history.push_back(l2_norm(forms, FluxField(next.q.values - stop.reference_flux->values)));
    }

    result.u = std::move(next.u);
    result.q = std::move(next.q);
    have_previous_flux = true;

    if (!std::isfinite(error) || error > config.divergence_threshold || !result.u.values.allFinite()) {
      report.failure_reason = FailureReason::Divergence;
      return result;
    }
    if (done) {
      report.converged = true;
      return result;
    }
  }
  report.failure_reason = FailureReason::MaxIterations;
  return result;
}

}  // namespace

void SchemeConfig::validate() const {
  if (!nonlinearity.value || !nonlinearity.derivative) {
    throw std::invalid_argument("SchemeConfig: nonlinearity is not set");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("SchemeConfig: tau must be positive");
  if (!(stopping.tol > 0.0)) throw std::invalid_argument("SchemeConfig: TOL must be positive");
  if (max_iterations < 1) throw std::invalid_argument("SchemeConfig: max_iterations must be >= 1");
  if (kind != SchemeKind::Newton && !(L > 0.0)) {
    throw std::invalid_argument("SchemeConfig: L must be positive for the L-type schemes");
  }
  if (kind == SchemeKind::HL && regularization) {
    throw std::invalid_argument("SchemeConfig: the HL-scheme works on the unregularized b");
  }
  if (stopping.mode == StoppingMode::AgainstReference && !stopping.reference) {
    throw std::invalid_argument("SchemeConfig: stopping against a reference requires a reference field");
  }
}

SchemeConfig SchemeConfig::hl(const PowerLaw& b, double L, double tau, StoppingCriterion stop) {
  SchemeConfig c;
  c.kind = SchemeKind::HL;
  c.nonlinearity = Nonlinearity::power_law(b);
  c.L = L;
  c.tau = tau;
  c.stopping = std::move(stop);
  c.max_iterations = 20000;
  return c;
}

SchemeConfig SchemeConfig::regularized_l(const Regularization& reg, double L, double tau, StoppingCriterion stop) {
  SchemeConfig c;
  c.kind = SchemeKind::RegularizedL;
  c.nonlinearity = Nonlinearity::regularized(reg);
  c.regularization = reg;
  c.L = L;
  c.tau = tau;
  c.stopping = std::move(stop);
  c.max_iterations = 20000;
  return c;
}

SchemeConfig SchemeConfig::newton(const Regularization& reg, double tau, StoppingCriterion stop) {
  SchemeConfig c;
  c.kind = SchemeKind::Newton;
  c.nonlinearity = Nonlinearity::regularized(reg);
  c.regularization = reg;
  c.tau = tau;
  c.stopping = std::move(stop);
  c.max_iterations = 50;
  return c;
}

StepResult hl_iterate(const AssembledForms& forms, const SchemeConfig& config, const StepInput& input,
                      FactorizationCache& cache) {
  if (config.kind != SchemeKind::HL) throw std::invalid_argument("hl_iterate: config is not an HL-scheme");
  return linearization_loop(forms, config, input, cache);
}

StepResult regularized_l_iterate(const AssembledForms& forms, const SchemeConfig& config, const StepInput& input,
                                 FactorizationCache& cache) {
  if (config.kind != SchemeKind::RegularizedL) {
    throw std::invalid_argument("regularized_l_iterate: config is not a regularized L-scheme");
  }
  return linearization_loop(forms, config, input, cache);
}

StepResult newton_iterate(const AssembledForms& forms, const SchemeConfig& config, const StepInput& input,
                          FactorizationCache& cache) {
  if (config.kind != SchemeKind::Newton) throw std::invalid_argument("newton_iterate: config is not Newton");
  return linearization_loop(forms, config, input, cache);
}

StepResult iterate(const AssembledForms& forms, const SchemeConfig& config, const StepInput& input,
                   FactorizationCache& cache) {
  return linearization_loop(forms, config, input, cache);
}

TimeSeriesResult run_time_series(const AssembledForms& forms, const SchemeConfig& config, const ScalarField& u0,
                                 int num_steps, const TimeSeriesOptions& options) {
  if (num_steps < 1) throw std::invalid_argument("run_time_series: need at least one step");
  if (!options.source) throw std::invalid_argument("run_time_series: source provider missing");
  if (config.stopping.mode == StoppingMode::AgainstReference && !options.reference) {
    throw std::invalid_argument("run_time_series: reference provider missing");
  }

  TimeSeriesResult series;
  FactorizationCache cache(forms);
  ScalarField u_prev = u0;
  std::optional<FluxField> q_prev;
  SchemeConfig step_config = config;

  for (int n = 1; n <= num_steps; ++n) {
    if (options.reference) step_config.stopping.reference = options.reference(n);
    if (options.reference_flux) step_config.stopping.reference_flux = options.reference_flux(n);

    StepInput input{apply_pointwise(config.nonlinearity.value, u_prev.values), u_prev, q_prev, options.source(n)};
    StepResult step = iterate(forms, step_config, input, cache);
    series.total_iterations += step.report.iterations_used;
    const bool ok = step.report.converged;
    u_prev = step.u;
    q_prev = step.q;
    series.steps.push_back(std::move(step));
    if (!ok) {
      series.converged = false;
      if (options.abort_on_failure) break;
    }
  }
  series.factorizations = cache.factorizations();
  return series;
}

std::vector<bool> theorem_bound_monitor(double initial_error, std::span<const double> errors_u,
                                        std::span<const double> errors_q, double delta, double tau,
                                        const TheoryConstants& consts, double slack) {
  if (errors_q.size() != errors_u.size()) {
    throw std::invalid_argument("theorem_bound_monitor: error histories differ in length");
  }
  const double R = contraction_factor(delta, tau, consts);
  const double additive = R * per_iteration_accumulation(delta, consts);
  std::vector<bool> holds;
  holds.reserve(errors_u.size());
  double previous = initial_error;
  for (std::size_t i = 0; i < errors_u.size(); ++i) {
    const double lhs = errors_u[i] * errors_u[i] + tau * delta * R * errors_q[i] * errors_q[i];
    const double rhs = R * previous * previous + additive;
    holds.push_back(lhs <= rhs + slack);
    previous = errors_u[i];
  }
  return holds;
}

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::HL:
      return "hl";
    case SchemeKind::RegularizedL:
      return "lreg";
    case SchemeKind::Newton:
      return "newton";
  }
  return "unknown";
}

std::string to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::MaxIterations:
      return "max_iterations";
    case FailureReason::Divergence:
      return "divergence";
    case FailureReason::SingularSystem:
      return "singular system";
  }
  return "unknown";
}

}  // namespace degen
