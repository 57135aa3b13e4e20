#include "degen/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace degen {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_holder(const TheoryConstants& consts) {
  if (!(consts.alpha > 0.0 && consts.alpha < 1.0)) {
    throw std::invalid_argument("theory: alpha must lie in (0, 1); the Lipschitz case has no accumulation term");
  }
  require_positive(consts.c_omega, "C_Omega");
  require_positive(consts.sigma_omega, "sigma(Omega)");
  require_positive(consts.holder_constant, "L_b");
}

// Rounds up while ignoring floating-point noise, e.g. pow(1e-4, -0.5) may
// evaluate to 100.00000000000001.
double ceil_tolerant(double x) { return std::ceil(x * (1.0 - 1e-12)); }

}  // namespace

double contraction_factor(double delta, double tau, const TheoryConstants& consts) {
  require_positive(delta, "delta");
  require_positive(tau, "tau");
  require_positive(consts.c_omega, "C_Omega");
  return 1.0 / (1.0 + tau * delta / (consts.c_omega * consts.c_omega));
}

double c_alpha(const TheoryConstants& consts) {
  require_holder(consts);
  const double a = consts.alpha;
  return 0.5 * (1.0 - a) *
         std::pow(consts.holder_constant * std::pow(2.0 * a, a), 2.0 / (1.0 - a)) *
         std::pow(1.0 + a, -(1.0 + a) / (1.0 - a)) * consts.sigma_omega;
}

double per_iteration_accumulation(double delta, const TheoryConstants& consts) {
  require_positive(delta, "delta");
  return 2.0 * c_alpha(consts) * std::pow(delta, 2.0 / (1.0 - consts.alpha));
}

double accumulated_error_bound(double delta, double tau, const TheoryConstants& consts) {
  require_positive(delta, "delta");
  require_positive(tau, "tau");
  const double a = consts.alpha;
  return 2.0 * c_alpha(consts) * consts.c_omega * consts.c_omega *
         std::pow(delta, (1.0 + a) / (1.0 - a)) / tau;
}

HolderParameters select_delta(double tol, double tau, const TheoryConstants& consts) {
  require_positive(tol, "TOL");
  require_positive(tau, "tau");
  const double a = consts.alpha;
  const double base = tol * tau / (4.0 * c_alpha(consts) * consts.c_omega * consts.c_omega);
  const double delta = std::pow(base, (1.0 - a) / (1.0 + a));
  const double L = ceil_tolerant(1.0 / delta);
  return {delta, L, 1.0 / L};
}

double select_L_regularized(double epsilon, const PowerLaw& spec) {
  require_positive(epsilon, "epsilon");
  spec.validate();
  return ceil_tolerant(0.5 * std::pow(epsilon, spec.alpha - 1.0));
}

}  // namespace degen
