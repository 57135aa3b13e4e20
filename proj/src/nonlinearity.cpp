#include "degen/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace degen {

void PowerLaw::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("PowerLaw: alpha must lie in (0, 1]");
  }
  if (!(holder_constant > 0.0)) {
    throw std::invalid_argument("PowerLaw: Hoelder constant must be positive");
  }
}

void Regularization::validate() const {
  base.validate();
  if (!(epsilon > 0.0)) throw std::invalid_argument("Regularization: epsilon must be positive");
  if (!(shift >= 0.0)) throw std::invalid_argument("Regularization: shift must be nonnegative");
}

double b(const PowerLaw& spec, double u) {
  if (u <= 0.0) return 0.0;
  return spec.alpha == 0.5 ? std::sqrt(u) : std::pow(u, spec.alpha);
}

double b_prime(const PowerLaw& spec, double u) {
  if (u <= 0.0) return 0.0;
  return spec.alpha == 1.0 ? 1.0 : spec.alpha * std::pow(u, spec.alpha - 1.0);
}

double b_eps(const Regularization& spec, double u) {
  const double a = spec.base.alpha;
  const double eps = spec.epsilon;
  double value = 0.0;
  if (u >= eps) {
    value = std::pow(u, a);
  } else if (u > 0.0) {
    if (spec.kind == RegularizationKind::Linear) {
      value = std::pow(eps, a - 1.0) * u;
    } else {
      value = (a - 1.0) * std::pow(eps, a - 2.0) * u * u + (2.0 - a) * std::pow(eps, a - 1.0) * u;
    }
  }
  return value + spec.shift * u;
}

double b_eps_prime(const Regularization& spec, double u) {
  const double a = spec.base.alpha;
  const double eps = spec.epsilon;
  double slope = 0.0;
  if (u > eps) {
    slope = a * std::pow(u, a - 1.0);
  } else if (u >= 0.0) {
    if (spec.kind == RegularizationKind::Linear) {
      slope = std::pow(eps, a - 1.0);
    } else {
      slope = 2.0 * (a - 1.0) * std::pow(eps, a - 2.0) * u + (2.0 - a) * std::pow(eps, a - 1.0);
    }
  }
  return slope + spec.shift;
}

LipschitzConstants lipschitz_constants(const Regularization& spec) {
  const double a = spec.base.alpha;
  const double eps = spec.epsilon;
  if (spec.kind == RegularizationKind::Linear) {
    return {std::pow(eps, a - 1.0) + spec.shift, a * (1.0 - a) * std::pow(eps, a - 2.0)};
  }
  // The quadratic piece has its largest slope (2 - a) eps^{a-1} at u = 0, and
  // its second derivative 2 (a - 1) eps^{a-2} dominates a (a - 1) u^{a-2} for u >= eps.
  return {(2.0 - a) * std::pow(eps, a - 1.0) + spec.shift, 2.0 * (1.0 - a) * std::pow(eps, a - 2.0)};
}

double regularization_gap_bound(double alpha, double epsilon) {
  if (alpha >= 1.0) return 0.0;
  return (1.0 - alpha) * std::pow(alpha, alpha / (1.0 - alpha)) * std::pow(epsilon, alpha);
}

Nonlinearity Nonlinearity::power_law(const PowerLaw& spec) {
  spec.validate();
  return {[spec](double u) { return b(spec, u); },
          [spec](double u) { return b_prime(spec, u); },
          spec.alpha,
          spec.holder_constant,
          "power_law"};
}

Nonlinearity Nonlinearity::regularized(const Regularization& spec) {
  spec.validate();
  return {[spec](double u) { return b_eps(spec, u); },
          [spec](double u) { return b_eps_prime(spec, u); },
          spec.base.alpha,
          spec.base.holder_constant,
          "regularized_" + to_string(spec.kind)};
}

Nonlinearity Nonlinearity::identity() {
  return {[](double u) { return u; }, [](double) { return 1.0; }, 1.0, 1.0, "identity"};
}

std::string to_string(RegularizationKind kind) {
  return kind == RegularizationKind::Linear ? "linear" : "quadratic";
}

}  // namespace degen
