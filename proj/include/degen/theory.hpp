#pragma once

#include "degen/nonlinearity.hpp"

namespace degen {

/// Constants entering the convergence estimate of the Hoelder L-scheme.
/// On the unit square both c_omega and sigma_omega equal 1.
struct TheoryConstants {
  double c_omega = 1.0;      // inf-sup / Poincare constant of the mixed pair
  double sigma_omega = 1.0;  // domain volume
  double alpha = 0.5;
  double holder_constant = 1.0;

  static TheoryConstants unit_square(const PowerLaw& spec) {
    return {1.0, 1.0, spec.alpha, spec.holder_constant};
  }
};

/// R(delta, tau) = (1 + tau delta / C_Omega^2)^{-1}.
double contraction_factor(double delta, double tau, const TheoryConstants& consts);

/// C(alpha) = (1-a)/2 (L_b (2a)^a)^{2/(1-a)} (1+a)^{-(1+a)/(1-a)} sigma(Omega).
/// Undefined (throws) for alpha = 1.
double c_alpha(const TheoryConstants& consts);

/// Additive term of a single iteration, 2 C(alpha) delta^{2/(1-alpha)}
/// (before multiplication by R).
double per_iteration_accumulation(double delta, const TheoryConstants& consts);

/// Geometric sum of the additive terms, 2 C(alpha) delta^{2/(1-alpha)} R/(1-R),
/// which simplifies to 2 C(alpha) C_Omega^2 delta^{(1+alpha)/(1-alpha)} / tau.
double accumulated_error_bound(double delta, double tau, const TheoryConstants& consts);

struct HolderParameters {
  double delta;            // closed-form delta with accumulated bound = TOL/2
  double L;                // 1/delta rounded up to the next integer
  double delta_effective;  // 1/L, the delta actually used
};

/// Chooses delta so that the accumulated error stays below TOL/2.
HolderParameters select_delta(double tol, double tau, const TheoryConstants& consts);

/// L = ceil(L_{b_eps} / 2) = ceil(eps^{alpha-1} / 2), the smallest integer
/// satisfying the convergence condition of the standard L-scheme.
double select_L_regularized(double epsilon, const PowerLaw& spec);

}  // namespace degen
