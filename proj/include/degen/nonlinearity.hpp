#pragma once

#include <functional>
#include <string>

namespace degen {

/// b(u) = max{u, 0}^alpha, Hoelder continuous with exponent alpha and
/// constant L_b (equal to 1 for this family).
struct PowerLaw {
  double alpha = 0.5;
  double holder_constant = 1.0;

  /// Throws std::invalid_argument unless 0 < alpha <= 1 and L_b > 0.
  void validate() const;
};

enum class RegularizationKind { Linear, Quadratic };

/// Lipschitz approximation b_eps of a PowerLaw, modified on (0, eps) only.
/// With shift s > 0 the function s*u is added, bounding b_eps' below by s.
struct Regularization {
  RegularizationKind kind = RegularizationKind::Linear;
  double epsilon = 1e-3;
  double shift = 0.0;
  PowerLaw base;

  void validate() const;
};

double b(const PowerLaw& spec, double u);
/// Classical derivative for u > 0, zero for u <= 0. Unbounded as u -> 0+
/// when alpha < 1.
double b_prime(const PowerLaw& spec, double u);

double b_eps(const Regularization& spec, double u);
/// At the kinks of the linear kind the right limit is used at 0 and the
/// left limit at eps.
double b_eps_prime(const Regularization& spec, double u);

struct LipschitzConstants {
  double value;       // L_{b_eps}
  double derivative;  // L_{b_eps'}
};

LipschitzConstants lipschitz_constants(const Regularization& spec);

/// Upper bound (1 - alpha) alpha^{alpha / (1 - alpha)} eps^alpha on b - b_eps.
/// Returns 0 for alpha = 1.
double regularization_gap_bound(double alpha, double epsilon);

/// Type-erased nonlinearity handed to the iteration drivers: any monotone
/// (b, b') pair with its Hoelder data.
struct Nonlinearity {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double alpha = 1.0;
  double holder_constant = 1.0;
  std::string name;

  double operator()(double u) const { return value(u); }

  static Nonlinearity power_law(const PowerLaw& spec);
  static Nonlinearity regularized(const Regularization& spec);
  /// b(u) = u.
  static Nonlinearity identity();
};

std::string to_string(RegularizationKind kind);

}  // namespace degen
