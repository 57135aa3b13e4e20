#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "degen/nonlinearity.hpp"

using namespace degen;

namespace {

Regularization reg(RegularizationKind kind, double eps, double shift = 0.0, double alpha = 0.5) {
  return {kind, eps, shift, PowerLaw{alpha, 1.0}};
}

constexpr RegularizationKind kKinds[] = {RegularizationKind::Linear, RegularizationKind::Quadratic};

}  // namespace

TEST_CASE("b examples") {
  const PowerLaw half{0.5, 1.0};
  CHECK(b(half, -2.0) == 0.0);
  CHECK(b(half, 0.0) == 0.0);
  CHECK(b(half, 0.25) == 0.5);
  for (double a : {0.1, 0.5, 0.9, 1.0}) CHECK(b(PowerLaw{a, 1.0}, 1.0) == 1.0);
  CHECK(b_prime(half, -1.0) == 0.0);
  CHECK(b_prime(half, 0.25) == doctest::Approx(1.0));
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(PowerLaw({0.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(PowerLaw({1.5, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(PowerLaw({0.5, 0.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(reg(RegularizationKind::Linear, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(reg(RegularizationKind::Linear, 1e-3, -1.0).validate(), std::invalid_argument);
  CHECK_NOTHROW(reg(RegularizationKind::Quadratic, 1e-3, 0.1).validate());
}

TEST_CASE("regularizations agree with b outside (0, eps)") {
  for (auto kind : kKinds) {
    const auto r = reg(kind, 1e-4);
    for (double u : {-3.0, -1e-9, 0.0, 1e-4, 2e-4, 0.3, 7.0}) {
      CHECK(b_eps(r, u) == doctest::Approx(b(r.base, u)).epsilon(1e-14));
    }
  }
  // continuity at eps: value eps^alpha = 0.01
  CHECK(b_eps(reg(RegularizationKind::Linear, 1e-4), 1e-4) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(b_eps(reg(RegularizationKind::Linear, 1e-4), 1e-4 * (1 - 1e-12)) == doctest::Approx(0.01).epsilon(1e-10));
}

TEST_CASE("quadratic kind is C1 at eps") {
  const auto r = reg(RegularizationKind::Quadratic, 1e-4);
  const double eps = 1e-4;
  CHECK(b_eps_prime(r, eps * (1 - 1e-12)) == doctest::Approx(50.0).epsilon(1e-8));
  CHECK(b_eps_prime(r, eps * (1 + 1e-12)) == doctest::Approx(50.0).epsilon(1e-8));
  CHECK(b_eps(r, eps * (1 - 1e-12)) == doctest::Approx(0.01).epsilon(1e-10));
}

TEST_CASE("linear kind derivative conventions at the kinks") {
  const auto r = reg(RegularizationKind::Linear, 1e-4);
  CHECK(b_eps_prime(r, 0.0) == doctest::Approx(100.0));  // right limit
  CHECK(b_eps_prime(r, 1e-4) == doctest::Approx(100.0));  // left limit
  CHECK(b_eps_prime(r, 5e-5) == doctest::Approx(100.0));
  CHECK(b_eps_prime(r, -1.0) == 0.0);
  const auto shifted = reg(RegularizationKind::Linear, 1e-4, 0.25);
  CHECK(b_eps_prime(shifted, -1.0) == 0.25);
  CHECK(b_eps(shifted, -2.0) == doctest::Approx(-0.5));
}

TEST_CASE("monotonicity on random pairs") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-0.5, 1.5);
  std::uniform_real_distribution<double> small(-2e-3, 2e-3);
  for (int trial = 0; trial < 20000; ++trial) {
    double u = trial % 2 ? dist(rng) : small(rng);
    double v = trial % 2 ? dist(rng) : small(rng);
    if (u > v) std::swap(u, v);
    CHECK(b(PowerLaw{0.5, 1.0}, u) <= b(PowerLaw{0.5, 1.0}, v));
    for (auto kind : kKinds) {
      for (double shift : {0.0, 1e-3}) {
        const auto r = reg(kind, 1e-3, shift);
        CHECK(b_eps(r, u) <= b_eps(r, v));
        if (shift > 0.0) CHECK(b_eps_prime(r, u) >= shift);
      }
    }
  }
}

TEST_CASE("Hoelder bound |b(u) - b(v)| <= L_b |u - v|^alpha") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 2.0);
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    const PowerLaw spec{a, 1.0};
    for (int trial = 0; trial < 5000; ++trial) {
      const double u = dist(rng), v = dist(rng);
      CHECK(std::abs(b(spec, u) - b(spec, v)) <= std::pow(std::abs(u - v), a) * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("regularization gap bound") {
  // sup of u^a - eps^{a-1} u over (0, eps) by grid scan
  const double eps = 1e-4;
  const auto lin = reg(RegularizationKind::Linear, eps);
  double sup = 0.0;
  for (int k = 0; k <= 200000; ++k) {
    const double u = eps * k / 200000.0;
    sup = std::max(sup, b(lin.base, u) - b_eps(lin, u));
  }
  CHECK(sup == doctest::Approx(0.0025).epsilon(1e-6));
  CHECK(regularization_gap_bound(0.5, eps) == doctest::Approx(0.0025).epsilon(1e-12));
  CHECK(regularization_gap_bound(1.0, eps) == 0.0);

  std::mt19937 rng(5);
  for (double e : {1e-3, 1e-4, 1e-5}) {
    const double bound = regularization_gap_bound(0.5, e);
    std::uniform_real_distribution<double> dist(-e, 3.0 * e);
    for (auto kind : kKinds) {
      const auto r = reg(kind, e);
      // dense grid first, random points second
      for (int k = 0; k <= 10000; ++k) {
        const double u = e * k / 10000.0;
        const double gap = b(r.base, u) - b_eps(r, u);
        CHECK(gap >= -1e-15);
        CHECK(gap <= bound * (1 + 1e-12));
      }
      for (int trial = 0; trial < 2000; ++trial) {
        const double u = dist(rng);
        const double gap = b(r.base, u) - b_eps(r, u);
        CHECK(gap >= -1e-15);
        CHECK(gap <= bound * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("derivatives match central finite differences away from the kinks") {
  std::mt19937 rng(17);
  for (auto kind : kKinds) {
    for (double eps : {1e-3, 1e-4}) {
      const auto r = reg(kind, eps, 0.0);
      std::uniform_real_distribution<double> dist(-eps, 50.0 * eps);
      int checked = 0;
      while (checked < 500) {
        const double u = dist(rng);
        if (std::abs(u) < 1e-2 * eps || std::abs(u - eps) < 1e-2 * eps) continue;
        const double h = 1e-6 * std::max(std::abs(u), eps) * 1e-2;
        const double fd = (b_eps(r, u + h) - b_eps(r, u - h)) / (2.0 * h);
        const double exact = b_eps_prime(r, u);
        if (exact == 0.0) {
          CHECK(std::abs(fd) < 1e-12);
        } else {
          CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
        }
        ++checked;
      }
    }
  }
  const PowerLaw half{0.5, 1.0};
  for (double u : {1e-3, 0.1, 0.7, 3.0}) {
    const double h = 1e-6 * u;
    CHECK(std::abs((b(half, u + h) - b(half, u - h)) / (2 * h) - b_prime(half, u)) <= 1e-6 * b_prime(half, u));
  }
}

TEST_CASE("Lipschitz constants") {
  CHECK(lipschitz_constants(reg(RegularizationKind::Linear, 1e-4)).value == doctest::Approx(100.0));
  CHECK(lipschitz_constants(reg(RegularizationKind::Linear, 1e-3)).value == doctest::Approx(31.6228).epsilon(1e-5));
  CHECK(lipschitz_constants(reg(RegularizationKind::Linear, 1e-4, 0.5)).value == doctest::Approx(100.5));
  CHECK(lipschitz_constants(reg(RegularizationKind::Linear, 1e-3, 0.0, 1.0)).value == doctest::Approx(1.0));
  CHECK(lipschitz_constants(reg(RegularizationKind::Linear, 1e-4)).derivative ==
        doctest::Approx(0.25 * std::pow(1e-4, -1.5)));

  // both constants bound the observed slopes on a grid
  for (auto kind : kKinds) {
    const double eps = 1e-3;
    const auto r = reg(kind, eps);
    const auto lc = lipschitz_constants(r);
    double max_slope = 0.0, max_curv = 0.0;
    const double h = eps / 4000.0;
    for (int k = -200; k < 40000; ++k) {
      const double u = k * h;
      max_slope = std::max(max_slope, (b_eps(r, u + h) - b_eps(r, u)) / h);
      // curvature on the smooth pieces only
      if ((u > 2 * h && u + 2 * h < eps) || u > eps + 2 * h) {
        max_curv = std::max(max_curv, std::abs(b_eps_prime(r, u + h) - b_eps_prime(r, u)) / h);
      }
    }
    CHECK(max_slope <= lc.value * (1 + 1e-9));
    CHECK(max_slope >= 0.99 * lc.value);
    CHECK(max_curv <= lc.derivative * (1 + 1e-6));
  }
}

TEST_CASE("type-erased nonlinearity bundles") {
  const auto pl = Nonlinearity::power_law(PowerLaw{0.5, 1.0});
  CHECK(pl(0.25) == 0.5);
  CHECK(pl.alpha == 0.5);
  const auto r = Nonlinearity::regularized(reg(RegularizationKind::Quadratic, 1e-3));
  CHECK(r.name == "regularized_quadratic");
  CHECK(r.derivative(1.0) == doctest::Approx(0.5));
  const auto id = Nonlinearity::identity();
  CHECK(id(-3.0) == -3.0);
  CHECK(id.derivative(7.0) == 1.0);
  CHECK_THROWS_AS(Nonlinearity::power_law(PowerLaw{2.0, 1.0}), std::invalid_argument);
}
