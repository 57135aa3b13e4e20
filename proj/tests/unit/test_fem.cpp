#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "degen/fem.hpp"
#include "helpers.hpp"
#include "quadrature_oracle.hpp"

using namespace degen;
using oracle::brute_force_mass;
using oracle::gauss_legendre;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST_CASE("Gauss-Legendre oracle integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  double s0 = 0.0, s7 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s7 += w[i] * std::pow(x[i], 7);
  }
  CHECK(s0 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s7 == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("flux mass matches brute-force quadrature entry-wise") {
  for (int n : {1, 2}) {
    CAPTURE(n);
    const Mesh m = Mesh::structured_unit_square(n);
    const AssembledForms forms = assemble_forms(m, 0.0);
    const Eigen::MatrixXd mq = dense(forms.flux_mass);
    for (int e = 0; e < static_cast<int>(m.num_edges()); ++e) {
      for (int f = 0; f < static_cast<int>(m.num_edges()); ++f) {
        CAPTURE(e);
        CAPTURE(f);
        CHECK(std::abs(mq(e, f) - brute_force_mass(m, e, f)) < 1e-12);
      }
    }
  }
}

TEST_CASE("diagonal edge self-pairing on the 1x1 mesh") {
  const Mesh m = Mesh::structured_unit_square(1);
  const AssembledForms forms = assemble_forms(m, 0.0);
  int diag = -1;
  for (int e = 0; e < 5; ++e) {
    if (!m.is_boundary_edge(e)) diag = e;
  }
  REQUIRE(diag >= 0);
  const double oracle = brute_force_mass(m, diag, diag);
  CHECK(std::abs(forms.flux_mass.coeff(diag, diag) - oracle) < 1e-12);
  // hand value: edge-midpoint distances to the opposite vertex give 1/6 per triangle
  CHECK(oracle == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("flux mass is symmetric positive definite") {
  for (int n : {1, 2, 4}) {
    CAPTURE(n);
    const Mesh m = Mesh::structured_unit_square(n);
    const Eigen::MatrixXd mq = dense(assemble_forms(m, 0.0).flux_mass);
    CHECK((mq - mq.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mq);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("divergence is a signed incidence matrix") {
  const Mesh m = Mesh::structured_unit_square(3);
  const AssembledForms forms = assemble_forms(m, 0.0);
  const Eigen::MatrixXd b = dense(forms.divergence);
  CHECK(b.rows() == static_cast<Eigen::Index>(m.num_cells()));
  CHECK(b.cols() == static_cast<Eigen::Index>(m.num_edges()));
  for (Eigen::Index e = 0; e < b.cols(); ++e) {
    const double nnz = (b.col(e).array() != 0.0).count();
    if (m.is_boundary_edge(static_cast<int>(e))) {
      CHECK(nnz == 1);
      CHECK(b.col(e).sum() == 1.0);
    } else {
      CHECK(nnz == 2);
      CHECK(b.col(e).sum() == 0.0);
    }
  }
}

TEST_CASE("constant flux fields are divergence-free") {
  for (int n : {1, 2, 4}) {
    const Mesh m = Mesh::structured_unit_square(n);
    const AssembledForms forms = assemble_forms(m, 0.0);
    for (const Point c : {Point{1.0, 0.0}, Point{0.0, 1.0}, Point{-0.3, 2.5}}) {
      const FluxField q = interpolate_flux(m, [c](const Point&) { return c; });
      CHECK((forms.divergence * q.values).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("divergence of a linear field matches its analytic divergence") {
  // v = (x, y) has div v = 2 and lies in RT0 on every triangle
  const Mesh m = Mesh::structured_unit_square(4);
  const AssembledForms forms = assemble_forms(m, 0.0);
  const FluxField q = interpolate_flux(m, [](const Point& p) { return p; });
  const Eigen::VectorXd div = forms.divergence * q.values;
  for (Eigen::Index c = 0; c < div.size(); ++c) CHECK(div[c] == doctest::Approx(2.0 * forms.scalar_mass[c]));
}

TEST_CASE("rt0 basis has unit flux through its own edge only") {
  const Mesh m = Mesh::structured_unit_square(2);
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
    const auto geo = cell_geometry(m, c);
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        const auto& eg = geo.edges[l];
        const auto& nrm = m.edges()[m.cell_edges()[c][l].edge].normal;
        const Point phi = rt0_basis(m, c, k, eg.midpoint);
        const double outward_flux = eg.outward_sign * eg.length * (phi.x * nrm.x + phi.y * nrm.y);
        const double expected = k == l ? m.cell_edges()[c][k].sign : 0.0;
        CHECK(outward_flux == doctest::Approx(expected).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("dirichlet functional") {
  const Mesh m = Mesh::structured_unit_square(1);
  CHECK(assemble_forms(m, 0.0).dirichlet_functional.cwiseAbs().maxCoeff() == 0.0);

  const Mesh m4 = Mesh::structured_unit_square(4);
  const AssembledForms forms = assemble_forms(m4, -0.5);
  for (int e = 0; e < static_cast<int>(m4.num_edges()); ++e) {
    // -int_E g_D phi_E . n with unit integrated flux
    CHECK(forms.dirichlet_functional[e] == (m4.is_boundary_edge(e) ? 0.5 : 0.0));
  }

  const AssembledForms linear = assemble_forms(m4, [](const Point& p) { return p.x; });
  for (int e : m4.boundary_edges()) {
    const auto& ev = m4.edges()[e].vertices;
    const double mid_x = 0.5 * (m4.vertices()[ev[0]].x + m4.vertices()[ev[1]].x);
    CHECK(linear.dirichlet_functional[e] == doctest::Approx(-mid_x));
  }
}

TEST_CASE("scalar projection uses the barycenter") {
  const Mesh m = Mesh::structured_unit_square(1);
  CHECK(project_scalar(m, [](const Point&) { return 1.0; }).values.isOnes());
  const ScalarField px = project_scalar(m, [](const Point& p) { return p.x; });
  const ScalarField sum = project_scalar(m, [](const Point& p) { return p.x + p.y; });
  for (int c = 0; c < 2; ++c) {
    const auto g = cell_geometry(m, c);
    CHECK(px.values[c] == doctest::Approx(g.barycenter.x));
    CHECK(sum.values[c] == doctest::Approx(g.barycenter.x + g.barycenter.y));
  }
  const auto& t = m.cells()[0];
  const auto v = m.vertices();
  if (v[t[1]].x == 1 && v[t[1]].y == 0 && v[t[2]].x == 1 && v[t[2]].y == 1) CHECK(px.values[0] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("norm examples") {
  const Mesh m = Mesh::structured_unit_square(3);
  const AssembledForms forms = assemble_forms(m, 0.0);
  ScalarField one = project_scalar(m, [](const Point&) { return 1.0; });
  CHECK(l2_norm(m, one) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l2_norm(forms, one) == doctest::Approx(1.0).epsilon(1e-14));
  ScalarField c = project_scalar(m, [](const Point&) { return -2.5; });
  CHECK(l2_norm(m, c) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(l2_norm(forms, FluxField::zeros(m)) == 0.0);

  // |(1,0)|_{L2} = 1 on the unit square, and RT0 reproduces constants
  const FluxField q = interpolate_flux(m, [](const Point&) { return Point{1.0, 0.0}; });
  CHECK(l2_norm(forms, q) == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS(l2_norm(m, ScalarField(Eigen::VectorXd::Zero(3))), std::invalid_argument);
  CHECK_THROWS_AS(l2_norm(forms, FluxField(Eigen::VectorXd::Zero(3))), std::invalid_argument);
}

TEST_CASE("norms are homogeneous and satisfy the triangle inequality") {
  std::mt19937 rng(7);
  for (int n : {1, 2, 4}) {
    const Mesh m = Mesh::structured_unit_square(n);
    const AssembledForms forms = assemble_forms(m, 0.0);
    for (int trial = 0; trial < 50; ++trial) {
      const ScalarField u(testing::random_vector(forms.num_cells(), rng));
      const ScalarField w(testing::random_vector(forms.num_cells(), rng));
      const FluxField p(testing::random_vector(forms.num_edges(), rng));
      const FluxField q(testing::random_vector(forms.num_edges(), rng));
      const double lambda = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);

      CHECK(std::abs(l2_norm(forms, ScalarField(lambda * u.values)) - std::abs(lambda) * l2_norm(forms, u)) <
            1e-12);
      CHECK(std::abs(l2_norm(forms, FluxField(lambda * q.values)) - std::abs(lambda) * l2_norm(forms, q)) < 1e-12);
      CHECK(l2_norm(forms, ScalarField(u.values + w.values)) <= l2_norm(forms, u) + l2_norm(forms, w) + 1e-12);
      CHECK(l2_norm(forms, FluxField(p.values + q.values)) <= l2_norm(forms, p) + l2_norm(forms, q) + 1e-12);
      CHECK(std::abs(l2_norm(m, u) - l2_norm(forms, u)) < 1e-12);
    }
  }
}
