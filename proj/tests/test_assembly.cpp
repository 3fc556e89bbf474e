#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "dgwave/assembly.hpp"
#include "dgwave/symbols.hpp"

using namespace dgwave;

namespace {

Eigen::MatrixXd dense(const LatticeOperator& op) {
  const int n = 2 * op.grid.N;
  const std::vector<double> raw = dense_matrix(op);
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = raw[r * n + c];
  return m;
}

DGState random_state(const GridSpec& grid, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DGState u = DGState::zeros(grid.N);
  for (int j = 0; j < grid.N; ++j) {
    u.A[j] = dist(rng);
    u.J[j] = dist(rng);
  }
  return u;
}

}  // namespace

TEST_CASE("mass stencil blocks match the closed form") {
  const GridSpec grid = GridSpec::from_spacing(0.25, 8);
  const double h = grid.h;
  const auto st = assemble_mass(grid).stencil;
  CHECK(st.left.a[0][0] == h / 6.0);
  CHECK(st.left.a[0][1] == -h / 12.0);
  CHECK(st.left.a[1][0] == h / 12.0);
  CHECK(st.left.a[1][1] == -h / 24.0);
  CHECK(st.center.a[0][0] == 2.0 * h / 3.0);
  CHECK(st.center.a[0][1] == 0.0);
  CHECK(st.center.a[1][0] == 0.0);
  CHECK(st.center.a[1][1] == h / 6.0);
  CHECK(st.right.a[0][0] == h / 6.0);
  CHECK(st.right.a[0][1] == h / 12.0);
  CHECK(st.right.a[1][0] == -h / 12.0);
  CHECK(st.right.a[1][1] == -h / 24.0);
}

TEST_CASE("stiffness stencil blocks match the closed form") {
  const GridSpec grid = GridSpec::from_spacing(0.5, 8);
  const double h = grid.h, s = 2.5;
  const auto st = assemble_stiffness_stencil(grid, s).stencil;
  for (const auto* b : {&st.left, &st.right}) {
    CHECK(b->a[0][0] == -1.0 / h);
    CHECK(b->a[0][1] == 0.0);
    CHECK(b->a[1][0] == 0.0);
    CHECK(b->a[1][1] == -1.0 / (4.0 * h));
  }
  CHECK(st.center.a[0][0] == 2.0 / h);
  CHECK(st.center.a[0][1] == 0.0);
  CHECK(st.center.a[1][0] == 0.0);
  CHECK(st.center.a[1][1] == (2.0 * s - 1.0) / (2.0 * h));
}

TEST_CASE("penalty validation") {
  const GridSpec grid = GridSpec::from_spacing(1.0, 8);
  CHECK_THROWS_AS((void)assemble_stiffness_stencil(grid, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)assemble_stiffness_stencil(grid, 0.5),
                  std::invalid_argument);
}

TEST_CASE("quadrature assembly equals stencil assembly to roundoff") {
  for (double s : {1.5, 2.0, 3.0, 5.0}) {
    for (int N : {8, 64}) {
      const GridSpec grid = GridSpec::from_spacing(0.3, N);
      const auto a = assemble_stiffness_stencil(grid, s).stencil;
      const auto b = assemble_stiffness_quadrature(grid, s).stencil;
      for (auto [pa, pb] : {std::pair{&a.left, &b.left},
                            std::pair{&a.center, &b.center},
                            std::pair{&a.right, &b.right}})
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            CHECK(std::abs(pa->a[r][c] - pb->a[r][c]) < 1e-14);
    }
  }
}

TEST_CASE("operators act on plane waves through their symbols") {
  // Applying a stencil operator to exp(i xi_k x_j) (a, b) must equal
  // h * Symbol(xi_k) (a, b) times the same plane wave.
  const GridSpec grid = GridSpec::from_half_width(2.0, 32);
  const double s = 2.0;
  const LatticeOperator mass = assemble_mass(grid);
  const LatticeOperator stiff = assemble_stiffness_stencil(grid, s);
  for (int k : {0, 1, 5, 12, -9, -16}) {
    const double xi = grid.dxi() * k;
    const cd a(0.7, -0.3), b(-0.2, 0.9);
    ZState u = ZState::zeros(grid.N);
    for (int j = 0; j < grid.N; ++j) {
      const cd phase = std::exp(cd(0.0, xi * grid.node(j)));
      u.A[j] = a * phase;
      u.J[j] = b * phase;
    }
    const SymbolMatrices sym = symbols(xi, grid.h, s);
    const ZState mu = apply(mass, u);
    const ZState ru = apply(stiff, u);
    for (int j = 0; j < grid.N; ++j) {
      const cd phase = std::exp(cd(0.0, xi * grid.node(j)));
      const cd ma = grid.h * (sym.M[0][0] * a + sym.M[0][1] * b) * phase;
      const cd mb = grid.h * (sym.M[1][0] * a + sym.M[1][1] * b) * phase;
      CHECK(std::abs(mu.A[j] - ma) < 1e-13);
      CHECK(std::abs(mu.J[j] - mb) < 1e-13);
      CHECK(std::abs(ru.A[j] - grid.h * sym.R11 * a * phase) < 1e-10);
      CHECK(std::abs(ru.J[j] - grid.h * sym.R22 * b * phase) < 1e-10);
    }
  }
}

TEST_CASE("dense matrices are symmetric and definite as expected") {
  const GridSpec grid = GridSpec::from_spacing(0.2, 12);
  const Eigen::MatrixXd m = dense(assemble_mass(grid));
  const Eigen::MatrixXd r = dense(assemble_stiffness_stencil(grid, 2.0));
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  const Eigen::VectorXd me =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
  const Eigen::VectorXd re =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r).eigenvalues();
  CHECK(me.minCoeff() > 0.0);          // mass is positive definite
  CHECK(re.minCoeff() > -1e-12);       // stiffness is PSD (constants in kernel)
}

TEST_CASE("mass solve matches a dense LU oracle") {
  for (int N : {4, 6, 32}) {
    const GridSpec grid = GridSpec::from_spacing(0.37, N);
    const LatticeOperator mass = assemble_mass(grid);
    const DGState rhs = random_state(grid, 100 + N);
    const DGState sol = mass_solve(mass, rhs);

    Eigen::VectorXd b(2 * N);
    for (int j = 0; j < N; ++j) {
      b(2 * j) = rhs.A[j];
      b(2 * j + 1) = rhs.J[j];
    }
    const Eigen::VectorXd x = dense(mass).lu().solve(b);
    for (int j = 0; j < N; ++j) {
      CHECK(sol.A[j] == doctest::Approx(x(2 * j)).epsilon(1e-10));
      CHECK(sol.J[j] == doctest::Approx(x(2 * j + 1)).epsilon(1e-10));
    }

    // residual contract
    const DGState back = apply(mass, sol);
    double rnorm = 0.0, bnorm = 0.0;
    for (int j = 0; j < N; ++j) {
      rnorm += std::pow(back.A[j] - rhs.A[j], 2) + std::pow(back.J[j] - rhs.J[j], 2);
      bnorm += rhs.A[j] * rhs.A[j] + rhs.J[j] * rhs.J[j];
    }
    CHECK(std::sqrt(rnorm) <= 1e-10 * std::sqrt(bnorm));
  }
}

TEST_CASE("mass solve diagonalizes in Fourier space") {
  const GridSpec grid = GridSpec::from_half_width(1.0, 16);
  const LatticeOperator mass = assemble_mass(grid);
  const DGState rhs = random_state(grid, 3);
  const DGState sol = mass_solve(mass, rhs);
  const Spectrum srhs = sdft_forward(rhs, grid);
  const Spectrum ssol = sdft_forward(sol, grid);
  for (int i = 0; i < grid.N; ++i) {
    const SymbolMatrices sym = symbols(grid.xi(i), grid.h, 2.0);
    const cd ma = grid.h * (sym.M[0][0] * ssol.Ahat[i] + sym.M[0][1] * ssol.Jhat[i]);
    const cd mb = grid.h * (sym.M[1][0] * ssol.Ahat[i] + sym.M[1][1] * ssol.Jhat[i]);
    CHECK(std::abs(ma - srhs.Ahat[i]) < 1e-10);
    CHECK(std::abs(mb - srhs.Jhat[i]) < 1e-10);
  }
}

TEST_CASE("complex mass solve") {
  const GridSpec grid = GridSpec::from_spacing(0.1, 10);
  const LatticeOperator mass = assemble_mass(grid);
  ZState rhs = ZState::zeros(grid.N);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int j = 0; j < grid.N; ++j) {
    rhs.A[j] = cd(dist(rng), dist(rng));
    rhs.J[j] = cd(dist(rng), dist(rng));
  }
  const ZState sol = mass_solve(mass, rhs);
  const ZState back = apply(mass, sol);
  for (int j = 0; j < grid.N; ++j) {
    CHECK(std::abs(back.A[j] - rhs.A[j]) < 1e-11);
    CHECK(std::abs(back.J[j] - rhs.J[j]) < 1e-11);
  }
}
