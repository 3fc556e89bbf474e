#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dgwave/evolution.hpp"
#include "dgwave/initial_data.hpp"

using namespace dgwave;

namespace {

ZState random_zstate(const GridSpec& grid, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ZState u = ZState::zeros(grid.N);
  for (int j = 0; j < grid.N; ++j) {
    u.A[j] = cd(dist(rng), dist(rng));
    u.J[j] = cd(dist(rng), dist(rng));
  }
  return u;
}

double l2_diff(const ZState& a, const ZState& b) {
  double acc = 0.0;
  for (int j = 0; j < a.size(); ++j)
    acc += std::norm(a.A[j] - b.A[j]) + std::norm(a.J[j] - b.J[j]);
  return std::sqrt(acc);
}

// plane-wave eigenmode of one branch at grid frequency index i
ZState eigenmode(const GridSpec& grid, double s, int i, Branch branch) {
  auto [ph, sp] = eigen_branches(grid.xi(i), grid.h, s);
  const BranchPoint& bp = (branch == Branch::Physical) ? ph : sp;
  ZState u = ZState::zeros(grid.N);
  for (int j = 0; j < grid.N; ++j) {
    const cd phase = std::exp(cd(0.0, grid.xi(i) * grid.node(j)));
    u.A[j] = bp.eigvec[0] * phase;
    u.J[j] = bp.eigvec[1] * phase;
  }
  return u;
}

}  // namespace

TEST_CASE("spectral evolution at t = 0 reproduces the data") {
  const GridSpec grid = GridSpec::from_half_width(1.0, 64);
  const ZState u0 = random_zstate(grid, 1);
  const ZState u1 = random_zstate(grid, 2);
  const auto res = evolve_spectral(u0, u1, grid, 2.0, {0.0}, nullptr, {0.0});
  CHECK(l2_diff(res.snapshots[0].first, u0) < 1e-11);
  CHECK(l2_diff(res.snapshots[0].second, u1) < 1e-11);
}

TEST_CASE("eigenmode data oscillates at cos(lambda t)") {
  const GridSpec grid = GridSpec::from_half_width(1.0, 32);
  const double s = 2.0;
  const int i = 20;  // some nonzero frequency
  for (Branch b : {Branch::Physical, Branch::Spurious}) {
    const ZState u0 = eigenmode(grid, s, i, b);
    const ZState u1 = ZState::zeros(grid.N);
    auto [ph, sp] = eigen_branches(grid.xi(i), grid.h, s);
    const double lambda = (b == Branch::Physical) ? ph.lambda : sp.lambda;
    const double t = 0.73;
    const auto res = evolve_spectral(u0, u1, grid, s, {t}, nullptr, {t});
    ZState expected = u0;
    for (int j = 0; j < grid.N; ++j) {
      expected.A[j] *= std::cos(lambda * t);
      expected.J[j] *= std::cos(lambda * t);
    }
    CHECK(l2_diff(res.snapshots[0].first, expected) < 1e-10);
  }
}

TEST_CASE("spectral energy is conserved to roundoff") {
  const GridSpec grid = GridSpec::from_half_width(1.0, 128);
  const ZState u0 = random_zstate(grid, 3);
  const ZState u1 = random_zstate(grid, 4);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.1 * k);
  const auto res = evolve_spectral(u0, u1, grid, 2.0, times);
  for (double e : res.energy)
    CHECK(std::abs(e - res.energy.front()) <= 1e-10 * res.energy.front());
}

TEST_CASE("energy agrees with its Fourier-side expression") {
  const GridSpec grid = GridSpec::from_half_width(1.0, 64);
  const ZState u = random_zstate(grid, 5);
  const ZState v = random_zstate(grid, 6);
  const double s = 2.5;
  const double e = total_energy(u, v, grid, s);
  const Spectrum su = sdft_forward(u, grid);
  const Spectrum sv = sdft_forward(v, grid);
  double espec = 0.0;
  for (int i = 0; i < grid.N; ++i) {
    const SymbolMatrices sym = symbols(grid.xi(i), grid.h, s);
    espec += sym.R11 * std::norm(su.Ahat[i]) + sym.R22 * std::norm(su.Jhat[i]);
    const cd ma = sym.M[0][0] * sv.Ahat[i] + sym.M[0][1] * sv.Jhat[i];
    const cd mb = sym.M[1][0] * sv.Ahat[i] + sym.M[1][1] * sv.Jhat[i];
    espec += (std::conj(sv.Ahat[i]) * ma + std::conj(sv.Jhat[i]) * mb).real();
  }
  espec *= grid.dxi() / (4.0 * kPi);
  CHECK(e == doctest::Approx(espec).epsilon(1e-10));
}

TEST_CASE("local energy partitions the total") {
  const GridSpec grid = GridSpec::from_half_width(2.0, 64);
  const ZState u = random_zstate(grid, 7);
  const ZState v = random_zstate(grid, 8);
  const double s = 2.0;
  const ObservationRegion omega = ObservationRegion::outside_unit_interval(grid);
  ObservationRegion inside;
  for (int j = 0; j < grid.N; ++j) {
    const double x = grid.node(j);
    if (!(x <= -1.0 + 1e-12 || x >= 1.0 - 1e-12)) inside.indices.push_back(j);
  }
  const double e = total_energy(u, v, grid, s);
  const double eo = local_energy(u, v, grid, s, omega);
  const double ei = local_energy(u, v, grid, s, inside);
  CHECK(e == doctest::Approx(eo + ei).epsilon(1e-12));
  const ObservationRegion all = ObservationRegion::all(grid);
  CHECK(local_energy(u, v, grid, s, all) == doctest::Approx(e).epsilon(1e-12));
}

TEST_CASE("observation region construction") {
  const GridSpec small = GridSpec::from_half_width(0.5, 8);
  CHECK_THROWS_AS((void)ObservationRegion::outside_unit_interval(small),
                  std::invalid_argument);
  const GridSpec grid = GridSpec::from_half_width(2.0, 8);  // h = 0.5
  const auto r = ObservationRegion::outside_unit_interval(grid);
  // nodes: -2,-1.5,-1,-0.5,0,0.5,1,1.5 -> indices 0,1,2,6,7
  CHECK(r.indices == std::vector<int>{0, 1, 2, 6, 7});
}

TEST_CASE("leapfrog refuses CFL violations") {
  const GridSpec grid = GridSpec::from_half_width(1.0, 32);
  const ZState u0 = random_zstate(grid, 9);
  const ZState u1 = ZState::zeros(grid.N);
  LeapfrogParams p;
  p.T = 1.0;
  p.safety = 0.5;
  p.dt = 10.0 / max_spurious_lambda(grid, 2.0);  // beyond 2/lambda_max
  CHECK_THROWS_AS((void)leapfrog(u0, u1, grid, 2.0, p), std::invalid_argument);
}

TEST_CASE("leapfrog converges to the spectral solution at order 2") {
  const GridSpec grid = GridSpec::from_half_width(1.0, 128);
  const double s = 2.0, T = 2.0;
  const ZState u0 = random_zstate(grid, 10);
  const ZState u1 = random_zstate(grid, 11);
  const auto exact = evolve_spectral(u0, u1, grid, s, {T}, nullptr, {T});

  const double dt_adm = 2.0 / max_spurious_lambda(grid, s);
  auto err_at = [&](double safety) {
    LeapfrogParams p;
    p.T = T;
    p.safety = 1.0;
    const long n = std::lround(std::ceil(T / (safety * dt_adm)));
    p.dt = T / static_cast<double>(n);
    const auto res = leapfrog(u0, u1, grid, s, p, nullptr, {T});
    return l2_diff(res.snapshots[0].first, exact.snapshots[0].first);
  };
  const double e1 = err_at(0.1);
  const double e2 = err_at(0.05);
  const double ratio = e1 / e2;
  CHECK(ratio > 4.0 * 0.9);
  CHECK(ratio < 4.0 * 1.1);
}

TEST_CASE("leapfrog energy drift is bounded at moderate CFL") {
  const GridSpec grid = GridSpec::from_half_width(1.0, 64);
  const ZState u0 = random_zstate(grid, 12);
  const ZState u1 = random_zstate(grid, 13);
  LeapfrogParams p;
  p.T = 1.0;
  p.safety = 0.2;
  p.n_samples = 10;
  const auto res = leapfrog(u0, u1, grid, 2.0, p);
  const double e0 = res.energy.front();
  for (double e : res.energy) CHECK(std::abs(e - e0) < 5e-2 * e0);
}

TEST_CASE("physical packets stay branch-pure under evolution") {
  const GridSpec grid = GridSpec::from_spacing(0.02, 512);
  const double s = 2.0;
  WavePacketSpec spec;
  spec.xi0 = 0.5 * grid.nyquist();
  spec.gamma = default_gamma(grid.h);
  spec.branch = Branch::Physical;
  auto [u0, u1] = make_wavepacket(spec, grid, s);
  const auto res =
      evolve_spectral(u0, u1, grid, s, {0.0}, nullptr, {0.0, 1.0, 2.0});
  for (const auto& [u, v] : res.snapshots)
    CHECK(spurious_energy_fraction(u, v, grid, s) <= 1e-10);
}

TEST_CASE("wrap guard") {
  const GridSpec grid = GridSpec::from_half_width(2.0, 32);
  CHECK_THROWS_AS(require_no_wrap(grid, 4.0, 1.0, 0.5), std::invalid_argument);
  CHECK_NOTHROW(require_no_wrap(grid, 0.5, 1.0, 0.4));
}
