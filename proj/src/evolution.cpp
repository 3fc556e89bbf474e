#include "dgwave/evolution.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dgwave {
namespace {

struct BranchData {
  cd v[2];        // M-normalized eigenvector
  cd mv[2];       // conj(M v), so alpha = mv . u
  double lambda;  // frequency
};

// Per-frequency eigen decomposition plus modal coefficients of the data.
struct SpectralPropagator {
  GridSpec grid;
  std::vector<BranchData> ph, sp;
  std::vector<cd> a_ph, c_ph, a_sp, c_sp;

  SpectralPropagator(const ZState& u0, const ZState& u1, const GridSpec& g,
                     double s)
      : grid(g) {
    check_penalty(s);
    if (u0.size() != g.N || u1.size() != g.N)
      throw std::invalid_argument("evolve: state length does not match grid N");
    const int N = g.N;
    ph.resize(N);
    sp.resize(N);
    a_ph.resize(N);
    c_ph.resize(N);
    a_sp.resize(N);
    c_sp.resize(N);
    const Spectrum s0 = sdft_forward(u0, g);
    const Spectrum s1 = sdft_forward(u1, g);
    for (int i = 0; i < N; ++i) {
      const double xi = g.xi(i);
      auto [bph, bsp] = eigen_branches(xi, g.h, s);
      const SymbolMatrices sym = symbols(xi, g.h, s);
      auto fill = [&](const BranchPoint& bp, BranchData& bd) {
        bd.v[0] = bp.eigvec[0];
        bd.v[1] = bp.eigvec[1];
        bd.mv[0] = std::conj(sym.M[0][0] * bp.eigvec[0] + sym.M[0][1] * bp.eigvec[1]);
        bd.mv[1] = std::conj(sym.M[1][0] * bp.eigvec[0] + sym.M[1][1] * bp.eigvec[1]);
        bd.lambda = bp.lambda;
      };
      fill(bph, ph[i]);
      fill(bsp, sp[i]);
      a_ph[i] = ph[i].mv[0] * s0.Ahat[i] + ph[i].mv[1] * s0.Jhat[i];
      c_ph[i] = ph[i].mv[0] * s1.Ahat[i] + ph[i].mv[1] * s1.Jhat[i];
      a_sp[i] = sp[i].mv[0] * s0.Ahat[i] + sp[i].mv[1] * s0.Jhat[i];
      c_sp[i] = sp[i].mv[0] * s1.Ahat[i] + sp[i].mv[1] * s1.Jhat[i];
    }
  }

  std::pair<ZState, ZState> at(double t) const {
    const int N = grid.N;
    Spectrum su = Spectrum::zeros(N);
    Spectrum sv = Spectrum::zeros(N);
    for (int i = 0; i < N; ++i) {
      auto add = [&](const BranchData& bd, const cd& a, const cd& c) {
        const double lt = bd.lambda * t;
        const double cosv = std::cos(lt);
        const double sinv = std::sin(lt);
        const double sinc = (bd.lambda > 1e-12) ? sinv / bd.lambda : t;
        const cd coef_u = cosv * a + sinc * c;
        const cd coef_v = -bd.lambda * sinv * a + cosv * c;
        su.Ahat[i] += coef_u * bd.v[0];
        su.Jhat[i] += coef_u * bd.v[1];
        sv.Ahat[i] += coef_v * bd.v[0];
        sv.Jhat[i] += coef_v * bd.v[1];
      };
      add(ph[i], a_ph[i], c_ph[i]);
      add(sp[i], a_sp[i], c_sp[i]);
    }
    return {sdft_inverse(su, grid), sdft_inverse(sv, grid)};
  }
};

template <class State>
double quadratic_form(const LatticeOperator& op, const State& u) {
  const State gu = apply(op, u);
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    if constexpr (std::is_same_v<State, DGState>) {
      acc += gu.A[j] * u.A[j] + gu.J[j] * u.J[j];
    } else {
      acc += (gu.A[j] * std::conj(u.A[j]) + gu.J[j] * std::conj(u.J[j])).real();
    }
  }
  return acc;
}

template <class State>
double quadratic_form_local(const LatticeOperator& op, const State& u,
                            const ObservationRegion& region) {
  const State gu = apply(op, u);
  double acc = 0.0;
  for (int j : region.indices) {
    if constexpr (std::is_same_v<State, DGState>) {
      acc += gu.A[j] * u.A[j] + gu.J[j] * u.J[j];
    } else {
      acc += (gu.A[j] * std::conj(u.A[j]) + gu.J[j] * std::conj(u.J[j])).real();
    }
  }
  return acc;
}

}  // namespace

ObservationRegion ObservationRegion::outside_unit_interval(const GridSpec& grid) {
  ObservationRegion r;
  for (int j = 0; j < grid.N; ++j) {
    const double x = grid.node(j);
    if (x <= -1.0 + 1e-12 || x >= 1.0 - 1e-12) r.indices.push_back(j);
  }
  if (r.indices.empty())
    throw std::invalid_argument("ObservationRegion: empty region (L too small)");
  return r;
}

ObservationRegion ObservationRegion::all(const GridSpec& grid) {
  ObservationRegion r;
  r.indices.resize(grid.N);
  for (int j = 0; j < grid.N; ++j) r.indices[j] = j;
  return r;
}

EvolutionResult evolve_spectral(const ZState& u0, const ZState& u1,
                                const GridSpec& grid, double s,
                                const std::vector<double>& sample_times,
                                const ObservationRegion* region,
                                const std::vector<double>& snapshot_times) {
  SpectralPropagator prop(u0, u1, grid, s);
  EvolutionResult res;
  res.times = sample_times;
  res.energy.reserve(sample_times.size());
  res.local_energy.reserve(sample_times.size());
  for (double t : sample_times) {
    auto [u, v] = prop.at(t);
    res.energy.push_back(total_energy(u, v, grid, s));
    res.local_energy.push_back(
        region ? local_energy(u, v, grid, s, *region) : res.energy.back());
  }
  for (double t : snapshot_times) {
    res.snapshot_times.push_back(t);
    res.snapshots.push_back(prop.at(t));
  }
  return res;
}

EvolutionResult leapfrog(const ZState& u0, const ZState& u1, const GridSpec& grid,
                         double s, const LeapfrogParams& params,
                         const ObservationRegion* region,
                         const std::vector<double>& snapshot_times) {
  check_penalty(s);
  if (u0.size() != grid.N || u1.size() != grid.N)
    throw std::invalid_argument("leapfrog: state length does not match grid N");
  if (!(params.T > 0.0)) throw std::invalid_argument("leapfrog: T must be positive");

  const double lambda_max = max_spurious_lambda(grid, s);
  const double dt_admissible = params.safety * 2.0 / lambda_max;
  double dt = params.dt;
  if (dt <= 0.0) {
    dt = dt_admissible;
  } else if (dt > dt_admissible * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "leapfrog: CFL violation: dt=" << dt << " exceeds safety*2/lambda_max="
        << dt_admissible << " (lambda_max=" << lambda_max << ")";
    throw std::invalid_argument(msg.str());
  }
  const long nsteps = std::max<long>(1, std::lround(std::ceil(params.T / dt - 1e-9)));
  dt = params.T / static_cast<double>(nsteps);

  const LatticeOperator mass = assemble_mass(grid);
  const LatticeOperator stiff = assemble_stiffness_stencil(grid, s);
  const MassSolver solver(mass);

  auto minus_minvr = [&](const ZState& u) {
    ZState ru = apply(stiff, u);
    ZState w = solver.solve(ru);
    for (int j = 0; j < grid.N; ++j) {
      w.A[j] = -w.A[j];
      w.J[j] = -w.J[j];
    }
    return w;  // -M^{-1} R u
  };

  // Which steps to sample.
  std::vector<long> sample_steps;
  if (params.n_samples <= 0) {
    sample_steps.resize(nsteps + 1);
    for (long n = 0; n <= nsteps; ++n) sample_steps[n] = n;
  } else {
    for (int k = 0; k <= params.n_samples; ++k)
      sample_steps.push_back(std::lround(static_cast<double>(k) * nsteps /
                                         params.n_samples));
  }
  std::vector<long> snap_steps;
  for (double t : snapshot_times)
    snap_steps.push_back(std::lround(t / dt));

  EvolutionResult res;
  res.snapshots.resize(snapshot_times.size());
  res.snapshot_times.resize(snapshot_times.size());

  ZState prev = u0;
  ZState w0 = minus_minvr(u0);
  ZState cur = ZState::zeros(grid.N);
  for (int j = 0; j < grid.N; ++j) {
    cur.A[j] = u0.A[j] + dt * u1.A[j] + 0.5 * dt * dt * w0.A[j];
    cur.J[j] = u0.J[j] + dt * u1.J[j] + 0.5 * dt * dt * w0.J[j];
  }

  size_t next_sample = 0;
  auto record = [&](long n, const ZState& un, const ZState& vn) {
    while (next_sample < sample_steps.size() && sample_steps[next_sample] == n) {
      res.times.push_back(n * dt);
      res.energy.push_back(total_energy(un, vn, grid, s));
      res.local_energy.push_back(
          region ? local_energy(un, vn, grid, s, *region) : res.energy.back());
      ++next_sample;
    }
    for (size_t i = 0; i < snap_steps.size(); ++i) {
      if (snap_steps[i] == n) {
        res.snapshot_times[i] = n * dt;
        res.snapshots[i] = {un, vn};
      }
    }
  };

  record(0, u0, u1);
  // prev = U^{n-1}, cur = U^n; velocities by the centered difference.
  for (long n = 1; n <= nsteps; ++n) {
    ZState w = minus_minvr(cur);
    ZState next = ZState::zeros(grid.N);
    for (int j = 0; j < grid.N; ++j) {
      next.A[j] = 2.0 * cur.A[j] - prev.A[j] + dt * dt * w.A[j];
      next.J[j] = 2.0 * cur.J[j] - prev.J[j] + dt * dt * w.J[j];
    }
    ZState vel = ZState::zeros(grid.N);
    const double inv2dt = 0.5 / dt;
    for (int j = 0; j < grid.N; ++j) {
      vel.A[j] = (next.A[j] - prev.A[j]) * inv2dt;
      vel.J[j] = (next.J[j] - prev.J[j]) * inv2dt;
    }
    record(n, cur, vel);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return res;
}

double total_energy(const ZState& u, const ZState& v, const GridSpec& grid,
                    double s) {
  const LatticeOperator stiff = assemble_stiffness_stencil(grid, s);
  const LatticeOperator mass = assemble_mass(grid);
  return 0.5 * (quadratic_form(stiff, u) + quadratic_form(mass, v));
}

double total_energy(const DGState& u, const DGState& v, const GridSpec& grid,
                    double s) {
  const LatticeOperator stiff = assemble_stiffness_stencil(grid, s);
  const LatticeOperator mass = assemble_mass(grid);
  return 0.5 * (quadratic_form(stiff, u) + quadratic_form(mass, v));
}

double local_energy(const ZState& u, const ZState& v, const GridSpec& grid,
                    double s, const ObservationRegion& region) {
  if (region.empty()) throw std::invalid_argument("local_energy: empty region");
  const LatticeOperator stiff = assemble_stiffness_stencil(grid, s);
  const LatticeOperator mass = assemble_mass(grid);
  return 0.5 * (quadratic_form_local(stiff, u, region) +
                quadratic_form_local(mass, v, region));
}

double local_energy(const DGState& u, const DGState& v, const GridSpec& grid,
                    double s, const ObservationRegion& region) {
  if (region.empty()) throw std::invalid_argument("local_energy: empty region");
  const LatticeOperator stiff = assemble_stiffness_stencil(grid, s);
  const LatticeOperator mass = assemble_mass(grid);
  return 0.5 * (quadratic_form_local(stiff, u, region) +
                quadratic_form_local(mass, v, region));
}

double spurious_energy_fraction(const ZState& u, const ZState& v,
                                const GridSpec& grid, double s) {
  check_penalty(s);
  const Spectrum s0 = sdft_forward(u, grid);
  const Spectrum s1 = sdft_forward(v, grid);
  double e_ph = 0.0, e_sp = 0.0;
  for (int i = 0; i < grid.N; ++i) {
    const double xi = grid.xi(i);
    auto [bph, bsp] = eigen_branches(xi, grid.h, s);
    const SymbolMatrices sym = symbols(xi, grid.h, s);
    auto modal = [&](const BranchPoint& bp, double& acc) {
      const cd mv0 =
          std::conj(sym.M[0][0] * bp.eigvec[0] + sym.M[0][1] * bp.eigvec[1]);
      const cd mv1 =
          std::conj(sym.M[1][0] * bp.eigvec[0] + sym.M[1][1] * bp.eigvec[1]);
      const cd a0 = mv0 * s0.Ahat[i] + mv1 * s0.Jhat[i];
      const cd a1 = mv0 * s1.Ahat[i] + mv1 * s1.Jhat[i];
      acc += bp.Lambda * std::norm(a0) + std::norm(a1);
    };
    modal(bph, e_ph);
    modal(bsp, e_sp);
  }
  const double total = e_ph + e_sp;
  return (total > 0.0) ? e_sp / total : 0.0;
}

void require_no_wrap(const GridSpec& grid, double T, double v_max,
                     double packet_half_width) {
  const double needed = 1.0 + v_max * T + packet_half_width;
  if (grid.L + 1e-12 < needed) {
    std::ostringstream msg;
    msg << "wrap guard: L=" << grid.L << " below required " << needed
        << " (= 1 + v_max*T + packet half-width); enlarge the domain";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace dgwave
