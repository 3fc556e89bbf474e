#include "dgwave/initial_data.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dgwave/assembly.hpp"

namespace dgwave {
namespace {

double gaussian_hat(double u) {
  return std::sqrt(2.0 * kPi) * std::exp(-0.5 * u * u);
}

void warn_regime(const WavePacketSpec& spec, const GridSpec& grid) {
  // Asymptotic regime gamma >> 1, h*gamma << 1; soft conditions only.
  if (spec.gamma < 4.0 || spec.gamma * grid.h > 0.25)
    std::fprintf(stderr,
                 "dgwave: warning: wave packet outside the asymptotic regime "
                 "(gamma=%g, h*gamma=%g)\n",
                 spec.gamma, spec.gamma * grid.h);
}

}  // namespace

double default_gamma(double h) { return 1.0 / std::sqrt(h); }

std::pair<ZState, ZState> make_wavepacket(const WavePacketSpec& spec,
                                          const GridSpec& grid, double s) {
  check_penalty(s);
  if (!(spec.gamma > 0.0))
    throw std::invalid_argument("make_wavepacket: gamma must be positive");
  if (std::abs(spec.xi0) > grid.nyquist() * (1.0 + 1e-12))
    throw std::invalid_argument("make_wavepacket: carrier xi0 outside Pi_h");
  warn_regime(spec, grid);

  // Gaussian-envelope tail bound at the domain edges: the spatial envelope is
  // exp(-gamma^2 (x - x*)^2 / 2), so demand gamma*(L - |x*|) large enough for
  // a 1e-8 relative tail.
  const double margin = grid.L - std::abs(spec.x_star);
  if (!(margin > 0.0) || spec.gamma * margin < 6.07) {
    throw std::invalid_argument(
        "make_wavepacket: packet tails at the domain edge exceed 1e-8 of "
        "peak; enlarge L or increase gamma");
  }

  auto envelope = spec.envelope_hat ? spec.envelope_hat
                                    : std::function<double(double)>(gaussian_hat);

  const int N = grid.N;
  Spectrum u0 = Spectrum::zeros(N);
  Spectrum u1 = Spectrum::zeros(N);
  const double amp = std::sqrt(2.0 * kPi / spec.gamma);
  for (int i = 0; i < N; ++i) {
    const double xi = grid.xi(i);
    const double dx = xi - spec.xi0;
    const cd phase(std::cos(-spec.x_star * dx), std::sin(-spec.x_star * dx));
    const cd scalar = amp * envelope(dx / spec.gamma) * phase;

    auto [ph, sp] = eigen_branches(xi, grid.h, s);
    const BranchPoint& bp = (spec.branch == Branch::Physical) ? ph : sp;
    u0.Ahat[i] = bp.eigvec[0] * scalar;
    u0.Jhat[i] = bp.eigvec[1] * scalar;
    // velocity -i lambda uhat selects the right-moving branch
    // exp(i(xi x - lambda t)), so packets travel at +group velocity
    const cd il(0.0, -bp.lambda);
    u1.Ahat[i] = il * u0.Ahat[i];
    u1.Jhat[i] = il * u0.Jhat[i];
  }
  return {sdft_inverse(u0, grid), sdft_inverse(u1, grid)};
}

void mode_project(Spectrum& u0, Spectrum& u1, const GridSpec& grid, double s,
                  Branch branch) {
  if (u0.size() != grid.N || u1.size() != grid.N)
    throw std::invalid_argument("mode_project: spectrum length mismatch");
  for (int i = 0; i < grid.N; ++i) {
    const double xi = grid.xi(i);
    auto [ph, sp] = eigen_branches(xi, grid.h, s);
    const BranchPoint& bp = (branch == Branch::Physical) ? ph : sp;
    const SymbolMatrices sym = symbols(xi, grid.h, s);
    const cd mv0 = std::conj(bp.eigvec[0] * sym.M[0][0] + bp.eigvec[1] * sym.M[0][1]);
    const cd mv1 = std::conj(bp.eigvec[0] * sym.M[1][0] + bp.eigvec[1] * sym.M[1][1]);
    // alpha = v* M u; since M is Hermitian, v* M = (M v)^*.
    const cd a0 = mv0 * u0.Ahat[i] + mv1 * u0.Jhat[i];
    const cd a1 = mv0 * u1.Ahat[i] + mv1 * u1.Jhat[i];
    u0.Ahat[i] = bp.eigvec[0] * a0;
    u0.Jhat[i] = bp.eigvec[1] * a0;
    u1.Ahat[i] = bp.eigvec[0] * a1;
    u1.Jhat[i] = bp.eigvec[1] * a1;
  }
}

DGState fourier_filter(const DGState& state, const GridSpec& grid, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("fourier_filter: delta must lie in (0,1)");
  Spectrum sp = sdft_forward(state, grid);
  const double cutoff = kPi * delta / grid.h;
  for (int i = 0; i < grid.N; ++i) {
    if (std::abs(grid.xi(i)) > cutoff) {
      sp.Ahat[i] = 0.0;
      sp.Jhat[i] = 0.0;
    }
  }
  return sdft_inverse_real(sp, grid);
}

ZState fourier_filter(const ZState& state, const GridSpec& grid, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("fourier_filter: delta must lie in (0,1)");
  Spectrum sp = sdft_forward(state, grid);
  const double cutoff = kPi * delta / grid.h;
  for (int i = 0; i < grid.N; ++i) {
    if (std::abs(grid.xi(i)) > cutoff) {
      sp.Ahat[i] = 0.0;
      sp.Jhat[i] = 0.0;
    }
  }
  return sdft_inverse(sp, grid);
}

DGState bigrid_data(std::span<const double> odd_values, const GridSpec& grid) {
  const int N = grid.N;
  if (static_cast<int>(odd_values.size()) != N / 2)
    throw std::invalid_argument("bigrid_data: need exactly N/2 odd-node values");
  DGState out = DGState::zeros(N);
  for (int j = 0; j < N / 2; ++j) out.A[2 * j + 1] = odd_values[j];
  for (int j = 0; j < N / 2; ++j) {
    const int left = (2 * j - 1 + N) % N;
    out.A[2 * j] = 0.5 * (out.A[left] + out.A[2 * j + 1]);
  }
  return out;
}

}  // namespace dgwave
