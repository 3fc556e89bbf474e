#pragma once

#include <functional>
#include <span>
#include <utility>

#include "dgwave/lattice.hpp"
#include "dgwave/symbols.hpp"

namespace dgwave {

// Branch-concentrated wave packet: spectral profile
//   uhat0(xi) = sqrt(2 pi / gamma) * envelope_hat((xi - xi0)/gamma)
//               * exp(-i x_star (xi - xi0)),
// lifted along the branch eigenvector with velocity ihat = i lambda uhat0.
struct WavePacketSpec {
  double x_star = 0.0;
  double xi0 = 0.0;
  double gamma = 1.0;
  Branch branch = Branch::Physical;
  // Fourier transform of the Schwartz envelope; default Gaussian.
  std::function<double(double)> envelope_hat;
};

// Canonical scaling gamma(h) = h^{-1/2}.
double default_gamma(double h);

std::pair<ZState, ZState> make_wavepacket(const WavePacketSpec& spec,
                                          const GridSpec& grid, double s);

// Per-frequency M-orthogonal projection of a data pair onto one eigenbranch.
void mode_project(Spectrum& u0, Spectrum& u1, const GridSpec& grid, double s,
                  Branch branch);

// Zero all spectral content with |xi| > pi*delta/h. Projection: idempotent
// and norm non-increasing.
DGState fourier_filter(const DGState& state, const GridSpec& grid, double delta);
ZState fourier_filter(const ZState& state, const GridSpec& grid, double delta);

// Jump-free data from odd-node values: even nodes are the mean of their odd
// neighbors (periodic wrap), J identically zero.
DGState bigrid_data(std::span<const double> odd_values, const GridSpec& grid);

}  // namespace dgwave
