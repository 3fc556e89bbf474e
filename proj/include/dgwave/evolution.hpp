#pragma once

#include <utility>
#include <vector>

#include "dgwave/assembly.hpp"
#include "dgwave/lattice.hpp"
#include "dgwave/symbols.hpp"

namespace dgwave {

// Node set {j : x_j in Omega}; the default observation region is the
// complement of the open interval (-1, 1).
struct ObservationRegion {
  std::vector<int> indices;

  static ObservationRegion outside_unit_interval(const GridSpec& grid);
  static ObservationRegion all(const GridSpec& grid);
  bool empty() const { return indices.empty(); }
};

struct EvolutionResult {
  std::vector<double> times;               // energy sample instants
  std::vector<double> energy;              // total energy per instant
  std::vector<double> local_energy;        // Omega energy per instant
  std::vector<double> snapshot_times;
  std::vector<std::pair<ZState, ZState>> snapshots;  // (U, dU/dt) pairs
};

// Exact per-frequency propagator for Uhat_tt + S(xi) Uhat = 0: both branch
// coefficients evolve as cos(lambda t) and sin(lambda t)/lambda.
EvolutionResult evolve_spectral(const ZState& u0, const ZState& u1,
                                const GridSpec& grid, double s,
                                const std::vector<double>& sample_times,
                                const ObservationRegion* region = nullptr,
                                const std::vector<double>& snapshot_times = {});

struct LeapfrogParams {
  double T = 1.0;
  double dt = 0.0;          // 0 -> derived from safety * 2 / lambda_max
  double safety = 0.5;
  int n_samples = 0;        // 0 -> every step
};

// Central-difference scheme M (U^{n+1} - 2U^n + U^{n-1})/dt^2 + R U^n = 0.
// Refuses time steps beyond safety * 2 / lambda_max.
EvolutionResult leapfrog(const ZState& u0, const ZState& u1, const GridSpec& grid,
                         double s, const LeapfrogParams& params,
                         const ObservationRegion* region = nullptr,
                         const std::vector<double>& snapshot_times = {});

// E = (1/2)(<R u, u> + <M v, v>) with the unweighted l2 pairing.
double total_energy(const ZState& u, const ZState& v, const GridSpec& grid,
                    double s);
double total_energy(const DGState& u, const DGState& v, const GridSpec& grid,
                    double s);

// Same quadratic forms with the pairing restricted to region indices
// (operators applied globally).
double local_energy(const ZState& u, const ZState& v, const GridSpec& grid,
                    double s, const ObservationRegion& region);
double local_energy(const DGState& u, const DGState& v, const GridSpec& grid,
                    double s, const ObservationRegion& region);

// Fraction of total energy carried by the spurious eigenbranch.
double spurious_energy_fraction(const ZState& u, const ZState& v,
                                const GridSpec& grid, double s);

// Torus wrap guard: refuse when a front launched from |x*| + packet
// half-width can reach the boundary within time T.
void require_no_wrap(const GridSpec& grid, double T, double v_max,
                     double packet_half_width);

}  // namespace dgwave
