#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgwave/evolution.hpp"
#include "dgwave/initial_data.hpp"

namespace dgwave {

enum class DataKind {
  Packet,         // branch-concentrated wave packet
  RandomPhysical, // seeded broadband data, mode-projected to one branch
  BigridRandom,   // seeded odd-node values through the bi-grid rule
};

enum class FilterKind { None, Fourier, Bigrid };
enum class EngineKind { Spectral, Leapfrog };

struct ObsExperimentSpec {
  double s = 2.0;
  double T = 4.0;
  std::vector<double> h_list;      // strictly decreasing
  DataKind data = DataKind::Packet;
  Branch branch = Branch::Physical;
  double xi0_frac = 0.95;          // carrier as a fraction of pi/h
  double gamma = 0.0;              // <= 0: default h^{-1/2}
  double x_star = 0.0;
  FilterKind filter = FilterKind::None;
  double delta = 0.5;              // Fourier filter band fraction
  EngineKind engine = EngineKind::Spectral;
  double dt_safety = 0.5;
  int n_samples = 400;             // energy samples per run
  std::uint64_t seed = 1;
  int jobs = 1;                    // sweep parallelism; rows are independent
};

struct ObsRow {
  double h = 0.0;
  double e_total = 0.0;
  double int_e_omega = 0.0;
  double quotient = 0.0;  // C_h = E(0) / int_0^T E_Omega dt
};

struct ObsReport {
  std::vector<ObsRow> rows;
  double slope = 0.0;      // fitted log C_h vs log(1/h)
  double residual = 0.0;   // rms residual of the fit
  double max_min_ratio = 0.0;
  bool monotone = false;   // C_h increasing as h decreases
  bool doubling = false;   // C_{h/2}/C_h >= 2 at each halving
  std::string note;
};

// Sharp solution-wise constant E(0) / int_0^T E_Omega dt by trapezoid
// quadrature of the stored local-energy trace.
double observability_quotient(const EvolutionResult& result);

// Builds the initial data a spec describes on a given grid (shared by the
// experiment driver and the CLI).
std::pair<ZState, ZState> build_initial_data(const ObsExperimentSpec& spec,
                                             const GridSpec& grid, double h_index);

// Chooses L so the wrap guard holds and N is a power of two.
GridSpec experiment_grid(const ObsExperimentSpec& spec, double h);

// C_h sweep over the h-list; summary carries the fitted growth slope and
// the uniformity ratio.
ObsReport run_observability(const ObsExperimentSpec& spec);

// Travel-time heuristic for the uniform observation horizon of delta-filtered
// physical-mode data: 2 / min group velocity on the kept band.
double uniform_time_bound(double s, double delta, double h);

// Packet sweep probing quotient growth under mesh halving.
ObsReport blowup_experiment(const ObsExperimentSpec& spec);

// Filtered/bi-grid sweep probing quotient uniformity; insists the horizon
// exceeds the travel-time bound.
ObsReport uniformity_experiment(const ObsExperimentSpec& spec);

}  // namespace dgwave
