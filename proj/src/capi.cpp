#include "dgwave.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgwave/experiments.hpp"

namespace {

thread_local std::string g_last_error;

template <class F>
dg_status wrap(F&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DG_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return DG_EINVAL;
  } catch (const std::runtime_error& e) {
    g_last_error = e.what();
    return DG_ENUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DG_EINTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DG_EINTERNAL;
  }
}

dgwave::Branch to_branch(int b) {
  if (b == DG_BRANCH_PHYSICAL) return dgwave::Branch::Physical;
  if (b == DG_BRANCH_SPURIOUS) return dgwave::Branch::Spurious;
  throw std::invalid_argument("invalid branch selector");
}

dgwave::DataKind to_data_kind(int k) {
  switch (k) {
    case DG_DATA_PACKET:
      return dgwave::DataKind::Packet;
    case DG_DATA_RANDOM_PHYSICAL:
      return dgwave::DataKind::RandomPhysical;
    case DG_DATA_BIGRID_RANDOM:
      return dgwave::DataKind::BigridRandom;
  }
  throw std::invalid_argument("invalid data kind selector");
}

dgwave::FilterKind to_filter(int f) {
  switch (f) {
    case DG_FILTER_NONE:
      return dgwave::FilterKind::None;
    case DG_FILTER_FOURIER:
      return dgwave::FilterKind::Fourier;
    case DG_FILTER_BIGRID:
      return dgwave::FilterKind::Bigrid;
  }
  throw std::invalid_argument("invalid filter selector");
}

dgwave::ObsExperimentSpec sim_to_spec(const dg_sim_config& cfg) {
  dgwave::ObsExperimentSpec spec;
  spec.s = cfg.s;
  spec.T = cfg.T;
  spec.data = to_data_kind(cfg.data_kind);
  spec.branch = to_branch(cfg.branch);
  spec.xi0_frac = cfg.xi0_frac;
  spec.gamma = cfg.gamma;
  spec.x_star = cfg.x_star;
  spec.filter = to_filter(cfg.filter);
  spec.delta = cfg.delta;
  spec.dt_safety = cfg.dt_safety;
  spec.seed = cfg.seed;
  return spec;
}

// Bi-grid rule applied as a filter: keep the odd-node averages, rebuild the
// even nodes by neighbor averaging, drop the jumps.
dgwave::ZState bigrid_apply(const dgwave::ZState& u, const dgwave::GridSpec& grid) {
  const int N = grid.N;
  std::vector<double> odd_re(N / 2), odd_im(N / 2);
  for (int j = 0; j < N / 2; ++j) {
    odd_re[j] = u.A[2 * j + 1].real();
    odd_im[j] = u.A[2 * j + 1].imag();
  }
  const dgwave::DGState re = dgwave::bigrid_data(odd_re, grid);
  const dgwave::DGState im = dgwave::bigrid_data(odd_im, grid);
  dgwave::ZState out = dgwave::ZState::zeros(N);
  for (int j = 0; j < N; ++j) out.A[j] = dgwave::cd(re.A[j], im.A[j]);
  return out;
}

}  // namespace

struct dg_sim {
  dgwave::GridSpec grid;
  dgwave::EvolutionResult result;
  double cross_engine_error = -1.0;
};

struct dg_filter_result {
  dgwave::GridSpec grid;
  dgwave::ZState before, after;
  dgwave::Spectrum spec_before, spec_after;
};

extern "C" {

const char* dg_version(void) { return "0.1.0"; }

const char* dg_status_name(dg_status status) {
  switch (status) {
    case DG_OK:
      return "ok";
    case DG_EINVAL:
      return "invalid argument";
    case DG_ENUMERIC:
      return "numerical failure";
    case DG_EINTERNAL:
      return "internal error";
  }
  return "unknown";
}

const char* dg_last_error(void) { return g_last_error.c_str(); }

dg_status dg_dispersion_curve(double s, double h, int n_samples,
                              dg_dispersion_sample* out) {
  return wrap([&] {
    if (!out) throw std::invalid_argument("null output buffer");
    const auto curve = dgwave::dispersion_curve(s, h, n_samples);
    for (int i = 0; i < n_samples; ++i) {
      const auto& c = curve[i];
      out[i] = dg_dispersion_sample{c.xi,       c.lambda_ph,  c.lambda_sp,
                                    c.vg_ph,    c.vg_sp,      c.omega_fd,
                                    c.lambda_fem, c.lambda_cont,
                                    c.degenerate ? 1 : 0};
    }
  });
}

dg_status dg_group_velocity(double s, double h, double xi, int branch,
                            double* vg) {
  return wrap([&] {
    if (!vg) throw std::invalid_argument("null output");
    *vg = dgwave::group_velocity(xi, h, s, to_branch(branch));
  });
}

dg_status dg_critical_points(double s, double h, int branch, double* out,
                             int capacity, int* count) {
  return wrap([&] {
    if (!count) throw std::invalid_argument("null count");
    const auto pts = dgwave::find_critical_points(h, s, to_branch(branch));
    *count = static_cast<int>(pts.size());
    if (out) {
      const int n = std::min<int>(capacity, *count);
      for (int i = 0; i < n; ++i) out[i] = pts[i];
    }
  });
}

void dg_sim_config_init(dg_sim_config* cfg) {
  if (!cfg) return;
  std::memset(cfg, 0, sizeof(*cfg));
  cfg->s = 2.0;
  cfg->h = 0.02;
  cfg->N = 512;
  cfg->T = 2.0;
  cfg->engine = DG_ENGINE_SPECTRAL;
  cfg->dt_safety = 0.5;
  cfg->data_kind = DG_DATA_PACKET;
  cfg->branch = DG_BRANCH_PHYSICAL;
  cfg->xi0_frac = 0.5;
  cfg->gamma = 0.0;
  cfg->x_star = 0.0;
  cfg->filter = DG_FILTER_NONE;
  cfg->delta = 0.5;
  cfg->n_samples = 200;
  cfg->n_snapshots = 5;
  cfg->seed = 1;
}

dg_status dg_sim_run(const dg_sim_config* cfg, dg_sim** out) {
  return wrap([&] {
    if (!cfg || !out) throw std::invalid_argument("null argument");
    if (cfg->n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    if (!(cfg->T > 0.0)) throw std::invalid_argument("T must be positive");
    const dgwave::GridSpec grid = dgwave::GridSpec::from_spacing(cfg->h, cfg->N);
    const dgwave::ObsExperimentSpec spec = sim_to_spec(*cfg);
    auto [u0, u1] = dgwave::build_initial_data(spec, grid, 0.0);
    if (spec.filter == dgwave::FilterKind::Bigrid) {
      u0 = bigrid_apply(u0, grid);
      u1 = bigrid_apply(u1, grid);
    }
    const auto region = dgwave::ObservationRegion::outside_unit_interval(grid);

    std::vector<double> sample_times(cfg->n_samples + 1);
    for (int k = 0; k <= cfg->n_samples; ++k)
      sample_times[k] = cfg->T * k / cfg->n_samples;
    std::vector<double> snapshot_times;
    if (cfg->n_snapshots == 1) {
      snapshot_times.push_back(0.0);
    } else if (cfg->n_snapshots > 1) {
      for (int k = 0; k < cfg->n_snapshots; ++k)
        snapshot_times.push_back(cfg->T * k / (cfg->n_snapshots - 1));
    }

    auto sim = std::make_unique<dg_sim>();
    sim->grid = grid;

    dgwave::LeapfrogParams lp;
    lp.T = cfg->T;
    lp.safety = cfg->dt_safety;
    lp.n_samples = cfg->n_samples;

    if (cfg->engine == DG_ENGINE_SPECTRAL) {
      sim->result = dgwave::evolve_spectral(u0, u1, grid, cfg->s, sample_times,
                                            &region, snapshot_times);
    } else if (cfg->engine == DG_ENGINE_LEAPFROG) {
      sim->result =
          dgwave::leapfrog(u0, u1, grid, cfg->s, lp, &region, snapshot_times);
    } else if (cfg->engine == DG_ENGINE_BOTH) {
      sim->result = dgwave::evolve_spectral(u0, u1, grid, cfg->s, sample_times,
                                            &region, snapshot_times);
      std::vector<double> final_only{cfg->T};
      const auto exact =
          dgwave::evolve_spectral(u0, u1, grid, cfg->s, {cfg->T}, nullptr,
                                  final_only);
      const auto stepped =
          dgwave::leapfrog(u0, u1, grid, cfg->s, lp, nullptr, final_only);
      const auto& ue = exact.snapshots.front().first;
      const auto& ul = stepped.snapshots.front().first;
      double diff = 0.0, ref = 0.0;
      for (int j = 0; j < grid.N; ++j) {
        diff += std::norm(ue.A[j] - ul.A[j]) + std::norm(ue.J[j] - ul.J[j]);
        ref += std::norm(ue.A[j]) + std::norm(ue.J[j]);
      }
      sim->cross_engine_error =
          (ref > 0.0) ? std::sqrt(diff / ref) : std::sqrt(diff);
    } else {
      throw std::invalid_argument("invalid engine selector");
    }
    *out = sim.release();
  });
}

void dg_sim_free(dg_sim* sim) { delete sim; }

int dg_sim_grid_size(const dg_sim* sim) { return sim ? sim->grid.N : 0; }

double dg_sim_domain_half_width(const dg_sim* sim) {
  return sim ? sim->grid.L : 0.0;
}

int dg_sim_sample_count(const dg_sim* sim) {
  return sim ? static_cast<int>(sim->result.times.size()) : 0;
}

dg_status dg_sim_energy_trace(const dg_sim* sim, double* t, double* e_total,
                              double* e_omega) {
  return wrap([&] {
    if (!sim) throw std::invalid_argument("null simulation handle");
    const auto& r = sim->result;
    for (size_t i = 0; i < r.times.size(); ++i) {
      if (t) t[i] = r.times[i];
      if (e_total) e_total[i] = r.energy[i];
      if (e_omega) e_omega[i] = r.local_energy[i];
    }
  });
}

int dg_sim_snapshot_count(const dg_sim* sim) {
  return sim ? static_cast<int>(sim->result.snapshots.size()) : 0;
}

dg_status dg_sim_snapshot(const dg_sim* sim, int index, double* t, double* x,
                          double* a_re, double* a_im, double* j_re,
                          double* j_im) {
  return wrap([&] {
    if (!sim) throw std::invalid_argument("null simulation handle");
    if (index < 0 || index >= static_cast<int>(sim->result.snapshots.size()))
      throw std::invalid_argument("snapshot index out of range");
    const auto& [u, v] = sim->result.snapshots[index];
    (void)v;
    if (t) *t = sim->result.snapshot_times[index];
    for (int j = 0; j < sim->grid.N; ++j) {
      if (x) x[j] = sim->grid.node(j);
      if (a_re) a_re[j] = u.A[j].real();
      if (a_im) a_im[j] = u.A[j].imag();
      if (j_re) j_re[j] = u.J[j].real();
      if (j_im) j_im[j] = u.J[j].imag();
    }
  });
}

dg_status dg_sim_cross_engine_error(const dg_sim* sim, double* error) {
  return wrap([&] {
    if (!sim || !error) throw std::invalid_argument("null argument");
    if (sim->cross_engine_error < 0.0)
      throw std::invalid_argument(
          "cross-engine error only available for DG_ENGINE_BOTH runs");
    *error = sim->cross_engine_error;
  });
}

dg_status dg_filter_run(const dg_sim_config* cfg, dg_filter_result** out) {
  return wrap([&] {
    if (!cfg || !out) throw std::invalid_argument("null argument");
    const dgwave::GridSpec grid = dgwave::GridSpec::from_spacing(cfg->h, cfg->N);
    dgwave::ObsExperimentSpec spec = sim_to_spec(*cfg);
    spec.filter = dgwave::FilterKind::None;  // build unfiltered, then apply
    auto [u0, u1] = dgwave::build_initial_data(spec, grid, 0.0);
    (void)u1;

    auto fr = std::make_unique<dg_filter_result>();
    fr->grid = grid;
    fr->before = u0;
    switch (to_filter(cfg->filter)) {
      case dgwave::FilterKind::None:
        fr->after = u0;
        break;
      case dgwave::FilterKind::Fourier:
        fr->after = dgwave::fourier_filter(u0, grid, cfg->delta);
        break;
      case dgwave::FilterKind::Bigrid:
        fr->after = bigrid_apply(u0, grid);
        break;
    }
    fr->spec_before = dgwave::sdft_forward(fr->before, grid);
    fr->spec_after = dgwave::sdft_forward(fr->after, grid);
    *out = fr.release();
  });
}

void dg_filter_free(dg_filter_result* fr) { delete fr; }

int dg_filter_grid_size(const dg_filter_result* fr) {
  return fr ? fr->grid.N : 0;
}

dg_status dg_filter_states(const dg_filter_result* fr, double* x,
                           double* a_before_re, double* a_before_im,
                           double* j_before_re, double* j_before_im,
                           double* a_after_re, double* a_after_im,
                           double* j_after_re, double* j_after_im) {
  return wrap([&] {
    if (!fr) throw std::invalid_argument("null filter handle");
    for (int j = 0; j < fr->grid.N; ++j) {
      if (x) x[j] = fr->grid.node(j);
      if (a_before_re) a_before_re[j] = fr->before.A[j].real();
      if (a_before_im) a_before_im[j] = fr->before.A[j].imag();
      if (j_before_re) j_before_re[j] = fr->before.J[j].real();
      if (j_before_im) j_before_im[j] = fr->before.J[j].imag();
      if (a_after_re) a_after_re[j] = fr->after.A[j].real();
      if (a_after_im) a_after_im[j] = fr->after.A[j].imag();
      if (j_after_re) j_after_re[j] = fr->after.J[j].real();
      if (j_after_im) j_after_im[j] = fr->after.J[j].imag();
    }
  });
}

dg_status dg_filter_spectra(const dg_filter_result* fr, double* xi,
                            double* ahat_abs_before, double* ahat_abs_after) {
  return wrap([&] {
    if (!fr) throw std::invalid_argument("null filter handle");
    for (int i = 0; i < fr->grid.N; ++i) {
      if (xi) xi[i] = fr->grid.xi(i);
      if (ahat_abs_before)
        ahat_abs_before[i] = std::abs(fr->spec_before.Ahat[i]);
      if (ahat_abs_after) ahat_abs_after[i] = std::abs(fr->spec_after.Ahat[i]);
    }
  });
}

void dg_obs_config_init(dg_obs_config* cfg) {
  if (!cfg) return;
  std::memset(cfg, 0, sizeof(*cfg));
  cfg->s = 2.0;
  cfg->T = 4.0;
  cfg->data_kind = DG_DATA_PACKET;
  cfg->branch = DG_BRANCH_PHYSICAL;
  cfg->xi0_frac = 0.95;
  cfg->gamma = 0.0;
  cfg->x_star = 0.0;
  cfg->filter = DG_FILTER_NONE;
  cfg->delta = 0.5;
  cfg->engine = DG_ENGINE_SPECTRAL;
  cfg->dt_safety = 0.5;
  cfg->n_samples = 400;
  cfg->seed = 1;
  cfg->jobs = 1;
}

dg_status dg_observability_run(const dg_obs_config* cfg, dg_obs_row* rows,
                               dg_obs_summary* summary) {
  return wrap([&] {
    if (!cfg || !rows) throw std::invalid_argument("null argument");
    if (!cfg->h_list || cfg->n_h < 1)
      throw std::invalid_argument("empty h list");
    dgwave::ObsExperimentSpec spec;
    spec.s = cfg->s;
    spec.T = cfg->T;
    spec.h_list.assign(cfg->h_list, cfg->h_list + cfg->n_h);
    spec.data = to_data_kind(cfg->data_kind);
    spec.branch = to_branch(cfg->branch);
    spec.xi0_frac = cfg->xi0_frac;
    spec.gamma = cfg->gamma;
    spec.x_star = cfg->x_star;
    spec.filter = to_filter(cfg->filter);
    spec.delta = cfg->delta;
    spec.engine = (cfg->engine == DG_ENGINE_LEAPFROG)
                      ? dgwave::EngineKind::Leapfrog
                      : dgwave::EngineKind::Spectral;
    spec.dt_safety = cfg->dt_safety;
    spec.n_samples = cfg->n_samples;
    spec.seed = cfg->seed;
    spec.jobs = std::max(1, cfg->jobs);

    const dgwave::ObsReport report = dgwave::run_observability(spec);
    for (int i = 0; i < cfg->n_h; ++i) {
      rows[i] = dg_obs_row{report.rows[i].h, report.rows[i].e_total,
                           report.rows[i].int_e_omega,
                           report.rows[i].quotient};
    }
    if (summary) {
      summary->slope = report.slope;
      summary->residual = report.residual;
      summary->max_min_ratio = report.max_min_ratio;
      summary->monotone = report.monotone ? 1 : 0;
      summary->doubling = report.doubling ? 1 : 0;
    }
  });
}

}  // extern "C"
