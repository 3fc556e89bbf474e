/* dgwave: dispersion analysis, wave packets, and observability experiments
 * for the P1 interior-penalty DG semi-discretization of the 1-d wave
 * equation on a periodic lattice.
 *
 * C interface of the shared library. All functions return dg_status;
 * on failure dg_last_error() carries a human-readable message for the
 * calling thread.
 */
#ifndef DGWAVE_H
#define DGWAVE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dg_status {
  DG_OK = 0,
  DG_EINVAL = 1,   /* invalid argument / contract violation */
  DG_ENUMERIC = 2, /* numerical failure (singular pivot, degeneracy, ...) */
  DG_EINTERNAL = 3
} dg_status;

const char* dg_version(void);
const char* dg_status_name(dg_status status);
const char* dg_last_error(void);

enum {
  DG_BRANCH_PHYSICAL = 0,
  DG_BRANCH_SPURIOUS = 1
};

enum {
  DG_ENGINE_SPECTRAL = 0,
  DG_ENGINE_LEAPFROG = 1,
  DG_ENGINE_BOTH = 2
};

enum {
  DG_FILTER_NONE = 0,
  DG_FILTER_FOURIER = 1,
  DG_FILTER_BIGRID = 2
};

enum {
  DG_DATA_PACKET = 0,
  DG_DATA_RANDOM_PHYSICAL = 1,
  DG_DATA_BIGRID_RANDOM = 2
};

/* ---- dispersion analysis ---------------------------------------------- */

typedef struct dg_dispersion_sample {
  double xi;
  double lambda_ph, lambda_sp;
  double vg_ph, vg_sp;
  double omega_fd, lambda_fem, lambda_cont;
  int degenerate;
} dg_dispersion_sample;

/* Uniform sampling of [0, pi/h]; out must hold n_samples entries. */
dg_status dg_dispersion_curve(double s, double h, int n_samples,
                              dg_dispersion_sample* out);

dg_status dg_group_velocity(double s, double h, double xi, int branch,
                            double* vg);

/* Zeros of the group velocity on [0, pi/h]. Writes at most capacity values,
 * reports the total found in *count. */
dg_status dg_critical_points(double s, double h, int branch, double* out,
                             int capacity, int* count);

/* ---- simulation -------------------------------------------------------- */

typedef struct dg_sim_config {
  double s;            /* penalty parameter, > 1 */
  double h;            /* grid spacing */
  int N;               /* even cell count; domain is [-N*h/2, N*h/2) */
  double T;            /* final time */
  int engine;          /* DG_ENGINE_* */
  double dt_safety;    /* leapfrog CFL fraction of 2/lambda_max */
  int data_kind;       /* DG_DATA_* */
  int branch;          /* DG_BRANCH_* for packet / projected data */
  double xi0_frac;     /* packet carrier as a fraction of pi/h */
  double gamma;        /* packet width; <= 0 selects h^{-1/2} */
  double x_star;       /* packet center */
  int filter;          /* DG_FILTER_* applied to the initial data */
  double delta;        /* Fourier filter band fraction in (0,1) */
  int n_samples;       /* energy samples over [0,T] */
  int n_snapshots;     /* state snapshots over [0,T] */
  unsigned long long seed;
} dg_sim_config;

void dg_sim_config_init(dg_sim_config* cfg);

typedef struct dg_sim dg_sim;

dg_status dg_sim_run(const dg_sim_config* cfg, dg_sim** out);
void dg_sim_free(dg_sim* sim);

int dg_sim_grid_size(const dg_sim* sim);
double dg_sim_domain_half_width(const dg_sim* sim);
int dg_sim_sample_count(const dg_sim* sim);
/* Arrays of length dg_sim_sample_count(). */
dg_status dg_sim_energy_trace(const dg_sim* sim, double* t, double* e_total,
                              double* e_omega);
int dg_sim_snapshot_count(const dg_sim* sim);
/* Arrays of length dg_sim_grid_size(). */
dg_status dg_sim_snapshot(const dg_sim* sim, int index, double* t, double* x,
                          double* a_re, double* a_im, double* j_re,
                          double* j_im);
/* Final-time l2 distance between engines; only for DG_ENGINE_BOTH. */
dg_status dg_sim_cross_engine_error(const dg_sim* sim, double* error);

/* ---- filter demonstration ---------------------------------------------- */

typedef struct dg_filter_result dg_filter_result;

/* Builds the configured initial displacement, applies the configured filter,
 * and exposes nodal and spectral views of both. */
dg_status dg_filter_run(const dg_sim_config* cfg, dg_filter_result** out);
void dg_filter_free(dg_filter_result* fr);
int dg_filter_grid_size(const dg_filter_result* fr);
dg_status dg_filter_states(const dg_filter_result* fr, double* x,
                           double* a_before_re, double* a_before_im,
                           double* j_before_re, double* j_before_im,
                           double* a_after_re, double* a_after_im,
                           double* j_after_re, double* j_after_im);
dg_status dg_filter_spectra(const dg_filter_result* fr, double* xi,
                            double* ahat_abs_before, double* ahat_abs_after);

/* ---- observability experiments ----------------------------------------- */

typedef struct dg_obs_config {
  double s;
  double T;
  const double* h_list;
  int n_h;             /* strictly decreasing list */
  int data_kind;       /* DG_DATA_* */
  int branch;
  double xi0_frac;
  double gamma;        /* <= 0: h^{-1/2} */
  double x_star;
  int filter;          /* DG_FILTER_NONE or DG_FILTER_FOURIER */
  double delta;
  int engine;          /* spectral or leapfrog */
  double dt_safety;
  int n_samples;
  unsigned long long seed;
  int jobs;            /* sweep parallelism; results are identical for any value */
} dg_obs_config;

void dg_obs_config_init(dg_obs_config* cfg);

typedef struct dg_obs_row {
  double h;
  double e_total;
  double int_e_omega;
  double quotient;
} dg_obs_row;

typedef struct dg_obs_summary {
  double slope;         /* fitted log C_h vs log(1/h) */
  double residual;
  double max_min_ratio; /* uniformity verdict */
  int monotone;
  int doubling;         /* C_{h/2}/C_h >= 2 at each halving */
} dg_obs_summary;

/* rows must hold n_h entries. */
dg_status dg_observability_run(const dg_obs_config* cfg, dg_obs_row* rows,
                               dg_obs_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* DGWAVE_H */
