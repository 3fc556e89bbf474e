#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "dgwave/grid.hpp"

namespace dgwave {

enum class Branch { Physical, Spurious };

// Frequency-domain 2x2 symbols of the mass and stiffness operators at xi.
// M is Hermitian with det M = 1/12; R is real diagonal.
struct SymbolMatrices {
  std::complex<double> M[2][2];
  double R11 = 0.0;
  double R22 = 0.0;
};

struct BranchPoint {
  double xi = 0.0;
  double Lambda = 0.0;   // eigenvalue of M^{-1} R
  double lambda = 0.0;   // sqrt(Lambda), the dispersion relation
  double vg = 0.0;       // group velocity d lambda / d xi
  std::complex<double> eigvec[2];  // M-normalized, first nonzero entry real > 0
  Branch branch = Branch::Physical;
  bool degenerate = false;
};

SymbolMatrices symbols(double xi, double h, double s);

// Physical/spurious eigenpairs of the pencil (R, M) at xi. The physical
// branch is the one continued from the eigenvector (1,0) at xi = 0; for
// every s > 1 it is the smaller root on the closed band, with the single
// s = 3, |xi h| = pi double point flagged degenerate.
std::pair<BranchPoint, BranchPoint> eigen_branches(double xi, double h, double s);

// d lambda / d xi by implicit differentiation of det(R - Lambda M) = 0.
// Returns the limit value at the physical xi = 0 point; throws at the
// degenerate s = 3 band endpoint.
double group_velocity(double xi, double h, double s, Branch branch);

struct ReferenceDispersion {
  double omega_fd = 0.0;     // finite differences: (2/h)|sin(xi h/2)|
  double lambda_fem = 0.0;   // P1 conforming FEM
  double lambda_cont = 0.0;  // |xi|
};

ReferenceDispersion reference_dispersions(double xi, double h);

// All zeros of the group velocity on [0, pi/h], endpoint included when the
// one-sided limit vanishes.
std::vector<double> find_critical_points(double h, double s, Branch branch,
                                         int samples = 4096);

struct CurveSample {
  double xi = 0.0;
  double lambda_ph = 0.0, lambda_sp = 0.0;
  double vg_ph = 0.0, vg_sp = 0.0;
  double omega_fd = 0.0, lambda_fem = 0.0, lambda_cont = 0.0;
  bool degenerate = false;
};

// Uniform sampling of both branches on [0, pi/h], endpoints included.
// Degenerate endpooint values come from one-sided evaluation.
std::vector<CurveSample> dispersion_curve(double s, double h, int n_samples);

// Largest spurious frequency over the discrete xi grid; used for the
// leapfrog CFL bound.
double max_spurious_lambda(const GridSpec& grid, double s);

// Largest |group velocity| of a branch, sampled over (0, pi/h).
double max_group_speed(double h, double s, Branch branch, int samples = 2048);

}  // namespace dgwave
