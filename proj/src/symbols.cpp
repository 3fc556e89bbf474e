#include "dgwave/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dgwave/lattice.hpp"

namespace dgwave {
namespace {

constexpr double kDegenerateGap = 1e-9;

void check_args(double xi, double h, double s) {
  if (!(h > 0.0)) throw std::invalid_argument("symbols: h must be positive");
  if (!(s > 1.0)) throw std::invalid_argument("symbols: penalty requires s > 1");
  if (std::abs(xi) > kPi / h * (1.0 + 1e-12))
    throw std::invalid_argument("symbols: |xi| exceeds pi/h");
}

struct SymbolDerivatives {
  double dM11, dM22, dR11, dR22;  // d/dxi; dM12 not needed (enters via |M12|^2)
};

SymbolDerivatives symbol_derivatives(double xi, double h, double s) {
  (void)s;
  const double th = xi * h;
  SymbolDerivatives d;
  d.dM11 = -h * std::sin(th) / 3.0;
  d.dM22 = h * std::sin(th) / 12.0;
  d.dR11 = 2.0 * std::sin(th) / h;
  d.dR22 = std::sin(th) / (2.0 * h);
  return d;
}

// Coefficients of det(R - Lambda M) = a L^2 + b L + c (a = det M = 1/12).
void pencil_coefficients(const SymbolMatrices& sym, double& a, double& b,
                         double& c) {
  const double M11 = sym.M[0][0].real();
  const double M22 = sym.M[1][1].real();
  a = 1.0 / 12.0;
  b = -(sym.R11 * M22 + sym.R22 * M11);
  c = sym.R11 * sym.R22;
}

std::complex<double> const* pick_eigvec(const SymbolMatrices& sym, double Lambda,
                                        std::complex<double> cand[2][2]) {
  const cd M12 = sym.M[0][1];
  const cd M21 = sym.M[1][0];
  const double M11 = sym.M[0][0].real();
  const double M22 = sym.M[1][1].real();
  cand[0][0] = Lambda * M12;
  cand[0][1] = sym.R11 - Lambda * M11;
  cand[1][0] = sym.R22 - Lambda * M22;
  cand[1][1] = Lambda * M21;
  const double n0 = std::abs(cand[0][0]) + std::abs(cand[0][1]);
  const double n1 = std::abs(cand[1][0]) + std::abs(cand[1][1]);
  return (n1 >= n0) ? cand[1] : cand[0];
}

void normalize_eigvec(const SymbolMatrices& sym, cd v[2]) {
  // v* M v = 1, then first component with nonneglible modulus real positive.
  const cd mv0 = sym.M[0][0] * v[0] + sym.M[0][1] * v[1];
  const cd mv1 = sym.M[1][0] * v[0] + sym.M[1][1] * v[1];
  const double q = (std::conj(v[0]) * mv0 + std::conj(v[1]) * mv1).real();
  if (!(q > 0.0)) throw std::runtime_error("symbols: eigenvector M-norm not positive");
  const double scale = 1.0 / std::sqrt(q);
  v[0] *= scale;
  v[1] *= scale;
  const double amp = std::abs(v[0]) + std::abs(v[1]);
  cd lead = (std::abs(v[0]) > 1e-14 * amp) ? v[0] : v[1];
  const cd phase = std::conj(lead) / std::abs(lead);
  v[0] *= phase;
  v[1] *= phase;
}

double clamp_eigenvalue(double Lambda, double scale) {
  if (Lambda < 0.0) {
    if (Lambda < -1e-10 * std::max(scale, 1.0))
      throw std::runtime_error("symbols: negative pencil eigenvalue");
    return 0.0;
  }
  return Lambda;
}

double vg_formula(const SymbolMatrices& sym, const SymbolDerivatives& d,
                  double Lambda, double lambda, double b) {
  const double M11 = sym.M[0][0].real();
  const double M22 = sym.M[1][1].real();
  const double db = -(d.dR11 * M22 + sym.R11 * d.dM22 + d.dR22 * M11 +
                      sym.R22 * d.dM11);
  const double dc = d.dR11 * sym.R22 + sym.R11 * d.dR22;
  const double Flambda = 2.0 * (1.0 / 12.0) * Lambda + b;
  const double dLambda = -(db * Lambda + dc) / Flambda;
  return dLambda / (2.0 * lambda);
}

}  // namespace

SymbolMatrices symbols(double xi, double h, double s) {
  check_args(xi, h, s);
  const double th = xi * h;
  const double c = std::cos(th), sn = std::sin(th);
  const double sh = std::sin(0.5 * th), ch = std::cos(0.5 * th);
  SymbolMatrices sym;
  sym.M[0][0] = (2.0 + c) / 3.0;
  sym.M[0][1] = cd(0.0, sn / 6.0);
  sym.M[1][0] = cd(0.0, -sn / 6.0);
  sym.M[1][1] = (2.0 - c) / 12.0;
  sym.R11 = 4.0 * sh * sh / (h * h);
  sym.R22 = (s - ch * ch) / (h * h);
  return sym;
}

std::pair<BranchPoint, BranchPoint> eigen_branches(double xi, double h, double s) {
  const SymbolMatrices sym = symbols(xi, h, s);
  double a, b, c;
  pencil_coefficients(sym, a, b, c);
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc < -1e-12 * b * b)
      throw std::runtime_error("symbols: negative pencil discriminant");
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  // -b > 0 for s > 1; the small root via the stable quotient form.
  const double big = (-b + sq) / (2.0 * a);
  const double small = (big > 0.0) ? c / (a * big) : 0.0;
  const double scale = std::max(std::abs(big), 1.0 / (h * h));

  BranchPoint ph, sp;
  ph.xi = sp.xi = xi;
  ph.branch = Branch::Physical;
  sp.branch = Branch::Spurious;
  ph.Lambda = clamp_eigenvalue(small, scale);
  sp.Lambda = big;
  ph.lambda = std::sqrt(ph.Lambda);
  sp.lambda = std::sqrt(sp.Lambda);

  const bool degen = (big - small) <= kDegenerateGap * scale;
  if (degen) {
    // The s = 3 band endpoint: double eigenvalue, M and R diagonal there.
    // Eigenvectors and group velocities come from a one-sided evaluation.
    const double sign = (xi >= 0.0) ? 1.0 : -1.0;
    const double xi_eps = sign * (kPi / h) * (1.0 - 1e-7);
    auto near = eigen_branches(xi_eps, h, s);
    for (int i = 0; i < 2; ++i) {
      ph.eigvec[i] = near.first.eigvec[i];
      sp.eigvec[i] = near.second.eigvec[i];
    }
    ph.vg = near.first.vg;
    sp.vg = near.second.vg;
    ph.degenerate = sp.degenerate = true;
    return {ph, sp};
  }

  const SymbolDerivatives d = symbol_derivatives(xi, h, s);
  cd cand[2][2];
  const cd* vph = pick_eigvec(sym, ph.Lambda, cand);
  ph.eigvec[0] = vph[0];
  ph.eigvec[1] = vph[1];
  normalize_eigvec(sym, ph.eigvec);
  const cd* vsp = pick_eigvec(sym, sp.Lambda, cand);
  sp.eigvec[0] = vsp[0];
  sp.eigvec[1] = vsp[1];
  normalize_eigvec(sym, sp.eigvec);

  ph.vg = (ph.lambda == 0.0) ? 1.0 : vg_formula(sym, d, ph.Lambda, ph.lambda, b);
  sp.vg = vg_formula(sym, d, sp.Lambda, sp.lambda, b);
  return {ph, sp};
}

double group_velocity(double xi, double h, double s, Branch branch) {
  auto [ph, sp] = eigen_branches(xi, h, s);
  const BranchPoint& bp = (branch == Branch::Physical) ? ph : sp;
  if (bp.degenerate)
    throw std::runtime_error(
        "group_velocity: degenerate pencil at the band endpoint; "
        "evaluate one-sided");
  return bp.vg;
}

ReferenceDispersion reference_dispersions(double xi, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("reference_dispersions: h <= 0");
  const double th = xi * h;
  ReferenceDispersion r;
  r.omega_fd = (2.0 / h) * std::abs(std::sin(0.5 * th));
  r.lambda_fem =
      (1.0 / h) * std::sqrt(6.0 * (1.0 - std::cos(th)) / (2.0 + std::cos(th)));
  r.lambda_cont = std::abs(xi);
  return r;
}

std::vector<double> find_critical_points(double h, double s, Branch branch,
                                         int samples) {
  if (samples < 2048)
    throw std::invalid_argument("find_critical_points: need >= 2048 samples");
  const double xi_max = kPi / h;
  const double tol = 1e-10 / h;
  auto vg = [&](double xi) { return group_velocity(xi, h, s, branch); };

  std::vector<double> out;
  if (branch == Branch::Spurious) out.push_back(0.0);

  double xa = xi_max / samples;
  double fa = vg(xa);
  for (int i = 2; i < samples; ++i) {
    const double xb = xi_max * i / samples;
    const double fb = vg(xb);
    if ((fa < 0.0) != (fb < 0.0) || fa == 0.0) {
      double lo = xa, hi = xb, flo = fa;
      double mid = lo;
      for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = vg(mid);
        if (std::abs(fm) <= tol) break;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(mid);
    }
    xa = xb;
    fa = fb;
  }

  // Band endpoint: critical when the one-sided group velocity vanishes
  // (all s except the s = 3 crossing).
  const double vg_end = vg(xi_max * (1.0 - 1e-7));
  if (std::abs(vg_end) < 0.1) out.push_back(xi_max);

  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CurveSample> dispersion_curve(double s, double h, int n_samples) {
  if (n_samples < 2)
    throw std::invalid_argument("dispersion_curve: need >= 2 samples");
  std::vector<CurveSample> out(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double xi = (kPi / h) * i / (n_samples - 1);
    auto [ph, sp] = eigen_branches(xi, h, s);
    CurveSample& cs = out[i];
    cs.xi = xi;
    cs.lambda_ph = ph.lambda;
    cs.lambda_sp = sp.lambda;
    cs.vg_ph = ph.vg;
    cs.vg_sp = sp.vg;
    const ReferenceDispersion rd = reference_dispersions(xi, h);
    cs.omega_fd = rd.omega_fd;
    cs.lambda_fem = rd.lambda_fem;
    cs.lambda_cont = rd.lambda_cont;
    cs.degenerate = ph.degenerate;
  }
  return out;
}

double max_spurious_lambda(const GridSpec& grid, double s) {
  double best = 0.0;
  for (int i = 0; i < grid.N; ++i) {
    auto [ph, sp] = eigen_branches(grid.xi(i), grid.h, s);
    best = std::max(best, sp.lambda);
  }
  return best;
}

double max_group_speed(double h, double s, Branch branch, int samples) {
  double best = (branch == Branch::Physical) ? 1.0 : 0.0;
  for (int i = 1; i < samples; ++i) {
    const double xi = (kPi / h) * i / samples;
    best = std::max(best, std::abs(group_velocity(xi, h, s, branch)));
  }
  return best;
}

}  // namespace dgwave
