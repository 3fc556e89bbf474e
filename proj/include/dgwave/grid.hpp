#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace dgwave {

inline constexpr double kPi = std::numbers::pi;

// Uniform periodic lattice on [-L, L), nodes x_j = -L + j*h.
struct GridSpec {
  double L = 1.0;
  int N = 0;
  double h = 0.0;

  static GridSpec from_half_width(double L, int N) {
    if (!(L > 0.0)) throw std::invalid_argument("GridSpec: L must be positive");
    if (N <= 0 || N % 2 != 0)
      throw std::invalid_argument("GridSpec: N must be even and positive");
    GridSpec g;
    g.L = L;
    g.N = N;
    g.h = 2.0 * L / N;
    return g;
  }

  static GridSpec from_spacing(double h, int N) {
    if (!(h > 0.0)) throw std::invalid_argument("GridSpec: h must be positive");
    if (N <= 0 || N % 2 != 0)
      throw std::invalid_argument("GridSpec: N must be even and positive");
    return from_half_width(0.5 * h * N, N);
  }

  double node(double j) const { return -L + j * h; }

  // Discrete frequencies xi_k = pi*k/L, k = -N/2 .. N/2-1, indexed 0..N-1.
  double dxi() const { return kPi / L; }
  double xi(int index) const { return dxi() * (index - N / 2); }
  int wavenumber(int index) const { return index - N / 2; }
  double nyquist() const { return kPi / h; }
};

}  // namespace dgwave
