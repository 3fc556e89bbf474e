#pragma once

#include <complex>
#include <vector>

#include "dgwave/grid.hpp"

namespace dgwave {

using cd = std::complex<double>;

// Real nodal state: per-node average A_j and jump J_j.
struct DGState {
  std::vector<double> A;
  std::vector<double> J;

  static DGState zeros(int N) {
    DGState s;
    s.A.assign(N, 0.0);
    s.J.assign(N, 0.0);
    return s;
  }
  int size() const { return static_cast<int>(A.size()); }
};

// Complex nodal state, used for wave packets and spectral evolution.
struct ZState {
  std::vector<cd> A;
  std::vector<cd> J;

  static ZState zeros(int N) {
    ZState s;
    s.A.assign(N, cd(0.0));
    s.J.assign(N, cd(0.0));
    return s;
  }
  static ZState from_real(const DGState& r) {
    ZState s;
    s.A.assign(r.A.begin(), r.A.end());
    s.J.assign(r.J.begin(), r.J.end());
    return s;
  }
  int size() const { return static_cast<int>(A.size()); }
};

// SDFT values on the discrete frequency grid xi_k = pi*k/L,
// k = -N/2 .. N/2-1 (index order, ascending xi).
struct Spectrum {
  std::vector<cd> Ahat;
  std::vector<cd> Jhat;

  static Spectrum zeros(int N) {
    Spectrum s;
    s.Ahat.assign(N, cd(0.0));
    s.Jhat.assign(N, cd(0.0));
    return s;
  }
  int size() const { return static_cast<int>(Ahat.size()); }
};

enum class SdftMethod { Auto, Direct, Fast };

// Semi-discrete Fourier transform with the convention
//   fhat(xi) = h * sum_j f_j exp(-i xi x_j),
// inverted by f_j = (1/2pi) * sum_k fhat(xi_k) exp(i xi_k x_j) * dxi.
Spectrum sdft_forward(const DGState& state, const GridSpec& grid,
                      SdftMethod method = SdftMethod::Auto);
Spectrum sdft_forward(const ZState& state, const GridSpec& grid,
                      SdftMethod method = SdftMethod::Auto);

ZState sdft_inverse(const Spectrum& spec, const GridSpec& grid,
                    SdftMethod method = SdftMethod::Auto);

// Inverse transform that demands a real result; throws when the spectrum
// is not conjugate-symmetric (imaginary residue above 1e-10 relative).
DGState sdft_inverse_real(const Spectrum& spec, const GridSpec& grid,
                          SdftMethod method = SdftMethod::Auto);

}  // namespace dgwave
