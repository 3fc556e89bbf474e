#include "dgwave/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dgwave {
namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 transform, sign = -1 forward (exp(-2pi i jk/N)),
// sign = +1 for the unnormalized inverse.
void fft_pow2(std::vector<cd>& a, int sign) {
  const int n = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / len;
    const cd wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cd w(1.0);
      for (int k = 0; k < len / 2; ++k) {
        cd u = a[i + k];
        cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<cd> dft_direct(const std::vector<cd>& f, int sign) {
  const int n = static_cast<int>(f.size());
  std::vector<cd> out(n);
  for (int k = 0; k < n; ++k) {
    cd acc(0.0);
    for (int j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * kPi * static_cast<double>(j) * k / n;
      acc += f[j] * cd(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

bool use_fast(int N, SdftMethod method) {
  switch (method) {
    case SdftMethod::Direct:
      return false;
    case SdftMethod::Fast:
      if (!is_pow2(N))
        throw std::invalid_argument("sdft: fast method requires power-of-two N");
      return true;
    case SdftMethod::Auto:
    default:
      return is_pow2(N);
  }
}

// Forward transform of one component. Since x_j = -L + j*h and xi_k = pi*k/L,
//   fhat(xi_k) = h * (-1)^k * DFT_{k mod N}.
std::vector<cd> forward_component(const std::vector<cd>& f, const GridSpec& grid,
                                  SdftMethod method) {
  const int N = grid.N;
  std::vector<cd> g = f;
  if (use_fast(N, method)) {
    fft_pow2(g, -1);
  } else {
    g = dft_direct(f, -1);
  }
  std::vector<cd> out(N);
  for (int i = 0; i < N; ++i) {
    const int k = i - N / 2;
    const int m = ((k % N) + N) % N;
    const double parity = (k % 2 == 0) ? 1.0 : -1.0;
    out[i] = grid.h * parity * g[m];
  }
  return out;
}

std::vector<cd> inverse_component(const std::vector<cd>& fhat, const GridSpec& grid,
                                  SdftMethod method) {
  const int N = grid.N;
  std::vector<cd> g(N);
  for (int i = 0; i < N; ++i) {
    const int k = i - N / 2;
    const int m = ((k % N) + N) % N;
    const double parity = (k % 2 == 0) ? 1.0 : -1.0;
    g[m] = parity * fhat[i];
  }
  if (use_fast(N, method)) {
    fft_pow2(g, +1);
  } else {
    g = dft_direct(g, +1);
  }
  const double scale = 1.0 / (N * grid.h);
  for (auto& v : g) v *= scale;
  return g;
}

void check_size(int got, const GridSpec& grid, const char* what) {
  if (got != grid.N)
    throw std::invalid_argument(std::string("sdft: ") + what +
                                " length does not match grid N");
}

}  // namespace

Spectrum sdft_forward(const ZState& state, const GridSpec& grid, SdftMethod method) {
  check_size(state.size(), grid, "state");
  if (state.A.size() != state.J.size())
    throw std::invalid_argument("sdft: A/J length mismatch");
  Spectrum s;
  s.Ahat = forward_component(state.A, grid, method);
  s.Jhat = forward_component(state.J, grid, method);
  return s;
}

Spectrum sdft_forward(const DGState& state, const GridSpec& grid, SdftMethod method) {
  return sdft_forward(ZState::from_real(state), grid, method);
}

ZState sdft_inverse(const Spectrum& spec, const GridSpec& grid, SdftMethod method) {
  check_size(spec.size(), grid, "spectrum");
  if (spec.Ahat.size() != spec.Jhat.size())
    throw std::invalid_argument("sdft: Ahat/Jhat length mismatch");
  ZState z;
  z.A = inverse_component(spec.Ahat, grid, method);
  z.J = inverse_component(spec.Jhat, grid, method);
  return z;
}

DGState sdft_inverse_real(const Spectrum& spec, const GridSpec& grid,
                          SdftMethod method) {
  ZState z = sdft_inverse(spec, grid, method);
  double max_abs = 0.0, max_imag = 0.0;
  for (const auto& v : z.A) {
    max_abs = std::max(max_abs, std::abs(v));
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  for (const auto& v : z.J) {
    max_abs = std::max(max_abs, std::abs(v));
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  if (max_imag > 1e-10 * std::max(max_abs, 1e-300))
    throw std::invalid_argument(
        "sdft_inverse_real: spectrum is not conjugate-symmetric "
        "(imaginary residue above tolerance)");
  DGState r;
  r.A.resize(z.A.size());
  r.J.resize(z.J.size());
  for (size_t i = 0; i < z.A.size(); ++i) r.A[i] = z.A[i].real();
  for (size_t i = 0; i < z.J.size(); ++i) r.J[i] = z.J[i].real();
  return r;
}

}  // namespace dgwave
