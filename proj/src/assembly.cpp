#include "dgwave/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace dgwave {
namespace {

void check_grid_for_operator(const GridSpec& grid) {
  if (grid.N < 4)
    throw std::invalid_argument("assembly: periodic operators require N >= 4");
}

template <class T>
std::array<T, 2> block_mul(const Block& b, const T& x0, const T& x1) {
  return {b.a[0][0] * x0 + b.a[0][1] * x1, b.a[1][0] * x0 + b.a[1][1] * x1};
}

template <class State>
State apply_impl(const LatticeOperator& op, const State& u) {
  const int N = op.grid.N;
  if (u.size() != N)
    throw std::invalid_argument("apply: state length does not match grid N");
  State out = State::zeros(N);
  const Block& L = op.stencil.left;
  const Block& C = op.stencil.center;
  const Block& R = op.stencil.right;
  for (int j = 0; j < N; ++j) {
    const int jm = (j + N - 1) % N;
    const int jp = (j + 1) % N;
    auto l = block_mul(L, u.A[jm], u.J[jm]);
    auto c = block_mul(C, u.A[j], u.J[j]);
    auto r = block_mul(R, u.A[jp], u.J[jp]);
    out.A[j] = l[0] + c[0] + r[0];
    out.J[j] = l[1] + c[1] + r[1];
  }
  return out;
}

// Piecewise-linear basis bookkeeping for the quadrature assembly.
// Positions are in units of h: basis of type t (0 = average hat, 1 = jump)
// centered at node m, elements indexed by their left endpoint.
double basis_slope(int t, int m, int e, double h) {
  if (e == m - 1) return (t == 0) ? 1.0 / h : 0.5 / h;
  if (e == m) return (t == 0) ? -1.0 / h : 0.5 / h;
  return 0.0;
}

double basis_jump(int t, int m, int n) {
  // [f](x) = f(x-) - f(x+); the average hat is continuous, the jump basis
  // has unit jump at its own node.
  return (t == 1 && n == m) ? 1.0 : 0.0;
}

double basis_avg_slope(int t, int m, int n, double h) {
  return 0.5 * (basis_slope(t, m, n - 1, h) + basis_slope(t, m, n, h));
}

double bilinear_entry(int tr, int tc, int d, double h, double s) {
  // a_h^s(phi_0^tr, phi_d^tc): element integrals of slopes, flux terms at
  // the nodes, and the (s/h)[u][v] penalty.
  double acc = 0.0;
  for (int e = -2; e <= 2; ++e)
    acc += h * basis_slope(tr, 0, e, h) * basis_slope(tc, d, e, h);
  for (int n = -2; n <= 2; ++n) {
    const double ju = basis_jump(tr, 0, n);
    const double jv = basis_jump(tc, d, n);
    acc -= ju * basis_avg_slope(tc, d, n, h) + jv * basis_avg_slope(tr, 0, n, h);
    acc += (s / h) * ju * jv;
  }
  return acc;
}

}  // namespace

void check_penalty(double s) {
  if (!(s > 1.0))
    throw std::invalid_argument("penalty parameter must satisfy s > 1");
}

LatticeOperator assemble_mass(const GridSpec& grid) {
  check_grid_for_operator(grid);
  const double h = grid.h;
  LatticeOperator op;
  op.grid = grid;
  op.stencil.left = Block{{{{h / 6, -h / 12}, {h / 12, -h / 24}}}};
  op.stencil.center = Block{{{{2 * h / 3, 0.0}, {0.0, h / 6}}}};
  op.stencil.right = Block{{{{h / 6, h / 12}, {-h / 12, -h / 24}}}};
  return op;
}

LatticeOperator assemble_stiffness_stencil(const GridSpec& grid, double s) {
  check_grid_for_operator(grid);
  check_penalty(s);
  const double h = grid.h;
  LatticeOperator op;
  op.grid = grid;
  op.stencil.left = Block{{{{-1 / h, 0.0}, {0.0, -1 / (4 * h)}}}};
  op.stencil.center = Block{{{{2 / h, 0.0}, {0.0, (2 * s - 1) / (2 * h)}}}};
  op.stencil.right = Block{{{{-1 / h, 0.0}, {0.0, -1 / (4 * h)}}}};
  return op;
}

LatticeOperator assemble_stiffness_quadrature(const GridSpec& grid, double s) {
  check_grid_for_operator(grid);
  check_penalty(s);
  const double h = grid.h;
  LatticeOperator op;
  op.grid = grid;
  Block* blocks[3] = {&op.stencil.left, &op.stencil.center, &op.stencil.right};
  for (int d = -1; d <= 1; ++d)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        blocks[d + 1]->a[r][c] = bilinear_entry(r, c, d, h, s);
  return op;
}

DGState apply(const LatticeOperator& op, const DGState& u) {
  return apply_impl(op, u);
}

ZState apply(const LatticeOperator& op, const ZState& u) {
  return apply_impl(op, u);
}

std::vector<double> dense_matrix(const LatticeOperator& op) {
  const int N = op.grid.N;
  const int n = 2 * N;
  std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
  auto put = [&](int bj, int bk, const Block& b) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        m[static_cast<size_t>(2 * bj + r) * n + (2 * bk + c)] += b.a[r][c];
  };
  for (int j = 0; j < N; ++j) {
    put(j, (j + N - 1) % N, op.stencil.left);
    put(j, j, op.stencil.center);
    put(j, (j + 1) % N, op.stencil.right);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Cyclic block tridiagonal solve: write A = T + U V', where T is the
// open-chain block tridiagonal part and U V' restores the two corner blocks.
// T is factored once by block Thomas elimination; the wrap is a rank-4
// Woodbury correction.

namespace {

struct Mat2 {
  double a[2][2];
};

Mat2 inv2(const Mat2& m) {
  const double det = m.a[0][0] * m.a[1][1] - m.a[0][1] * m.a[1][0];
  const double scale = std::abs(m.a[0][0]) + std::abs(m.a[0][1]) +
                       std::abs(m.a[1][0]) + std::abs(m.a[1][1]);
  if (std::abs(det) <= 1e-14 * std::max(scale * scale, 1e-300))
    throw std::runtime_error("MassSolver: singular pivot block");
  const double id = 1.0 / det;
  Mat2 r;
  r.a[0][0] = m.a[1][1] * id;
  r.a[0][1] = -m.a[0][1] * id;
  r.a[1][0] = -m.a[1][0] * id;
  r.a[1][1] = m.a[0][0] * id;
  return r;
}

Mat2 mul2(const Mat2& x, const Mat2& y) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.a[i][j] = x.a[i][0] * y.a[0][j] + x.a[i][1] * y.a[1][j];
  return r;
}

Mat2 from_block(const Block& b) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.a[i][j] = b.a[i][j];
  return m;
}

template <class T>
void mat2_apply(const Mat2& m, T& x0, T& x1) {
  const T y0 = m.a[0][0] * x0 + m.a[0][1] * x1;
  const T y1 = m.a[1][0] * x0 + m.a[1][1] * x1;
  x0 = y0;
  x1 = y1;
}

}  // namespace

struct MassSolver::Impl {
  GridSpec grid;
  Mat2 Lb{}, Cb{}, Rb{};
  std::vector<Mat2> fact;   // L * inv(D_{j-1})
  std::vector<Mat2> dinv;   // inv(D_j)
  std::vector<double> Z;    // T^{-1} U, 2N x 4, row-major
  double S[4][4];           // I + V' Z
  int piv[4];               // LU pivots of S

  // Open-chain block Thomas solve, interleaved vector of length 2N.
  template <class T>
  void thomas(std::vector<T>& x) const {
    const int N = grid.N;
    for (int j = 1; j < N; ++j) {
      T y0 = x[2 * j - 2], y1 = x[2 * j - 1];
      mat2_apply(fact[j], y0, y1);
      x[2 * j] -= y0;
      x[2 * j + 1] -= y1;
    }
    mat2_apply(dinv[N - 1], x[2 * N - 2], x[2 * N - 1]);
    for (int j = N - 2; j >= 0; --j) {
      T r0 = Rb.a[0][0] * x[2 * j + 2] + Rb.a[0][1] * x[2 * j + 3];
      T r1 = Rb.a[1][0] * x[2 * j + 2] + Rb.a[1][1] * x[2 * j + 3];
      x[2 * j] -= r0;
      x[2 * j + 1] -= r1;
      mat2_apply(dinv[j], x[2 * j], x[2 * j + 1]);
    }
  }

  template <class T>
  void solve_vec(std::vector<T>& x) const {
    const int N = grid.N;
    thomas(x);
    // w = V' x: rows 0-1 = L * x_{N-1}, rows 2-3 = R * x_0.
    T w[4];
    w[0] = Lb.a[0][0] * x[2 * N - 2] + Lb.a[0][1] * x[2 * N - 1];
    w[1] = Lb.a[1][0] * x[2 * N - 2] + Lb.a[1][1] * x[2 * N - 1];
    w[2] = Rb.a[0][0] * x[0] + Rb.a[0][1] * x[1];
    w[3] = Rb.a[1][0] * x[0] + Rb.a[1][1] * x[1];
    // Solve S y = w with the precomputed LU.
    T y[4];
    for (int i = 0; i < 4; ++i) y[i] = w[piv[i]];
    for (int i = 1; i < 4; ++i)
      for (int k = 0; k < i; ++k) y[i] -= S[i][k] * y[k];
    for (int i = 3; i >= 0; --i) {
      for (int k = i + 1; k < 4; ++k) y[i] -= S[i][k] * y[k];
      y[i] /= S[i][i];
    }
    for (int j = 0; j < 2 * N; ++j)
      x[j] -= Z[4 * j + 0] * y[0] + Z[4 * j + 1] * y[1] + Z[4 * j + 2] * y[2] +
              Z[4 * j + 3] * y[3];
  }
};

MassSolver::MassSolver(const LatticeOperator& op) : impl_(new Impl) {
  check_grid_for_operator(op.grid);
  Impl& im = *impl_;
  im.grid = op.grid;
  im.Lb = from_block(op.stencil.left);
  im.Cb = from_block(op.stencil.center);
  im.Rb = from_block(op.stencil.right);
  const int N = op.grid.N;

  // Factor the open chain: D_0 = C, D_j = C - (L inv(D_{j-1})) R.
  im.fact.resize(N);
  im.dinv.resize(N);
  Mat2 D = im.Cb;
  im.dinv[0] = inv2(D);
  for (int j = 1; j < N; ++j) {
    im.fact[j] = mul2(im.Lb, im.dinv[j - 1]);
    Mat2 fr = mul2(im.fact[j], im.Rb);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) D.a[r][c] = im.Cb.a[r][c] - fr.a[r][c];
    im.dinv[j] = inv2(D);
  }

  // Z = T^{-1} U with U = [e_0 (x) I, e_{N-1} (x) I].
  im.Z.assign(static_cast<size_t>(2 * N) * 4, 0.0);
  for (int col = 0; col < 4; ++col) {
    std::vector<double> e(2 * N, 0.0);
    if (col < 2)
      e[col] = 1.0;
    else
      e[2 * N - 4 + col] = 1.0;
    im.thomas(e);
    for (int j = 0; j < 2 * N; ++j) im.Z[4 * j + col] = e[j];
  }

  // S = I + V' Z, then LU with partial pivoting.
  double S[4][4];
  for (int c = 0; c < 4; ++c) {
    const double zl0 = im.Z[4 * (2 * N - 2) + c], zl1 = im.Z[4 * (2 * N - 1) + c];
    const double z00 = im.Z[4 * 0 + c], z01 = im.Z[4 * 1 + c];
    S[0][c] = im.Lb.a[0][0] * zl0 + im.Lb.a[0][1] * zl1;
    S[1][c] = im.Lb.a[1][0] * zl0 + im.Lb.a[1][1] * zl1;
    S[2][c] = im.Rb.a[0][0] * z00 + im.Rb.a[0][1] * z01;
    S[3][c] = im.Rb.a[1][0] * z00 + im.Rb.a[1][1] * z01;
  }
  for (int i = 0; i < 4; ++i) S[i][i] += 1.0;

  int perm[4] = {0, 1, 2, 3};
  for (int k = 0; k < 4; ++k) {
    int p = k;
    for (int i = k + 1; i < 4; ++i)
      if (std::abs(S[i][k]) > std::abs(S[p][k])) p = i;
    if (p != k) {
      for (int c = 0; c < 4; ++c) std::swap(S[k][c], S[p][c]);
      std::swap(perm[k], perm[p]);
    }
    if (std::abs(S[k][k]) < 1e-300)
      throw std::runtime_error("MassSolver: singular wrap correction");
    for (int i = k + 1; i < 4; ++i) {
      S[i][k] /= S[k][k];
      for (int c = k + 1; c < 4; ++c) S[i][c] -= S[i][k] * S[k][c];
    }
  }
  for (int i = 0; i < 4; ++i) {
    im.piv[i] = perm[i];
    for (int c = 0; c < 4; ++c) im.S[i][c] = S[i][c];
  }
}

MassSolver::~MassSolver() = default;
MassSolver::MassSolver(MassSolver&&) noexcept = default;
MassSolver& MassSolver::operator=(MassSolver&&) noexcept = default;

DGState MassSolver::solve(const DGState& rhs) const {
  const int N = impl_->grid.N;
  if (rhs.size() != N)
    throw std::invalid_argument("mass_solve: rhs length does not match grid N");
  std::vector<double> x(2 * N);
  for (int j = 0; j < N; ++j) {
    x[2 * j] = rhs.A[j];
    x[2 * j + 1] = rhs.J[j];
  }
  impl_->solve_vec(x);
  DGState out = DGState::zeros(N);
  for (int j = 0; j < N; ++j) {
    out.A[j] = x[2 * j];
    out.J[j] = x[2 * j + 1];
  }
  return out;
}

ZState MassSolver::solve(const ZState& rhs) const {
  const int N = impl_->grid.N;
  if (rhs.size() != N)
    throw std::invalid_argument("mass_solve: rhs length does not match grid N");
  std::vector<cd> x(2 * N);
  for (int j = 0; j < N; ++j) {
    x[2 * j] = rhs.A[j];
    x[2 * j + 1] = rhs.J[j];
  }
  impl_->solve_vec(x);
  ZState out = ZState::zeros(N);
  for (int j = 0; j < N; ++j) {
    out.A[j] = x[2 * j];
    out.J[j] = x[2 * j + 1];
  }
  return out;
}

DGState mass_solve(const LatticeOperator& op, const DGState& rhs) {
  return MassSolver(op).solve(rhs);
}

ZState mass_solve(const LatticeOperator& op, const ZState& rhs) {
  return MassSolver(op).solve(rhs);
}

}  // namespace dgwave
