#pragma once

#include <array>
#include <memory>
#include <vector>

#include "dgwave/lattice.hpp"

namespace dgwave {

struct Block {
  std::array<std::array<double, 2>, 2> a{};  // rows: A/J equation, cols: A/J dof
};

// 2x2 blocks coupling node j to nodes j-1, j, j+1.
struct BlockStencil {
  Block left, center, right;
};

// Stencil plus periodic grid; application is matrix-free.
struct LatticeOperator {
  BlockStencil stencil;
  GridSpec grid;
};

void check_penalty(double s);

LatticeOperator assemble_mass(const GridSpec& grid);
LatticeOperator assemble_stiffness_stencil(const GridSpec& grid, double s);

// Closed-form elementwise integration of the SIPG bilinear form on the
// average/jump basis; agrees with the stencil assembly to roundoff.
LatticeOperator assemble_stiffness_quadrature(const GridSpec& grid, double s);

DGState apply(const LatticeOperator& op, const DGState& u);
ZState apply(const LatticeOperator& op, const ZState& u);

// Dense 2N x 2N matrix, dofs interleaved (A_0, J_0, A_1, J_1, ...),
// row-major. Intended for small-N test paths.
std::vector<double> dense_matrix(const LatticeOperator& op);

// Direct solver for the periodic block tridiagonal mass system:
// block Thomas elimination plus a rank-4 correction for the wrap.
class MassSolver {
 public:
  explicit MassSolver(const LatticeOperator& op);
  ~MassSolver();
  MassSolver(MassSolver&&) noexcept;
  MassSolver& operator=(MassSolver&&) noexcept;

  DGState solve(const DGState& rhs) const;
  ZState solve(const ZState& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

DGState mass_solve(const LatticeOperator& op, const DGState& rhs);
ZState mass_solve(const LatticeOperator& op, const ZState& rhs);

}  // namespace dgwave
