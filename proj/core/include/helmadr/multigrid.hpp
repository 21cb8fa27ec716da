#ifndef HELMADR_MULTIGRID_HPP
#define HELMADR_MULTIGRID_HPP

#include <iosfwd>
#include <vector>

#include "helmadr/grid.hpp"
#include "helmadr/krylov.hpp"
#include "helmadr/sparse.hpp"

namespace helmadr
{

/// Grid with (n_d - 1) / 2 + 1 nodes per dimension and the same physical extent.
GridSpec coarse_grid(const GridSpec &fine);

/// Bilinear interpolation from coarse_grid(fine) to fine. Throws if an interval count is odd.
RealSparse build_prolongation(const GridSpec &fine);

/// P^T A P.
SparseOperator galerkin_coarsen(const SparseOperator &A, const RealSparse &P);

struct MGLevel
{
  GridSpec grid;
  SparseOperator A;
  ComplexVector inv_diag;
  RealSparse P;  // prolongation from the next coarser level; empty on the coarsest
  int relax_steps = 0;
};

struct MGHierarchy
{
  std::vector<MGLevel> levels;  // levels[0] is the finest
  int coarsest_steps = 10;      // Jacobi-GMRES steps replacing the coarsest direct solve
  int coarse_restart = 2;       // inner FGMRES on coarse levels
  int coarse_max_iterations = 2;
  double coarse_tol = 0.1;

  int depth() const { return static_cast<int>(levels.size()); }
  /// One line per level: grid, rows, nnz, relaxation steps.
  void print_summary(std::ostream &out) const;
};

/// Galerkin hierarchy of at most max_levels levels. Coarsening stops early when an interval
/// count becomes odd or a dimension would drop below 3 nodes. The finest level relaxes with a
/// GMRES run of length 2, the next with 3, and so on. Throws if fewer than 2 levels result.
MGHierarchy build_hierarchy(const SparseOperator &A0, const GridSpec &grid, int max_levels);

/// One Krylov-cycle on `level`, updating x in place:
/// pre-relaxation, restriction, coarse correction (recursive FGMRES(2) with early exit at
/// relative residual coarse_tol, or coarsest_steps Jacobi-GMRES steps on the coarsest level),
/// prolongation, post-relaxation.
void k_cycle(const MGHierarchy &H, int level, std::span<const Complex> b, std::span<Complex> x);

/// z = K-cycle(r) from a zero guess. The result varies between applications, so use only as
/// a preconditioner of flexible GMRES.
LinearOperator kcycle_preconditioner(const MGHierarchy &H);

}  // namespace helmadr

#endif  // HELMADR_MULTIGRID_HPP
