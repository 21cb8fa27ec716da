#include "helmadr/multigrid.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace helmadr
{

GridSpec coarse_grid(const GridSpec &fine)
{
  if ((fine.n1 - 1) % 2 != 0 || (fine.n2 - 1) % 2 != 0)
  {
    throw std::invalid_argument("coarse_grid: interval counts " + std::to_string(fine.n1 - 1) + "x" +
                                std::to_string(fine.n2 - 1) + " are not both even");
  }
  GridSpec c;
  c.n1 = (fine.n1 - 1) / 2 + 1;
  c.n2 = (fine.n2 - 1) / 2 + 1;
  c.L1 = fine.L1;
  c.L2 = fine.L2;
  c.h1 = fine.L1 / (c.n1 - 1);
  c.h2 = fine.L2 / (c.n2 - 1);
  return c;
}

namespace
{

// 1D interpolation weights of fine node i in terms of coarse nodes.
int weights_1d(int i, int (&c)[2], double (&w)[2])
{
  if (i % 2 == 0)
  {
    c[0] = i / 2;
    w[0] = 1.0;
    return 1;
  }
  c[0] = (i - 1) / 2;
  c[1] = (i + 1) / 2;
  w[0] = 0.5;
  w[1] = 0.5;
  return 2;
}

}  // namespace

RealSparse build_prolongation(const GridSpec &fine)
{
  const GridSpec coarse = coarse_grid(fine);
  CsrBuilder<double> b(static_cast<Index>(fine.size()), static_cast<Index>(coarse.size()), 4 * fine.size());
  for (int i2 = 0; i2 < fine.n2; ++i2)
  {
    int c2[2];
    double w2[2];
    const int k2 = weights_1d(i2, c2, w2);
    for (int i1 = 0; i1 < fine.n1; ++i1)
    {
      int c1[2];
      double w1[2];
      const int k1 = weights_1d(i1, c1, w1);
      for (int b2 = 0; b2 < k2; ++b2)
      {
        for (int b1 = 0; b1 < k1; ++b1)
        {
          b.add(static_cast<Index>(coarse.index(c1[b1], c2[b2])), w1[b1] * w2[b2]);
        }
      }
      b.finish_row();
    }
  }
  return b.build();
}

SparseOperator galerkin_coarsen(const SparseOperator &A, const RealSparse &P)
{
  if (A.rows != A.cols || A.cols != P.rows)
  {
    throw std::invalid_argument("galerkin_coarsen: operator is " + std::to_string(A.rows) + "x" +
                                std::to_string(A.cols) + ", prolongation has " + std::to_string(P.rows) +
                                " rows");
  }
  const RealSparse Pt = transpose(P);
  return multiply(Pt, multiply(A, P));
}

void MGHierarchy::print_summary(std::ostream &out) const
{
  for (std::size_t l = 0; l < levels.size(); ++l)
  {
    const MGLevel &lv = levels[l];
    out << "level " << l + 1 << ": " << lv.grid.n1 << "x" << lv.grid.n2 << " rows=" << lv.A.rows
        << " nnz=" << lv.A.nnz();
    if (l + 1 == levels.size())
    {
      out << " coarsest_steps=" << coarsest_steps << '\n';
    }
    else
    {
      out << " relax=" << lv.relax_steps << '\n';
    }
  }
}

MGHierarchy build_hierarchy(const SparseOperator &A0, const GridSpec &grid, int max_levels)
{
  if (static_cast<std::size_t>(A0.rows) != grid.size() || A0.rows != A0.cols)
  {
    throw std::invalid_argument("build_hierarchy: operator does not match the grid");
  }
  MGHierarchy H;
  MGLevel finest;
  finest.grid = grid;
  finest.A = A0;
  H.levels.push_back(std::move(finest));
  while (H.depth() < max_levels)
  {
    const GridSpec &g = H.levels.back().grid;
    if ((g.n1 - 1) % 2 != 0 || (g.n2 - 1) % 2 != 0 || g.n1 < 5 || g.n2 < 5)
    {
      break;
    }
    MGLevel next;
    next.grid = coarse_grid(g);
    H.levels.back().P = build_prolongation(g);
    next.A = galerkin_coarsen(H.levels.back().A, H.levels.back().P);
    H.levels.push_back(std::move(next));
  }
  if (H.depth() < 2)
  {
    throw std::invalid_argument("build_hierarchy: grid " + std::to_string(grid.n1) + "x" +
                                std::to_string(grid.n2) + " admits fewer than 2 levels");
  }
  for (int l = 0; l < H.depth(); ++l)
  {
    MGLevel &lv = H.levels[static_cast<std::size_t>(l)];
    lv.relax_steps = l + 2;
    lv.inv_diag = inverse_diagonal(lv.A);
  }
  return H;
}

void k_cycle(const MGHierarchy &H, int level, std::span<const Complex> b, std::span<Complex> x)
{
  if (level < 0 || level >= H.depth())
  {
    throw std::out_of_range("k_cycle: level " + std::to_string(level) + " outside hierarchy");
  }
  const MGLevel &lv = H.levels[static_cast<std::size_t>(level)];
  if (level == H.depth() - 1)
  {
    gmres_relax(lv.A, lv.inv_diag, b, x, H.coarsest_steps);
    return;
  }

  gmres_relax(lv.A, lv.inv_diag, b, x, lv.relax_steps);

  const std::size_t n = b.size();
  ComplexVector r(n);
  residual(lv.A, b, x, r);
  const MGLevel &cl = H.levels[static_cast<std::size_t>(level) + 1];
  ComplexVector rc(static_cast<std::size_t>(cl.A.rows));
  spmv_transpose(lv.P, r, rc);
  ComplexVector ec(rc.size(), Complex{});

  if (level + 1 == H.depth() - 1)
  {
    gmres_relax(cl.A, cl.inv_diag, rc, ec, H.coarsest_steps);
  }
  else
  {
    KrylovConfig cfg;
    cfg.restart = H.coarse_restart;
    cfg.max_iterations = H.coarse_max_iterations;
    cfg.tol = H.coarse_tol;
    cfg.flexible = true;
    const LinearOperator Ac = as_operator(cl.A);
    const LinearOperator inner = [&H, level](std::span<const Complex> v, std::span<Complex> z) {
      std::fill(z.begin(), z.end(), Complex{});
      k_cycle(H, level + 1, v, z);
    };
    fgmres_inplace(Ac, rc, ec, inner, cfg);
  }

  ComplexVector ef(n);
  spmv(lv.P, ec, ef);
  for (std::size_t i = 0; i < n; ++i)
  {
    x[i] += ef[i];
  }

  gmres_relax(lv.A, lv.inv_diag, b, x, lv.relax_steps);
}

LinearOperator kcycle_preconditioner(const MGHierarchy &H)
{
  return [&H](std::span<const Complex> r, std::span<Complex> z) {
    std::fill(z.begin(), z.end(), Complex{});
    k_cycle(H, 0, r, z);
  };
}

}  // namespace helmadr
