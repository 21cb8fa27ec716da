#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace helmadr::test
{

RealField sweeping_oracle(const Medium &medium, const SourceSpec &source, MarchOrder order, double tol,
                          int max_rounds)
{
  const GridSpec &g = medium.grid();
  const AnalyticBase base = AnalyticBase::at_source(g, source);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> tau1(g.size(), inf);
  std::vector<double> tau(g.size(), inf);
  std::vector<char> fixed(g.size(), 0);
  const double k0 = std::sqrt(medium.kappa_sq(source.i1, source.i2));
  for (int d2 = -1; d2 <= 1; ++d2)
  {
    for (int d1 = -1; d1 <= 1; ++d1)
    {
      const int a1 = source.i1 + d1;
      const int a2 = source.i2 + d2;
      if (a1 < 0 || a1 >= g.n1 || a2 < 0 || a2 >= g.n2) continue;
      const std::size_t j = g.index(a1, a2);
      tau1[j] = k0;
      tau[j] = base.tau0(g.x1(a1), g.x2(a2)) * k0;
      fixed[j] = 1;
    }
  }

  auto value = [&](int i1, int i2) {
    return (i1 < 0 || i1 >= g.n1 || i2 < 0 || i2 >= g.n2) ? inf : tau[g.index(i1, i2)];
  };

  auto update = [&](int i1, int i2) {
    const std::size_t j = g.index(i1, i2);
    if (fixed[j]) return 0.0;
    const double y1 = g.x1(i1);
    const double y2 = g.x2(i2);
    LocalStencil st;
    st.tau0 = base.tau0(y1, y2);
    st.grad_tau0 = base.grad_tau0(y1, y2);
    st.kappa = std::sqrt(medium.kappa_sq.values[j]);
    st.h = {g.h1, g.h2};
    const double own = tau[j];
    for (int d = 0; d < 2; ++d)
    {
      const int di = d == 0 ? 1 : 0;
      const int dj = d == 0 ? 0 : 1;
      for (int side : {-1, 1})
      {
        const double tn = value(i1 + side * di, i2 + side * dj);
        if (!(tn < own)) continue;
        if (st.axes[d] && tn >= st.axes[d]->tau_near) continue;
        AxisNeighbor nb;
        nb.side = side;
        nb.tau_near = tn;
        nb.tau1_near = tau1[g.index(i1 + side * di, i2 + side * dj)];
        const double tf = value(i1 + 2 * side * di, i2 + 2 * side * dj);
        if (tf < own)
        {
          nb.tau_far = tf;
          nb.tau1_far = tau1[g.index(i1 + 2 * side * di, i2 + 2 * side * dj)];
        }
        st.axes[d] = nb;
      }
    }
    if (!st.axes[0] && !st.axes[1]) return 0.0;
    const double t1 = local_update(st, order);
    const double change = std::isfinite(tau1[j]) ? std::abs(t1 - tau1[j]) : inf;
    tau1[j] = t1;
    tau[j] = st.tau0 * t1;
    return change;
  };

  for (int round = 0; round < max_rounds; ++round)
  {
    double change = 0.0;
    for (int sweep = 0; sweep < 4; ++sweep)
    {
      const bool rev1 = sweep & 1;
      const bool rev2 = sweep & 2;
      for (int k2 = 0; k2 < g.n2; ++k2)
      {
        const int i2 = rev2 ? g.n2 - 1 - k2 : k2;
        for (int k1 = 0; k1 < g.n1; ++k1)
        {
          const int i1 = rev1 ? g.n1 - 1 - k1 : k1;
          change = std::max(change, update(i1, i2));
        }
      }
    }
    if (change <= tol)
    {
      break;
    }
  }
  return RealField(g, std::move(tau1));
}

Eigen::MatrixXcd to_dense(const SparseOperator &A)
{
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(A.rows, A.cols);
  for (Index i = 0; i < A.rows; ++i)
  {
    for (Index k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      D(i, A.col[k]) += A.val[k];
    }
  }
  return D;
}

Eigen::MatrixXd to_dense(const RealSparse &A)
{
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.rows, A.cols);
  for (Index i = 0; i < A.rows; ++i)
  {
    for (Index k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      D(i, A.col[k]) += A.val[k];
    }
  }
  return D;
}

ComplexVector random_vector(std::size_t n, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexVector v(n);
  for (auto &x : v)
  {
    x = {u(rng), u(rng)};
  }
  return v;
}

SparseOperator random_sparse(Index n, double fill, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> p(0.0, 1.0);
  CsrBuilder<Complex> b(n, n);
  for (Index i = 0; i < n; ++i)
  {
    for (Index j = 0; j < n; ++j)
    {
      if (i == j)
      {
        b.add(j, Complex(4.0 + u(rng), u(rng)));
      }
      else if (p(rng) < fill)
      {
        b.add(j, Complex(u(rng), u(rng)));
      }
    }
    b.finish_row();
  }
  return b.build();
}

}  // namespace helmadr::test
