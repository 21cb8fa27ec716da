#include "helmadr/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace helmadr
{

std::string_view to_string(BoundaryCondition bc)
{
  return bc == BoundaryCondition::neumann ? "neumann" : "sommerfeld";
}

BoundaryCondition parse_boundary_condition(std::string_view name)
{
  if (name == "neumann") return BoundaryCondition::neumann;
  if (name == "sommerfeld") return BoundaryCondition::sommerfeld;
  throw std::invalid_argument("unknown boundary condition '" + std::string(name) + "'");
}

BoundaryCondition BCSpec::at(BoundarySide side) const
{
  switch (side)
  {
    case BoundarySide::top: return top;
    case BoundarySide::bottom: return bottom;
    case BoundarySide::left: return left;
    case BoundarySide::right: return right;
  }
  return top;
}

BoundaryCondition &BCSpec::at(BoundarySide side)
{
  switch (side)
  {
    case BoundarySide::top: return top;
    case BoundarySide::bottom: return bottom;
    case BoundarySide::left: return left;
    case BoundarySide::right: return right;
  }
  return top;
}

std::string_view to_string(AdvectionScheme scheme)
{
  switch (scheme)
  {
    case AdvectionScheme::central: return "central";
    case AdvectionScheme::upwind1: return "upwind1";
    case AdvectionScheme::upwind2: return "upwind2";
  }
  return "unknown";
}

namespace
{

constexpr Complex I{0.0, 1.0};

/// Geometry of one node along one axis.
struct AxisView
{
  int i;       // position along the axis
  int n;       // node count along the axis
  double h;    // spacing
  Index step;  // linear-index stride
  BoundaryCondition low_bc;
  BoundaryCondition high_bc;

  bool at_low() const { return i == 0; }
  bool at_high() const { return i == n - 1; }
};

AxisView axis_view(const GridSpec &g, const BCSpec &bc, int i1, int i2, int d)
{
  if (d == 0)
  {
    return {i1, g.n1, g.h1, 1, bc.left, bc.right};
  }
  return {i2, g.n2, g.h2, static_cast<Index>(g.n1), bc.top, bc.bottom};
}

void check_medium(const Medium &medium)
{
  if (!same_grid(medium.kappa_sq.grid, medium.gamma.grid))
  {
    throw std::invalid_argument("medium fields live on different grids");
  }
}

}  // namespace

namespace
{

/// One row of the standard stencil. With `tau`, entry (j, k) is scaled by
/// exp(-i omega (tau_k - tau_j)), the matching row of M^-1 H M.
void helmholtz_row(CsrBuilder<Complex> &out, const Medium &medium, double omega, const BCSpec &bc, int i1, int i2,
                   const double *tau)
{
  const GridSpec &g = medium.grid();
  const Index j = static_cast<Index>(g.index(i1, i2));
  const double k2 = medium.kappa_sq.values[j];
  const double kappa = std::sqrt(k2);
  auto add = [&](Index k, Complex v) {
    out.add(k, tau ? v * std::exp(-I * omega * (tau[k] - tau[j])) : v);
  };
  Complex diag = omega * omega * k2 - I * omega * medium.gamma.values[j] * k2;
  for (int d = 0; d < 2; ++d)
  {
    const AxisView ax = axis_view(g, bc, i1, i2, d);
    const double ih2 = 1.0 / (ax.h * ax.h);
    if (!ax.at_low() && !ax.at_high())
    {
      add(j - ax.step, ih2);
      add(j + ax.step, ih2);
      diag -= 2.0 * ih2;
      continue;
    }
    const Index inner = ax.at_low() ? j + ax.step : j - ax.step;
    const BoundaryCondition cond = ax.at_low() ? ax.low_bc : ax.high_bc;
    if (cond == BoundaryCondition::neumann)
    {
      add(inner, 2.0 * ih2);
      diag -= 2.0 * ih2;
    }
    else
    {
      add(inner, ih2);
      diag += -ih2 - I * omega * kappa / ax.h;
    }
  }
  out.add(j, diag);
  out.finish_row();
}

}  // namespace

SparseOperator assemble_helmholtz(const Medium &medium, double omega, const BCSpec &bc)
{
  check_medium(medium);
  const GridSpec &g = medium.grid();
  CsrBuilder<Complex> out(static_cast<Index>(g.size()), static_cast<Index>(g.size()), 5 * g.size());
  for (int i2 = 0; i2 < g.n2; ++i2)
  {
    for (int i1 = 0; i1 < g.n1; ++i1)
    {
      helmholtz_row(out, medium, omega, bc, i1, i2, nullptr);
    }
  }
  return out.build();
}

SparseOperator assemble_adr(const Medium &medium, double omega, const TravelTime &tt,
                            AdvectionScheme scheme, const BCSpec &bc)
{
  check_medium(medium);
  const GridSpec &g = medium.grid();
  if (!same_grid(g, tt.grid()))
  {
    throw std::invalid_argument("assemble_adr: travel time and medium live on different grids");
  }
  const Index n = static_cast<Index>(g.size());
  CsrBuilder<Complex> out(n, n, 9 * g.size());
  // Half a wavelength at the source. The amplitude is singular there, and ADR rows would leak
  // an O(omega h) error into the far field.
  const double source_radius =
      omega > 0.0 ? M_PI / (omega * std::sqrt(medium.kappa_sq(tt.src_i1, tt.src_i2))) : 0.0;
  for (int i2 = 0; i2 < g.n2; ++i2)
  {
    for (int i1 = 0; i1 < g.n1; ++i1)
    {
      if (std::hypot((i1 - tt.src_i1) * g.h1, (i2 - tt.src_i2) * g.h2) <= source_radius)
      {
        helmholtz_row(out, medium, omega, bc, i1, i2, tt.tau.values.data());
        continue;
      }
      const Index j = static_cast<Index>(g.index(i1, i2));
      const double k2 = medium.kappa_sq.values[j];
      const double kappa = std::sqrt(k2);
      const double gx[2] = {tt.grad_tau[0].values[j], tt.grad_tau[1].values[j]};
      const bool near_source = std::abs(i1 - tt.src_i1) + std::abs(i2 - tt.src_i2) <= 1;

      const double grad_sq = gx[0] * gx[0] + gx[1] * gx[1];
      Complex diag = -omega * omega * (grad_sq - k2) - I * omega * medium.gamma.values[j] * k2;

      for (int d = 0; d < 2; ++d)
      {
        const AxisView ax = axis_view(g, bc, i1, i2, d);
        const double h = ax.h;
        const double ih2 = 1.0 / (h * h);
        const double td = gx[d];
        const Complex adv = -2.0 * I * omega * td;  // multiplies d(a)/dx_d
        // -i omega tau_dd a, averaged over the two neighbors of this axis.
        const Complex mass = -I * omega * tt.tau_dd[d].values[j] * 0.5;

        if (!ax.at_low() && !ax.at_high())
        {
          const Index lo = j - ax.step;
          const Index hi = j + ax.step;
          // Laplacian and averaged mass term.
          out.add(lo, ih2 + mass);
          out.add(hi, ih2 + mass);
          diag -= 2.0 * ih2;
          if (td == 0.0)
          {
            continue;
          }
          if (scheme == AdvectionScheme::central || near_source)
          {
            out.add(hi, adv / (2.0 * h));
            out.add(lo, -adv / (2.0 * h));
            continue;
          }
          const bool second = scheme == AdvectionScheme::upwind2;
          if (td > 0.0)
          {
            if (second && ax.i >= 2)
            {
              diag += adv * 3.0 / (2.0 * h);
              out.add(lo, -adv * 4.0 / (2.0 * h));
              out.add(lo - ax.step, adv / (2.0 * h));
            }
            else
            {
              diag += adv / h;
              out.add(lo, -adv / h);
            }
          }
          else
          {
            if (second && ax.i <= ax.n - 3)
            {
              diag -= adv * 3.0 / (2.0 * h);
              out.add(hi, adv * 4.0 / (2.0 * h));
              out.add(hi + ax.step, -adv / (2.0 * h));
            }
            else
            {
              diag -= adv / h;
              out.add(hi, adv / h);
            }
          }
          continue;
        }

        // Boundary node along this axis.
        const bool low = ax.at_low();
        const double n_out = low ? -1.0 : 1.0;
        const Index inner = low ? j + ax.step : j - ax.step;
        const Index inner2 = low ? j + 2 * ax.step : j - 2 * ax.step;
        const BoundaryCondition cond = low ? ax.low_bc : ax.high_bc;
        const double n_dot_grad_tau = n_out * td;

        // n.grad(a) = i omega (n.grad(tau)) a            (Neumann on u)
        // n.grad(a) = i omega (n.grad(tau) - kappa) a    (Sommerfeld on u)
        const Complex normal_factor = cond == BoundaryCondition::neumann
                                          ? I * omega * n_dot_grad_tau
                                          : I * omega * (n_dot_grad_tau - kappa);
        // Ghost node from the boundary condition: a_g = g_in a_in + g_0 a_0 (central BC for
        // Neumann, one-sided for Sommerfeld, as in the Helmholtz rows).
        const bool neumann = cond == BoundaryCondition::neumann;
        const double g_in = neumann ? 1.0 : 0.0;
        const Complex g_0 = neumann ? 2.0 * h * normal_factor : 1.0 + h * normal_factor;
        out.add(inner, (1.0 + g_in) * ih2);
        diag += (g_0 - 2.0) * ih2;

        if (scheme == AdvectionScheme::central || near_source)
        {
          // Central advection and averaged mass through the same ghost.
          const Complex c = adv * n_out / (2.0 * h);
          out.add(inner, mass * (1.0 + g_in) + c * (g_in - 1.0));
          diag += (mass + c) * g_0;
          continue;
        }
        // Mirrored average: the missing neighbor is replaced by the inner one.
        out.add(inner, 2.0 * mass);

        if (td == 0.0)
        {
          continue;
        }
        if (n_dot_grad_tau > 0.0)
        {
          // Outflow: one-sided upwind difference into the domain, d(a)/dx = n_out * (a_0 - a_in)/h.
          if (scheme == AdvectionScheme::upwind1)
          {
            diag += adv * n_out / h;
            out.add(inner, -adv * n_out / h);
          }
          else
          {
            diag += adv * n_out * 3.0 / (2.0 * h);
            out.add(inner, -adv * n_out * 4.0 / (2.0 * h));
            out.add(inner2, adv * n_out / (2.0 * h));
          }
        }
        else
        {
          // Inflow: the normal derivative comes from the boundary condition.
          diag += adv * n_out * normal_factor;
        }
      }
      out.add(j, diag);
      out.finish_row();
    }
  }
  return out.build();
}

SparseOperator shift_operator(const SparseOperator &A, double alpha, double omega, const Medium &medium)
{
  if (static_cast<std::size_t>(A.rows) != medium.kappa_sq.size())
  {
    throw std::invalid_argument("shift_operator: operator and medium sizes differ");
  }
  SparseOperator s = A;
  for (Index i = 0; i < s.rows; ++i)
  {
    const auto b = s.col.begin() + s.row_ptr[i];
    const auto e = s.col.begin() + s.row_ptr[i + 1];
    const auto it = std::lower_bound(b, e, i);
    if (it == e || *it != i)
    {
      throw std::invalid_argument("shift_operator: missing diagonal in row " + std::to_string(i));
    }
    s.val[it - s.col.begin()] -= I * (omega * omega * alpha * medium.kappa_sq.values[i]);
  }
  return s;
}

DiagonalScaling DiagonalScaling::from_travel_time(const TravelTime &tt, double omega)
{
  DiagonalScaling m;
  m.diag.resize(tt.tau.size());
  for (std::size_t j = 0; j < tt.tau.size(); ++j)
  {
    m.diag[j] = std::polar(1.0, -omega * tt.tau.values[j]);
  }
  return m;
}

SparseOperator similarity_conjugate(const SparseOperator &A, const DiagonalScaling &M,
                                    ConjugationDirection direction)
{
  if (M.diag.size() != static_cast<std::size_t>(A.rows) || A.rows != A.cols)
  {
    throw std::invalid_argument("similarity_conjugate: dimension mismatch");
  }
  SparseOperator out = A;
  for (Index i = 0; i < A.rows; ++i)
  {
    for (Index k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      const Index c = A.col[k];
      // M is unimodular, so M^-1 = conj(M).
      const Complex f = direction == ConjugationDirection::M_A_Minv ? M.diag[i] * std::conj(M.diag[c])
                                                                    : M.diag[c] * std::conj(M.diag[i]);
      out.val[k] = A.val[k] * f;
    }
  }
  return out;
}

ComplexField rhs_transform(const ComplexField &q, const TravelTime &tt, double omega, RhsDirection direction)
{
  if (!same_grid(q.grid, tt.grid()))
  {
    throw std::invalid_argument("rhs_transform: grid mismatch");
  }
  const double sign = direction == RhsDirection::to_adr ? 1.0 : -1.0;
  ComplexField out(q.grid);
  for (std::size_t j = 0; j < q.size(); ++j)
  {
    out.values[j] = q.values[j] * std::polar(1.0, sign * omega * tt.tau.values[j]);
  }
  return out;
}

}  // namespace helmadr
