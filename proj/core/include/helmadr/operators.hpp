#ifndef HELMADR_OPERATORS_HPP
#define HELMADR_OPERATORS_HPP

#include <array>
#include <string_view>

#include "helmadr/eikonal.hpp"
#include "helmadr/grid.hpp"
#include "helmadr/sparse.hpp"

namespace helmadr
{

enum class BoundaryCondition
{
  neumann,
  sommerfeld
};

std::string_view to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(std::string_view name);

/// One condition per side. Absorbing layers are carried separately by Medium::gamma.
struct BCSpec
{
  BoundaryCondition top = BoundaryCondition::neumann;
  BoundaryCondition bottom = BoundaryCondition::sommerfeld;
  BoundaryCondition left = BoundaryCondition::sommerfeld;
  BoundaryCondition right = BoundaryCondition::sommerfeld;

  BoundaryCondition at(BoundarySide side) const;
  BoundaryCondition &at(BoundarySide side);

  static BCSpec all(BoundaryCondition bc) { return {bc, bc, bc, bc}; }
};

/// Five-point discretization of  lap(u) + omega^2 kappa^2 u - i omega gamma kappa^2 u.
/// Neumann sides eliminate a mirrored ghost node. Sommerfeld sides use the one-sided ghost
/// (u_g - u_0)/h = -i omega kappa u_0, i.e. outgoing waves for the exp(-i omega tau) phase.
SparseOperator assemble_helmholtz(const Medium &medium, double omega, const BCSpec &bc);

enum class AdvectionScheme
{
  central,
  upwind1,
  upwind2
};

std::string_view to_string(AdvectionScheme scheme);

/// Discretization of the amplitude equation
///   lap(a) - 2 i omega grad(tau).grad(a) - i omega lap(tau) a - omega^2 (|grad tau|^2 - kappa^2) a
///   - i omega gamma kappa^2 a.
/// The lap(tau) mass term is split per axis: tau_dd times the average of that axis pair of
/// neighbors. Rows within half a local wavelength of the source, where a is singular, are rows
/// of M^-1 H M (see DiagonalScaling). Other nodes adjacent to the source use the central
/// advection stencil. On boundary rows the normal advection derivative is upwind when the flow
/// leaves the domain and taken from the boundary condition otherwise.
SparseOperator assemble_adr(const Medium &medium, double omega, const TravelTime &tt,
                            AdvectionScheme scheme, const BCSpec &bc);

/// H_s = A - i omega^2 alpha diag(kappa^2).
SparseOperator shift_operator(const SparseOperator &A, double alpha, double omega, const Medium &medium);

/// M_jj = exp(-i omega tau_j).
struct DiagonalScaling
{
  ComplexVector diag;

  static DiagonalScaling from_travel_time(const TravelTime &tt, double omega);
};

enum class ConjugationDirection
{
  M_A_Minv,
  Minv_A_M
};

/// Entry (i, j) is scaled by M_ii / M_jj (M A M^-1) or M_jj / M_ii (M^-1 A M).
SparseOperator similarity_conjugate(const SparseOperator &A, const DiagonalScaling &M,
                                    ConjugationDirection direction);

enum class RhsDirection
{
  to_adr,        // q_hat = q exp(+i omega tau)
  to_helmholtz,  // u = a exp(-i omega tau)
};

ComplexField rhs_transform(const ComplexField &q, const TravelTime &tt, double omega, RhsDirection direction);

}  // namespace helmadr

#endif  // HELMADR_OPERATORS_HPP
