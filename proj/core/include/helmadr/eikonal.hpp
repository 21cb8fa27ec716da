#ifndef HELMADR_EIKONAL_HPP
#define HELMADR_EIKONAL_HPP

#include <array>
#include <optional>
#include <vector>

#include "helmadr/grid.hpp"

namespace helmadr
{

/// Distance factor tau0(x) = |x - x0| and its analytic derivatives (2D).
struct AnalyticBase
{
  double x1 = 0.0;
  double x2 = 0.0;

  static AnalyticBase at_source(const GridSpec &grid, const SourceSpec &source);

  double tau0(double y1, double y2) const;
  /// (x - x0) / |x - x0|; zero at the source.
  std::array<double, 2> grad_tau0(double y1, double y2) const;
  /// (d - 1) / |x - x0| with d = 2; zero at the source.
  double lap_tau0(double y1, double y2) const;
  /// Diagonal of the Hessian, (1 - g_d^2) / |x - x0|; zero at the source.
  std::array<double, 2> hess_diag_tau0(double y1, double y2) const;
};

enum class MarchOrder
{
  first,
  second
};

/// Upwind data along one axis for a local update. `near` is the accepted neighbor, `far` the
/// next accepted node in line (used by the second-order stencil when its travel time does
/// not exceed the near one). `side` is -1 when the neighbor has the lower index, +1 otherwise.
struct AxisNeighbor
{
  int side = -1;
  double tau1_near = 0.0;
  double tau_near = 0.0;  // full travel time tau0 * tau1 at the near node
  std::optional<double> tau1_far;
  std::optional<double> tau_far;
};

/// Everything the factored local solver needs at one node.
struct LocalStencil
{
  double tau0 = 0.0;
  std::array<double, 2> grad_tau0{0.0, 0.0};
  double kappa = 0.0;
  std::array<double, 2> h{0.0, 0.0};
  std::array<std::optional<AxisNeighbor>, 2> axes;
};

/// Candidate tau1 at one node from the factored eikonal equation
/// |tau0 grad(tau1) + tau1 grad(tau0)|^2 = kappa^2, discretized with one-sided differences
/// toward the accepted neighbors. Returns the larger quadratic root; when the discriminant is
/// negative or the root is not causal, axes are dropped and the order lowered until a causal
/// value exists. A dropped axis contributes no term (d(tau) = 0 across it).
double local_update(const LocalStencil &stencil, MarchOrder order);

/// Solves the quadratic for one fixed choice of axes and orders. Returns nothing when the
/// discriminant is negative or the larger root is not causal.
std::optional<double> solve_local_quadratic(const LocalStencil &stencil,
                                            const std::array<bool, 2> &use_axis,
                                            const std::array<bool, 2> &second_order);

struct MarchTrace
{
  /// Full travel time of each node in acceptance order (seed nodes first).
  std::vector<double> accepted_tau;
  std::vector<std::size_t> accepted_index;
};

/// Factored Fast Marching. The source node and its (up to 8) immediate neighbors are seeded
/// with tau1 = kappa(x0); the heap is keyed on the full travel time tau0 * tau1 with ties
/// broken by node index.
RealField fast_march(const Medium &medium, const GridSpec &grid, const SourceSpec &source,
                     MarchOrder order, MarchTrace *trace = nullptr);

struct TravelTime
{
  RealField tau1;
  AnalyticBase base;
  RealField tau;                       // tau0 * tau1
  std::array<RealField, 2> grad_tau;  // components along axis 1 and axis 2
  std::array<RealField, 2> tau_dd;    // second derivatives d^2 tau / dx_d^2
  RealField lap_tau;                  // tau_dd[0] + tau_dd[1]
  int src_i1 = 0;
  int src_i2 = 0;

  const GridSpec &grid() const { return tau1.grid; }

  /// tau = 0 everywhere; the ADR operators then reduce to the Helmholtz operator.
  static TravelTime zero(const GridSpec &grid, const SourceSpec &source);
};

/// grad(tau) = tau0 grad(tau1) + tau1 grad(tau0) and, per axis,
/// tau_dd = tau1 d_dd(tau0) + 2 d_d(tau0) d_d(tau1) + tau0 d_dd(tau1), with central
/// differences for tau1 (one-sided at the boundary); lap(tau) is their sum. At the source node
/// grad(tau) = 0 and tau_dd is the second difference of tau itself (a mirrored neighbor on a
/// boundary), about 2 kappa / h, which matches the phase jump to the neighbors.
TravelTime tau_derivatives(const RealField &tau1, const AnalyticBase &base, const Medium &medium,
                           const SourceSpec &source);

/// fast_march followed by tau_derivatives.
TravelTime compute_travel_time(const Medium &medium, const SourceSpec &source,
                               MarchOrder order = MarchOrder::second);

}  // namespace helmadr

#endif  // HELMADR_EIKONAL_HPP
