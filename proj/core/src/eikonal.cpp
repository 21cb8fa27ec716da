#include "helmadr/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace helmadr
{

AnalyticBase AnalyticBase::at_source(const GridSpec &grid, const SourceSpec &source)
{
  return {grid.x1(source.i1), grid.x2(source.i2)};
}

double AnalyticBase::tau0(double y1, double y2) const { return std::hypot(y1 - x1, y2 - x2); }

std::array<double, 2> AnalyticBase::grad_tau0(double y1, double y2) const
{
  const double r = tau0(y1, y2);
  if (r == 0.0)
  {
    return {0.0, 0.0};
  }
  return {(y1 - x1) / r, (y2 - x2) / r};
}

double AnalyticBase::lap_tau0(double y1, double y2) const
{
  const double r = tau0(y1, y2);
  return r == 0.0 ? 0.0 : 1.0 / r;
}

std::array<double, 2> AnalyticBase::hess_diag_tau0(double y1, double y2) const
{
  const double r = tau0(y1, y2);
  if (r == 0.0)
  {
    return {0.0, 0.0};
  }
  const double g1 = (y1 - x1) / r;
  const double g2 = (y2 - x2) / r;
  return {(1.0 - g1 * g1) / r, (1.0 - g2 * g2) / r};
}

std::optional<double> solve_local_quadratic(const LocalStencil &st,
                                            const std::array<bool, 2> &use_axis,
                                            const std::array<bool, 2> &second_order)
{
  double A = 0.0;
  double B = 0.0;
  double C = -st.kappa * st.kappa;
  double causal_floor = 0.0;
  bool any = false;
  for (int d = 0; d < 2; ++d)
  {
    // A dropped axis carries no term: the update is the lower-dimensional eikonal equation.
    if (!use_axis[d] || !st.axes[d]) continue;
    const double g = st.grad_tau0[d];
    double p = g;
    double q = 0.0;
    {
      const AxisNeighbor &nb = *st.axes[d];
      // Backward difference when the neighbor sits at the lower index.
      const double s = nb.side < 0 ? 1.0 : -1.0;
      double c0 = 1.0;
      double c1 = nb.tau1_near;
      causal_floor = std::max(causal_floor, nb.tau_near);
      if (second_order[d] && nb.tau1_far && nb.tau_far)
      {
        c0 = 1.5;
        c1 = 2.0 * nb.tau1_near - 0.5 * *nb.tau1_far;
        causal_floor = std::max(causal_floor, *nb.tau_far);
      }
      p = st.tau0 * s * c0 / st.h[d] + g;
      q = -st.tau0 * s * c1 / st.h[d];
      any = true;
    }
    A += p * p;
    B += 2.0 * p * q;
    C += q * q;
  }
  if (!any || A <= 0.0)
  {
    return std::nullopt;
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0)
  {
    return std::nullopt;
  }
  const double sq = std::sqrt(disc);
  // Larger root, written to avoid cancellation when B > 0.
  const double root = B <= 0.0 ? (-B + sq) / (2.0 * A) : (2.0 * C) / (-B - sq);
  if (!(root > 0.0) || !std::isfinite(root))
  {
    return std::nullopt;
  }
  if (st.tau0 * root < causal_floor * (1.0 - 1e-13))
  {
    return std::nullopt;
  }
  return root;
}

double local_update(const LocalStencil &st, MarchOrder order)
{
  std::array<bool, 2> available{st.axes[0].has_value(), st.axes[1].has_value()};
  if (!available[0] && !available[1])
  {
    throw std::invalid_argument("local_update needs at least one accepted neighbor");
  }
  std::array<bool, 2> second{false, false};
  if (order == MarchOrder::second)
  {
    for (int d = 0; d < 2; ++d)
    {
      second[d] = available[d] && st.axes[d]->tau_far && *st.axes[d]->tau_far <= st.axes[d]->tau_near;
    }
  }

  const std::array<std::array<bool, 2>, 2> orders{second, std::array<bool, 2>{false, false}};
  for (const auto &ord : orders)
  {
    if (auto v = solve_local_quadratic(st, available, ord))
    {
      return *v;
    }
    double best = std::numeric_limits<double>::infinity();
    for (int d = 0; d < 2; ++d)
    {
      if (!available[d]) continue;
      std::array<bool, 2> only{false, false};
      only[d] = true;
      if (auto v = solve_local_quadratic(st, only, ord))
      {
        best = std::min(best, *v);
      }
    }
    if (std::isfinite(best))
    {
      return best;
    }
  }

  // Unfactored one-axis step; always causal.
  double best = std::numeric_limits<double>::infinity();
  for (int d = 0; d < 2; ++d)
  {
    if (!available[d]) continue;
    best = std::min(best, (st.axes[d]->tau_near + st.h[d] * st.kappa) / st.tau0);
  }
  return best;
}

namespace
{

enum : unsigned char
{
  far_node = 0,
  trial_node = 1,
  accepted_node = 2
};

struct MarchState
{
  const GridSpec &grid;
  const AnalyticBase &base;
  std::vector<double> kappa;
  std::vector<double> tau1;
  std::vector<double> tau;
  std::vector<unsigned char> status;

  bool accepted(int i1, int i2) const
  {
    return i1 >= 0 && i1 < grid.n1 && i2 >= 0 && i2 < grid.n2 && status[grid.index(i1, i2)] == accepted_node;
  }

  LocalStencil stencil(int i1, int i2) const
  {
    LocalStencil st;
    const double y1 = grid.x1(i1);
    const double y2 = grid.x2(i2);
    st.tau0 = base.tau0(y1, y2);
    st.grad_tau0 = base.grad_tau0(y1, y2);
    st.kappa = kappa[grid.index(i1, i2)];
    st.h = {grid.h1, grid.h2};
    for (int d = 0; d < 2; ++d)
    {
      const int di = d == 0 ? 1 : 0;
      const int dj = d == 0 ? 0 : 1;
      std::optional<AxisNeighbor> best;
      for (int side : {-1, 1})
      {
        const int a1 = i1 + side * di;
        const int a2 = i2 + side * dj;
        if (!accepted(a1, a2)) continue;
        const std::size_t j = grid.index(a1, a2);
        if (best && tau[j] >= best->tau_near) continue;
        AxisNeighbor nb;
        nb.side = side;
        nb.tau1_near = tau1[j];
        nb.tau_near = tau[j];
        const int f1 = i1 + 2 * side * di;
        const int f2 = i2 + 2 * side * dj;
        if (accepted(f1, f2))
        {
          const std::size_t k = grid.index(f1, f2);
          nb.tau1_far = tau1[k];
          nb.tau_far = tau[k];
        }
        best = nb;
      }
      st.axes[d] = best;
    }
    return st;
  }
};

}  // namespace

RealField fast_march(const Medium &medium, const GridSpec &grid, const SourceSpec &source,
                     MarchOrder order, MarchTrace *trace)
{
  if (!same_grid(medium.grid(), grid))
  {
    throw std::invalid_argument("fast_march: medium and grid differ");
  }
  if (source.i1 < 0 || source.i1 >= grid.n1 || source.i2 < 0 || source.i2 >= grid.n2)
  {
    throw std::invalid_argument("fast_march: source node outside the grid");
  }
  const AnalyticBase base = AnalyticBase::at_source(grid, source);
  const std::size_t n = grid.size();
  const double inf = std::numeric_limits<double>::infinity();

  MarchState s{grid, base, std::vector<double>(n), std::vector<double>(n, inf), std::vector<double>(n, inf),
               std::vector<unsigned char>(n, far_node)};
  for (std::size_t j = 0; j < n; ++j)
  {
    s.kappa[j] = std::sqrt(medium.kappa_sq.values[j]);
  }

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::size_t n_accepted = 0;

  auto accept = [&](std::size_t j) {
    s.status[j] = accepted_node;
    ++n_accepted;
    if (trace)
    {
      trace->accepted_tau.push_back(s.tau[j]);
      trace->accepted_index.push_back(j);
    }
  };

  // Seed the source and its immediate neighborhood with the constant-medium solution.
  const double k0 = s.kappa[grid.index(source.i1, source.i2)];
  std::vector<std::size_t> seeds;
  for (int d2 = -1; d2 <= 1; ++d2)
  {
    for (int d1 = -1; d1 <= 1; ++d1)
    {
      const int a1 = source.i1 + d1;
      const int a2 = source.i2 + d2;
      if (a1 < 0 || a1 >= grid.n1 || a2 < 0 || a2 >= grid.n2) continue;
      const std::size_t j = grid.index(a1, a2);
      s.tau1[j] = k0;
      s.tau[j] = base.tau0(grid.x1(a1), grid.x2(a2)) * k0;
      seeds.push_back(j);
    }
  }
  std::sort(seeds.begin(), seeds.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(s.tau[a], a) < std::tie(s.tau[b], b);
  });
  for (std::size_t j : seeds)
  {
    accept(j);
  }

  auto relax_neighbors = [&](std::size_t j) {
    const int i1 = static_cast<int>(j % static_cast<std::size_t>(grid.n1));
    const int i2 = static_cast<int>(j / static_cast<std::size_t>(grid.n1));
    constexpr int offsets[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    for (const auto &o : offsets)
    {
      const int a1 = i1 + o[0];
      const int a2 = i2 + o[1];
      if (a1 < 0 || a1 >= grid.n1 || a2 < 0 || a2 >= grid.n2) continue;
      const std::size_t k = grid.index(a1, a2);
      if (s.status[k] == accepted_node) continue;
      const double t1 = local_update(s.stencil(a1, a2), order);
      s.tau1[k] = t1;
      s.tau[k] = base.tau0(grid.x1(a1), grid.x2(a2)) * t1;
      s.status[k] = trial_node;
      heap.emplace(s.tau[k], k);
    }
  };

  for (std::size_t j : seeds)
  {
    relax_neighbors(j);
  }

  while (!heap.empty())
  {
    const auto [t, j] = heap.top();
    heap.pop();
    if (s.status[j] == accepted_node || t != s.tau[j])
    {
      continue;  // stale entry
    }
    accept(j);
    relax_neighbors(j);
  }

  if (n_accepted != n)
  {
    throw std::runtime_error("fast_march: heap exhausted after accepting " + std::to_string(n_accepted) +
                             " of " + std::to_string(n) + " nodes");
  }
  return RealField(grid, std::move(s.tau1));
}

namespace
{

double first_derivative(const RealField &f, int i1, int i2, int axis, double h)
{
  const int n = axis == 0 ? f.grid.n1 : f.grid.n2;
  const int i = axis == 0 ? i1 : i2;
  auto at = [&](int k) { return axis == 0 ? f(k, i2) : f(i1, k); };
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (i == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
  return (at(i + 1) - at(i - 1)) / (2.0 * h);
}

double second_derivative(const RealField &f, int i1, int i2, int axis, double h)
{
  const int n = axis == 0 ? f.grid.n1 : f.grid.n2;
  const int i = axis == 0 ? i1 : i2;
  auto at = [&](int k) { return axis == 0 ? f(k, i2) : f(i1, k); };
  const double h2 = h * h;
  if (i == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2;
  if (i == n - 1) return (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / h2;
  return (at(i - 1) - 2.0 * at(i) + at(i + 1)) / h2;
}

}  // namespace

TravelTime TravelTime::zero(const GridSpec &grid, const SourceSpec &source)
{
  TravelTime tt;
  tt.tau1 = RealField(grid, 0.0);
  tt.base = AnalyticBase::at_source(grid, source);
  tt.tau = RealField(grid, 0.0);
  tt.grad_tau = {RealField(grid, 0.0), RealField(grid, 0.0)};
  tt.tau_dd = {RealField(grid, 0.0), RealField(grid, 0.0)};
  tt.lap_tau = RealField(grid, 0.0);
  tt.src_i1 = source.i1;
  tt.src_i2 = source.i2;
  return tt;
}

TravelTime tau_derivatives(const RealField &tau1, const AnalyticBase &base, const Medium &medium,
                           const SourceSpec &source)
{
  const GridSpec &g = tau1.grid;
  if (!same_grid(g, medium.grid()))
  {
    throw std::invalid_argument("tau_derivatives: grid mismatch");
  }
  TravelTime tt;
  tt.tau1 = tau1;
  tt.base = base;
  tt.tau = RealField(g);
  tt.grad_tau = {RealField(g), RealField(g)};
  tt.tau_dd = {RealField(g), RealField(g)};
  tt.lap_tau = RealField(g);
  tt.src_i1 = source.i1;
  tt.src_i2 = source.i2;
  for (int i2 = 0; i2 < g.n2; ++i2)
  {
    for (int i1 = 0; i1 < g.n1; ++i1)
    {
      tt.tau(i1, i2) = base.tau0(g.x1(i1), g.x2(i2)) * tau1(i1, i2);
    }
  }
  for (int i2 = 0; i2 < g.n2; ++i2)
  {
    for (int i1 = 0; i1 < g.n1; ++i1)
    {
      const double y1 = g.x1(i1);
      const double y2 = g.x2(i2);
      const double t0 = base.tau0(y1, y2);
      const double t1 = tau1(i1, i2);
      if (i1 == source.i1 && i2 == source.i2)
      {
        tt.grad_tau[0](i1, i2) = 0.0;
        tt.grad_tau[1](i1, i2) = 0.0;
        const int idx[2] = {i1, i2};
        const int n[2] = {g.n1, g.n2};
        const double h[2] = {g.h1, g.h2};
        for (int d = 0; d < 2; ++d)
        {
          auto at = [&](int k) { return d == 0 ? tt.tau(k, i2) : tt.tau(i1, k); };
          const int i = idx[d];
          const double lo = i > 0 ? at(i - 1) : at(i + 1);
          const double hi = i < n[d] - 1 ? at(i + 1) : at(i - 1);
          tt.tau_dd[d](i1, i2) = (lo + hi - 2.0 * at(i)) / (h[d] * h[d]);
        }
        tt.lap_tau(i1, i2) = tt.tau_dd[0](i1, i2) + tt.tau_dd[1](i1, i2);
        continue;
      }
      const auto g0 = base.grad_tau0(y1, y2);
      const auto hd0 = base.hess_diag_tau0(y1, y2);
      const double d[2] = {first_derivative(tau1, i1, i2, 0, g.h1), first_derivative(tau1, i1, i2, 1, g.h2)};
      const double dd[2] = {second_derivative(tau1, i1, i2, 0, g.h1), second_derivative(tau1, i1, i2, 1, g.h2)};
      for (int a = 0; a < 2; ++a)
      {
        tt.grad_tau[a](i1, i2) = t0 * d[a] + t1 * g0[a];
        tt.tau_dd[a](i1, i2) = t1 * hd0[a] + 2.0 * g0[a] * d[a] + t0 * dd[a];
      }
      tt.lap_tau(i1, i2) = tt.tau_dd[0](i1, i2) + tt.tau_dd[1](i1, i2);
    }
  }
  return tt;
}

TravelTime compute_travel_time(const Medium &medium, const SourceSpec &source, MarchOrder order)
{
  const GridSpec &g = medium.grid();
  const RealField tau1 = fast_march(medium, g, source, order);
  return tau_derivatives(tau1, AnalyticBase::at_source(g, source), medium, source);
}

}  // namespace helmadr
