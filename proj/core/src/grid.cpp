#include "helmadr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace helmadr
{

GridSpec make_grid(int n1, int n2, double L1, double L2)
{
  if (n1 < 5 || n2 < 5)
  {
    throw std::invalid_argument("grid needs at least 5 nodes per dimension, got " +
                                std::to_string(n1) + "x" + std::to_string(n2));
  }
  if (!(L1 > 0.0) || !(L2 > 0.0))
  {
    throw std::invalid_argument("grid lengths must be positive");
  }
  GridSpec g;
  g.n1 = n1;
  g.n2 = n2;
  g.L1 = L1;
  g.L2 = L2;
  g.h1 = L1 / (n1 - 1);
  g.h2 = L2 / (n2 - 1);
  return g;
}

bool same_grid(const GridSpec &a, const GridSpec &b)
{
  return a.n1 == b.n1 && a.n2 == b.n2 && a.L1 == b.L1 && a.L2 == b.L2;
}

double SourceSpec::frequency() const { return omega / (2.0 * std::numbers::pi); }

void validate_source(const GridSpec &grid, const SourceSpec &source)
{
  if (!(source.omega > 0.0))
  {
    throw std::invalid_argument("source angular frequency must be positive");
  }
  const bool inside_1 = source.i1 > 0 && source.i1 < grid.n1 - 1;
  const bool inside_2 = source.i2 >= 0 && source.i2 < grid.n2 - 1;
  if (!inside_1 || !inside_2)
  {
    throw std::invalid_argument("source node (" + std::to_string(source.i1) + "," +
                                std::to_string(source.i2) +
                                ") must be interior or on the top row");
  }
}

ModelKind parse_model_kind(std::string_view name)
{
  if (name == "constant") return ModelKind::constant;
  if (name == "linear") return ModelKind::linear;
  if (name == "gaussian") return ModelKind::gaussian;
  if (name == "waveguide") return ModelKind::waveguide;
  if (name == "wedge") return ModelKind::wedge;
  throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

std::string_view to_string(ModelKind kind)
{
  switch (kind)
  {
    case ModelKind::constant: return "constant";
    case ModelKind::linear: return "linear";
    case ModelKind::gaussian: return "gaussian";
    case ModelKind::waveguide: return "waveguide";
    case ModelKind::wedge: return "wedge";
  }
  return "unknown";
}

namespace
{

double model_value(ModelKind kind, const ModelParams &p, double x1, double x2, double L2)
{
  switch (kind)
  {
    case ModelKind::constant:
      return p.kappa_sq;
    case ModelKind::linear:
      return p.kappa_sq_top + (p.kappa_sq_bottom - p.kappa_sq_top) * (x2 / L2);
    case ModelKind::gaussian:
    {
      const double d1 = x1 - 0.5;
      const double d2 = x2 - 0.5;
      return std::exp(-(4.0 * d1 * d1 + 8.0 * d2 * d2));
    }
    case ModelKind::waveguide:
    {
      const double d1 = x1 - 0.5;
      const double v = std::exp(1.25 * (1.0 - 0.4 * std::exp(-32.0 * d1 * d1)));
      return 1.0 / (v * v);
    }
    case ModelKind::wedge:
    {
      // Bottom half mirrors the top half about mid-depth.
      const double xm = std::min(x2, L2 - x2);
      return 0.25 * std::tanh((4.0 * xm - x1 - 0.75) * 20.0) + 0.75;
    }
  }
  return 0.0;
}

}  // namespace

Medium make_medium(RealField kappa_sq)
{
  for (double k : kappa_sq.values)
  {
    if (!(k > 0.0) || !std::isfinite(k))
    {
      throw std::invalid_argument("squared slowness must be finite and strictly positive");
    }
  }
  Medium m;
  m.gamma = RealField(kappa_sq.grid, 0.0);
  m.kappa_sq = std::move(kappa_sq);
  return m;
}

Medium generate_model(ModelKind kind, const GridSpec &grid, const ModelParams &params)
{
  if (kind == ModelKind::constant && !(params.kappa_sq > 0.0))
  {
    throw std::invalid_argument("constant model needs kappa_sq > 0");
  }
  if (kind == ModelKind::linear && !(params.kappa_sq_top > 0.0 && params.kappa_sq_bottom > 0.0))
  {
    throw std::invalid_argument("linear model needs positive top and bottom kappa_sq");
  }
  RealField k(grid);
  for (int i2 = 0; i2 < grid.n2; ++i2)
  {
    for (int i1 = 0; i1 < grid.n1; ++i1)
    {
      k(i1, i2) = model_value(kind, params, grid.x1(i1), grid.x2(i2), grid.L2);
    }
  }
  return make_medium(std::move(k));
}

std::string_view to_string(BoundarySide side)
{
  switch (side)
  {
    case BoundarySide::top: return "top";
    case BoundarySide::bottom: return "bottom";
    case BoundarySide::left: return "left";
    case BoundarySide::right: return "right";
  }
  return "unknown";
}

BoundarySide parse_boundary_side(std::string_view name)
{
  if (name == "top") return BoundarySide::top;
  if (name == "bottom") return BoundarySide::bottom;
  if (name == "left") return BoundarySide::left;
  if (name == "right") return BoundarySide::right;
  throw std::invalid_argument("unknown boundary side '" + std::string(name) + "'");
}

double layer_width(const Medium &medium, double omega)
{
  double mean_kappa = 0.0;
  for (double k2 : medium.kappa_sq.values)
  {
    mean_kappa += std::sqrt(k2);
  }
  mean_kappa /= static_cast<double>(medium.kappa_sq.size());
  return 2.0 * std::numbers::pi / (omega * mean_kappa);
}

Medium attenuation_layer(const GridSpec &grid, const Medium &medium, const SourceSpec &source,
                         const std::set<BoundarySide> &sides)
{
  if (!(source.omega > 0.0))
  {
    throw std::invalid_argument("attenuation layer needs omega > 0");
  }
  const double omega = source.omega;
  const double width = layer_width(medium, omega);
  for (BoundarySide s : sides)
  {
    const bool horizontal = s == BoundarySide::left || s == BoundarySide::right;
    const double extent = horizontal ? grid.L1 : grid.L2;
    if (width > 0.5 * extent)
    {
      throw std::invalid_argument("absorbing band width " + std::to_string(width) +
                                  " exceeds half the domain extent on side " +
                                  std::string(to_string(s)));
    }
  }

  Medium out = medium;
  for (int i2 = 0; i2 < grid.n2; ++i2)
  {
    for (int i1 = 0; i1 < grid.n1; ++i1)
    {
      double g = 0.0;
      for (BoundarySide s : sides)
      {
        double dist = 0.0;
        switch (s)
        {
          case BoundarySide::top: dist = grid.x2(i2); break;
          case BoundarySide::bottom: dist = grid.L2 - grid.x2(i2); break;
          case BoundarySide::left: dist = grid.x1(i1); break;
          case BoundarySide::right: dist = grid.L1 - grid.x1(i1); break;
        }
        dist = std::max(dist, 0.0);
        if (dist < width)
        {
          const double depth = (width - dist) / width;
          g = std::max(g, omega * depth * depth);
        }
      }
      out.gamma(i1, i2) = std::max(medium.gamma(i1, i2), g);
    }
  }
  return out;
}

ComplexField point_source(const GridSpec &grid, const SourceSpec &source)
{
  if (source.i1 < 0 || source.i1 >= grid.n1 || source.i2 < 0 || source.i2 >= grid.n2)
  {
    throw std::invalid_argument("source node outside the grid");
  }
  ComplexField q(grid);
  q(source.i1, source.i2) = 1.0 / (grid.h1 * grid.h2);
  return q;
}

double default_error_floor(const ComplexField &u_ref)
{
  double m = 0.0;
  for (const Complex &z : u_ref.values)
  {
    m = std::max(m, std::abs(z));
  }
  return 1e-12 * m;
}

RealField relative_error_map(const ComplexField &u, const ComplexField &u_ref, double floor)
{
  if (!same_grid(u.grid, u_ref.grid))
  {
    throw std::invalid_argument("relative_error_map: grid mismatch");
  }
  if (floor < 0.0)
  {
    throw std::invalid_argument("relative_error_map: floor must be non-negative");
  }
  const double guard = std::max(floor, std::numeric_limits<double>::min());
  RealField e(u.grid);
  for (std::size_t j = 0; j < u.size(); ++j)
  {
    const double diff = std::abs(u.values[j] - u_ref.values[j]);
    e.values[j] = diff == 0.0 ? 0.0 : diff / std::max(std::abs(u_ref.values[j]), guard);
  }
  return e;
}

RealField relative_error_map(const ComplexField &u, const ComplexField &u_ref)
{
  return relative_error_map(u, u_ref, default_error_floor(u_ref));
}

namespace
{

template <typename T>
Field<T> inject(const Field<T> &field, int factor)
{
  const GridSpec &g = field.grid;
  if (factor < 1 || (g.n1 - 1) % factor != 0 || (g.n2 - 1) % factor != 0)
  {
    throw std::invalid_argument("downsample: factor " + std::to_string(factor) +
                                " does not divide the interval counts");
  }
  GridSpec c = g;
  c.n1 = (g.n1 - 1) / factor + 1;
  c.n2 = (g.n2 - 1) / factor + 1;
  c.h1 = c.L1 / (c.n1 - 1);
  c.h2 = c.L2 / (c.n2 - 1);
  Field<T> out(c);
  for (int i2 = 0; i2 < c.n2; ++i2)
  {
    for (int i1 = 0; i1 < c.n1; ++i1)
    {
      out(i1, i2) = field(i1 * factor, i2 * factor);
    }
  }
  return out;
}

}  // namespace

ComplexField downsample(const ComplexField &field, int factor) { return inject(field, factor); }
RealField downsample(const RealField &field, int factor) { return inject(field, factor); }

double points_per_wavelength(const GridSpec &grid, const Medium &medium, double omega)
{
  const double kmax_sq = *std::max_element(medium.kappa_sq.values.begin(), medium.kappa_sq.values.end());
  return 2.0 * std::numbers::pi / (omega * std::sqrt(kmax_sq) * std::max(grid.h1, grid.h2));
}

}  // namespace helmadr
