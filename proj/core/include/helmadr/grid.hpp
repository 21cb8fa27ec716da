#ifndef HELMADR_GRID_HPP
#define HELMADR_GRID_HPP

#include <complex>
#include <cstddef>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace helmadr
{

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Nodal regular 2D grid. Axis 1 is horizontal, axis 2 is depth (x2 = 0 is the top surface).
/// Node (i1, i2) is stored at linear index i2 * n1 + i1.
struct GridSpec
{
  int n1 = 0;
  int n2 = 0;
  double L1 = 0.0;
  double L2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }
  std::size_t index(int i1, int i2) const
  {
    return static_cast<std::size_t>(i2) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(i1);
  }
  double x1(int i1) const { return i1 * h1; }
  double x2(int i2) const { return i2 * h2; }

  bool operator==(const GridSpec &other) const = default;
};

/// Validates n1, n2 >= 5 and L1, L2 > 0; spacings are L_d / (n_d - 1).
GridSpec make_grid(int n1, int n2, double L1, double L2);

/// True when both node counts and lengths agree (spacings are derived).
bool same_grid(const GridSpec &a, const GridSpec &b);

template <typename T>
struct Field
{
  GridSpec grid;
  std::vector<T> values;

  Field() = default;
  explicit Field(const GridSpec &g, T fill = T{}) : grid(g), values(g.size(), fill) {}
  Field(const GridSpec &g, std::vector<T> v) : grid(g), values(std::move(v))
  {
    if (values.size() != grid.size())
    {
      throw std::invalid_argument("field length " + std::to_string(values.size()) +
                                  " does not match grid size " + std::to_string(grid.size()));
    }
  }

  T &operator()(int i1, int i2) { return values[grid.index(i1, i2)]; }
  const T &operator()(int i1, int i2) const { return values[grid.index(i1, i2)]; }
  std::size_t size() const { return values.size(); }
};

using RealField = Field<double>;
using ComplexField = Field<Complex>;

struct Medium
{
  RealField kappa_sq;  // squared slowness
  RealField gamma;     // attenuation, zero outside absorbing bands

  const GridSpec &grid() const { return kappa_sq.grid; }
};

struct SourceSpec
{
  int i1 = 0;
  int i2 = 0;
  double omega = 0.0;  // angular frequency

  double frequency() const;
};

/// Validates that the source node is on the grid and not on the bottom or side edges
/// (the top row is allowed), and that omega > 0.
void validate_source(const GridSpec &grid, const SourceSpec &source);

enum class ModelKind
{
  constant,
  linear,
  gaussian,
  waveguide,
  wedge
};

ModelKind parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);

struct ModelParams
{
  double kappa_sq = 1.0;          // constant model
  double kappa_sq_top = 0.4;      // linear model, at x2 = 0
  double kappa_sq_bottom = 0.08;  // linear model, at x2 = L2
};

Medium generate_model(ModelKind kind, const GridSpec &grid, const ModelParams &params = {});

/// Medium with the given squared slowness and zero attenuation. Requires kappa_sq > 0.
Medium make_medium(RealField kappa_sq);

enum class BoundarySide
{
  top,
  bottom,
  left,
  right
};

std::string_view to_string(BoundarySide side);
BoundarySide parse_boundary_side(std::string_view name);

/// Width of the absorbing band: one wavelength 2*pi / (omega * mean(kappa)).
double layer_width(const Medium &medium, double omega);

/// Quadratic attenuation ramp gamma = omega * (d / W)^2 on the given sides, where d is the
/// penetration depth past the inner edge of a band of width W (see layer_width). Corner
/// overlaps take the maximum.
Medium attenuation_layer(const GridSpec &grid, const Medium &medium, const SourceSpec &source,
                         const std::set<BoundarySide> &sides);

/// Discrete delta: 1 / (h1 h2) at the source node, zero elsewhere.
ComplexField point_source(const GridSpec &grid, const SourceSpec &source);

/// Default guard used by relative_error_map: 1e-12 * max |u_ref|.
double default_error_floor(const ComplexField &u_ref);

/// e_ij = |u_ij - ref_ij| / max(|ref_ij|, floor).
RealField relative_error_map(const ComplexField &u, const ComplexField &u_ref, double floor);
RealField relative_error_map(const ComplexField &u, const ComplexField &u_ref);

/// Nodal injection onto the grid with (n_d - 1) / factor + 1 nodes per dimension.
ComplexField downsample(const ComplexField &field, int factor);
RealField downsample(const RealField &field, int factor);

/// Minimum points per wavelength over the domain: 2*pi / (omega * max(kappa) * max(h1, h2)).
double points_per_wavelength(const GridSpec &grid, const Medium &medium, double omega);

}  // namespace helmadr

#endif  // HELMADR_GRID_HPP
