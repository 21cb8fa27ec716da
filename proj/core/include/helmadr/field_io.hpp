#ifndef HELMADR_FIELD_IO_HPP
#define HELMADR_FIELD_IO_HPP

#include <filesystem>
#include <string>

#include "helmadr/grid.hpp"

namespace helmadr
{

/// Sidecar metadata for raw float64 files: `key=value` lines n1, n2, L1, L2 and complex.
struct FieldMeta
{
  GridSpec grid;
  bool is_complex = false;
};

/// `u.f64` -> `u.meta`.
std::filesystem::path meta_path_for(const std::filesystem::path &data_path);

void write_meta(const std::filesystem::path &path, const FieldMeta &meta);
FieldMeta read_meta(const std::filesystem::path &path);

/// Little-endian float64, row-major; complex fields are interleaved (re, im).
/// Writes the data file and its `.meta` sidecar.
void write_field(const std::filesystem::path &data_path, const RealField &field);
void write_field(const std::filesystem::path &data_path, const ComplexField &field);

RealField read_real_field(const std::filesystem::path &data_path);
ComplexField read_complex_field(const std::filesystem::path &data_path);

/// Reads exactly n1*n2 little-endian float64 velocities and returns kappa^2 = 1/v^2.
Medium load_model_raw(const GridSpec &grid, const std::filesystem::path &path);

/// As above, with the grid taken from the `.meta` sidecar next to `path`.
Medium load_model_raw(const std::filesystem::path &path);

}  // namespace helmadr

#endif  // HELMADR_FIELD_IO_HPP
