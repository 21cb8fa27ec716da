#include "helmadr/field_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace helmadr
{

namespace
{

std::uint64_t to_little_endian(std::uint64_t v)
{
  if constexpr (std::endian::native == std::endian::little)
  {
    return v;
  }
  else
  {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b)
    {
      r = (r << 8) | ((v >> (8 * b)) & 0xffu);
    }
    return r;
  }
}

void write_doubles(const std::filesystem::path &path, const std::vector<double> &data)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  std::vector<std::uint64_t> words(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
  {
    words[i] = to_little_endian(std::bit_cast<std::uint64_t>(data[i]));
  }
  out.write(reinterpret_cast<const char *>(words.data()),
            static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
  if (!out)
  {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

std::vector<double> read_doubles(const std::filesystem::path &path, std::size_t expected)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  }
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  if (bytes != expected * sizeof(double))
  {
    throw std::runtime_error("size mismatch in '" + path.string() + "': expected " +
                             std::to_string(expected * sizeof(double)) + " bytes, found " +
                             std::to_string(bytes));
  }
  std::vector<std::uint64_t> words(expected);
  in.read(reinterpret_cast<char *>(words.data()), static_cast<std::streamsize>(bytes));
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i)
  {
    out[i] = std::bit_cast<double>(to_little_endian(words[i]));
  }
  return out;
}

std::string format_double(double v)
{
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(const std::string &key, const std::string &text)
{
  T v{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
  {
    throw std::runtime_error("bad value for meta key '" + key + "': '" + text + "'");
  }
  return v;
}

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::filesystem::path meta_path_for(const std::filesystem::path &data_path)
{
  std::filesystem::path p = data_path;
  p.replace_extension(".meta");
  return p;
}

void write_meta(const std::filesystem::path &path, const FieldMeta &meta)
{
  std::ofstream out(path, std::ios::trunc);
  if (!out)
  {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out << "n1=" << meta.grid.n1 << "\n"
      << "n2=" << meta.grid.n2 << "\n"
      << "L1=" << format_double(meta.grid.L1) << "\n"
      << "L2=" << format_double(meta.grid.L2) << "\n";
  if (meta.is_complex)
  {
    out << "complex=true\n";
  }
  if (!out)
  {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

FieldMeta read_meta(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open metadata '" + path.string() + "'");
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line))
  {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw std::runtime_error("malformed metadata line in '" + path.string() + "': " + line);
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char *key : {"n1", "n2", "L1", "L2"})
  {
    if (!kv.count(key))
    {
      throw std::runtime_error("metadata '" + path.string() + "' lacks key '" + key + "'");
    }
  }
  FieldMeta meta;
  meta.grid = make_grid(parse_number<int>("n1", kv["n1"]), parse_number<int>("n2", kv["n2"]),
                        parse_number<double>("L1", kv["L1"]), parse_number<double>("L2", kv["L2"]));
  if (auto it = kv.find("complex"); it != kv.end())
  {
    if (it->second != "true" && it->second != "false")
    {
      throw std::runtime_error("bad value for meta key 'complex': '" + it->second + "'");
    }
    meta.is_complex = it->second == "true";
  }
  return meta;
}

void write_field(const std::filesystem::path &data_path, const RealField &field)
{
  write_doubles(data_path, field.values);
  write_meta(meta_path_for(data_path), {field.grid, false});
}

void write_field(const std::filesystem::path &data_path, const ComplexField &field)
{
  std::vector<double> interleaved(2 * field.size());
  for (std::size_t j = 0; j < field.size(); ++j)
  {
    interleaved[2 * j] = field.values[j].real();
    interleaved[2 * j + 1] = field.values[j].imag();
  }
  write_doubles(data_path, interleaved);
  write_meta(meta_path_for(data_path), {field.grid, true});
}

RealField read_real_field(const std::filesystem::path &data_path)
{
  const FieldMeta meta = read_meta(meta_path_for(data_path));
  if (meta.is_complex)
  {
    throw std::runtime_error("'" + data_path.string() + "' holds a complex field");
  }
  return RealField(meta.grid, read_doubles(data_path, meta.grid.size()));
}

ComplexField read_complex_field(const std::filesystem::path &data_path)
{
  const FieldMeta meta = read_meta(meta_path_for(data_path));
  if (!meta.is_complex)
  {
    throw std::runtime_error("'" + data_path.string() + "' holds a real field");
  }
  const auto raw = read_doubles(data_path, 2 * meta.grid.size());
  ComplexField f(meta.grid);
  for (std::size_t j = 0; j < f.size(); ++j)
  {
    f.values[j] = {raw[2 * j], raw[2 * j + 1]};
  }
  return f;
}

Medium load_model_raw(const GridSpec &grid, const std::filesystem::path &path)
{
  auto v = read_doubles(path, grid.size());
  RealField k(grid);
  for (std::size_t j = 0; j < v.size(); ++j)
  {
    if (!(v[j] > 0.0) || !std::isfinite(v[j]))
    {
      throw std::runtime_error("non-positive velocity at index " + std::to_string(j) + " in '" +
                               path.string() + "'");
    }
    k.values[j] = 1.0 / (v[j] * v[j]);
  }
  return make_medium(std::move(k));
}

Medium load_model_raw(const std::filesystem::path &path)
{
  return load_model_raw(read_meta(meta_path_for(path)).grid, path);
}

}  // namespace helmadr
