#ifndef HELMADR_TOOLS_CLI_HPP
#define HELMADR_TOOLS_CLI_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <set>
#include <string>
#include <vector>

#include "helmadr/eikonal.hpp"
#include "helmadr/grid.hpp"
#include "helmadr/krylov.hpp"
#include "helmadr/operators.hpp"
#include "helmadr/solvers.hpp"

namespace helmadr::cli
{

enum class Command
{
  eikonal,
  solve,
  compare
};

struct RunConfig
{
  Command command = Command::solve;
  ModelKind model = ModelKind::linear;
  ModelParams params;
  std::optional<std::filesystem::path> model_file;
  int n1 = 257;
  int n2 = 129;
  std::optional<double> L1;  // unset: see resolve_grid
  std::optional<double> L2;
  double f = 3.5;
  std::optional<int> source_i1;
  std::optional<int> source_i2;
  BCSpec bc;
  std::set<BoundarySide> absorb{BoundarySide::bottom, BoundarySide::left, BoundarySide::right};
  std::vector<Strategy> strategies{Strategy::standard_sl};
  StrategyConfig solver;
  MarchOrder order = MarchOrder::second;
  std::filesystem::path out = "out";
  int ref_factor = 4;
  double ref_tol = 1e-8;
  bool sequential = false;
  bool verbose = false;
};

/// Parses argv (argv[1] is the command). Flags override values from `--config FILE`.
/// Returns nullopt after printing help; throws CliError (with exit code) on bad input.
struct CliError : std::runtime_error
{
  int exit_code;
  CliError(const std::string &msg, int code) : std::runtime_error(msg), exit_code(code) {}
};
std::optional<RunConfig> parse_config(int argc, const char *const *argv);

/// Grid of the run. Without explicit lengths h1 == h2; the linear model then spans
/// L1 = 20 (the long geophysical section), every other model has unit depth L2 = 1.
GridSpec resolve_grid(const RunConfig &cfg);
/// Defaults to the top-center node.
SourceSpec resolve_source(const RunConfig &cfg, const GridSpec &grid);
/// Model, attenuation layer on cfg.absorb.
Medium build_medium(const RunConfig &cfg, const GridSpec &grid, const SourceSpec &source);

struct SummaryRow
{
  std::string strategy;
  int iters = 0;
  double t_sol = 0.0;
  double t_fm = 0.0;
};

struct OutputSet
{
  std::vector<SummaryRow> summary;
  std::vector<std::pair<std::string, SolveReport>> residuals;  // name -> residuals_<name>.csv
  std::vector<std::pair<std::string, ComplexField>> complex_fields;  // file stem -> <stem>.f64
  std::vector<std::pair<std::string, RealField>> real_fields;
  std::vector<AccuracySummary> accuracy;  // accuracy.csv when non-empty
};

/// Writes summary.csv and every listed file into `dir` (created if needed).
void write_outputs(const OutputSet &outputs, const std::filesystem::path &dir);

/// Runs the configured experiment; returns 0 iff every requested solve converged.
int run_experiment(const RunConfig &cfg);

}  // namespace helmadr::cli

#endif  // HELMADR_TOOLS_CLI_HPP
