#ifndef HELMADR_SOLVERS_HPP
#define HELMADR_SOLVERS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "helmadr/eikonal.hpp"
#include "helmadr/grid.hpp"
#include "helmadr/krylov.hpp"
#include "helmadr/operators.hpp"

namespace helmadr
{

enum class Strategy
{
  standard_sl,
  adr_central_two_stage,
  adr_upwind_blend
};

/// Accepts the long names and the short forms standard, central, upwind.
Strategy parse_strategy(std::string_view name);
/// Short form, used in output file names.
std::string_view to_string(Strategy strategy);

struct StrategyConfig
{
  Strategy strategy = Strategy::standard_sl;
  double alpha = 0.2;
  double beta = 0.25;
  int stage1_max_cycles = 5;
  double stage1_tol = 1e-2;
  int restart = 5;
  double tol = 1e-5;
  int max_iterations = 500;
  int levels = 5;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct SolveResult
{
  ComplexField u;
  std::optional<ComplexField> a;  // amplitude, ADR strategies only
  SolveReport report;             // final (or only) Krylov solve
  std::optional<SolveReport> stage1;
  double setup_seconds = 0.0;  // assembly and hierarchy construction

  /// Preconditioned iterations over all stages.
  int iterations() const { return report.iterations + (stage1 ? stage1->iterations : 0); }
  bool converged() const { return report.converged; }
};

/// FGMRES on H u = q preconditioned by one K-cycle on the shifted operator, zero start.
SolveResult solve_standard(const SparseOperator &H, const ComplexField &q, const Medium &medium, double omega,
                           const StrategyConfig &cfg);

/// Two-stage solve: a few K-cycle-preconditioned FGMRES iterations on the first-order upwind
/// ADR system, then FGMRES on M H_cen M^-1 u = q from that start with a shifted preconditioner.
SolveResult solve_adr_central(const Medium &medium, const SourceSpec &source, const TravelTime &tt,
                              const StrategyConfig &cfg, const BCSpec &bc = {});

/// FGMRES on the second-order upwind ADR system, preconditioned by a K-cycle on
/// (1 - beta) H_2up + beta H_1up.
SolveResult solve_adr_upwind(const Medium &medium, const SourceSpec &source, const TravelTime &tt,
                             const StrategyConfig &cfg, const BCSpec &bc = {});

/// Dispatch on cfg.strategy with a point source. The travel time is ignored by the standard
/// strategy.
SolveResult solve_point_source(const Medium &medium, const SourceSpec &source, const TravelTime &tt,
                               const StrategyConfig &cfg, const BCSpec &bc = {});

/// u = a exp(-i omega tau).
ComplexField compose_waveform(const ComplexField &a, const TravelTime &tt, double omega);

struct AccuracySummary
{
  std::string name;
  double median = 0.0;
  double p95 = 0.0;
  double max = 0.0;
  std::size_t nodes = 0;  // nodes with |u_ref| above the floor
  RealField error;
};

/// Relative error maps and statistics over nodes with |u_ref| > floor. A negative floor
/// selects default_error_floor(u_ref).
std::vector<AccuracySummary> accuracy_compare(const std::vector<std::pair<std::string, ComplexField>> &solutions,
                                              const ComplexField &u_ref, double floor = -1.0);

}  // namespace helmadr

#endif  // HELMADR_SOLVERS_HPP
