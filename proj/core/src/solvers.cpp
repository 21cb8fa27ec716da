#include "helmadr/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "helmadr/multigrid.hpp"

namespace helmadr
{

Strategy parse_strategy(std::string_view name)
{
  if (name == "standard" || name == "standard_sl") return Strategy::standard_sl;
  if (name == "central" || name == "adr_central" || name == "adr_central_two_stage")
    return Strategy::adr_central_two_stage;
  if (name == "upwind" || name == "adr_upwind" || name == "adr_upwind_blend") return Strategy::adr_upwind_blend;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "' (standard, central, upwind)");
}

std::string_view to_string(Strategy strategy)
{
  switch (strategy)
  {
    case Strategy::standard_sl: return "standard";
    case Strategy::adr_central_two_stage: return "central";
    case Strategy::adr_upwind_blend: return "upwind";
  }
  return "unknown";
}

void StrategyConfig::validate() const
{
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(stage1_tol > 0.0)) throw std::invalid_argument("stage1_tol must be positive");
  if (stage1_max_cycles < 0) throw std::invalid_argument("stage1_max_cycles must be >= 0");
  if (restart < 1) throw std::invalid_argument("restart must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (levels < 2) throw std::invalid_argument("levels must be >= 2");
}

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

KrylovConfig outer_config(const StrategyConfig &cfg)
{
  KrylovConfig k;
  k.restart = cfg.restart;
  k.max_iterations = cfg.max_iterations;
  k.tol = cfg.tol;
  k.flexible = true;
  return k;
}

/// FGMRES on A x = b with a K-cycle on P as preconditioner, starting from x.
SolveReport mg_solve(const SparseOperator &A, const SparseOperator &P, const GridSpec &grid, int levels,
                     std::span<const Complex> b, std::span<Complex> x, const KrylovConfig &kcfg,
                     double &setup_seconds)
{
  const auto t0 = Clock::now();
  const MGHierarchy H = build_hierarchy(P, grid, levels);
  setup_seconds += seconds_since(t0);
  return fgmres_inplace(as_operator(A), b, x, kcycle_preconditioner(H), kcfg);
}

}  // namespace

SolveResult solve_standard(const SparseOperator &H, const ComplexField &q, const Medium &medium, double omega,
                           const StrategyConfig &cfg)
{
  cfg.validate();
  if (static_cast<std::size_t>(H.rows) != q.size() || !same_grid(q.grid, medium.grid()))
  {
    throw std::invalid_argument("solve_standard: operator, right-hand side and medium disagree in size");
  }
  SolveResult res;
  res.u = ComplexField(q.grid);
  const auto t0 = Clock::now();
  const SparseOperator Hs = shift_operator(H, cfg.alpha, omega, medium);
  res.setup_seconds = seconds_since(t0);
  res.report = mg_solve(H, Hs, q.grid, cfg.levels, q.values, res.u.values, outer_config(cfg), res.setup_seconds);
  return res;
}

SolveResult solve_adr_central(const Medium &medium, const SourceSpec &source, const TravelTime &tt,
                              const StrategyConfig &cfg, const BCSpec &bc)
{
  cfg.validate();
  validate_source(medium.grid(), source);
  const GridSpec &g = medium.grid();
  const double omega = source.omega;
  SolveResult res;

  const auto t0 = Clock::now();
  const ComplexField q = point_source(g, source);
  const ComplexField qhat = rhs_transform(q, tt, omega, RhsDirection::to_adr);
  const SparseOperator H1 = assemble_adr(medium, omega, tt, AdvectionScheme::upwind1, bc);
  res.setup_seconds = seconds_since(t0);

  // Stage 1: low-accuracy solve of the first-order upwind system.
  ComplexField a1(g);
  KrylovConfig k1 = outer_config(cfg);
  k1.max_iterations = std::max(cfg.stage1_max_cycles, 1);
  k1.tol = cfg.stage1_tol;
  if (cfg.stage1_max_cycles > 0)
  {
    res.stage1 = mg_solve(H1, H1, g, cfg.levels, qhat.values, a1.values, k1, res.setup_seconds);
  }
  ComplexField u = compose_waveform(a1, tt, omega);

  // Stage 2: M H_cen M^-1 u = q from the stage-1 waveform.
  const auto t1 = Clock::now();
  const DiagonalScaling M = DiagonalScaling::from_travel_time(tt, omega);
  const SparseOperator A2 = similarity_conjugate(assemble_adr(medium, omega, tt, AdvectionScheme::central, bc), M,
                                                 ConjugationDirection::M_A_Minv);
  const SparseOperator Hs = shift_operator(A2, cfg.alpha, omega, medium);
  res.setup_seconds += seconds_since(t1);
  res.report = mg_solve(A2, Hs, g, cfg.levels, q.values, u.values, outer_config(cfg), res.setup_seconds);

  res.a = rhs_transform(u, tt, omega, RhsDirection::to_adr);
  res.u = std::move(u);
  return res;
}

SolveResult solve_adr_upwind(const Medium &medium, const SourceSpec &source, const TravelTime &tt,
                             const StrategyConfig &cfg, const BCSpec &bc)
{
  cfg.validate();
  validate_source(medium.grid(), source);
  const GridSpec &g = medium.grid();
  const double omega = source.omega;
  SolveResult res;

  const auto t0 = Clock::now();
  const ComplexField qhat = rhs_transform(point_source(g, source), tt, omega, RhsDirection::to_adr);
  const SparseOperator H2 = assemble_adr(medium, omega, tt, AdvectionScheme::upwind2, bc);
  const SparseOperator H1 = assemble_adr(medium, omega, tt, AdvectionScheme::upwind1, bc);
  const SparseOperator B = linear_combination(1.0 - cfg.beta, H2, cfg.beta, H1);
  res.setup_seconds = seconds_since(t0);

  ComplexField a(g);
  res.report = mg_solve(H2, B, g, cfg.levels, qhat.values, a.values, outer_config(cfg), res.setup_seconds);
  res.u = compose_waveform(a, tt, omega);
  res.a = std::move(a);
  return res;
}

SolveResult solve_point_source(const Medium &medium, const SourceSpec &source, const TravelTime &tt,
                               const StrategyConfig &cfg, const BCSpec &bc)
{
  switch (cfg.strategy)
  {
    case Strategy::standard_sl:
    {
      validate_source(medium.grid(), source);
      const auto t0 = Clock::now();
      const SparseOperator H = assemble_helmholtz(medium, source.omega, bc);
      const double assembly = seconds_since(t0);
      SolveResult res = solve_standard(H, point_source(medium.grid(), source), medium, source.omega, cfg);
      res.setup_seconds += assembly;
      return res;
    }
    case Strategy::adr_central_two_stage: return solve_adr_central(medium, source, tt, cfg, bc);
    case Strategy::adr_upwind_blend: return solve_adr_upwind(medium, source, tt, cfg, bc);
  }
  throw std::invalid_argument("solve_point_source: unknown strategy");
}

ComplexField compose_waveform(const ComplexField &a, const TravelTime &tt, double omega)
{
  return rhs_transform(a, tt, omega, RhsDirection::to_helmholtz);
}

namespace
{

// Nearest-rank percentile of a sorted sample.
double percentile(const std::vector<double> &sorted, double p)
{
  if (sorted.empty())
  {
    return 0.0;
  }
  const double rank = std::ceil(p * static_cast<double>(sorted.size()));
  const std::size_t k = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(sorted.size())));
  return sorted[k - 1];
}

double median(const std::vector<double> &sorted)
{
  if (sorted.empty())
  {
    return 0.0;
  }
  const std::size_t m = sorted.size() / 2;
  return sorted.size() % 2 == 1 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
}

}  // namespace

std::vector<AccuracySummary> accuracy_compare(const std::vector<std::pair<std::string, ComplexField>> &solutions,
                                              const ComplexField &u_ref, double floor)
{
  const double fl = floor < 0.0 ? default_error_floor(u_ref) : floor;
  std::vector<AccuracySummary> out;
  out.reserve(solutions.size());
  for (const auto &[name, u] : solutions)
  {
    AccuracySummary s;
    s.name = name;
    s.error = relative_error_map(u, u_ref, fl);
    std::vector<double> sample;
    sample.reserve(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
    {
      if (std::abs(u_ref.values[j]) > fl)
      {
        sample.push_back(s.error.values[j]);
      }
    }
    std::sort(sample.begin(), sample.end());
    s.nodes = sample.size();
    s.median = median(sample);
    s.p95 = percentile(sample, 0.95);
    s.max = sample.empty() ? 0.0 : sample.back();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace helmadr
