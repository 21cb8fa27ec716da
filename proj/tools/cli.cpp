#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "helmadr/field_io.hpp"
#include "helmadr/parallel.hpp"

namespace helmadr::cli
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::string> split(const std::string &s, char sep)
{
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
  {
    parts.push_back(cur);
  }
  return parts;
}

template <typename T>
T parse_number(const std::string &text, const std::string &key)
{
  T v{};
  const char *b = text.data();
  const char *e = b + text.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e)
  {
    throw CliError("--" + key + ": cannot parse '" + text + "' as a number", 2);
  }
  return v;
}

template <typename T>
std::pair<T, T> parse_pair(const std::string &text, char sep, const std::string &key)
{
  const auto parts = split(text, sep);
  if (parts.size() != 2)
  {
    throw CliError("--" + key + ": expected two values separated by '" + std::string(1, sep) + "', got '" + text +
                       "'",
                   2);
  }
  return {parse_number<T>(parts[0], key), parse_number<T>(parts[1], key)};
}

template <typename F>
auto wrap(const std::string &key, F &&f) -> decltype(f())
{
  try
  {
    return f();
  }
  catch (const CliError &)
  {
    throw;
  }
  catch (const std::exception &e)
  {
    throw CliError("--" + key + ": " + e.what(), 2);
  }
}

}  // namespace

std::optional<RunConfig> parse_config(int argc, const char *const *argv)
{
  CLI::App app{"Helmholtz point-source solver: standard shifted-Laplacian and factored-eikonal ADR",
               "helmadr"};
  app.set_config("--config", "", "flat 'key = value' file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.get_formatter()->column_width(28);

  std::string command;
  std::string model = "linear";
  std::string model_file;
  std::string n = "257x129";
  std::string L;
  double f = 3.5;
  std::string source;
  std::string strategy = "standard";
  RunConfig cfg;
  int order = 2;
  std::string out = "out";
  std::vector<std::string> bc;
  std::string absorb = "bottom,left,right";

  app.add_option("command", command, "eikonal | solve | compare")
      ->check(CLI::IsMember({"eikonal", "solve", "compare"}));
  app.add_option("--model", model, "constant | linear | gaussian | waveguide | wedge")->capture_default_str();
  app.add_option("--model-file", model_file, "raw float64 velocity file (with .meta sidecar)");
  app.add_option("--n", n, "grid nodes WxH")->capture_default_str();
  app.add_option("--L", L, "domain lengths W,H (default: h1 == h2, see README)");
  app.add_option("--f", f, "frequency; omega = 2 pi f")->capture_default_str();
  app.add_option("--source", source, "source node i,j (default: top center)");
  app.add_option("--strategy", strategy, "standard | central | upwind | all")->capture_default_str();
  app.add_option("--alpha", cfg.solver.alpha, "shifted-Laplacian shift")->capture_default_str();
  app.add_option("--beta", cfg.solver.beta, "upwind preconditioner blend")->capture_default_str();
  app.add_option("--tol", cfg.solver.tol, "outer relative residual tolerance")->capture_default_str();
  app.add_option("--levels", cfg.solver.levels, "maximum multigrid levels")->capture_default_str();
  app.add_option("--restart", cfg.solver.restart, "FGMRES restart length")->capture_default_str();
  app.add_option("--max-iters", cfg.solver.max_iterations, "outer iteration cap")->capture_default_str();
  app.add_option("--order", order, "Fast Marching order {1,2}")->capture_default_str();
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--ref-factor", cfg.ref_factor, "compare: reference refinement factor")->capture_default_str();
  app.add_option("--ref-tol", cfg.ref_tol, "compare: reference solve tolerance")->capture_default_str();
  app.add_option("--kappa-sq", cfg.params.kappa_sq, "constant model squared slowness")->capture_default_str();
  app.add_option("--kappa-sq-top", cfg.params.kappa_sq_top, "linear model, top value")->capture_default_str();
  app.add_option("--kappa-sq-bottom", cfg.params.kappa_sq_bottom, "linear model, bottom value")
      ->capture_default_str();
  app.add_option("--bc", bc, "side=condition, e.g. top=neumann (default top neumann, others sommerfeld)");
  app.add_option("--absorb", absorb, "sides with an attenuation layer, comma separated, or none")
      ->capture_default_str();
  app.add_flag("--sequential", cfg.sequential, "disable row-parallel kernels");
  app.add_flag("-v,--verbose", cfg.verbose, "print hierarchy and progress to stderr");

  if (argc <= 1)
  {
    throw CliError(app.help(), 2);
  }
  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &)
  {
    std::cout << app.help();
    return std::nullopt;
  }
  catch (const CLI::ParseError &e)
  {
    throw CliError(e.what(), 2);
  }
  if (command.empty())
  {
    throw CliError("missing command (eikonal, solve or compare)\n" + app.help(), 2);
  }

  cfg.command = command == "eikonal" ? Command::eikonal : command == "solve" ? Command::solve : Command::compare;
  cfg.model = wrap("model", [&] { return parse_model_kind(model); });
  if (!model_file.empty())
  {
    cfg.model_file = model_file;
  }
  std::tie(cfg.n1, cfg.n2) = parse_pair<int>(n, 'x', "n");
  if (!L.empty())
  {
    const auto [l1, l2] = parse_pair<double>(L, ',', "L");
    cfg.L1 = l1;
    cfg.L2 = l2;
  }
  if (!(f > 0.0))
  {
    throw CliError("--f: frequency must be positive", 2);
  }
  cfg.f = f;
  if (!source.empty())
  {
    const auto [i, j] = parse_pair<int>(source, ',', "source");
    cfg.source_i1 = i;
    cfg.source_i2 = j;
  }
  if (strategy == "all")
  {
    cfg.strategies = {Strategy::standard_sl, Strategy::adr_central_two_stage, Strategy::adr_upwind_blend};
  }
  else
  {
    cfg.strategies = {wrap("strategy", [&] { return parse_strategy(strategy); })};
  }
  if (order != 1 && order != 2)
  {
    throw CliError("--order: must be 1 or 2", 2);
  }
  cfg.order = order == 1 ? MarchOrder::first : MarchOrder::second;
  cfg.out = out;
  for (const std::string &item : bc)
  {
    const auto kv = split(item, '=');
    if (kv.size() != 2)
    {
      throw CliError("--bc: expected side=condition, got '" + item + "'", 2);
    }
    wrap("bc", [&] {
      cfg.bc.at(parse_boundary_side(kv[0])) = parse_boundary_condition(kv[1]);
      return 0;
    });
  }
  cfg.absorb.clear();
  if (absorb != "none" && !absorb.empty())
  {
    for (const std::string &side : split(absorb, ','))
    {
      cfg.absorb.insert(wrap("absorb", [&] { return parse_boundary_side(side); }));
    }
  }
  if (cfg.ref_factor < 1)
  {
    throw CliError("--ref-factor: must be >= 1", 2);
  }
  if (!(cfg.ref_tol > 0.0))
  {
    throw CliError("--ref-tol: must be positive", 2);
  }
  wrap("solver", [&] {
    cfg.solver.validate();
    return 0;
  });
  return cfg;
}

GridSpec resolve_grid(const RunConfig &cfg)
{
  if (cfg.L1 && cfg.L2)
  {
    return make_grid(cfg.n1, cfg.n2, *cfg.L1, *cfg.L2);
  }
  if (cfg.n1 < 5 || cfg.n2 < 5)
  {
    return make_grid(cfg.n1, cfg.n2, 1.0, 1.0);  // reports the size error
  }
  const double aspect = static_cast<double>(cfg.n2 - 1) / static_cast<double>(cfg.n1 - 1);
  if (cfg.model == ModelKind::linear && !cfg.model_file)
  {
    return make_grid(cfg.n1, cfg.n2, 20.0, 20.0 * aspect);
  }
  return make_grid(cfg.n1, cfg.n2, 1.0 / aspect, 1.0);
}

SourceSpec resolve_source(const RunConfig &cfg, const GridSpec &grid)
{
  SourceSpec s;
  s.i1 = cfg.source_i1.value_or((grid.n1 - 1) / 2);
  s.i2 = cfg.source_i2.value_or(0);
  s.omega = 2.0 * 3.14159265358979323846 * cfg.f;
  validate_source(grid, s);
  return s;
}

Medium build_medium(const RunConfig &cfg, const GridSpec &grid, const SourceSpec &source)
{
  Medium m = cfg.model_file ? load_model_raw(grid, *cfg.model_file) : generate_model(cfg.model, grid, cfg.params);
  if (cfg.absorb.empty())
  {
    return m;
  }
  return attenuation_layer(grid, m, source, cfg.absorb);
}

void write_outputs(const OutputSet &outputs, const std::filesystem::path &dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
  {
    throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  auto open = [&](const std::string &name) {
    std::ofstream f(dir / name);
    if (!f)
    {
      throw std::runtime_error("cannot write " + (dir / name).string());
    }
    f.imbue(std::locale::classic());
    f.precision(10);
    return f;
  };
  {
    std::ofstream s = open("summary.csv");
    s << "strategy,iters,t_sol,t_fm\n";
    for (const SummaryRow &r : outputs.summary)
    {
      s << r.strategy << ',' << r.iters << ',' << r.t_sol << ',' << r.t_fm << '\n';
    }
  }
  for (const auto &[name, report] : outputs.residuals)
  {
    std::ofstream s = open("residuals_" + name + ".csv");
    write_history_csv(s, report);
  }
  for (const auto &[stem, field] : outputs.complex_fields)
  {
    write_field(dir / (stem + ".f64"), field);
  }
  for (const auto &[stem, field] : outputs.real_fields)
  {
    write_field(dir / (stem + ".f64"), field);
  }
  if (!outputs.accuracy.empty())
  {
    std::ofstream s = open("accuracy.csv");
    s << "strategy,median,p95,max,nodes\n";
    for (const AccuracySummary &a : outputs.accuracy)
    {
      s << a.name << ',' << a.median << ',' << a.p95 << ',' << a.max << ',' << a.nodes << '\n';
    }
  }
}

namespace
{

struct Problem
{
  GridSpec grid;
  SourceSpec source;
  Medium medium;
};

Problem make_problem(const RunConfig &cfg)
{
  Problem p;
  p.grid = resolve_grid(cfg);
  p.source = resolve_source(cfg, p.grid);
  p.medium = build_medium(cfg, p.grid, p.source);
  return p;
}

bool needs_travel_time(const std::vector<Strategy> &s)
{
  return std::any_of(s.begin(), s.end(), [](Strategy x) { return x != Strategy::standard_sl; });
}

/// Solves every strategy in cfg.strategies; appends outputs. Returns true if all converged.
bool solve_all(const RunConfig &cfg, const Problem &p, const TravelTime &tt, double t_fm, OutputSet &out,
               std::vector<std::pair<std::string, ComplexField>> *solutions)
{
  bool ok = true;
  for (Strategy s : cfg.strategies)
  {
    StrategyConfig sc = cfg.solver;
    sc.strategy = s;
    const std::string name(to_string(s));
    const auto t0 = Clock::now();
    SolveResult r = solve_point_source(p.medium, p.source, tt, sc, cfg.bc);
    const double t_sol = seconds_since(t0);
    if (cfg.verbose)
    {
      std::cerr << name << ": " << r.iterations() << " iterations, residual " << r.report.final_residual()
                << (r.converged() ? "" : " (not converged)") << ", " << t_sol << " s\n";
    }
    if (!r.converged())
    {
      std::cerr << "warning: " << name << " did not converge: " << r.report.message << '\n';
      ok = false;
    }
    out.summary.push_back({name, r.iterations(), t_sol, s == Strategy::standard_sl ? 0.0 : t_fm});
    if (r.stage1)
    {
      out.residuals.emplace_back(name + "_stage1", *r.stage1);
    }
    out.residuals.emplace_back(name, r.report);
    if (r.a)
    {
      out.complex_fields.emplace_back("a_" + name, *r.a);
    }
    if (solutions)
    {
      solutions->emplace_back(name, r.u);
    }
    out.complex_fields.emplace_back("u_" + name, std::move(r.u));
  }
  return ok;
}

}  // namespace

int run_experiment(const RunConfig &cfg)
{
  set_sequential(cfg.sequential);
  const Problem p = make_problem(cfg);
  if (cfg.verbose)
  {
    std::cerr << "grid " << p.grid.n1 << "x" << p.grid.n2 << ", L = " << p.grid.L1 << "," << p.grid.L2
              << ", h = " << p.grid.h1 << ", points per wavelength "
              << points_per_wavelength(p.grid, p.medium, p.source.omega) << '\n';
  }
  OutputSet out;

  TravelTime tt = TravelTime::zero(p.grid, p.source);
  double t_fm = 0.0;
  const bool want_tt = cfg.command == Command::eikonal || cfg.command == Command::compare ||
                       needs_travel_time(cfg.strategies);
  if (want_tt)
  {
    const auto t0 = Clock::now();
    tt = compute_travel_time(p.medium, p.source, cfg.order);
    t_fm = seconds_since(t0);
    out.real_fields.emplace_back("tau1", tt.tau1);
  }

  bool ok = true;
  switch (cfg.command)
  {
    case Command::eikonal:
      out.summary.push_back({"eikonal", 0, 0.0, t_fm});
      break;
    case Command::solve:
      ok = solve_all(cfg, p, tt, t_fm, out, nullptr);
      break;
    case Command::compare:
    {
      RunConfig all = cfg;
      all.strategies = {Strategy::standard_sl, Strategy::adr_central_two_stage, Strategy::adr_upwind_blend};
      std::vector<std::pair<std::string, ComplexField>> solutions;
      ok = solve_all(all, p, tt, t_fm, out, &solutions);

      // Standard discretization on the refined grid, injected back.
      RunConfig fine = cfg;
      const int r = cfg.ref_factor;
      fine.n1 = (cfg.n1 - 1) * r + 1;
      fine.n2 = (cfg.n2 - 1) * r + 1;
      fine.L1 = p.grid.L1;
      fine.L2 = p.grid.L2;
      fine.source_i1 = p.source.i1 * r;
      fine.source_i2 = p.source.i2 * r;
      if (cfg.model_file)
      {
        throw std::invalid_argument("compare needs an analytic model for the refined reference grid");
      }
      const Problem pf = make_problem(fine);
      StrategyConfig sc = cfg.solver;
      sc.strategy = Strategy::standard_sl;
      sc.tol = cfg.ref_tol;
      sc.max_iterations = std::max(sc.max_iterations, 2000);
      const auto t0 = Clock::now();
      const SolveResult ref = solve_point_source(pf.medium, pf.source, TravelTime::zero(pf.grid, pf.source), sc, cfg.bc);
      const double t_ref = seconds_since(t0);
      if (!ref.converged())
      {
        std::cerr << "warning: reference solve did not converge\n";
        ok = false;
      }
      out.summary.push_back({"reference", ref.iterations(), t_ref, 0.0});
      const ComplexField u_ref = downsample(ref.u, r);
      out.complex_fields.emplace_back("u_reference", u_ref);
      out.accuracy = accuracy_compare(solutions, u_ref);
      for (const AccuracySummary &a : out.accuracy)
      {
        out.real_fields.emplace_back("err_" + a.name, a.error);
      }
      break;
    }
  }
  write_outputs(out, cfg.out);
  return ok ? 0 : 3;
}

}  // namespace helmadr::cli
