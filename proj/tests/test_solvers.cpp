#include <Eigen/SparseLU>
#include <gtest/gtest.h>

#include "helmadr/solvers.hpp"
#include "oracles.hpp"

namespace helmadr
{
namespace
{

struct Problem
{
  GridSpec grid;
  SourceSpec source;
  Medium medium;
  TravelTime tt;
};

Problem small_problem()
{
  Problem p;
  p.grid = make_grid(129, 65, 2.0, 1.0);
  p.source = SourceSpec{64, 0, 2.0 * M_PI * 6.0};
  p.medium = attenuation_layer(p.grid, generate_model(ModelKind::gaussian, p.grid), p.source,
                               {BoundarySide::bottom, BoundarySide::left, BoundarySide::right});
  p.tt = compute_travel_time(p.medium, p.source);
  return p;
}

ComplexVector sparse_direct(const SparseOperator &A, const ComplexVector &b)
{
  std::vector<Eigen::Triplet<Complex>> trip;
  for (Index i = 0; i < A.rows; ++i)
    for (Index k = A.row_begin(i); k < A.row_end(i); ++k) trip.emplace_back(i, A.col[k], A.val[k]);
  Eigen::SparseMatrix<Complex> S(A.rows, A.cols);
  S.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu(S);
  const Eigen::VectorXcd x = lu.solve(Eigen::Map<const Eigen::VectorXcd>(b.data(), static_cast<Eigen::Index>(b.size())));
  return ComplexVector(x.data(), x.data() + x.size());
}

double rel_l2(const ComplexVector &a, const ComplexVector &b)
{
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
  {
    num += std::norm(a[j] - b[j]);
    den += std::norm(b[j]);
  }
  return std::sqrt(num / den);
}

TEST(Strategy, ParseAndPrint)
{
  EXPECT_EQ(parse_strategy("standard"), Strategy::standard_sl);
  EXPECT_EQ(parse_strategy("adr_central_two_stage"), Strategy::adr_central_two_stage);
  EXPECT_EQ(parse_strategy("upwind"), Strategy::adr_upwind_blend);
  EXPECT_THROW(parse_strategy("direct"), std::invalid_argument);
  for (auto s : {Strategy::standard_sl, Strategy::adr_central_two_stage, Strategy::adr_upwind_blend})
    EXPECT_EQ(parse_strategy(to_string(s)), s);
}

TEST(StrategyConfig, Validation)
{
  EXPECT_NO_THROW(StrategyConfig{}.validate());
  StrategyConfig c;
  c.beta = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.tol = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.levels = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Solvers, StandardMatchesSparseDirect)
{
  const Problem p = small_problem();
  StrategyConfig cfg;
  cfg.tol = 1e-10;
  const SolveResult r = solve_point_source(p.medium, p.source, p.tt, cfg);
  ASSERT_TRUE(r.converged());
  const ComplexVector ref =
      sparse_direct(assemble_helmholtz(p.medium, p.source.omega, BCSpec{}), point_source(p.grid, p.source).values);
  EXPECT_LE(rel_l2(r.u.values, ref), 1e-8);
  EXPECT_FALSE(r.a.has_value());
  EXPECT_FALSE(r.stage1.has_value());
}

TEST(Solvers, UpwindSolvesAdrSystem)
{
  const Problem p = small_problem();
  StrategyConfig cfg;
  cfg.strategy = Strategy::adr_upwind_blend;
  cfg.tol = 1e-10;
  const SolveResult r = solve_point_source(p.medium, p.source, p.tt, cfg);
  ASSERT_TRUE(r.converged());
  ASSERT_TRUE(r.a.has_value());
  const ComplexVector qhat =
      rhs_transform(point_source(p.grid, p.source), p.tt, p.source.omega, RhsDirection::to_adr).values;
  const ComplexVector ref =
      sparse_direct(assemble_adr(p.medium, p.source.omega, p.tt, AdvectionScheme::upwind2, BCSpec{}), qhat);
  EXPECT_LE(rel_l2(r.a->values, ref), 1e-8);
  const ComplexField u = compose_waveform(*r.a, p.tt, p.source.omega);
  EXPECT_LE(rel_l2(u.values, r.u.values), 1e-15);
}

TEST(Solvers, CentralTwoStageSolvesConjugatedSystem)
{
  const Problem p = small_problem();
  StrategyConfig cfg;
  cfg.strategy = Strategy::adr_central_two_stage;
  cfg.tol = 1e-10;
  const SolveResult r = solve_point_source(p.medium, p.source, p.tt, cfg);
  ASSERT_TRUE(r.converged());
  ASSERT_TRUE(r.stage1.has_value());
  EXPECT_LE(r.stage1->iterations, cfg.stage1_max_cycles);
  EXPECT_EQ(r.iterations(), r.report.iterations + r.stage1->iterations);
  const SparseOperator A =
      similarity_conjugate(assemble_adr(p.medium, p.source.omega, p.tt, AdvectionScheme::central, BCSpec{}),
                           DiagonalScaling::from_travel_time(p.tt, p.source.omega), ConjugationDirection::M_A_Minv);
  const ComplexVector ref = sparse_direct(A, point_source(p.grid, p.source).values);
  EXPECT_LE(rel_l2(r.u.values, ref), 1e-8);
}

TEST(Solvers, StrategiesAgreeUpToDiscretization)
{
  const Problem p = small_problem();
  std::vector<ComplexField> u;
  for (auto s : {Strategy::standard_sl, Strategy::adr_central_two_stage, Strategy::adr_upwind_blend})
  {
    StrategyConfig cfg;
    cfg.strategy = s;
    const SolveResult r = solve_point_source(p.medium, p.source, p.tt, cfg);
    ASSERT_TRUE(r.converged()) << to_string(s);
    u.push_back(r.u);
  }
  // About 11 points per wavelength: the discretizations differ by their phase errors.
  EXPECT_LT(rel_l2(u[1].values, u[0].values), 0.25);
  EXPECT_LT(rel_l2(u[2].values, u[0].values), 0.5);
}

TEST(Solvers, RejectsBadInput)
{
  const Problem p = small_problem();
  StrategyConfig cfg;
  cfg.alpha = -1.0;
  EXPECT_THROW(solve_point_source(p.medium, p.source, p.tt, cfg), std::invalid_argument);
  SourceSpec bad = p.source;
  bad.i1 = 500;
  EXPECT_THROW(solve_point_source(p.medium, bad, p.tt, StrategyConfig{}), std::invalid_argument);
}

TEST(Accuracy, Statistics)
{
  const GridSpec g = make_grid(5, 5, 1.0, 1.0);
  ComplexField ref(g, Complex(1.0));
  ref.values[0] = 1e-20;  // below the floor
  ComplexField u = ref;
  for (std::size_t j = 1; j < 9; ++j) u.values[j] = 1.0 + 0.1 * static_cast<double>(j);
  for (std::size_t j = 9; j < 25; ++j) ref.values[j] = u.values[j] = 0.0;  // excluded, and exact
  const auto s = accuracy_compare({{"u", u}, {"ref", ref}}, ref, 1e-3);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].name, "u");
  EXPECT_EQ(s[0].nodes, 8u);
  EXPECT_NEAR(s[0].median, 0.45, 1e-12);
  EXPECT_NEAR(s[0].p95, 0.8, 1e-12);
  EXPECT_NEAR(s[0].max, 0.8, 1e-12);
  EXPECT_EQ(s[1].max, 0.0);
}

}  // namespace
}  // namespace helmadr
