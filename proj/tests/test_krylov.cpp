#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "helmadr/krylov.hpp"
#include "oracles.hpp"

namespace helmadr
{
namespace
{

Eigen::VectorXcd as_eigen(std::span<const Complex> v)
{
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

TEST(Fgmres, MatchesDenseSolve)
{
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 5; ++trial)
  {
    const SparseOperator A = test::random_sparse(100, 0.05, rng);
    const ComplexVector b = test::random_vector(100, rng);
    const ComplexVector x0(100);
    KrylovConfig cfg;
    cfg.restart = 20;
    cfg.tol = 1e-12;
    const KrylovResult r = fgmres(as_operator(A), b, x0, {}, cfg);
    ASSERT_TRUE(r.report.converged) << r.report.message;
    const Eigen::VectorXcd ref = test::to_dense(A).partialPivLu().solve(as_eigen(b));
    EXPECT_LE((as_eigen(r.x) - ref).norm() / ref.norm(), 1e-8);
  }
}

TEST(Fgmres, HistoryIsMonotoneAndConsistent)
{
  std::mt19937_64 rng(7);
  const SparseOperator A = test::random_sparse(80, 0.1, rng);
  const ComplexVector b = test::random_vector(80, rng);
  KrylovConfig cfg;
  cfg.restart = 5;
  cfg.tol = 1e-10;
  const KrylovResult r = fgmres(as_operator(A), b, ComplexVector(80), {}, cfg);
  ASSERT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.history.size(), static_cast<std::size_t>(r.report.iterations) + 1);
  EXPECT_DOUBLE_EQ(r.report.history.front(), 1.0);
  for (std::size_t k = 1; k < r.report.history.size(); ++k)
  {
    EXPECT_LE(r.report.history[k], r.report.history[k - 1] * (1.0 + 1e-12));
  }
  ComplexVector res(80);
  residual(A, b, r.x, res);
  EXPECT_NEAR(norm2(res) / norm2(b), r.report.final_residual(), 1e-8);
}

TEST(Fgmres, ZeroRightHandSide)
{
  std::mt19937_64 rng(3);
  const SparseOperator A = test::random_sparse(30, 0.2, rng);
  const KrylovResult r = fgmres(as_operator(A), ComplexVector(30), ComplexVector(30), {}, KrylovConfig{});
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 0);
  EXPECT_EQ(norm2(r.x), 0.0);
}

TEST(Fgmres, ExactPreconditionerConvergesInOneStep)
{
  std::mt19937_64 rng(11);
  const SparseOperator A = test::random_sparse(50, 0.1, rng);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(test::to_dense(A));
  const LinearOperator P = [&](std::span<const Complex> x, std::span<Complex> y) {
    const Eigen::VectorXcd z = lu.solve(as_eigen(x));
    std::copy(z.data(), z.data() + z.size(), y.begin());
  };
  const ComplexVector b = test::random_vector(50, rng);
  KrylovConfig cfg;
  cfg.tol = 1e-10;
  const KrylovResult r = fgmres(as_operator(A), b, ComplexVector(50), P, cfg);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);
}

TEST(Fgmres, StopsAtIterationCap)
{
  std::mt19937_64 rng(5);
  const SparseOperator A = test::random_sparse(60, 0.3, rng);
  KrylovConfig cfg;
  cfg.tol = 1e-30;
  cfg.max_iterations = 7;
  const KrylovResult r = fgmres(as_operator(A), test::random_vector(60, rng), ComplexVector(60), {}, cfg);
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 7);
}

TEST(Fgmres, RejectsSizeMismatch)
{
  std::mt19937_64 rng(5);
  const SparseOperator A = test::random_sparse(10, 0.3, rng);
  EXPECT_THROW(fgmres(as_operator(A), ComplexVector(10), ComplexVector(9), {}, KrylovConfig{}),
               std::invalid_argument);
}

TEST(GmresRelax, ResidualNeverGrows)
{
  std::mt19937_64 rng(9);
  const SparseOperator A = test::random_sparse(70, 0.1, rng);
  const ComplexVector b = test::random_vector(70, rng);
  ComplexVector x = test::random_vector(70, rng);
  ComplexVector r(70);
  residual(A, b, x, r);
  double prev = norm2(r);
  for (int k = 0; k < 6; ++k)
  {
    x = gmres_relax(A, b, x, 2);
    residual(A, b, x, r);
    const double now = norm2(r);
    EXPECT_LE(now, prev * (1.0 + 1e-12));
    prev = now;
  }
}

TEST(Jacobi, DividesByDiagonal)
{
  CsrBuilder<Complex> b(2, 2);
  b.add(0, Complex(2.0, 0.0));
  b.finish_row();
  b.add(0, 1.0);
  b.add(1, Complex(0.0, 4.0));
  b.finish_row();
  const SparseOperator A = b.build();
  const ComplexVector z = jacobi_apply(A, ComplexVector{Complex(4.0), Complex(4.0)});
  EXPECT_EQ(z[0], Complex(2.0));
  EXPECT_EQ(z[1], Complex(0.0, -1.0));
}

TEST(Norms, DotIsConjugateLinearInFirstArgument)
{
  const ComplexVector x{Complex(0, 1), Complex(2, 0)};
  const ComplexVector y{Complex(1, 0), Complex(0, 1)};
  EXPECT_EQ(dot(x, y), Complex(0, -1) + Complex(0, 2));
  EXPECT_DOUBLE_EQ(norm2(x), std::sqrt(5.0));
}

TEST(History, CsvFormat)
{
  SolveReport r;
  r.history = {1.0, 0.5};
  std::ostringstream out;
  write_history_csv(out, r);
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "iter,relative_residual");
  EXPECT_NE(s.find("\n0,1"), std::string::npos);
  EXPECT_NE(s.find("\n1,0.5"), std::string::npos);
}

}  // namespace
}  // namespace helmadr
