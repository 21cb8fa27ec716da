#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "helmadr/parallel.hpp"
#include "helmadr/sparse.hpp"
#include "oracles.hpp"

namespace helmadr
{
namespace
{

Eigen::VectorXcd to_eigen(const ComplexVector &v)
{
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double max_diff(const ComplexVector &a, const Eigen::VectorXcd &b)
{
  return (to_eigen(a) - b).cwiseAbs().maxCoeff();
}

RealSparse random_real(Index rows, Index cols, double fill, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> p(0.0, 1.0);
  CsrBuilder<double> b(rows, cols);
  for (Index i = 0; i < rows; ++i)
  {
    for (Index j = 0; j < cols; ++j)
    {
      if (p(rng) < fill) b.add(j, u(rng));
    }
    b.finish_row();
  }
  return b.build();
}

TEST(CsrBuilder, SumsDuplicatesAndSortsColumns)
{
  CsrBuilder<Complex> b(2, 3);
  b.add(2, 1.0);
  b.add(0, 2.0);
  b.add(2, Complex(0.0, 1.0));
  b.finish_row();
  b.add(1, 5.0);
  b.finish_row();
  const SparseOperator A = b.build();
  EXPECT_EQ(A.col, (std::vector<Index>{0, 2, 1}));
  EXPECT_EQ(A.at(0, 2), Complex(1.0, 1.0));
  EXPECT_EQ(A.at(0, 1), Complex{});
  EXPECT_EQ(A.nnz(), 3u);

  CsrBuilder<Complex> incomplete(2, 2);
  incomplete.finish_row();
  EXPECT_THROW(incomplete.build(), std::logic_error);
}

TEST(Spmv, MatchesDenseProduct)
{
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial)
  {
    const SparseOperator A = test::random_sparse(200, 0.05, rng);
    const ComplexVector x = test::random_vector(200, rng);
    const Eigen::VectorXcd ref = test::to_dense(A) * to_eigen(x);
    EXPECT_LE(max_diff(spmv(A, x), ref), 1e-13);
  }
}

TEST(Spmv, SequentialAndParallelAgreeBitwise)
{
  std::mt19937_64 rng(3);
  const SparseOperator A = test::random_sparse(500, 0.02, rng);
  const ComplexVector x = test::random_vector(500, rng);
  set_sequential(true);
  const ComplexVector a = spmv(A, x);
  set_sequential(false);
  const ComplexVector b = spmv(A, x);
  EXPECT_EQ(a, b);
  EXPECT_GE(kernel_threads(), 1);
}

TEST(Spmv, RealMatrixAndTranspose)
{
  std::mt19937_64 rng(5);
  const RealSparse P = random_real(40, 15, 0.2, rng);
  const Eigen::MatrixXd D = test::to_dense(P);
  const ComplexVector xc = test::random_vector(15, rng);
  ComplexVector y(40);
  spmv(P, xc, y);
  EXPECT_LE(max_diff(y, D.cast<Complex>() * to_eigen(xc)), 1e-13);
  const ComplexVector xf = test::random_vector(40, rng);
  ComplexVector r(15);
  spmv_transpose(P, xf, r);
  EXPECT_LE(max_diff(r, D.transpose().cast<Complex>() * to_eigen(xf)), 1e-13);
  EXPECT_EQ(test::to_dense(transpose(P)), D.transpose());
}

TEST(Spmv, DimensionMismatchThrows)
{
  const SparseOperator I = identity_operator(4);
  ComplexVector x(3), y(4);
  EXPECT_THROW(spmv(I, x, y), std::invalid_argument);
}

TEST(Residual, MatchesDefinition)
{
  std::mt19937_64 rng(9);
  const SparseOperator A = test::random_sparse(60, 0.1, rng);
  const ComplexVector x = test::random_vector(60, rng);
  const ComplexVector b = test::random_vector(60, rng);
  ComplexVector r(60);
  residual(A, b, x, r);
  EXPECT_LE(max_diff(r, to_eigen(b) - test::to_dense(A) * to_eigen(x)), 1e-13);
}

TEST(Multiply, MatchesDense)
{
  std::mt19937_64 rng(21);
  const SparseOperator A = test::random_sparse(30, 0.2, rng);
  const RealSparse P = random_real(30, 12, 0.3, rng);
  const auto AP = multiply(A, P);
  const Eigen::MatrixXcd ref = test::to_dense(A) * test::to_dense(P).cast<Complex>();
  EXPECT_LE((test::to_dense(AP) - ref).cwiseAbs().maxCoeff(), 1e-13);
  for (Index i = 0; i < AP.rows; ++i)
    for (Index k = AP.row_ptr[i] + 1; k < AP.row_ptr[i + 1]; ++k) ASSERT_LT(AP.col[k - 1], AP.col[k]);
  EXPECT_THROW(multiply(P, A), std::invalid_argument);
}

TEST(LinearCombination, UnionPattern)
{
  std::mt19937_64 rng(4);
  const SparseOperator A = test::random_sparse(25, 0.1, rng);
  const SparseOperator B = test::random_sparse(25, 0.1, rng);
  const Complex a(0.75, 0.0), b(0.25, -1.0);
  const SparseOperator C = linear_combination(a, A, b, B);
  EXPECT_LE((test::to_dense(C) - (a * test::to_dense(A) + b * test::to_dense(B))).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NO_THROW(validate(C));
}

TEST(Diagonal, ExtractsAndDetectsMissing)
{
  const SparseOperator I = identity_operator(6);
  for (Complex d : diagonal(I)) EXPECT_EQ(d, Complex(1.0));
  CsrBuilder<Complex> b(2, 2);
  b.add(1, 1.0);
  b.finish_row();
  b.add(1, 1.0);
  b.finish_row();
  EXPECT_THROW(diagonal(b.build()), std::invalid_argument);
}

TEST(Validate, RejectsMalformed)
{
  SparseOperator A = identity_operator(3);
  EXPECT_NO_THROW(validate(A));
  A.val[1] = Complex(std::nan(""), 0.0);
  EXPECT_THROW(validate(A), std::invalid_argument);
  SparseOperator B = identity_operator(3);
  B.col[2] = 7;
  EXPECT_THROW(validate(B), std::invalid_argument);
  SparseOperator C = identity_operator(3);
  C.cols = 4;
  EXPECT_THROW(validate(C), std::invalid_argument);
}

TEST(WriteTriplets, Format)
{
  std::ostringstream os;
  write_triplets(os, identity_operator(2));
  EXPECT_EQ(os.str(), "0 0 1 0\n1 1 1 0\n");
}

}  // namespace
}  // namespace helmadr
