#include "helmadr/sparse.hpp"

#include <cmath>
#include <ostream>

#include "helmadr/parallel.hpp"

namespace helmadr
{

namespace
{

void check_dims(Index rows, Index cols, std::size_t nx, std::size_t ny, const char *what)
{
  if (nx != static_cast<std::size_t>(cols) || ny != static_cast<std::size_t>(rows))
  {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (matrix " +
                                std::to_string(rows) + "x" + std::to_string(cols) + ", x " +
                                std::to_string(nx) + ", y " + std::to_string(ny) + ")");
  }
}

inline Complex row_dot(const SparseOperator &A, Index i, const Complex *x)
{
  // Written out in real arithmetic; this is the hot loop of every solver.
  double re = 0.0;
  double im = 0.0;
  const Index e = A.row_ptr[i + 1];
  for (Index k = A.row_ptr[i]; k < e; ++k)
  {
    const Complex a = A.val[k];
    const Complex v = x[A.col[k]];
    re += a.real() * v.real() - a.imag() * v.imag();
    im += a.real() * v.imag() + a.imag() * v.real();
  }
  return {re, im};
}

}  // namespace

void spmv(const SparseOperator &A, std::span<const Complex> x, std::span<Complex> y)
{
  check_dims(A.rows, A.cols, x.size(), y.size(), "spmv");
  const Complex *xp = x.data();
  Complex *yp = y.data();
  const Index n = A.rows;
#if defined(HELMADR_HAVE_OPENMP)
  const int threads = kernel_threads();
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1 && n > 4096)
#endif
  for (Index i = 0; i < n; ++i)
  {
    yp[i] = row_dot(A, i, xp);
  }
}

ComplexVector spmv(const SparseOperator &A, std::span<const Complex> x)
{
  ComplexVector y(static_cast<std::size_t>(A.rows));
  spmv(A, x, y);
  return y;
}

void spmv(const RealSparse &A, std::span<const Complex> x, std::span<Complex> y)
{
  check_dims(A.rows, A.cols, x.size(), y.size(), "spmv");
  for (Index i = 0; i < A.rows; ++i)
  {
    Complex s{};
    for (Index k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      s += A.val[k] * x[A.col[k]];
    }
    y[i] = s;
  }
}

void spmv_transpose(const RealSparse &A, std::span<const Complex> x, std::span<Complex> y)
{
  check_dims(A.cols, A.rows, x.size(), y.size(), "spmv_transpose");
  std::fill(y.begin(), y.end(), Complex{});
  for (Index i = 0; i < A.rows; ++i)
  {
    const Complex xi = x[i];
    for (Index k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      y[A.col[k]] += A.val[k] * xi;
    }
  }
}

void residual(const SparseOperator &A, std::span<const Complex> b, std::span<const Complex> x,
              std::span<Complex> r)
{
  check_dims(A.rows, A.cols, x.size(), r.size(), "residual");
  if (b.size() != r.size())
  {
    throw std::invalid_argument("residual: right-hand side length mismatch");
  }
  const Complex *xp = x.data();
  const Index n = A.rows;
#if defined(HELMADR_HAVE_OPENMP)
  const int threads = kernel_threads();
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1 && n > 4096)
#endif
  for (Index i = 0; i < n; ++i)
  {
    r[i] = b[i] - row_dot(A, i, xp);
  }
}

ComplexVector diagonal(const SparseOperator &A)
{
  ComplexVector d(static_cast<std::size_t>(A.rows));
  for (Index i = 0; i < A.rows; ++i)
  {
    const auto b = A.col.begin() + A.row_ptr[i];
    const auto e = A.col.begin() + A.row_ptr[i + 1];
    const auto it = std::lower_bound(b, e, i);
    if (it == e || *it != i)
    {
      throw std::invalid_argument("missing diagonal entry in row " + std::to_string(i));
    }
    d[i] = A.val[it - A.col.begin()];
  }
  return d;
}

SparseOperator identity_operator(Index n)
{
  CsrBuilder<Complex> b(n, n, static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
  {
    b.add(i, 1.0);
    b.finish_row();
  }
  return b.build();
}

void validate(const SparseOperator &A)
{
  if (A.rows != A.cols)
  {
    throw std::invalid_argument("operator is not square");
  }
  if (A.row_ptr.size() != static_cast<std::size_t>(A.rows) + 1)
  {
    throw std::invalid_argument("row pointer length mismatch");
  }
  for (Index i = 0; i < A.rows; ++i)
  {
    if (A.row_ptr[i + 1] <= A.row_ptr[i])
    {
      throw std::invalid_argument("empty row " + std::to_string(i));
    }
    for (Index k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      if (k > A.row_ptr[i] && A.col[k] <= A.col[k - 1])
      {
        throw std::invalid_argument("columns not strictly increasing in row " + std::to_string(i));
      }
      if (A.col[k] < 0 || A.col[k] >= A.cols)
      {
        throw std::invalid_argument("column index out of range in row " + std::to_string(i));
      }
      if (!std::isfinite(A.val[k].real()) || !std::isfinite(A.val[k].imag()))
      {
        throw std::invalid_argument("non-finite entry in row " + std::to_string(i));
      }
    }
  }
}

SparseOperator linear_combination(Complex alpha, const SparseOperator &A, Complex beta,
                                  const SparseOperator &B)
{
  if (A.rows != B.rows || A.cols != B.cols)
  {
    throw std::invalid_argument("linear_combination: shape mismatch");
  }
  CsrBuilder<Complex> out(A.rows, A.cols, std::max(A.nnz(), B.nnz()));
  for (Index i = 0; i < A.rows; ++i)
  {
    Index ka = A.row_ptr[i];
    Index kb = B.row_ptr[i];
    const Index ea = A.row_ptr[i + 1];
    const Index eb = B.row_ptr[i + 1];
    while (ka < ea || kb < eb)
    {
      if (kb >= eb || (ka < ea && A.col[ka] < B.col[kb]))
      {
        out.add(A.col[ka], alpha * A.val[ka]);
        ++ka;
      }
      else if (ka >= ea || B.col[kb] < A.col[ka])
      {
        out.add(B.col[kb], beta * B.val[kb]);
        ++kb;
      }
      else
      {
        out.add(A.col[ka], alpha * A.val[ka] + beta * B.val[kb]);
        ++ka;
        ++kb;
      }
    }
    out.finish_row();
  }
  return out.build();
}

void write_triplets(std::ostream &out, const SparseOperator &A)
{
  const auto old_precision = out.precision(17);
  for (Index i = 0; i < A.rows; ++i)
  {
    for (Index k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      out << i << ' ' << A.col[k] << ' ' << A.val[k].real() << ' ' << A.val[k].imag() << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace helmadr
