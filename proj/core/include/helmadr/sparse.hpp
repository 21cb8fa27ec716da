#ifndef HELMADR_SPARSE_HPP
#define HELMADR_SPARSE_HPP

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "helmadr/grid.hpp"

namespace helmadr
{

using Index = std::int32_t;

/// Compressed sparse row matrix. Column indices are strictly increasing within each row.
template <typename T>
struct CsrMatrix
{
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> row_ptr{0};
  std::vector<Index> col;
  std::vector<T> val;

  std::size_t nnz() const { return col.size(); }
  Index row_begin(Index i) const { return row_ptr[i]; }
  Index row_end(Index i) const { return row_ptr[i + 1]; }

  /// Value at (i, j), zero when (i, j) is not in the pattern.
  T at(Index i, Index j) const
  {
    const auto b = col.begin() + row_ptr[i];
    const auto e = col.begin() + row_ptr[i + 1];
    const auto it = std::lower_bound(b, e, j);
    return (it != e && *it == j) ? val[it - col.begin()] : T{};
  }
};

using SparseOperator = CsrMatrix<Complex>;
using RealSparse = CsrMatrix<double>;

/// Accumulates one row at a time; duplicate columns are summed in insertion order.
template <typename T>
class CsrBuilder
{
public:
  CsrBuilder(Index rows, Index cols, std::size_t nnz_hint = 0)
  {
    m_.rows = rows;
    m_.cols = cols;
    m_.row_ptr.reserve(static_cast<std::size_t>(rows) + 1);
    m_.col.reserve(nnz_hint);
    m_.val.reserve(nnz_hint);
  }

  void add(Index c, T v) { pending_.emplace_back(c, v); }

  void finish_row()
  {
    std::stable_sort(pending_.begin(), pending_.end(),
                     [](const auto &a, const auto &b) { return a.first < b.first; });
    for (std::size_t k = 0; k < pending_.size();)
    {
      const Index c = pending_[k].first;
      T sum = pending_[k].second;
      std::size_t m = k + 1;
      for (; m < pending_.size() && pending_[m].first == c; ++m)
      {
        sum += pending_[m].second;
      }
      m_.col.push_back(c);
      m_.val.push_back(sum);
      k = m;
    }
    pending_.clear();
    m_.row_ptr.push_back(static_cast<Index>(m_.col.size()));
  }

  CsrMatrix<T> build()
  {
    if (static_cast<Index>(m_.row_ptr.size()) != m_.rows + 1)
    {
      throw std::logic_error("CsrBuilder: not all rows finished");
    }
    return std::move(m_);
  }

private:
  CsrMatrix<T> m_;
  std::vector<std::pair<Index, T>> pending_;
};

/// y = A x. Rows are accumulated left to right, so results do not depend on threading.
void spmv(const SparseOperator &A, std::span<const Complex> x, std::span<Complex> y);
ComplexVector spmv(const SparseOperator &A, std::span<const Complex> x);
/// y = A x for a real matrix acting on a complex vector (prolongation).
void spmv(const RealSparse &A, std::span<const Complex> x, std::span<Complex> y);

/// y = A^T x without forming the transpose (restriction with a real prolongation).
void spmv_transpose(const RealSparse &A, std::span<const Complex> x, std::span<Complex> y);

/// r = b - A x.
void residual(const SparseOperator &A, std::span<const Complex> b, std::span<const Complex> x,
              std::span<Complex> r);

/// Diagonal entries; throws if a diagonal is missing from the pattern.
ComplexVector diagonal(const SparseOperator &A);

SparseOperator identity_operator(Index n);

/// Checks square shape, non-empty rows, strictly increasing columns, finite values.
void validate(const SparseOperator &A);

template <typename T>
CsrMatrix<T> transpose(const CsrMatrix<T> &A)
{
  CsrMatrix<T> t;
  t.rows = A.cols;
  t.cols = A.rows;
  t.row_ptr.assign(static_cast<std::size_t>(A.cols) + 1, 0);
  for (Index c : A.col)
  {
    ++t.row_ptr[c + 1];
  }
  for (Index i = 0; i < A.cols; ++i)
  {
    t.row_ptr[i + 1] += t.row_ptr[i];
  }
  t.col.resize(A.nnz());
  t.val.resize(A.nnz());
  std::vector<Index> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (Index i = 0; i < A.rows; ++i)
  {
    for (Index k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      const Index dst = next[A.col[k]]++;
      t.col[dst] = i;
      t.val[dst] = A.val[k];
    }
  }
  return t;
}

/// C = A B with a dense accumulator per row (row-by-row Gustavson product).
template <typename TA, typename TB>
auto multiply(const CsrMatrix<TA> &A, const CsrMatrix<TB> &B)
    -> CsrMatrix<std::common_type_t<TA, TB>>
{
  using TC = std::common_type_t<TA, TB>;
  if (A.cols != B.rows)
  {
    throw std::invalid_argument("multiply: inner dimensions differ (" + std::to_string(A.cols) +
                                " vs " + std::to_string(B.rows) + ")");
  }
  CsrMatrix<TC> C;
  C.rows = A.rows;
  C.cols = B.cols;
  C.row_ptr.reserve(static_cast<std::size_t>(A.rows) + 1);
  std::vector<TC> acc(static_cast<std::size_t>(B.cols), TC{});
  std::vector<char> used(static_cast<std::size_t>(B.cols), 0);
  std::vector<Index> pattern;
  for (Index i = 0; i < A.rows; ++i)
  {
    pattern.clear();
    for (Index ka = A.row_ptr[i]; ka < A.row_ptr[i + 1]; ++ka)
    {
      const Index k = A.col[ka];
      const TA a = A.val[ka];
      for (Index kb = B.row_ptr[k]; kb < B.row_ptr[k + 1]; ++kb)
      {
        const Index j = B.col[kb];
        if (!used[j])
        {
          used[j] = 1;
          pattern.push_back(j);
        }
        acc[j] += TC(a) * TC(B.val[kb]);
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (Index j : pattern)
    {
      C.col.push_back(j);
      C.val.push_back(acc[j]);
      acc[j] = TC{};
      used[j] = 0;
    }
    C.row_ptr.push_back(static_cast<Index>(C.col.size()));
  }
  return C;
}

/// alpha A + beta B on the union sparsity pattern.
SparseOperator linear_combination(Complex alpha, const SparseOperator &A, Complex beta,
                                  const SparseOperator &B);

/// Writes one `row col re im` line per stored entry (0-based indices).
void write_triplets(std::ostream &out, const SparseOperator &A);

}  // namespace helmadr

#endif  // HELMADR_SPARSE_HPP
