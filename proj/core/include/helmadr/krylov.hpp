#ifndef HELMADR_KRYLOV_HPP
#define HELMADR_KRYLOV_HPP

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "helmadr/sparse.hpp"

namespace helmadr
{

/// y = Op(x). Preconditioners may change between applications (flexible GMRES only).
using LinearOperator = std::function<void(std::span<const Complex> x, std::span<Complex> y)>;

LinearOperator as_operator(const SparseOperator &A);

struct KrylovConfig
{
  int restart = 5;
  int max_iterations = 500;  // preconditioned iterations over all restart cycles
  double tol = 1e-5;         // on ||b - A x|| / ||b||
  bool flexible = true;
};

struct SolveReport
{
  int iterations = 0;
  /// Relative residual ||b - A x_k|| / ||b||; entry 0 is the initial guess, then one entry per
  /// preconditioned iteration.
  std::vector<double> history;
  bool converged = false;
  double wall_seconds = 0.0;
  std::string message;

  double final_residual() const { return history.empty() ? 0.0 : history.back(); }
};

/// Writes `iter,relative_residual` lines (with header).
void write_history_csv(std::ostream &out, const SolveReport &report);

struct KrylovResult
{
  ComplexVector x;
  SolveReport report;
};

/// Restarted (flexible) GMRES with right preconditioning, modified Gram-Schmidt and one
/// conditional re-orthogonalization pass. An empty `precond` means the identity. A flexible
/// solve stores the preconditioned basis, so the preconditioner may vary per application.
KrylovResult fgmres(const LinearOperator &A, std::span<const Complex> b, std::span<const Complex> x0,
                    const LinearOperator &precond, const KrylovConfig &cfg);

/// In-place variant used inside multigrid cycles; returns the report only.
SolveReport fgmres_inplace(const LinearOperator &A, std::span<const Complex> b, std::span<Complex> x,
                           const LinearOperator &precond, const KrylovConfig &cfg);

/// z_j = r_j / A_jj. Throws on a zero diagonal.
ComplexVector jacobi_apply(const SparseOperator &A, std::span<const Complex> r);

/// Inverse diagonal, precomputed for repeated Jacobi applications.
ComplexVector inverse_diagonal(const SparseOperator &A);

/// `steps` iterations of Jacobi-preconditioned GMRES from the given x (one cycle, no restart).
/// The returned iterate minimizes the residual over the Krylov space, so the residual norm
/// never grows.
void gmres_relax(const SparseOperator &A, std::span<const Complex> inv_diag, std::span<const Complex> b,
                 std::span<Complex> x, int steps);
ComplexVector gmres_relax(const SparseOperator &A, std::span<const Complex> b, std::span<const Complex> x,
                          int steps);

/// Euclidean norm and conjugate-linear inner product <x, y> = sum conj(x_i) y_i.
double norm2(std::span<const Complex> x);
Complex dot(std::span<const Complex> x, std::span<const Complex> y);

}  // namespace helmadr

#endif  // HELMADR_KRYLOV_HPP
