#include "helmadr/krylov.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace helmadr
{

double norm2(std::span<const Complex> x)
{
  double s = 0.0;
  for (const Complex &v : x)
  {
    s += v.real() * v.real() + v.imag() * v.imag();
  }
  return std::sqrt(s);
}

Complex dot(std::span<const Complex> x, std::span<const Complex> y)
{
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    // conj(x) * y
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

LinearOperator as_operator(const SparseOperator &A)
{
  return [&A](std::span<const Complex> x, std::span<Complex> y) { spmv(A, x, y); };
}

void write_history_csv(std::ostream &out, const SolveReport &report)
{
  out << "iter,relative_residual\n";
  const auto old_precision = out.precision(17);
  for (std::size_t k = 0; k < report.history.size(); ++k)
  {
    out << k << ',' << report.history[k] << '\n';
  }
  out.precision(old_precision);
}

namespace
{

void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y)
{
  for (std::size_t i = 0; i < y.size(); ++i)
  {
    y[i] += a * x[i];
  }
}

// Complex Givens rotation zeroing b in (a, b); c is real.
void make_rotation(Complex a, Complex b, double &c, Complex &s, Complex &r)
{
  const double aa = std::abs(a);
  const double bb = std::abs(b);
  if (bb == 0.0)
  {
    c = 1.0;
    s = 0.0;
    r = a;
    return;
  }
  if (aa == 0.0)
  {
    c = 0.0;
    s = std::conj(b) / bb;
    r = bb;
    return;
  }
  const double t = std::hypot(aa, bb);
  const Complex phase = a / aa;
  c = aa / t;
  s = phase * std::conj(b) / t;
  r = phase * t;
}

void apply_rotation(double c, Complex s, Complex &x, Complex &y)
{
  const Complex xn = c * x + s * y;
  y = -std::conj(s) * x + c * y;
  x = xn;
}

/// Restarted GMRES with right preconditioning. `precond(v, z)` maps a basis vector to the
/// search direction. With `flexible` the directions are stored; otherwise the update is
/// formed as precond(V y).
template <typename ApplyA, typename ApplyM>
SolveReport run_gmres(ApplyA &&apply_a, ApplyM &&precond, std::span<const Complex> b, std::span<Complex> x,
                      const KrylovConfig &cfg, bool record)
{
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  if (x.size() != n)
  {
    throw std::invalid_argument("gmres: solution and right-hand side lengths differ");
  }
  if (cfg.restart < 1 || !(cfg.tol >= 0.0))
  {
    throw std::invalid_argument("gmres: restart must be >= 1 and tol >= 0");
  }
  SolveReport rep;
  const double bnorm = norm2(b);
  if (bnorm == 0.0)
  {
    std::fill(x.begin(), x.end(), Complex{});
    rep.history.push_back(0.0);
    rep.converged = true;
    return rep;
  }

  const int m = cfg.restart;
  ComplexVector r(n);
  apply_a(std::span<const Complex>(x), std::span<Complex>(r));
  for (std::size_t i = 0; i < n; ++i)
  {
    r[i] = b[i] - r[i];
  }
  double beta = norm2(r);
  if (record) rep.history.push_back(beta / bnorm);
  if (beta / bnorm <= cfg.tol)
  {
    rep.converged = true;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }

  std::vector<ComplexVector> V(static_cast<std::size_t>(m) + 1, ComplexVector(n));
  std::vector<ComplexVector> Z(cfg.flexible ? static_cast<std::size_t>(m) : 1, ComplexVector(n));
  ComplexVector w(n);
  std::vector<Complex> H(static_cast<std::size_t>((m + 1) * m));
  auto h = [&](int i, int k) -> Complex & { return H[static_cast<std::size_t>(k * (m + 1) + i)]; };
  std::vector<double> cs(static_cast<std::size_t>(m));
  std::vector<Complex> sn(static_cast<std::size_t>(m));
  std::vector<Complex> g(static_cast<std::size_t>(m) + 1);
  std::vector<Complex> y(static_cast<std::size_t>(m));

  while (rep.iterations < cfg.max_iterations)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      V[0][i] = r[i] / beta;
    }
    std::fill(g.begin(), g.end(), Complex{});
    g[0] = beta;
    int k_used = 0;
    bool breakdown = false;
    bool stop = false;
    double est = beta;

    for (int k = 0; k < m && rep.iterations < cfg.max_iterations; ++k)
    {
      ComplexVector &zk = cfg.flexible ? Z[static_cast<std::size_t>(k)] : Z[0];
      precond(std::span<const Complex>(V[k]), std::span<Complex>(zk));
      apply_a(std::span<const Complex>(zk), std::span<Complex>(w));

      const double w0 = norm2(w);
      for (int i = 0; i <= k; ++i)
      {
        const Complex hik = dot(V[i], w);
        h(i, k) = hik;
        axpy(-hik, V[i], w);
      }
      double wn = norm2(w);
      if (wn < 0.7 * w0)
      {
        for (int i = 0; i <= k; ++i)
        {
          const Complex c = dot(V[i], w);
          h(i, k) += c;
          axpy(-c, V[i], w);
        }
        wn = norm2(w);
      }
      h(k + 1, k) = wn;

      for (int i = 0; i < k; ++i)
      {
        apply_rotation(cs[i], sn[i], h(i, k), h(i + 1, k));
      }
      Complex rkk;
      make_rotation(h(k, k), h(k + 1, k), cs[k], sn[k], rkk);
      h(k, k) = rkk;
      h(k + 1, k) = 0.0;
      apply_rotation(cs[k], sn[k], g[k], g[k + 1]);

      ++rep.iterations;
      k_used = k + 1;
      est = std::abs(g[k + 1]);
      if (record) rep.history.push_back(est / bnorm);

      if (rkk == Complex{})
      {
        // Singular Hessenberg: the Krylov space stopped growing without solving the system.
        rep.message = "numerical breakdown at iteration " + std::to_string(rep.iterations);
        k_used = k;
        stop = true;
        break;
      }
      breakdown = wn <= std::numeric_limits<double>::epsilon() * std::max(w0, 1e-300);
      if (est / bnorm <= cfg.tol || breakdown)
      {
        break;
      }
      for (std::size_t i = 0; i < n; ++i)
      {
        V[k + 1][i] = w[i] / wn;
      }
    }

    // Back substitution on the rotated Hessenberg matrix.
    for (int i = k_used - 1; i >= 0; --i)
    {
      Complex s = g[i];
      for (int j = i + 1; j < k_used; ++j)
      {
        s -= h(i, j) * y[j];
      }
      y[i] = s / h(i, i);
    }
    if (cfg.flexible)
    {
      for (int i = 0; i < k_used; ++i)
      {
        axpy(y[i], Z[i], x);
      }
    }
    else if (k_used > 0)
    {
      ComplexVector &acc = w;
      std::fill(acc.begin(), acc.end(), Complex{});
      for (int i = 0; i < k_used; ++i)
      {
        axpy(y[i], V[i], acc);
      }
      precond(std::span<const Complex>(acc), std::span<Complex>(Z[0]));
      axpy(1.0, Z[0], x);
    }

    apply_a(std::span<const Complex>(x), std::span<Complex>(r));
    for (std::size_t i = 0; i < n; ++i)
    {
      r[i] = b[i] - r[i];
    }
    beta = norm2(r);
    if (record && k_used > 0)
    {
      rep.history.back() = beta / bnorm;
    }
    if (beta / bnorm <= cfg.tol)
    {
      rep.converged = true;
      break;
    }
    if (stop)
    {
      break;
    }
    if (breakdown && rep.message.empty())
    {
      rep.message = "Krylov space exhausted above tolerance (true residual " + std::to_string(beta / bnorm) + ")";
    }
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace

SolveReport fgmres_inplace(const LinearOperator &A, std::span<const Complex> b, std::span<Complex> x,
                           const LinearOperator &precond, const KrylovConfig &cfg)
{
  auto apply_m = [&](std::span<const Complex> v, std::span<Complex> z) {
    if (precond)
    {
      precond(v, z);
    }
    else
    {
      std::copy(v.begin(), v.end(), z.begin());
    }
  };
  return run_gmres(A, apply_m, b, x, cfg, true);
}

KrylovResult fgmres(const LinearOperator &A, std::span<const Complex> b, std::span<const Complex> x0,
                    const LinearOperator &precond, const KrylovConfig &cfg)
{
  KrylovResult res;
  res.x.assign(x0.begin(), x0.end());
  if (res.x.empty())
  {
    res.x.assign(b.size(), Complex{});
  }
  res.report = fgmres_inplace(A, b, res.x, precond, cfg);
  return res;
}

ComplexVector inverse_diagonal(const SparseOperator &A)
{
  ComplexVector d = diagonal(A);
  for (std::size_t i = 0; i < d.size(); ++i)
  {
    if (d[i] == Complex{})
    {
      throw std::invalid_argument("zero diagonal entry in row " + std::to_string(i));
    }
    d[i] = 1.0 / d[i];
  }
  return d;
}

ComplexVector jacobi_apply(const SparseOperator &A, std::span<const Complex> r)
{
  const ComplexVector inv = inverse_diagonal(A);
  if (r.size() != inv.size())
  {
    throw std::invalid_argument("jacobi_apply: dimension mismatch");
  }
  ComplexVector z(r.size());
  for (std::size_t i = 0; i < z.size(); ++i)
  {
    z[i] = r[i] * inv[i];
  }
  return z;
}

void gmres_relax(const SparseOperator &A, std::span<const Complex> inv_diag, std::span<const Complex> b,
                 std::span<Complex> x, int steps)
{
  if (steps <= 0)
  {
    return;
  }
  KrylovConfig cfg;
  cfg.restart = steps;
  cfg.max_iterations = steps;
  cfg.tol = 0.0;
  cfg.flexible = false;
  auto apply_a = [&](std::span<const Complex> v, std::span<Complex> y) { spmv(A, v, y); };
  auto apply_m = [&](std::span<const Complex> v, std::span<Complex> z) {
    for (std::size_t i = 0; i < v.size(); ++i)
    {
      z[i] = v[i] * inv_diag[i];
    }
  };
  run_gmres(apply_a, apply_m, b, x, cfg, false);
}

ComplexVector gmres_relax(const SparseOperator &A, std::span<const Complex> b, std::span<const Complex> x,
                          int steps)
{
  const ComplexVector inv = inverse_diagonal(A);
  ComplexVector out(x.begin(), x.end());
  gmres_relax(A, inv, b, out, steps);
  return out;
}

}  // namespace helmadr
