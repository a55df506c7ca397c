// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include "pqs/seed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "pqs/error.hpp"

namespace pqs
{

namespace
{

std::string format_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void require_q_through(const LaurentSeries &q, int order, const char *who)
{
  if (!q.exact() && q.trunc_order() < order)
  {
    throw Error(ErrorCode::InsufficientTruncation,
                std::string(who) + ": Q is truncated at order " + std::to_string(q.trunc_order()) +
                    ", order " + std::to_string(order) + " is needed");
  }
}

void require_c_through(const LaurentSeries &c, int order, const char *who)
{
  if (order > 0 && c.trunc_order() < order)
  {
    throw Error(ErrorCode::InsufficientTruncation,
                std::string(who) + ": C is known through order " + std::to_string(c.trunc_order()) +
                    ", order " + std::to_string(order) + " is needed");
  }
}

}  // namespace

LaurentSeries omega_recurrence(const LaurentSeries &c, const LaurentSeries &q)
{
  const int n = q.min_order();
  if (n >= 0)
  {
    throw Error(ErrorCode::InvalidArgument, "omega_recurrence needs a pole (n < 0)");
  }
  require_c_through(c, -1 - n, "omega_recurrence");
  require_q_through(q, -1, "omega_recurrence");
  LaurentSeries omega(q.dim(), n, -1);
  for (int i = n; i <= -1; ++i)
  {
    ComplexMatrix w = q.coeff(i);
    for (int j = n; j <= i - 1; ++j)
    {
      const ComplexMatrix &cij = c[i - j];
      w.noalias() += q.coeff(j) * cij;
      w.noalias() -= cij * omega[j];
    }
    omega[i] = std::move(w);
  }
  return omega;
}

LaurentSeries phi_recurrence(const LaurentSeries &c, const LaurentSeries &p)
{
  const int m = std::min(p.min_order(), 0);
  require_c_through(c, -m, "phi_recurrence");
  require_q_through(p, 0, "phi_recurrence");
  LaurentSeries phi(p.dim(), m, 0);
  for (int i = m; i <= 0; ++i)
  {
    ComplexMatrix w = p.coeff(i);
    for (int j = m; j <= i - 1; ++j)
    {
      const ComplexMatrix &cij = c[i - j];
      w.noalias() += p.coeff(j) * cij;
      w.noalias() -= cij * phi[j];
    }
    phi[i] = std::move(w);
  }
  return phi;
}

LaurentSeries residual_F(const LaurentSeries &c, const LaurentSeries &omega, const LaurentSeries &q,
                         int last)
{
  const int n = q.min_order();
  require_c_through(c, last + 1, "residual_F");
  require_q_through(q, last, "residual_F");
  const int top_c = c.trunc_order();
  LaurentSeries f(q.dim(), n, std::max(n, last));
  for (int i = n; i <= last; ++i)
  {
    ComplexMatrix r = ComplexMatrix::Zero(q.dim(), q.dim());
    if (i + 1 >= 0 && i + 1 <= top_c)
    {
      r += static_cast<double>(i + 1) * c[i + 1];
    }
    for (int j = omega.min_order(); j <= std::min(-1, omega.trunc_order()); ++j)
    {
      const int k = i - j;
      if (k >= 0 && k <= top_c)
      {
        r.noalias() += c[k] * omega[j];
      }
    }
    for (int j = n; j <= i && j <= q.trunc_order(); ++j)
    {
      const int k = i - j;
      if (k <= top_c)
      {
        r.noalias() -= q[j] * c[k];
      }
    }
    f[i] = std::move(r);
  }
  return f;
}

LaurentSeries residual_F(const LaurentSeries &c, const LaurentSeries &omega, const LaurentSeries &q)
{
  return residual_F(c, omega, q, c.trunc_order() - 1);
}

std::vector<OrderNorm> order_norms(const LaurentSeries &s)
{
  std::vector<OrderNorm> out;
  out.reserve(s.coeffs().size());
  for (int i = s.min_order(); i <= s.trunc_order(); ++i)
  {
    out.push_back({i, max_abs(s[i])});
  }
  return out;
}

//
// Irregular seed
//

namespace
{

LaurentSeries similarity(const LaurentSeries &s, const ComplexMatrix &left, const ComplexMatrix &right)
{
  std::vector<ComplexMatrix> c;
  c.reserve(s.coeffs().size());
  for (const auto &m : s.coeffs())
  {
    c.push_back(left * m * right);
  }
  return LaurentSeries(s.min_order(), std::move(c), s.exact());
}

// The truncated irregular system in the eigenbasis of Q^(n) = D.
//
// Unknowns: diag C^(1..M) and off-diagonal C^(1..L), L = M + K - 1, K = -n.
// Equations: off-diagonal Omega^(i) = 0 for i = n+1..-1 (Omega taken from the
// recurrence, which makes F^(i) vanish there) and F^(i) = 0 for i = 0..M-1.
// Diagonals of C^(M+1..L) stay zero.
class IrregularSystem
{
public:
  IrregularSystem(const LaurentSeries &q_eig, const ComplexVector &d, int order)
    : q_(q_eig), d_(d), dim_(q_eig.dim()), n_(q_eig.min_order()), k_(-n_), order_(order),
      last_c_(order - n_ - 1)
  {
    for (int k = 1; k <= last_c_; ++k)
    {
      for (int r = 0; r < dim_; ++r)
      {
        for (int s = 0; s < dim_; ++s)
        {
          if (r != s || k <= order_)
          {
            unknowns_.push_back({k, r, s});
          }
        }
      }
    }
  }

  int size() const { return static_cast<int>(unknowns_.size()); }
  int last_c() const { return last_c_; }

  LaurentSeries initial() const
  {
    LaurentSeries c(dim_, 0, last_c_);
    c[0] = ComplexMatrix::Identity(dim_, dim_);
    return c;
  }

  ComplexVector pack(const LaurentSeries &c) const
  {
    ComplexVector z(size());
    for (int a = 0; a < size(); ++a)
    {
      const auto &u = unknowns_[static_cast<std::size_t>(a)];
      z(a) = c[u.k](u.r, u.s);
    }
    return z;
  }

  void unpack(const ComplexVector &z, LaurentSeries &c) const
  {
    for (int a = 0; a < size(); ++a)
    {
      const auto &u = unknowns_[static_cast<std::size_t>(a)];
      c[u.k](u.r, u.s) = z(a);
    }
  }

  ComplexVector residual(const LaurentSeries &c) const
  {
    const LaurentSeries omega = omega_recurrence(c, q_);
    const LaurentSeries f = residual_F(c, omega, q_, order_ - 1);
    ComplexVector out(size());
    int a = 0;
    for (int i = n_ + 1; i <= -1; ++i)
    {
      for (int r = 0; r < dim_; ++r)
      {
        for (int s = 0; s < dim_; ++s)
        {
          if (r != s)
          {
            out(a++) = omega[i](r, s);
          }
        }
      }
    }
    for (int i = 0; i <= order_ - 1; ++i)
    {
      for (int r = 0; r < dim_; ++r)
      {
        for (int s = 0; s < dim_; ++s)
        {
          out(a++) = f[i](r, s);
        }
      }
    }
    return out;
  }

  // One Gauss-Seidel sweep over the equation blocks. Diagonal entries are
  // driven by the (i+1) C^(i+1) term, off-diagonal entries of C^(i+K) by the
  // commutator with D (plus (i+1) C^(i+1) when K = 1).
  void sweep(LaurentSeries &c, double tiny) const
  {
    for (int i = n_ + 1; i <= -1; ++i)
    {
      const LaurentSeries omega = omega_recurrence(c, q_);
      ComplexMatrix &target = c[i + k_];
      for (int r = 0; r < dim_; ++r)
      {
        for (int s = 0; s < dim_; ++s)
        {
          if (r != s)
          {
            target(r, s) -= omega[i](r, s) / (d_(r) - d_(s));
          }
        }
      }
    }
    for (int i = 0; i <= order_ - 1; ++i)
    {
      const LaurentSeries omega = omega_recurrence(c, q_);
      const ComplexMatrix f = residual_F(c, omega, q_, order_ - 1)[i];
      for (int r = 0; r < dim_; ++r)
      {
        c[i + 1](r, r) -= f(r, r) / static_cast<double>(i + 1);
      }
      if (i + k_ > last_c_)
      {
        continue;
      }
      ComplexMatrix &target = c[i + k_];
      for (int r = 0; r < dim_; ++r)
      {
        for (int s = 0; s < dim_; ++s)
        {
          if (r == s)
          {
            continue;
          }
          const Complex coef = (k_ == 1 ? static_cast<double>(i + 1) : 0.0) + d_(s) - d_(r);
          if (std::abs(coef) < tiny)
          {
            throw Error(ErrorCode::NotConverged,
                        "resonant residue at order " + std::to_string(i + 1) +
                            ": eigenvalues of Q^(-1) differ by an integer; use the regular solver");
          }
          target(r, s) -= f(r, s) / coef;
        }
      }
    }
  }

private:
  struct Unknown
  {
    int k, r, s;
  };

  const LaurentSeries &q_;
  const ComplexVector &d_;
  int dim_, n_, k_, order_, last_c_;
  std::vector<Unknown> unknowns_;
};

double max_abs_vec(const ComplexVector &v)
{
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

IrregularSeed solve_irregular_seed(const LaurentSeries &q, int order, double x0, const SeedOptions &options)
{
  const int n = q.min_order();
  if (n >= 0)
  {
    throw Error(ErrorCode::InvalidArgument, "irregular seed needs n < 0");
  }
  if (order < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "truncation order must be >= 1");
  }
  require_q_through(q, order - 1, "solve_irregular_seed");
  const int dim = q.dim();

  Eigen::ComplexEigenSolver<ComplexMatrix> es(q[n]);
  if (es.info() != Eigen::Success)
  {
    throw Error(ErrorCode::NotConverged, "eigen-decomposition of the leading matrix failed");
  }
  const ComplexVector d = es.eigenvalues();
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  const double gap_tol = options.gap_rel * scale;
  for (int r = 0; r < dim; ++r)
  {
    for (int s = r + 1; s < dim; ++s)
    {
      if (std::abs(d(r) - d(s)) < gap_tol)
      {
        throw Error(ErrorCode::DegenerateLeadingEigenvalues,
                    "leading eigenvalues " + std::to_string(r) + " and " + std::to_string(s) +
                        " are closer than " + std::to_string(gap_tol));
      }
    }
  }
  const ComplexMatrix t = es.eigenvectors();
  const ComplexMatrix t_inv = t.inverse();
  LaurentSeries q_eig = similarity(q, t_inv, t);
  // The leading matrix is diagonal in its eigenbasis by construction.
  q_eig[n] = d.asDiagonal();

  IrregularSystem sys(q_eig, d, order);
  LaurentSeries c = sys.initial();

  IrregularSeed seed;
  seed.x0 = x0;
  seed.order = order;
  seed.n = n;

  // Iterate past seed_tol: the change back to the original basis can lose
  // a few digits when the eigenbasis is poorly conditioned.
  const double target = 1e-3 * options.seed_tol;
  double res = max_abs_vec(sys.residual(c));
  double prev = std::numeric_limits<double>::infinity();
  while (res >= target && seed.sweeps < options.max_sweeps && res < 0.5 * prev)
  {
    sys.sweep(c, gap_tol);
    ++seed.sweeps;
    prev = res;
    res = max_abs_vec(sys.residual(c));
  }

  // Newton polish on the stacked system with a central-difference Jacobian.
  LaurentSeries best = c;
  double best_res = res;
  int stalled = 0;
  while (best_res >= target && seed.newton_steps < options.max_newton && stalled < 3 && std::isfinite(res))
  {
    const int nu = sys.size();
    const ComplexVector z = sys.pack(c);
    const ComplexVector r0 = sys.residual(c);
    ComplexMatrix jac(nu, nu);
    LaurentSeries probe = c;
    for (int a = 0; a < nu; ++a)
    {
      const double h = 1e-6 * std::max(1.0, std::abs(z(a)));
      ComplexVector zp = z;
      zp(a) += h;
      sys.unpack(zp, probe);
      const ComplexVector rp = sys.residual(probe);
      zp(a) = z(a) - h;
      sys.unpack(zp, probe);
      const ComplexVector rm = sys.residual(probe);
      jac.col(a) = (rp - rm) / (2.0 * h);
    }
    const ComplexVector step = jac.colPivHouseholderQr().solve(-r0);
    sys.unpack(z + step, c);
    ++seed.newton_steps;
    res = max_abs_vec(sys.residual(c));
    if (res < 0.5 * best_res)
    {
      stalled = 0;
    }
    else
    {
      ++stalled;
    }
    if (res < best_res)
    {
      best = c;
      best_res = res;
    }
  }
  c = best;
  res = best_res;
  if (!(res < options.seed_tol))
  {
    throw Error(ErrorCode::NotConverged, "seed residual " + format_double(res) + " after " +
                                             std::to_string(seed.newton_steps) + " Newton steps");
  }

  const LaurentSeries omega_eig = omega_recurrence(c, q_eig);
  for (int i = n; i <= -1; ++i)
  {
    ComplexMatrix off = omega_eig[i];
    off.diagonal().setZero();
    seed.omega_offdiag = std::max(seed.omega_offdiag, max_abs(off));
  }

  seed.c = similarity(c, t, t_inv);
  seed.c[0] = ComplexMatrix::Identity(dim, dim);
  seed.omega = similarity(omega_eig, t, t_inv);
  seed.eigenbasis = t;
  seed.leading_eigenvalues = d;
  seed.residual_report = order_norms(residual_F(seed.c, seed.omega, q, order - 1));
  seed.normalization = "C^(0) = E; Omega diagonal in the eigenbasis of Q^(" + std::to_string(n) +
                       "); diagonals of C^(" + std::to_string(order + 1) + ".." +
                       std::to_string(sys.last_c()) + ") set to zero";
  const double final_res = max_norm(seed.residual_report);
  if (!(final_res < options.seed_tol))
  {
    throw Error(ErrorCode::NotConverged,
                "seed residual " + format_double(final_res) + " in the original basis exceeds seed_tol");
  }
  return seed;
}

IrregularSeed solve_irregular_seed(const PairModel &model, int order, const SeedOptions &options)
{
  return solve_irregular_seed(model.q_at(model.u0(), model.x0()), order, model.x0(), options);
}

//
// Regular seed with logarithms
//

std::vector<OrderNorm> regular_residual(const std::vector<LaurentSeries> &c, const LaurentSeries &q,
                                        int last)
{
  if (q.min_order() != -1)
  {
    throw Error(ErrorCode::InvalidArgument, "regular residual needs n = -1");
  }
  require_q_through(q, last, "regular_residual");
  const int depth = static_cast<int>(c.size());
  const ComplexMatrix &res = q[-1];
  std::vector<OrderNorm> out;
  for (int i = -1; i <= last; ++i)
  {
    double worst = 0.0;
    for (int j = 0; j < depth; ++j)
    {
      require_c_through(c[static_cast<std::size_t>(j)], i + 1, "regular_residual");
      const auto &cj = c[static_cast<std::size_t>(j)];
      const ComplexMatrix &next = cj[i + 1];
      ComplexMatrix r = static_cast<double>(i + 1) * next + next * res - res * next;
      if (j + 1 < depth)
      {
        r += static_cast<double>(j + 1) * c[static_cast<std::size_t>(j + 1)][i + 1];
      }
      for (int k = 0; k <= i && k <= q.trunc_order(); ++k)
      {
        r.noalias() -= q[k] * cj[i - k];
      }
      worst = std::max(worst, max_abs(r));
    }
    out.push_back({i, worst});
  }
  return out;
}

RegularSeed solve_regular_seed(const LaurentSeries &q, int order, double x0, const SeedOptions &options)
{
  if (q.min_order() != -1)
  {
    throw Error(ErrorCode::InvalidArgument, "regular seed needs n = -1, got n = " +
                                                std::to_string(q.min_order()));
  }
  if (order < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "truncation order must be >= 1");
  }
  require_q_through(q, order - 1, "solve_regular_seed");
  const int dim = q.dim();
  const int nn = dim * dim;
  const int depth = dim;
  const ComplexMatrix &res = q[-1];
  const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);

  RegularSeed seed;
  seed.x0 = x0;
  seed.order = order;
  seed.c.assign(static_cast<std::size_t>(depth), LaurentSeries(dim, 0, order));
  seed.c[0][0] = eye;

  // vec(X R) = (R^T kron I) vec X and vec(R X) = (I kron R) vec X
  // (column-major vec).
  ComplexMatrix commutator_op = ComplexMatrix::Zero(nn, nn);
  for (int a = 0; a < dim; ++a)
  {
    for (int b = 0; b < dim; ++b)
    {
      commutator_op.block(a * dim, b * dim, dim, dim) += res(b, a) * eye;
      if (a == b)
      {
        commutator_op.block(a * dim, b * dim, dim, dim) -= res;
      }
    }
  }

  const int total = depth * nn;
  for (int k = 1; k <= order; ++k)
  {
    ComplexMatrix a = ComplexMatrix::Zero(total, total);
    ComplexVector b(total);
    const ComplexMatrix diag_block = static_cast<double>(k) * ComplexMatrix::Identity(nn, nn) + commutator_op;
    for (int j = 0; j < depth; ++j)
    {
      a.block(j * nn, j * nn, nn, nn) = diag_block;
      if (j + 1 < depth)
      {
        a.block(j * nn, (j + 1) * nn, nn, nn) = static_cast<double>(j + 1) * ComplexMatrix::Identity(nn, nn);
      }
      ComplexMatrix rhs = ComplexMatrix::Zero(dim, dim);
      for (int l = 0; l <= k - 1 && l <= q.trunc_order(); ++l)
      {
        rhs.noalias() += q[l] * seed.c[static_cast<std::size_t>(j)][k - 1 - l];
      }
      b.segment(j * nn, nn) = Eigen::Map<const ComplexVector>(rhs.data(), nn);
    }

    Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod;
    cod.setThreshold(1e-10);
    cod.compute(a);
    if (cod.rank() < total)
    {
      seed.resonant_orders.push_back(k);
    }
    const ComplexVector x = cod.solve(b);
    const double stacked = max_abs_vec(a * x - b);
    if (!(stacked < options.seed_tol))
    {
      throw Error(ErrorCode::ResidualTooLarge, "stacked system at order " + std::to_string(k) +
                                                   " has residual " + std::to_string(stacked));
    }
    for (int j = 0; j < depth; ++j)
    {
      seed.c[static_cast<std::size_t>(j)][k] = Eigen::Map<const ComplexMatrix>(x.data() + j * nn, dim, dim);
    }
  }

  seed.residual_report = regular_residual(seed.c, q, order - 1);
  seed.normalization = "C^(0,0) = E, C^(0,j) = 0 for j > 0; kernel components chosen by minimum norm";
  return seed;
}

RegularSeed solve_regular_seed(const PairModel &model, int order, const SeedOptions &options)
{
  return solve_regular_seed(model.q_at(model.u0(), model.x0()), order, model.x0(), options);
}

}  // namespace pqs
