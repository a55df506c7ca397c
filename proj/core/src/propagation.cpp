// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include "pqs/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "pqs/error.hpp"

namespace pqs
{

namespace
{

// Flat complex state: u, then square matrix blocks of size dim * dim.
class StateLayout
{
public:
  StateLayout(int state_dim, int dim, int blocks) : d_(state_dim), dim_(dim), blocks_(blocks) {}

  int size() const { return d_ + blocks_ * dim_ * dim_; }

  Eigen::Map<const ComplexVector> u(const ComplexVector &y) const { return {y.data(), d_}; }
  Eigen::Map<ComplexVector> u(ComplexVector &y) const { return {y.data(), d_}; }

  Eigen::Map<const ComplexMatrix> block(const ComplexVector &y, int b) const
  {
    return {y.data() + offset(b), dim_, dim_};
  }
  Eigen::Map<ComplexMatrix> block(ComplexVector &y, int b) const { return {y.data() + offset(b), dim_, dim_}; }

private:
  Eigen::Index offset(int b) const { return d_ + static_cast<Eigen::Index>(b) * dim_ * dim_; }

  int d_, dim_, blocks_;
};

std::span<const Complex> as_span(const ComplexVector &v)
{
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void check_psi0(const ComplexMatrix &psi0, double x, double det_tol)
{
  const double det = std::abs(psi0.determinant());
  if (!(det >= det_tol))
  {
    throw Error(ErrorCode::DegeneratePsi0, "|det Psi_0| = " + std::to_string(det) + " at x = " + std::to_string(x));
  }
}

// Right-hand side of the normal coefficient system
//   C_x^(i) = sum_{j=m}^{i} P^(j) C^(i-j) - sum_{j=m}^{0} C^(i-j) Phi^(j),
// for i = 0..L; terms needing C beyond L are dropped.
LaurentSeries irregular_coeff_rhs(const LaurentSeries &c, const LaurentSeries &p, const LaurentSeries &phi)
{
  const int top = c.trunc_order();
  LaurentSeries dc(c.dim(), 0, top);
  for (int i = 0; i <= top; ++i)
  {
    ComplexMatrix &r = dc[i];
    for (int j = p.min_order(); j <= std::min(i, p.trunc_order()); ++j)
    {
      const int k = i - j;
      if (k <= top)
      {
        r.noalias() += p[j] * c[k];
      }
    }
    for (int j = phi.min_order(); j <= 0; ++j)
    {
      const int k = i - j;
      if (k <= top)
      {
        r.noalias() -= c[k] * phi[j];
      }
    }
  }
  return dc;
}

// C_x^(i,j) = sum_{k=1}^{i} P^(k) C^(i-k,j) - [C^(i,j), P^(0)].
std::vector<LaurentSeries> regular_coeff_rhs(const std::vector<LaurentSeries> &c, const LaurentSeries &p)
{
  std::vector<LaurentSeries> dc;
  dc.reserve(c.size());
  const ComplexMatrix p0 = p.coeff(0);
  for (const auto &cj : c)
  {
    const int top = cj.trunc_order();
    LaurentSeries d(cj.dim(), 0, top);
    for (int i = 0; i <= top; ++i)
    {
      ComplexMatrix r = p0 * cj[i] - cj[i] * p0;
      for (int k = 1; k <= std::min(i, p.trunc_order()); ++k)
      {
        r.noalias() += p[k] * cj[i - k];
      }
      d[i] = std::move(r);
    }
    dc.push_back(std::move(d));
  }
  return dc;
}

ComplexMatrix driver_matrix(Psi0Driver driver, const LaurentSeries &p, const LaurentSeries &phi)
{
  return driver == Psi0Driver::P0 ? p.coeff(0) : phi.coeff(0);
}

TrajectorySample irregular_sample(const PairModel &model, int order, Psi0Driver driver, double x,
                                  const ComplexVector &u, LaurentSeries c, ComplexMatrix psi0)
{
  TrajectorySample s;
  s.x = x;
  s.u = u;
  const LaurentSeries p = model.p_at(as_span(u), x);
  const LaurentSeries q = model.q_at(as_span(u), x);
  s.omega = omega_recurrence(c, q);
  s.phi = phi_recurrence(c, p);
  s.f_norms = order_norms(residual_F(c, s.omega, q, order - 1));
  s.compat_norms = compatibility_residual(model, as_span(u), x);
  s.driver_trace = driver_matrix(driver, p, s.phi).trace();
  s.c0_deviation = max_abs(c[0] - ComplexMatrix::Identity(c.dim(), c.dim()));
  s.c = std::move(c);
  s.psi0 = std::move(psi0);
  return s;
}

TrajectorySample regular_sample(const PairModel &model, int order, double x, const ComplexVector &u,
                                std::vector<LaurentSeries> c, ComplexMatrix psi0)
{
  TrajectorySample s;
  s.x = x;
  s.u = u;
  const LaurentSeries p = model.p_at(as_span(u), x);
  const LaurentSeries q = model.q_at(as_span(u), x);
  s.omega = LaurentSeries(-1, {q[-1]});
  s.phi = LaurentSeries(0, {p.coeff(0)});
  s.f_norms = regular_residual(c, q, order - 1);
  s.compat_norms = compatibility_residual(model, as_span(u), x);
  s.driver_trace = p.coeff(0).trace();
  s.c0_deviation = max_abs(c[0][0] - ComplexMatrix::Identity(c[0].dim(), c[0].dim()));
  s.c_log = std::move(c);
  s.psi0 = std::move(psi0);
  return s;
}

ComplexVector to_vector(std::span<const Complex> v)
{
  ComplexVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k)
  {
    out(static_cast<Eigen::Index>(k)) = v[k];
  }
  return out;
}

}  // namespace

std::vector<double> Trajectory::grid() const
{
  std::vector<double> g;
  g.reserve(samples.size());
  for (const auto &s : samples)
  {
    g.push_back(s.x);
  }
  return g;
}

Psi0Driver psi0_driver_for(const PairModel &model)
{
  return model.m() == 0 ? Psi0Driver::P0 : Psi0Driver::Phi0;
}

StateRun evolve_state(const PairModel &model, double x_end, int steps, const PropagationOptions &options)
{
  StateRun run;
  auto rhs = [&](double x, const ComplexVector &y) { return model.vector_field_at(as_span(y), x); };
  run.stats = integrate_rk4(
      rhs, model.x0(), to_vector(model.u0()), x_end, steps,
      [&](int, double x, const ComplexVector &y) {
        run.grid.push_back(x);
        run.u.push_back(y);
      },
      options.ode_tol);
  return run;
}

Trajectory evolve_expansion(const IrregularSeed &seed, const PairModel &model, double x_end, int steps,
                            const PropagationOptions &options)
{
  if (seed.c.dim() != model.dim() || seed.n != model.n())
  {
    throw Error(ErrorCode::DimensionMismatch, "seed does not belong to this model");
  }
  const int dim = model.dim();
  const int last_c = seed.c.trunc_order();
  if (-model.m() > last_c)
  {
    throw Error(ErrorCode::InsufficientTruncation,
                "Phi recurrence needs C^(1).." + std::to_string(-model.m()) + ", seed has " + std::to_string(last_c));
  }
  const StateLayout layout(model.state_dim(), dim, last_c + 2);
  const int psi_block = last_c + 1;
  const Psi0Driver driver = psi0_driver_for(model);

  ComplexVector y0(layout.size());
  layout.u(y0) = to_vector(model.u0());
  for (int i = 0; i <= last_c; ++i)
  {
    layout.block(y0, i) = seed.c[i];
  }
  layout.block(y0, psi_block) = ComplexMatrix::Identity(dim, dim);

  auto unpack_c = [&](const ComplexVector &y) {
    LaurentSeries c(dim, 0, last_c);
    for (int i = 0; i <= last_c; ++i)
    {
      c[i] = layout.block(y, i);
    }
    return c;
  };

  auto rhs = [&](double x, const ComplexVector &y) {
    ComplexVector dy(layout.size());
    const ComplexVector u = layout.u(y);
    const LaurentSeries c = unpack_c(y);
    const LaurentSeries p = model.p_at(as_span(u), x);
    const LaurentSeries phi = phi_recurrence(c, p);
    layout.u(dy) = model.vector_field_at(as_span(u), x);
    const LaurentSeries dc = irregular_coeff_rhs(c, p, phi);
    for (int i = 0; i <= last_c; ++i)
    {
      layout.block(dy, i) = dc[i];
    }
    layout.block(dy, psi_block) = driver_matrix(driver, p, phi) * layout.block(y, psi_block);
    return dy;
  };

  Trajectory traj;
  traj.kind = ExpansionKind::Irregular;
  traj.driver = driver;
  traj.dim = dim;
  traj.m = model.m();
  traj.n = model.n();
  traj.order = seed.order;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  traj.stats = integrate_rk4(
      rhs, model.x0(), y0, x_end, steps,
      [&](int, double x, const ComplexVector &y) {
        ComplexMatrix psi0 = layout.block(y, psi_block);
        check_psi0(psi0, x, options.det_tol);
        traj.samples.push_back(
            irregular_sample(model, seed.order, driver, x, layout.u(y), unpack_c(y), std::move(psi0)));
      },
      options.ode_tol);
  return traj;
}

Trajectory evolve_expansion_regular(const RegularSeed &seed, const PairModel &model, double x_end, int steps,
                                    const PropagationOptions &options)
{
  if (model.m() != 0)
  {
    throw Error(ErrorCode::ModelNotTheorem2, "log expansions are propagated only for m = 0, model has m = " +
                                                 std::to_string(model.m()));
  }
  if (model.n() != -1)
  {
    throw Error(ErrorCode::InvalidArgument, "regular propagation needs n = -1");
  }
  const int dim = model.dim();
  const int depth = static_cast<int>(seed.c.size());
  const int order = seed.order;
  const int per_level = order + 1;
  const StateLayout layout(model.state_dim(), dim, depth * per_level + 1);
  const int psi_block = depth * per_level;

  ComplexVector y0(layout.size());
  layout.u(y0) = to_vector(model.u0());
  for (int j = 0; j < depth; ++j)
  {
    for (int i = 0; i <= order; ++i)
    {
      layout.block(y0, j * per_level + i) = seed.c[static_cast<std::size_t>(j)][i];
    }
  }
  layout.block(y0, psi_block) = ComplexMatrix::Identity(dim, dim);

  auto unpack_c = [&](const ComplexVector &y) {
    std::vector<LaurentSeries> c(static_cast<std::size_t>(depth), LaurentSeries(dim, 0, order));
    for (int j = 0; j < depth; ++j)
    {
      for (int i = 0; i <= order; ++i)
      {
        c[static_cast<std::size_t>(j)][i] = layout.block(y, j * per_level + i);
      }
    }
    return c;
  };

  auto rhs = [&](double x, const ComplexVector &y) {
    ComplexVector dy(layout.size());
    const ComplexVector u = layout.u(y);
    const LaurentSeries p = model.p_at(as_span(u), x);
    layout.u(dy) = model.vector_field_at(as_span(u), x);
    const auto dc = regular_coeff_rhs(unpack_c(y), p);
    for (int j = 0; j < depth; ++j)
    {
      for (int i = 0; i <= order; ++i)
      {
        layout.block(dy, j * per_level + i) = dc[static_cast<std::size_t>(j)][i];
      }
    }
    layout.block(dy, psi_block) = p.coeff(0) * layout.block(y, psi_block);
    return dy;
  };

  Trajectory traj;
  traj.kind = ExpansionKind::Regular;
  traj.driver = Psi0Driver::P0;
  traj.dim = dim;
  traj.m = 0;
  traj.n = -1;
  traj.order = order;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  traj.stats = integrate_rk4(
      rhs, model.x0(), y0, x_end, steps,
      [&](int, double x, const ComplexVector &y) {
        ComplexMatrix psi0 = layout.block(y, psi_block);
        check_psi0(psi0, x, options.det_tol);
        traj.samples.push_back(regular_sample(model, order, x, layout.u(y), unpack_c(y), std::move(psi0)));
      },
      options.ode_tol);
  return traj;
}

std::vector<ComplexMatrix> evolve_psi0(const PairModel &model, double x_end, int steps, const IrregularSeed *seed,
                                       const PropagationOptions &options)
{
  std::vector<ComplexMatrix> out;
  if (psi0_driver_for(model) == Psi0Driver::Phi0)
  {
    if (seed == nullptr)
    {
      throw Error(ErrorCode::InvalidArgument, "m < 0: Psi_0 is driven by Phi^(0), which needs a seed");
    }
    const Trajectory t = evolve_expansion(*seed, model, x_end, steps, options);
    for (const auto &s : t.samples)
    {
      out.push_back(s.psi0);
    }
    return out;
  }
  const int dim = model.dim();
  const StateLayout layout(model.state_dim(), dim, 1);
  ComplexVector y0(layout.size());
  layout.u(y0) = to_vector(model.u0());
  layout.block(y0, 0) = ComplexMatrix::Identity(dim, dim);
  auto rhs = [&](double x, const ComplexVector &y) {
    ComplexVector dy(layout.size());
    const ComplexVector u = layout.u(y);
    layout.u(dy) = model.vector_field_at(as_span(u), x);
    layout.block(dy, 0) = model.p_at(as_span(u), x).coeff(0) * layout.block(y, 0);
    return dy;
  };
  integrate_rk4(
      rhs, model.x0(), y0, x_end, steps,
      [&](int, double x, const ComplexVector &y) {
        ComplexMatrix psi0 = layout.block(y, 0);
        check_psi0(psi0, x, options.det_tol);
        out.push_back(std::move(psi0));
      },
      options.ode_tol);
  return out;
}

//
// Monitors
//

HResidual residual_H(Trajectory &trajectory)
{
  auto &samples = trajectory.samples;
  const int count = static_cast<int>(samples.size());
  if (count < 5)
  {
    throw Error(ErrorCode::GridTooCoarse, "H residual needs at least 5 samples, have " + std::to_string(count));
  }
  const double h = samples[1].x - samples[0].x;
  for (int k = 1; k < count; ++k)
  {
    const double hk = samples[static_cast<std::size_t>(k)].x - samples[static_cast<std::size_t>(k - 1)].x;
    if (!(h > 0.0) || std::abs(hk - h) > 1e-9 * std::max(1.0, std::abs(h)))
    {
      throw Error(ErrorCode::GridTooCoarse, "H residual needs an equally spaced grid");
    }
  }
  const int n = samples.front().omega.min_order();
  const int m = samples.front().phi.min_order();
  const int dim = trajectory.dim;
  HResidual out;
  for (int k = 2; k < count - 2; ++k)
  {
    const auto &s = samples[static_cast<std::size_t>(k)];
    const auto &om = [&](int off) -> const LaurentSeries & {
      return samples[static_cast<std::size_t>(k + off)].omega;
    };
    std::vector<OrderNorm> norms;
    for (int i = m + n; i <= -1; ++i)
    {
      ComplexMatrix hm = ComplexMatrix::Zero(dim, dim);
      if (i >= n)
      {
        const ComplexMatrix d1 = (om(1)[i] - om(-1)[i]) / (2.0 * h);
        const ComplexMatrix d2 = (om(2)[i] - om(-2)[i]) / (4.0 * h);
        hm = (4.0 * d1 - d2) / 3.0;
      }
      hm -= static_cast<double>(i + 1) * s.phi.coeff(i + 1);
      for (int j = n; j <= -1; ++j)
      {
        const int l = i - j;
        if (s.phi.has(l))
        {
          hm.noalias() += s.omega[j] * s.phi[l];
          hm.noalias() -= s.phi[l] * s.omega[j];
        }
      }
      norms.push_back({i, max_abs(hm)});
    }
    out.max = std::max(out.max, max_norm(norms));
    samples[static_cast<std::size_t>(k)].h_norms = std::move(norms);
    out.sample_index.push_back(k);
  }
  return out;
}

namespace
{

// Greedy nearest matching of eigenvalues against a reference set.
double eigenvalue_distance(const ComplexVector &ref, ComplexVector ev)
{
  double worst = 0.0;
  std::vector<bool> used(static_cast<std::size_t>(ev.size()), false);
  for (Eigen::Index a = 0; a < ref.size(); ++a)
  {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index pick = 0;
    for (Eigen::Index b = 0; b < ev.size(); ++b)
    {
      if (!used[static_cast<std::size_t>(b)] && std::abs(ev(b) - ref(a)) < best)
      {
        best = std::abs(ev(b) - ref(a));
        pick = b;
      }
    }
    used[static_cast<std::size_t>(pick)] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

ComplexVector eigenvalues_of(const ComplexMatrix &m)
{
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
  return es.eigenvalues();
}

}  // namespace

ConservationReport conservation_laws(const Trajectory &trajectory, const PropagationOptions &options)
{
  ConservationReport rep;
  if (trajectory.samples.empty())
  {
    return rep;
  }
  if (trajectory.kind == ExpansionKind::Regular || trajectory.m < 0)
  {
    rep.orders = {-1};
  }
  else
  {
    for (int i = trajectory.n; i <= -1; ++i)
    {
      rep.orders.push_back(i);
    }
  }
  const std::size_t no = rep.orders.size();
  rep.drift.assign(no, 0.0);
  rep.eigenvalue_drift.assign(no, 0.0);
  std::vector<ComplexVector> ev0(no);
  std::vector<double> scale0(no), ev_scale0(no);
  for (const auto &s : trajectory.samples)
  {
    check_psi0(s.psi0, s.x, options.det_tol);
    const Eigen::PartialPivLU<ComplexMatrix> lu(s.psi0);
    std::vector<ComplexMatrix> js;
    js.reserve(no);
    for (std::size_t k = 0; k < no; ++k)
    {
      js.push_back(lu.solve(s.omega[rep.orders[k]] * s.psi0));
    }
    if (rep.j.empty())
    {
      for (std::size_t k = 0; k < no; ++k)
      {
        ev0[k] = eigenvalues_of(js[k]);
        scale0[k] = 1.0 + max_abs(js[k]);
        ev_scale0[k] = 1.0 + ev0[k].cwiseAbs().maxCoeff();
      }
    }
    else
    {
      const auto &first = rep.j.front();
      for (std::size_t k = 0; k < no; ++k)
      {
        rep.drift[k] = std::max(rep.drift[k], max_abs(js[k] - first[k]) / scale0[k]);
        rep.eigenvalue_drift[k] =
            std::max(rep.eigenvalue_drift[k], eigenvalue_distance(ev0[k], eigenvalues_of(js[k])) / ev_scale0[k]);
      }
    }
    rep.j.push_back(std::move(js));
  }
  for (std::size_t k = 0; k < no; ++k)
  {
    rep.max_drift = std::max(rep.max_drift, rep.drift[k]);
    rep.max_eigenvalue_drift = std::max(rep.max_eigenvalue_drift, rep.eigenvalue_drift[k]);
  }
  return rep;
}

double abel_deviation(const Trajectory &trajectory)
{
  const auto &s = trajectory.samples;
  if (s.size() < 3)
  {
    throw Error(ErrorCode::GridTooCoarse, "Abel check needs at least 3 samples");
  }
  const double h = s[1].x - s[0].x;
  auto f = [&](std::size_t k) { return s[k].driver_trace; };
  // Cumulative integral: Simpson pairs from the start; an odd remainder uses
  // the 3/8 rule over the last three intervals (or the one-interval quadratic
  // rule at k = 1).
  auto integral_to = [&](std::size_t k) -> Complex {
    if (k == 0)
    {
      return 0.0;
    }
    if (k == 1)
    {
      return h * (5.0 * f(0) + 8.0 * f(1) - f(2)) / 12.0;
    }
    std::size_t even_end = (k % 2 == 0) ? k : k - 3;
    Complex acc = 0.0;
    for (std::size_t a = 0; a + 2 <= even_end; a += 2)
    {
      acc += h * (f(a) + 4.0 * f(a + 1) + f(a + 2)) / 3.0;
    }
    if (k % 2 == 1)
    {
      acc += 3.0 * h * (f(k - 3) + 3.0 * f(k - 2) + 3.0 * f(k - 1) + f(k)) / 8.0;
    }
    return acc;
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k)
  {
    const Complex expected = std::exp(integral_to(k));
    const Complex det = s[k].psi0.determinant();
    worst = std::max(worst, std::abs(det - expected) / std::abs(expected));
  }
  return worst;
}

double max_f_norm(const Trajectory &trajectory)
{
  double r = 0.0;
  for (const auto &s : trajectory.samples)
  {
    r = std::max(r, max_norm(s.f_norms));
  }
  return r;
}

double max_compat_norm(const Trajectory &trajectory)
{
  double r = 0.0;
  for (const auto &s : trajectory.samples)
  {
    r = std::max(r, max_norm(s.compat_norms));
  }
  return r;
}

double max_c0_deviation(const Trajectory &trajectory)
{
  double r = 0.0;
  for (const auto &s : trajectory.samples)
  {
    r = std::max(r, s.c0_deviation);
  }
  return r;
}

//
// Lambda and recomposition
//

ComplexMatrix eval_lambda_regular(const ComplexMatrix &psi0, const ComplexMatrix &j, Complex lambda)
{
  if (lambda == 0.0)
  {
    throw Error(ErrorCode::EvalAtPole, "Lambda is singular at lambda = 0");
  }
  const ComplexMatrix a = j * std::log(lambda);
  return psi0 * a.exp();
}

namespace
{

Recomposition recompose_regular(const PairModel &model, double x, const ComplexVector &u,
                                const std::vector<LaurentSeries> &c, const ComplexMatrix &psi0, Complex lambda)
{
  if (lambda == 0.0)
  {
    throw Error(ErrorCode::EvalAtPole, "recomposition at lambda = 0");
  }
  const int dim = model.dim();
  const LaurentSeries p = model.p_at(as_span(u), x);
  const LaurentSeries q = model.q_at(as_span(u), x);
  const ComplexMatrix res = q[-1];
  const Eigen::PartialPivLU<ComplexMatrix> lu(psi0);
  const ComplexMatrix j = lu.solve(res * psi0);
  const ComplexMatrix lam = eval_lambda_regular(psi0, j, lambda);
  const ComplexMatrix lam_lambda = res * lam / lambda;
  const ComplexMatrix lam_x = p.coeff(0) * lam;

  const Complex log_l = std::log(lambda);
  const auto dc = regular_coeff_rhs(c, p);
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix s_lambda = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix s_x = ComplexMatrix::Zero(dim, dim);
  for (std::size_t jl = 0; jl < c.size(); ++jl)
  {
    const int jj = static_cast<int>(jl);
    for (int i = 0; i <= c[jl].trunc_order(); ++i)
    {
      const Complex li = (i == 0) ? Complex(1.0) : std::pow(lambda, i);
      const Complex lj = (jj == 0) ? Complex(1.0) : std::pow(log_l, jj);
      s += (li * lj) * c[jl][i];
      s_x += (li * lj) * dc[jl][i];
      Complex dcoef = 0.0;
      if (i > 0)
      {
        dcoef += static_cast<double>(i) * li / lambda * lj;
      }
      if (jj > 0)
      {
        dcoef += static_cast<double>(jj) * li / lambda * ((jj == 1) ? Complex(1.0) : std::pow(log_l, jj - 1));
      }
      s_lambda += dcoef * c[jl][i];
    }
  }

  Recomposition r;
  r.psi = s * lam;
  const ComplexMatrix q_val = series_eval(q, lambda);
  const ComplexMatrix p_val = series_eval(p, lambda);
  const ComplexMatrix e_lambda = s_lambda * lam + s * lam_lambda - q_val * r.psi;
  const ComplexMatrix e_x = s_x * lam + s * lam_x - p_val * r.psi;
  r.lambda_residual = max_abs(e_lambda);
  r.x_residual = max_abs(e_x);
  const ComplexMatrix lam_inv = lam.inverse();
  r.lambda_residual_reduced = max_abs(e_lambda * lam_inv);
  r.x_residual_reduced = max_abs(e_x * lam_inv);
  return r;
}

}  // namespace

Recomposition recompose_solution(const PairModel &model, const Trajectory &trajectory, std::size_t sample,
                                 Complex lambda)
{
  if (trajectory.kind != ExpansionKind::Regular)
  {
    throw Error(ErrorCode::UnsupportedLambdaEvaluation, "Lambda has no closed form at an irregular point");
  }
  if (sample >= trajectory.samples.size())
  {
    throw Error(ErrorCode::InvalidArgument, "sample index out of range");
  }
  const auto &s = trajectory.samples[sample];
  return recompose_regular(model, s.x, s.u, s.c_log, s.psi0, lambda);
}

Recomposition recompose_solution(const PairModel &model, const RegularSeed &seed, Complex lambda)
{
  return recompose_regular(model, model.x0(), to_vector(model.u0()), seed.c,
                           ComplexMatrix::Identity(model.dim(), model.dim()), lambda);
}

Recomposition recompose_solution(const PairModel &, const IrregularSeed &, Complex)
{
  throw Error(ErrorCode::UnsupportedLambdaEvaluation, "Lambda has no closed form at an irregular point");
}

}  // namespace pqs
