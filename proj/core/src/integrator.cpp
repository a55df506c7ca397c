// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include "pqs/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pqs/error.hpp"

namespace pqs
{

namespace
{

ComplexVector rk4_step(const OdeRhs &rhs, double x, const ComplexVector &y, double h)
{
  const ComplexVector k1 = rhs(x, y);
  const ComplexVector k2 = rhs(x + 0.5 * h, y + (0.5 * h) * k1);
  const ComplexVector k3 = rhs(x + 0.5 * h, y + (0.5 * h) * k2);
  const ComplexVector k4 = rhs(x + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

IntegrationStats integrate_rk4(const OdeRhs &rhs, double x0, ComplexVector y0, double x_end, int steps,
                               const StepObserver &observer, double ode_tol)
{
  if (steps < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "steps must be positive");
  }
  if (!(x_end > x0))
  {
    throw Error(ErrorCode::InvalidArgument, "x_end must exceed the start point");
  }
  IntegrationStats stats;
  const double h = (x_end - x0) / steps;
  ComplexVector y = std::move(y0);
  if (observer)
  {
    observer(0, x0, y);
  }
  for (int k = 0; k < steps; ++k)
  {
    const double x = x0 + k * h;
    const ComplexVector full = rk4_step(rhs, x, y, h);
    const ComplexVector half = rk4_step(rhs, x + 0.5 * h, rk4_step(rhs, x, y, 0.5 * h), 0.5 * h);
    const double err = y.size() == 0 ? 0.0 : (half - full).cwiseAbs().maxCoeff() / 15.0;
    if (!std::isfinite(err) || !half.allFinite())
    {
      throw Error(ErrorCode::StepFailure, "non-finite state at x = " + std::to_string(x));
    }
    if (err > ode_tol)
    {
      throw Error(ErrorCode::StepFailure, "step error estimate " + std::to_string(err) +
                                              " exceeds ode_tol at x = " + std::to_string(x));
    }
    stats.max_step_error = std::max(stats.max_step_error, err);
    stats.global_error_estimate += err;
    y = half;
    ++stats.steps;
    if (observer)
    {
      observer(k + 1, k + 1 == steps ? x_end : x0 + (k + 1) * h, y);
    }
  }
  return stats;
}

}  // namespace pqs
