// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_INTEGRATOR_HPP
#define PQS_INTEGRATOR_HPP

#include <functional>

#include "pqs/series.hpp"

namespace pqs
{

using OdeRhs = std::function<ComplexVector(double x, const ComplexVector &y)>;
using StepObserver = std::function<void(int step, double x, const ComplexVector &y)>;

struct IntegrationStats
{
  int steps = 0;
  double max_step_error = 0.0;         // largest per-step estimate
  double global_error_estimate = 0.0;  // sum of per-step estimates
};

// Classical fixed-step RK4 on [x0, x_end]. Each step is taken once with h and
// once as two steps of h/2; the difference / 15 estimates the local error and
// the h/2 result is kept. Throws StepFailure when an estimate exceeds ode_tol
// or the state stops being finite. The observer sees step 0 (the initial
// state) and every completed step.
IntegrationStats integrate_rk4(const OdeRhs &rhs, double x0, ComplexVector y0, double x_end, int steps,
                               const StepObserver &observer, double ode_tol = 1e-6);

}  // namespace pqs

#endif  // PQS_INTEGRATOR_HPP
