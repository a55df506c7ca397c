// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_PROPAGATION_HPP
#define PQS_PROPAGATION_HPP

#include <vector>

#include "pqs/integrator.hpp"
#include "pqs/pair_model.hpp"
#include "pqs/seed.hpp"
#include "pqs/series.hpp"

namespace pqs
{

struct PropagationOptions
{
  double ode_tol = 1e-6;
  double det_tol = 1e-12;
};

//
// State flow du/dx = G(u, x)
//

struct StateRun
{
  std::vector<double> grid;
  std::vector<ComplexVector> u;
  IntegrationStats stats;
};

StateRun evolve_state(const PairModel &model, double x_end, int steps, const PropagationOptions &options = {});

//
// Trajectories of seed expansions
//

enum class ExpansionKind
{
  Irregular,
  Regular,
};

// Coefficient driving Psi_0' = (driver) Psi_0: P^(0) when m = 0, Phi^(0)
// when m < 0.
enum class Psi0Driver
{
  P0,
  Phi0,
};

Psi0Driver psi0_driver_for(const PairModel &model);

struct TrajectorySample
{
  double x = 0.0;
  ComplexVector u;
  LaurentSeries c;                   // irregular: C^(0)..C^(L)
  std::vector<LaurentSeries> c_log;  // regular: c_log[j] = C^(0,j)..C^(M,j)
  // Irregular: Omega^(n..-1) and Phi^(m..0). Regular: Q^(-1) and P^(0),
  // which play the same roles in the Lambda equations.
  LaurentSeries omega;
  LaurentSeries phi;
  ComplexMatrix psi0;
  Complex driver_trace;  // trace of the Psi_0 driver
  double c0_deviation = 0.0;
  std::vector<OrderNorm> f_norms;       // seed-equation residuals
  std::vector<OrderNorm> h_norms;       // filled by residual_H on interior samples
  std::vector<OrderNorm> compat_norms;  // pair compatibility residuals
};

struct Trajectory
{
  ExpansionKind kind = ExpansionKind::Irregular;
  Psi0Driver driver = Psi0Driver::P0;
  int dim = 1;
  int m = 0;
  int n = -1;
  int order = 0;
  std::vector<TrajectorySample> samples;
  IntegrationStats stats;

  std::vector<double> grid() const;
};

// Co-integrates u, C^(0..L) (by the normal coefficient system) and Psi_0.
// Omega, Phi, F and compatibility residuals are recomputed at every sample;
// H is filled in by residual_H.
Trajectory evolve_expansion(const IrregularSeed &seed, const PairModel &model, double x_end, int steps,
                            const PropagationOptions &options = {});

// Log-expansion counterpart (requires m = 0).
Trajectory evolve_expansion_regular(const RegularSeed &seed, const PairModel &model, double x_end,
                                    int steps, const PropagationOptions &options = {});

// Psi_0 along [x0, x_end] with Psi_0(x0) = E driven by P^(0). For m < 0 the
// driver is Phi^(0), which depends on the expansion, so a seed is needed.
std::vector<ComplexMatrix> evolve_psi0(const PairModel &model, double x_end, int steps,
                                       const IrregularSeed *seed = nullptr,
                                       const PropagationOptions &options = {});

//
// Monitors
//

struct HResidual
{
  std::vector<int> sample_index;  // interior samples
  double max = 0.0;
};

// H^(i) = Omega_x^(i) - (i+1) Phi^(i+1) + sum_j [Omega^(j), Phi^(i-j)] for
// m+n <= i < 0, with Omega_x from centered differences on the sample grid
// plus one Richardson level. Needs at least five equally spaced samples.
HResidual residual_H(Trajectory &trajectory);

struct ConservationReport
{
  std::vector<int> orders;
  // j[s][k]: J at sample s for orders[k].
  std::vector<std::vector<ComplexMatrix>> j;
  std::vector<double> drift;             // per order
  std::vector<double> eigenvalue_drift;  // per order
  double max_drift = 0.0;
  double max_eigenvalue_drift = 0.0;
};

// J^(i) = Psi_0^{-1} Omega^(i) Psi_0. All orders n..-1 when m = 0, only
// order -1 when m < 0; for regular trajectories J = Psi_0^{-1} Q^(-1) Psi_0.
// drift = max_x |J(x) - J(x0)| / (1 + |J(x0)|).
ConservationReport conservation_laws(const Trajectory &trajectory, const PropagationOptions &options = {});

// max over samples of |det Psi_0 - exp(int tr driver)| / |exp(int tr driver)|,
// with the integral by composite Simpson on the sample grid.
double abel_deviation(const Trajectory &trajectory);

double max_f_norm(const Trajectory &trajectory);
double max_compat_norm(const Trajectory &trajectory);
double max_c0_deviation(const Trajectory &trajectory);

//
// Lambda and recomposition (regular case)
//

// Lambda = Psi_0 exp(J ln lambda), principal branch.
ComplexMatrix eval_lambda_regular(const ComplexMatrix &psi0, const ComplexMatrix &j, Complex lambda);

struct Recomposition
{
  ComplexMatrix psi;
  double lambda_residual = 0.0;  // max_abs(Psi_lambda - Q Psi)
  double x_residual = 0.0;       // max_abs(Psi_x - P Psi)
  // Same residuals with the Lambda factor removed (right-multiplied by Lambda^{-1}).
  double lambda_residual_reduced = 0.0;
  double x_residual_reduced = 0.0;
};

// Truncated Psi at a regular trajectory sample, with residuals of both pair
// equations. Throws UnsupportedLambdaEvaluation for irregular samples.
Recomposition recompose_solution(const PairModel &model, const Trajectory &trajectory, std::size_t sample,
                                 Complex lambda);

// Same, at x0 straight from a seed (Psi_0 = E).
Recomposition recompose_solution(const PairModel &model, const RegularSeed &seed, Complex lambda);

// Irregular seeds have no closed-form Lambda; always throws
// UnsupportedLambdaEvaluation.
Recomposition recompose_solution(const PairModel &model, const IrregularSeed &seed, Complex lambda);

}  // namespace pqs

#endif  // PQS_PROPAGATION_HPP
