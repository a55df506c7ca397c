// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_SEED_HPP
#define PQS_SEED_HPP

#include <string>
#include <vector>

#include "pqs/pair_model.hpp"
#include "pqs/series.hpp"

namespace pqs
{

struct SeedOptions
{
  double seed_tol = 1e-11;
  // Leading eigenvalues closer than gap_rel * max(max |eigenvalue|, 1) are
  // treated as degenerate.
  double gap_rel = 1e-8;
  int max_newton = 50;
  int max_sweeps = 64;
};

//
// Frozen-x solution of the irregular-point coefficient equations
//
//   (i+1) C^(i+1) + sum_{j=n}^{-1} C^(i-j) Omega^(j) - sum_{j>=n} Q^(j) C^(i-j) = 0,
//
// for i >= n, with C^(0) = E and Omega^(j) = 0 outside n..-1. Omega is
// diagonal in the eigenbasis of the leading matrix Q^(n).
//
struct IrregularSeed
{
  double x0 = 0.0;
  int order = 0;  // M: residuals are controlled for orders n..M-1
  int n = -1;
  // C^(0)..C^(L) with L = M - n - 1, so that every coefficient entering
  // F^(M-1) is present. C^(0) = E.
  LaurentSeries c;
  // Omega^(n)..Omega^(-1) in the original basis.
  LaurentSeries omega;
  std::vector<OrderNorm> residual_report;  // max_abs F^(i), i = n..M-1
  ComplexMatrix eigenbasis;                // columns: eigenvectors of Q^(n)
  ComplexVector leading_eigenvalues;
  double omega_offdiag = 0.0;  // largest off-diagonal entry of Omega in the eigenbasis
  int sweeps = 0;
  int newton_steps = 0;
  std::string normalization;
};

//
// Frozen-x solution with logarithms at a regular point (n = -1):
//
//   Psi = sum_i sum_{j<N} lambda^i (ln lambda)^j C^(i,j) Lambda,
//   (i+1) C^(i+1,j) + [C^(i+1,j), Q^(-1)] + (j+1) C^(i+1,j+1)
//       - sum_{k>=0} Q^(k) C^(i-k,j) = 0.
//
struct RegularSeed
{
  double x0 = 0.0;
  int order = 0;              // M
  std::vector<LaurentSeries> c;  // c[j]: C^(0,j)..C^(M,j); C^(0,0) = E
  std::vector<OrderNorm> residual_report;  // i = -1..M-1, max over j
  std::vector<int> resonant_orders;        // orders i+1 where the operator was singular
  std::string normalization;
};

// Omega^(i) = Q^(i) + sum_{j=n}^{i-1} (Q^(j) C^(i-j) - C^(i-j) Omega^(j)),
// i = n..-1, with n = q.min_order(). Needs C^(1)..C^(-1-n).
LaurentSeries omega_recurrence(const LaurentSeries &c, const LaurentSeries &q);

// Phi^(i) = P^(i) + sum_{j=m}^{i-1} (P^(j) C^(i-j) - C^(i-j) Phi^(j)),
// i = m..0, with m = p.min_order(). Needs C^(1)..C^(-m).
LaurentSeries phi_recurrence(const LaurentSeries &c, const LaurentSeries &p);

// F^(i) = (i+1) C^(i+1) + sum_{j=n}^{-1} C^(i-j) Omega^(j) - sum_{j=n}^{i} Q^(j) C^(i-j)
// for i = n..last. C beyond c.trunc_order() counts as zero; C^(last+1) must
// be present.
LaurentSeries residual_F(const LaurentSeries &c, const LaurentSeries &omega, const LaurentSeries &q,
                         int last);

// residual_F with last = c.trunc_order() - 1.
LaurentSeries residual_F(const LaurentSeries &c, const LaurentSeries &omega, const LaurentSeries &q);

std::vector<OrderNorm> order_norms(const LaurentSeries &s);

IrregularSeed solve_irregular_seed(const LaurentSeries &q, int order, double x0 = 0.0,
                                   const SeedOptions &options = {});

// Residuals of the log-expansion equations for i = -1..last (max over j).
std::vector<OrderNorm> regular_residual(const std::vector<LaurentSeries> &c, const LaurentSeries &q,
                                        int last);

RegularSeed solve_regular_seed(const LaurentSeries &q, int order, double x0 = 0.0,
                               const SeedOptions &options = {});

// Convenience wrappers evaluating Q from the model at (u0, x0).
IrregularSeed solve_irregular_seed(const PairModel &model, int order, const SeedOptions &options = {});
RegularSeed solve_regular_seed(const PairModel &model, int order, const SeedOptions &options = {});

}  // namespace pqs

#endif  // PQS_SEED_HPP
