// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "pqs/catalog.hpp"
#include "pqs/error.hpp"
#include "pqs/model_document.hpp"
#include "pqs/propagation.hpp"
#include "support.hpp"

namespace pqs
{
namespace
{

using testing::data_path;
using testing::random_matrix;

PairModel scalar_state_model(const char *field, const char *u0)
{
  return parse_model(std::string(R"({"dimension": 1, "m": 0, "n": -1, "state": ["u"], "x0": 0, "u0": [")") + u0 +
                     R"("], "vector_field": [")" + field + R"("], "Q": {"-1": [["1"]]}, "P": {"0": [["0"]]}})");
}

TEST(EvolveState, Examples)
{
  const StateRun still = evolve_state(scalar_state_model("0", "0.5+1i"), 1.0, 50);
  EXPECT_EQ(still.u.back()(0), Complex(0.5, 1.0));
  const StateRun growth = evolve_state(scalar_state_model("u", "1"), 1.0, 1000);
  EXPECT_NEAR(std::abs(growth.u.back()(0) - std::exp(1.0)), 0.0, 1e-10);
  const StateRun poly = evolve_state(scalar_state_model("x", "0"), 1.0, 10);
  EXPECT_NEAR(std::abs(poly.u.back()(0) - 0.5), 0.0, 1e-15);
  EXPECT_EQ(growth.grid.size(), 1001u);
}

TEST(EvolveExpansion, ZeroPKeepsCoefficientsConstant)
{
  const PairModel model = parse_model(R"({
    "dimension": 2, "m": 0, "n": -2, "state": [], "x0": 0, "u0": [], "vector_field": [],
    "Q": {"-2": [["1", "0.2"], ["0", "-1"]], "-1": [["0.3", "0"], ["0.1", "0.2"]], "0": [["0", "1"], ["1", "0"]]},
    "P": {"0": [["0", "0"], ["0", "0"]]}
  })");
  const IrregularSeed seed = solve_irregular_seed(model, 5);
  const Trajectory t = evolve_expansion(seed, model, 1.0, 20);
  for (int i = 0; i <= seed.c.trunc_order(); ++i)
  {
    EXPECT_EQ(max_abs(t.samples.back().c[i] - seed.c[i]), 0.0);
  }
  EXPECT_EQ(max_norm(t.samples.back().f_norms), max_norm(t.samples.front().f_norms));
  for (const auto &s : t.samples)
  {
    EXPECT_EQ(max_abs(s.psi0 - ComplexMatrix::Identity(2, 2)), 0.0);
  }
  const ConservationReport cons = conservation_laws(t);
  EXPECT_EQ(cons.max_drift, 0.0);
}

TEST(EvolveExpansion, ScalarEntryMatchesOracleAlongTheRun)
{
  const CatalogEntry &entry = catalog_get("scalar_exact");
  const IrregularSeed seed = solve_irregular_seed(entry.model, entry.order);
  const Trajectory t = evolve_expansion(seed, entry.model, entry.x_end, 200);
  // exp(lambda + lambda^2/4) coefficients by the recurrence (k+1) c_{k+1} = c_k + c_{k-1}/2.
  std::vector<double> oracle{1.0, 1.0};
  for (int k = 1; k < entry.order; ++k)
  {
    oracle.push_back((oracle[static_cast<std::size_t>(k)] + 0.5 * oracle[static_cast<std::size_t>(k - 1)]) /
                     (k + 1));
  }
  for (const auto &s : t.samples)
  {
    for (int i = 1; i <= entry.order; ++i)
    {
      ASSERT_LT(std::abs(s.c[i](0, 0) - oracle[static_cast<std::size_t>(i)]), 1e-12) << s.x << " " << i;
    }
  }
}

TEST(EvolveExpansion, IrregularEntryKeepsFAndHSmall)
{
  const CatalogEntry &entry = catalog_get("irregular_2x2");
  const IrregularSeed seed = solve_irregular_seed(entry.model, entry.order);
  Trajectory t = evolve_expansion(seed, entry.model, entry.model.x0() + 1.0, 1000);
  EXPECT_LT(max_f_norm(t), 1e-8);
  EXPECT_LT(residual_H(t).max, 1e-6);
  EXPECT_LT(max_c0_deviation(t), 1e-13);
  EXPECT_EQ(t.driver, Psi0Driver::P0);
}

TEST(EvolveExpansion, PoleInPUsesPhiDriverAndSingleLaw)
{
  const PairModel model = load_model_file(data_path("pole_in_p.json"));
  // With m < 0 the dropped top-order terms leak downward through P^(-1), so
  // the fixture sits where the leading gap 10x is large against M.
  const IrregularSeed seed = solve_irregular_seed(model, 16);
  Trajectory t = evolve_expansion(seed, model, model.x0() + 1.0, 1000);
  EXPECT_EQ(t.driver, Psi0Driver::Phi0);
  EXPECT_LT(max_compat_norm(t), 1e-12);
  EXPECT_LT(max_f_norm(t), 1e-8);
  EXPECT_LT(residual_H(t).max, 1e-6);
  const ConservationReport cons = conservation_laws(t);
  ASSERT_EQ(cons.orders, std::vector<int>{-1});
  EXPECT_LT(cons.max_drift, 1e-8);
  EXPECT_LT(cons.max_eigenvalue_drift, 1e-8);
  EXPECT_LT(abel_deviation(t), 1e-8);
}

TEST(EvolvePsi0, NeedsSeedWhenDrivenByPhi)
{
  const PairModel model = load_model_file(data_path("pole_in_p.json"));
  try
  {
    evolve_psi0(model, 5.0, 10);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
  const IrregularSeed seed = solve_irregular_seed(model, 4);
  EXPECT_EQ(evolve_psi0(model, 5.0, 100, &seed).size(), 101u);
}

TEST(EvolvePsi0, ZeroDriverAndScalarExponential)
{
  const auto zero = evolve_psi0(scalar_state_model("u", "1"), 1.0, 10);
  EXPECT_EQ(max_abs(zero.back() - ComplexMatrix::Identity(1, 1)), 0.0);
  const PairModel constant = parse_model(R"({"dimension": 1, "m": 0, "n": -1, "state": [], "x0": 0.5, "u0": [],
    "vector_field": [], "Q": {"-1": [["1"]]}, "P": {"0": [["0.8-0.3i"]]}})");
  const auto psi = evolve_psi0(constant, 1.5, 1000);
  EXPECT_NEAR(std::abs(psi.back()(0, 0) - std::exp(Complex(0.8, -0.3))), 0.0, 1e-10);
}

TEST(EvolveRegular, ConstantDiagonalDriverConjugatesCoefficients)
{
  const PairModel model = load_model_file(data_path("conjugated_regular.json"));
  const RegularSeed seed = solve_regular_seed(model, 5);
  const Trajectory t = evolve_expansion_regular(seed, model, 1.0, 500);
  const auto &last = t.samples.back();
  const ComplexMatrix d = ComplexVector{{std::exp(0.7), std::exp(-0.4)}}.asDiagonal();
  const ComplexMatrix dinv = d.inverse();
  for (std::size_t j = 0; j < seed.c.size(); ++j)
  {
    for (int i = 0; i <= 5; ++i)
    {
      EXPECT_LT(max_abs(last.c_log[j][i] - d * seed.c[j][i] * dinv), 1e-10) << i << "," << j;
    }
  }
  EXPECT_LT(max_abs(last.psi0 - d), 1e-10);
  EXPECT_LT(max_f_norm(t), 1e-10);
}

TEST(EvolveRegular, ResonantLogPersists)
{
  const CatalogEntry &entry = catalog_get("resonant_regular");
  const RegularSeed seed = solve_regular_seed(entry.model, entry.order);
  const Trajectory t = evolve_expansion_regular(seed, entry.model, entry.x_end, entry.steps);
  for (const auto &s : t.samples)
  {
    ASSERT_GT(max_abs(s.c_log[1][1]), 1e-6) << s.x;
  }
  EXPECT_LT(max_f_norm(t), 1e-8);
}

TEST(EvolveRegular, RejectsPoleInP)
{
  const PairModel model = load_model_file(data_path("pole_in_p.json"));
  try
  {
    evolve_expansion_regular(RegularSeed{}, model, 2.0, 10);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::ModelNotTheorem2);
  }
}

TEST(Conservation, RegularEntryLawIsConstant)
{
  const CatalogEntry &entry = catalog_get("regular_fuchsian");
  const RegularSeed seed = solve_regular_seed(entry.model, entry.order);
  const Trajectory t = evolve_expansion_regular(seed, entry.model, entry.x_end, entry.steps);
  const ConservationReport cons = conservation_laws(t);
  ASSERT_EQ(cons.orders, std::vector<int>{-1});
  EXPECT_LT(cons.max_drift, 1e-8);
  EXPECT_LT(cons.max_eigenvalue_drift, 1e-8);
  EXPECT_LT(max_abs(cons.j.front()[0] - entry.leading), 1e-15);
}

TEST(Conservation, IrregularEntryAllOrders)
{
  const CatalogEntry &entry = catalog_get("irregular_2x2");
  const IrregularSeed seed = solve_irregular_seed(entry.model, entry.order);
  const Trajectory t = evolve_expansion(seed, entry.model, entry.x_end, entry.steps);
  const ConservationReport cons = conservation_laws(t);
  EXPECT_EQ(cons.orders, (std::vector<int>{-2, -1}));
  EXPECT_LT(cons.max_drift, 1e-8);
  EXPECT_LT(cons.max_eigenvalue_drift, 1e-8);
  EXPECT_LT(abel_deviation(t), 1e-8);
}

TEST(ResidualH, ScalarEntryIsExactlyZero)
{
  const CatalogEntry &entry = catalog_get("scalar_exact");
  const IrregularSeed seed = solve_irregular_seed(entry.model, 6);
  Trajectory t = evolve_expansion(seed, entry.model, 1.0, 50);
  const HResidual h = residual_H(t);
  EXPECT_EQ(h.max, 0.0);
  EXPECT_EQ(h.sample_index.size(), 47u);
  EXPECT_TRUE(t.samples.front().h_norms.empty());
  EXPECT_EQ(t.samples[2].h_norms.front().order, -2);
}

TEST(ResidualH, CoarseGridThrows)
{
  const CatalogEntry &entry = catalog_get("scalar_exact");
  const IrregularSeed seed = solve_irregular_seed(entry.model, 4);
  PropagationOptions loose;
  loose.ode_tol = 1.0;
  Trajectory t = evolve_expansion(seed, entry.model, 1.0, 3, loose);
  try
  {
    residual_H(t);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::GridTooCoarse);
  }
}

TEST(EvalLambdaRegular, Examples)
{
  std::mt19937_64 rng(42);
  const ComplexMatrix psi0 = random_matrix(rng, 2);
  EXPECT_LT(max_abs(eval_lambda_regular(psi0, ComplexMatrix::Zero(2, 2), Complex(0.2, 0.1)) - psi0), 1e-15);
  const Complex mu(0.37, -0.2);
  const Complex lam(0.3, 0.15);
  EXPECT_LT(std::abs(eval_lambda_regular(ComplexMatrix::Identity(1, 1), ComplexMatrix::Constant(1, 1, mu), lam)(0, 0) -
                     std::pow(lam, mu)),
            1e-15);
}

TEST(EvalLambdaRegular, MatchesEigendecompositionOracle)
{
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial)
  {
    const ComplexMatrix j = random_matrix(rng, 3, 1.0);
    const Complex lam = std::polar(0.05 + 0.4 * trial / 20.0, 0.3 * trial);
    const ComplexMatrix got = eval_lambda_regular(ComplexMatrix::Identity(3, 3), j, lam);
    Eigen::ComplexEigenSolver<ComplexMatrix> es(j);
    const ComplexMatrix v = es.eigenvectors();
    ComplexVector d(3);
    for (int k = 0; k < 3; ++k)
    {
      d(k) = std::exp(es.eigenvalues()(k) * std::log(lam));
    }
    const ComplexMatrix oracle = v * d.asDiagonal() * v.inverse();
    EXPECT_LT(max_abs(got - oracle) / max_abs(oracle), 1e-12);
  }
}

TEST(EvalLambdaRegular, DerivativeSatisfiesLambdaEquation)
{
  std::mt19937_64 rng(44);
  const ComplexMatrix psi0 = random_matrix(rng, 2) + 2.0 * ComplexMatrix::Identity(2, 2);
  const ComplexMatrix j = random_matrix(rng, 2, 0.5);
  const ComplexMatrix q = psi0 * j * psi0.inverse();
  const Complex lam(0.2, 0.1);
  const double h = 1e-5;
  const ComplexMatrix fd =
      (eval_lambda_regular(psi0, j, lam + h) - eval_lambda_regular(psi0, j, lam - h)) / (2 * h);
  EXPECT_LT(max_abs(fd - q * eval_lambda_regular(psi0, j, lam) / lam), 1e-6);
}

TEST(Recompose, ZeroPairIsIdentity)
{
  const PairModel model = parse_model(R"({"dimension": 2, "m": 0, "n": -1, "state": [], "x0": 0, "u0": [],
    "vector_field": [], "Q": {"-1": [["0", "0"], ["0", "0"]]}, "P": {"0": [["0", "0"], ["0", "0"]]}})");
  const RegularSeed seed = solve_regular_seed(model, 3);
  const Recomposition r = recompose_solution(model, seed, Complex(0.1, 0.05));
  EXPECT_EQ(max_abs(r.psi - ComplexMatrix::Identity(2, 2)), 0.0);
  EXPECT_EQ(r.lambda_residual, 0.0);
  EXPECT_EQ(r.x_residual, 0.0);
}

TEST(Recompose, IrregularIsUnsupported)
{
  const CatalogEntry &entry = catalog_get("irregular_2x2");
  const IrregularSeed seed = solve_irregular_seed(entry.model, 4);
  EXPECT_THROW(recompose_solution(entry.model, seed, 0.1), Error);
  const Trajectory t = evolve_expansion(seed, entry.model, 1.1, 10);
  try
  {
    recompose_solution(entry.model, t, 0, 0.1);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedLambdaEvaluation);
  }
}

double decay_slope(const PairModel &model, int order, bool reduced)
{
  const RegularSeed seed = solve_regular_seed(model, order);
  const Complex dir = std::polar(1.0, 0.4);
  const Recomposition a = recompose_solution(model, seed, 0.1 * dir);
  const Recomposition b = recompose_solution(model, seed, 0.05 * dir);
  return reduced ? std::log2(a.lambda_residual_reduced / b.lambda_residual_reduced)
                 : std::log2(a.lambda_residual / b.lambda_residual);
}

TEST(Recompose, ScalarRegularDecay)
{
  const PairModel model = parse_model(R"({"dimension": 1, "m": 0, "n": -1, "state": [], "x0": 0, "u0": [],
    "vector_field": [], "Q": {"-1": [["0.3"]], "0": [["1"]], "1": [["-0.5"]]}, "P": {"0": [["0"]]}})");
  for (int order : {3, 4, 5})
  {
    EXPECT_GE(decay_slope(model, order, true), order - 0.5) << order;
  }
}

TEST(Recompose, ResonantEntryDecaysWithLogs)
{
  const PairModel &model = catalog_get("resonant_regular").model;
  for (int order : {3, 4, 5})
  {
    EXPECT_GE(decay_slope(model, order, true), order - 0.5) << order;
  }
}

TEST(Recompose, TrajectorySampleSatisfiesBothEquations)
{
  const CatalogEntry &entry = catalog_get("regular_fuchsian");
  const RegularSeed seed = solve_regular_seed(entry.model, 6);
  const Trajectory t = evolve_expansion_regular(seed, entry.model, entry.x_end, 400);
  const Complex dir = std::polar(1.0, -0.6);
  const Recomposition a = recompose_solution(entry.model, t, 200, 0.1 * dir);
  const Recomposition b = recompose_solution(entry.model, t, 200, 0.05 * dir);
  EXPECT_GE(std::log2(a.lambda_residual / b.lambda_residual), 6 - 0.5);
  EXPECT_GE(std::log2(a.x_residual / b.x_residual), 6 - 0.5);
}

}  // namespace
}  // namespace pqs
