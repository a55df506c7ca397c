// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "pqs/catalog.hpp"
#include "pqs/error.hpp"
#include "pqs/pair_model.hpp"
#include "pqs/propagation.hpp"

namespace pqs
{
namespace
{

ExpressionMatrix mat(std::initializer_list<const char *> entries)
{
  ExpressionMatrix m;
  for (const char *e : entries)
  {
    m.push_back(parse_expression(e));
  }
  return m;
}

PairDefinition scalar_definition()
{
  PairDefinition d;
  d.dim = 1;
  d.m = 0;
  d.n = -1;
  d.state_names = {"u"};
  d.vector_field = {parse_expression("0")};
  d.u0 = {3.0};
  d.q[-1] = mat({"u"});
  d.p[0] = mat({"u"});
  return d;
}

ErrorCode construct_error(PairDefinition d)
{
  try
  {
    PairModel model(std::move(d));
  }
  catch (const Error &e)
  {
    return e.code();
  }
  ADD_FAILURE() << "model accepted";
  return ErrorCode::InvalidArgument;
}

TEST(PairModel, ZeroModelGivesZeroSeries)
{
  PairDefinition d;
  d.dim = 2;
  d.m = 0;
  d.n = -1;
  d.q[-1] = mat({"0", "0", "0", "0"});
  d.p[0] = mat({"0", "0", "0", "0"});
  const PairModel model(d);
  const auto coeffs = pair_coeffs_at(model, {}, 0.3);
  EXPECT_EQ(coeffs.p.norm(), 0.0);
  EXPECT_EQ(coeffs.q.norm(), 0.0);
  EXPECT_EQ(max_norm(compatibility_residual(model, {}, 0.3)), 0.0);
}

TEST(PairModel, ScalarCoefficients)
{
  const PairModel model(scalar_definition());
  const std::vector<Complex> u{3.0};
  const auto coeffs = pair_coeffs_at(model, u, 0.0);
  EXPECT_EQ(coeffs.q.min_order(), -1);
  EXPECT_EQ(coeffs.p.min_order(), 0);
  EXPECT_EQ(coeffs.q[-1](0, 0), Complex(3.0));
}

TEST(PairModel, ScalarConstantResidueIsCompatible)
{
  PairDefinition d = scalar_definition();
  d.q[-1] = mat({"2.5"});
  const PairModel model(d);
  const std::vector<Complex> u{1.7};
  for (const auto &n : compatibility_residual(model, u, 0.4))
  {
    EXPECT_EQ(n.norm, 0.0) << "order " << n.order;
  }
}

TEST(PairModel, CompatibilityOrdersSpanTheProductRange)
{
  const PairModel model(scalar_definition());
  const std::vector<Complex> u{1.0};
  const auto norms = compatibility_residual(model, u, 0.0);
  ASSERT_FALSE(norms.empty());
  EXPECT_EQ(norms.front().order, -1);
}

TEST(PairModel, DetectsIncompatiblePair)
{
  // Q_x = Q^(-1)' = 1 is not balanced by anything.
  PairDefinition d = scalar_definition();
  d.vector_field = {parse_expression("1")};
  const PairModel model(d);
  const std::vector<Complex> u{1.0};
  EXPECT_NEAR(max_norm(compatibility_residual(model, u, 0.0)), 1.0, 1e-15);
}

TEST(PairModel, QxUsesTheChainRule)
{
  PairDefinition d = scalar_definition();
  d.vector_field = {parse_expression("u*x")};
  d.q[-1] = mat({"u^2 + x"});
  const PairModel model(d);
  const std::vector<Complex> u{2.0};
  // d/dx (u^2 + x) = 2 u u' + 1 = 2*2*(2*0.5) + 1.
  EXPECT_NEAR(std::abs(model.q_x_at(u, 0.5)[-1](0, 0) - 5.0), 0.0, 1e-14);
}

TEST(PairModel, ValidationErrors)
{
  PairDefinition d = scalar_definition();
  d.m = 1;
  EXPECT_EQ(construct_error(d), ErrorCode::SchemaError);
  d = scalar_definition();
  d.n = 0;
  EXPECT_EQ(construct_error(d), ErrorCode::SchemaError);
  d = scalar_definition();
  d.u0.clear();
  EXPECT_EQ(construct_error(d), ErrorCode::SchemaError);
  d = scalar_definition();
  d.state_names = {"x"};
  EXPECT_EQ(construct_error(d), ErrorCode::SchemaError);
  d = scalar_definition();
  d.q[-2] = mat({"1"});
  EXPECT_EQ(construct_error(d), ErrorCode::SchemaError);
  d = scalar_definition();
  d.q[0] = mat({"1", "2"});
  EXPECT_EQ(construct_error(d), ErrorCode::SchemaError);
  d = scalar_definition();
  d.p[0] = mat({"w"});
  EXPECT_EQ(construct_error(d), ErrorCode::UnknownSymbol);
}

TEST(PairModel, EvaluationIsDeterministic)
{
  const PairModel &model = catalog_get("irregular_2x2").model;
  const auto a = pair_coeffs_at(model, model.u0(), 1.3);
  const auto b = pair_coeffs_at(model, model.u0(), 1.3);
  EXPECT_EQ(series_sub(a.q, b.q).norm(), 0.0);
  EXPECT_EQ(series_sub(a.p, b.p).norm(), 0.0);
}

TEST(PairModel, DivisionByZeroPropagates)
{
  const PairModel &model = catalog_get("irregular_2x2").model;
  try
  {
    pair_coeffs_at(model, model.u0(), 0.0);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
  }
}

TEST(PairModel, CatalogEntriesAreCompatibleAtRandomTrajectoryPoints)
{
  std::mt19937_64 rng(5150);
  for (const auto &name : catalog_names())
  {
    const CatalogEntry &entry = catalog_get(name);
    const StateRun run = evolve_state(entry.model, entry.x_end, entry.steps);
    std::uniform_int_distribution<std::size_t> pick(0, run.grid.size() - 1);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k)
    {
      const std::size_t i = pick(rng);
      const ComplexVector &u = run.u[i];
      const std::span<const Complex> us(u.data(), static_cast<std::size_t>(u.size()));
      worst = std::max(worst, max_norm(compatibility_residual(entry.model, us, run.grid[i])));
    }
    EXPECT_LT(worst, 1e-10) << name;
  }
}

}  // namespace
}  // namespace pqs
