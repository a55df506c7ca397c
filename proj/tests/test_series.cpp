// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "pqs/error.hpp"
#include "pqs/series.hpp"
#include "support.hpp"

namespace pqs
{
namespace
{

using testing::random_matrix;
using testing::random_series;
using testing::scalar;

TEST(SeriesAdd, AddingZeroReturnsInput)
{
  std::mt19937_64 rng(1);
  const LaurentSeries a = random_series(rng, 2, -2, 3);
  const LaurentSeries zero(2, -2, 3);
  const LaurentSeries sum = series_add(a, zero);
  ASSERT_EQ(sum.min_order(), -2);
  ASSERT_EQ(sum.trunc_order(), 3);
  for (int i = -2; i <= 3; ++i)
  {
    EXPECT_EQ(max_abs(sum[i] - a[i]), 0.0);
  }
}

TEST(SeriesAdd, AddingNegationGivesZero)
{
  std::mt19937_64 rng(2);
  const LaurentSeries a = random_series(rng, 3, -1, 4);
  EXPECT_EQ(series_add(a, series_scale(a, -1.0)).norm(), 0.0);
}

TEST(SeriesAdd, PolynomialsKeepEveryTerm)
{
  const ComplexMatrix e = ComplexMatrix::Identity(2, 2);
  const LaurentSeries a(-1, {e}, true);
  const LaurentSeries b(1, {e}, true);
  const LaurentSeries s = series_add(a, b);
  ASSERT_EQ(s.min_order(), -1);
  ASSERT_EQ(s.trunc_order(), 1);
  EXPECT_EQ(max_abs(s[-1] - e), 0.0);
  EXPECT_EQ(max_abs(s[0]), 0.0);
  EXPECT_EQ(max_abs(s[1] - e), 0.0);
}

TEST(SeriesAdd, TruncatedInputsKeepTheSmallerTruncation)
{
  std::mt19937_64 rng(3);
  const LaurentSeries a = random_series(rng, 2, -2, 5);
  const LaurentSeries b = random_series(rng, 2, 0, 3);
  const LaurentSeries s = series_add(a, b);
  EXPECT_EQ(s.min_order(), -2);
  EXPECT_EQ(s.trunc_order(), 3);
  EXPECT_EQ(max_abs(s[1] - a[1] - b[1]), 0.0);
}

TEST(SeriesAdd, DimensionMismatchThrows)
{
  try
  {
    series_add(LaurentSeries(2, 0, 1), LaurentSeries(3, 0, 1));
    FAIL() << "no exception";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(SeriesMul, IdentityIsNeutral)
{
  std::mt19937_64 rng(4);
  const LaurentSeries b = random_series(rng, 2, -1, 4);
  const LaurentSeries p = series_mul(LaurentSeries::identity(2), b);
  ASSERT_EQ(p.min_order(), -1);
  ASSERT_EQ(p.trunc_order(), 4);
  for (int i = -1; i <= 4; ++i)
  {
    EXPECT_EQ(max_abs(p[i] - b[i]), 0.0);
  }
}

TEST(SeriesMul, MonomialsMultiplyToOrderZero)
{
  std::mt19937_64 rng(5);
  const ComplexMatrix a0 = random_matrix(rng, 2);
  const ComplexMatrix b0 = random_matrix(rng, 2);
  const LaurentSeries p = series_mul(LaurentSeries(-1, {a0}), LaurentSeries(1, {b0}));
  EXPECT_EQ(p.min_order(), 0);
  EXPECT_EQ(p.trunc_order(), 0);
  EXPECT_LT(max_abs(p[0] - a0 * b0), 1e-15);
}

TEST(SeriesMul, ScalarPolynomialOracle)
{
  // (1 + lambda)(1 - lambda + lambda^2) = 1 + lambda^3.
  const LaurentSeries a(0, {scalar(1), scalar(1), scalar(0)});
  const LaurentSeries b(0, {scalar(1), scalar(-1), scalar(1)});
  const LaurentSeries p = series_mul(a, b);
  ASSERT_EQ(p.trunc_order(), 2);
  EXPECT_EQ(p[0](0, 0), Complex(1.0));
  EXPECT_EQ(p[1](0, 0), Complex(0.0));
  EXPECT_EQ(p[2](0, 0), Complex(0.0));
}

TEST(SeriesMul, TruncationIsConservative)
{
  std::mt19937_64 rng(6);
  const LaurentSeries a = random_series(rng, 2, -2, 3);
  const LaurentSeries b = random_series(rng, 2, 1, 4);
  const LaurentSeries p = series_mul(a, b);
  EXPECT_EQ(p.min_order(), -1);
  EXPECT_EQ(p.trunc_order(), std::min(3 + 1, 4 - 2));
}

TEST(SeriesMul, AssociativeUnderCommonTruncation)
{
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial)
  {
    const LaurentSeries a = random_series(rng, 3, -1, 5);
    const LaurentSeries b = random_series(rng, 3, 0, 6);
    const LaurentSeries c = random_series(rng, 3, -2, 4);
    const LaurentSeries left = series_mul(a, series_mul(b, c));
    const LaurentSeries right = series_mul(series_mul(a, b), c);
    const int top = std::min(left.trunc_order(), right.trunc_order());
    ASSERT_EQ(left.min_order(), right.min_order());
    for (int i = left.min_order(); i <= top; ++i)
    {
      EXPECT_LT(max_abs(left[i] - right[i]), 1e-12);
    }
  }
}

TEST(SeriesMul, EvaluationErrorDecaysWithTruncation)
{
  std::mt19937_64 rng(8);
  const LaurentSeries a = random_series(rng, 2, 0, 4);
  const LaurentSeries b = random_series(rng, 2, 0, 6);
  const LaurentSeries p = series_mul(a, b);
  auto err = [&](Complex lam) {
    return max_abs(series_eval(p, lam) - series_eval(a, lam) * series_eval(b, lam));
  };
  const Complex dir = std::polar(1.0, 0.3);
  const double slope = std::log2(err(0.1 * dir) / err(0.05 * dir));
  EXPECT_GE(slope, p.trunc_order() + 1 - 0.2);
}

TEST(SeriesCommutator, SelfAndIdentityVanish)
{
  std::mt19937_64 rng(9);
  const LaurentSeries a = random_series(rng, 3, -2, 2);
  EXPECT_LT(series_commutator(a, a).norm(), 1e-14);
  EXPECT_EQ(series_commutator(a, LaurentSeries::identity(3)).norm(), 0.0);
}

TEST(SeriesCommutator, TwoByTwoExample)
{
  ComplexMatrix a(2, 2);
  a << 0, 1, 0, 0;
  ComplexMatrix b(2, 2);
  b << 1, 0, 0, -1;
  ComplexMatrix expected(2, 2);
  expected << 0, -2, 0, 0;
  const LaurentSeries c = series_commutator(LaurentSeries::constant(a), LaurentSeries::constant(b));
  EXPECT_EQ(max_abs(c[0] - expected), 0.0);
}

TEST(SeriesCommutator, BilinearAndAntisymmetric)
{
  std::mt19937_64 rng(10);
  const LaurentSeries a = random_series(rng, 2, -1, 3);
  const LaurentSeries b = random_series(rng, 2, -1, 3);
  const LaurentSeries c = random_series(rng, 2, -1, 3);
  const Complex s(0.7, -1.3);
  const LaurentSeries lhs = series_commutator(series_add(a, series_scale(b, s)), c);
  const LaurentSeries rhs = series_add(series_commutator(a, c), series_scale(series_commutator(b, c), s));
  EXPECT_LT(series_sub(lhs, rhs).norm(), 1e-13);
  EXPECT_LT(series_add(series_commutator(a, b), series_commutator(b, a)).norm(), 1e-15);
}

TEST(SeriesEval, ConstantSeries)
{
  std::mt19937_64 rng(11);
  const ComplexMatrix a0 = random_matrix(rng, 2);
  EXPECT_EQ(max_abs(series_eval(LaurentSeries::constant(a0), 0.5) - a0), 0.0);
}

TEST(SeriesEval, ScalarLaurent)
{
  const LaurentSeries a(-1, {scalar(1), scalar(2)});
  EXPECT_NEAR(std::abs(series_eval(a, 2.0)(0, 0) - 2.5), 0.0, 1e-15);
}

TEST(SeriesEval, ExponentialOracle)
{
  std::vector<ComplexMatrix> c;
  double f = 1.0;
  for (int k = 0; k <= 8; ++k)
  {
    c.push_back(scalar(1.0 / f));
    f *= k + 1;
  }
  const LaurentSeries e(0, c);
  EXPECT_NEAR(std::abs(series_eval(e, 0.1)(0, 0) - std::exp(0.1)), 0.0, 1e-12);
}

TEST(SeriesEval, PoleAtZeroThrows)
{
  const LaurentSeries a(-1, {scalar(1), scalar(2)});
  try
  {
    series_eval(a, 0.0);
    FAIL() << "no exception";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::EvalAtPole);
  }
}

TEST(Recenter, ZeroShiftIsIdentity)
{
  std::mt19937_64 rng(12);
  const LaurentSeries a = random_series(rng, 2, 0, 5);
  EXPECT_EQ(series_sub(recenter(a, 0.0), a).norm(), 0.0);
}

TEST(Recenter, BinomialSquare)
{
  const LaurentSeries a(0, {scalar(0), scalar(0), scalar(1)});
  const LaurentSeries b = recenter(a, 1.0);
  EXPECT_EQ(b[0](0, 0), Complex(1.0));
  EXPECT_EQ(b[1](0, 0), Complex(2.0));
  EXPECT_EQ(b[2](0, 0), Complex(1.0));
}

TEST(Recenter, RoundTrip)
{
  std::mt19937_64 rng(13);
  const LaurentSeries a = random_series(rng, 3, 0, 6);
  const Complex f(0.4, -0.25);
  EXPECT_LT(series_sub(recenter(recenter(a, f), -f), a).norm(), 1e-13);
}

TEST(Recenter, PoleThrows)
{
  try
  {
    recenter(LaurentSeries(1, -1, 2), 1.0);
    FAIL() << "no exception";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::NegativeOrderRecenter);
  }
}

TEST(TransformToOrigin, SingleTerms)
{
  std::mt19937_64 rng(14);
  const ComplexMatrix a0 = random_matrix(rng, 2);
  const LaurentSeries t0 = transform_to_origin(LaurentSeries::constant(a0));
  ASSERT_EQ(t0.min_order(), -2);
  ASSERT_EQ(t0.trunc_order(), -2);
  EXPECT_EQ(max_abs(t0[-2] + a0), 0.0);
  const LaurentSeries t1 = transform_to_origin(LaurentSeries(1, {a0}));
  ASSERT_EQ(t1.min_order(), -3);
  EXPECT_EQ(max_abs(t1[-3] + a0), 0.0);
}

TEST(TransformToOrigin, AppliedTwiceIsIdentity)
{
  std::mt19937_64 rng(15);
  const LaurentSeries a = random_series(rng, 2, -3, 2);
  const LaurentSeries back = transform_to_origin(transform_to_origin(a));
  ASSERT_EQ(back.min_order(), a.min_order());
  ASSERT_EQ(back.trunc_order(), a.trunc_order());
  EXPECT_EQ(series_sub(back, a).norm(), 0.0);
}

}  // namespace
}  // namespace pqs
