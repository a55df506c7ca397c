// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include "pqs/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "pqs/error.hpp"

namespace pqs
{

std::string_view to_string(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EvalAtPole: return "EvalAtPole";
    case ErrorCode::NegativeOrderRecenter: return "NegativeOrderRecenter";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::InsufficientTruncation: return "InsufficientTruncation";
    case ErrorCode::DegenerateLeadingEigenvalues: return "DegenerateLeadingEigenvalues";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::ModelNotTheorem2: return "ModelNotTheorem2";
    case ErrorCode::DegeneratePsi0: return "DegeneratePsi0";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::UnsupportedLambdaEvaluation: return "UnsupportedLambdaEvaluation";
    case ErrorCode::UnknownEntry: return "UnknownEntry";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double max_abs(const ComplexMatrix &m)
{
  double r = 0.0;
  for (Eigen::Index k = 0; k < m.size(); ++k)
  {
    r = std::max(r, std::abs(m.data()[k]));
  }
  return r;
}

LaurentSeries::LaurentSeries(int dim, int min_order, int trunc_order)
  : dim_(dim), min_order_(min_order)
{
  if (dim <= 0 || trunc_order < min_order)
  {
    throw Error(ErrorCode::InvalidArgument, "series needs dim > 0 and trunc_order >= min_order");
  }
  coeffs_.assign(static_cast<std::size_t>(trunc_order - min_order + 1),
                 ComplexMatrix::Zero(dim, dim));
}

LaurentSeries::LaurentSeries(int min_order, std::vector<ComplexMatrix> coeffs, bool exact)
  : min_order_(min_order), coeffs_(std::move(coeffs)), exact_(exact)
{
  if (coeffs_.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "series needs at least one coefficient");
  }
  dim_ = static_cast<int>(coeffs_.front().rows());
  for (const auto &c : coeffs_)
  {
    if (c.rows() != dim_ || c.cols() != dim_)
    {
      throw Error(ErrorCode::DimensionMismatch, "coefficients must share one square shape");
    }
    if (!c.allFinite())
    {
      throw Error(ErrorCode::InvalidArgument, "non-finite series coefficient");
    }
  }
}

LaurentSeries LaurentSeries::constant(const ComplexMatrix &a0)
{
  return LaurentSeries(0, {a0}, true);
}

LaurentSeries LaurentSeries::identity(int dim)
{
  return constant(ComplexMatrix::Identity(dim, dim));
}

LaurentSeries LaurentSeries::as_exact() const
{
  LaurentSeries r = *this;
  r.exact_ = true;
  return r;
}

LaurentSeries LaurentSeries::as_truncated() const
{
  LaurentSeries r = *this;
  r.exact_ = false;
  return r;
}

ComplexMatrix LaurentSeries::coeff(int i) const
{
  if (has(i))
  {
    return (*this)[i];
  }
  return ComplexMatrix::Zero(dim_, dim_);
}

double LaurentSeries::norm() const
{
  double r = 0.0;
  for (const auto &c : coeffs_)
  {
    r = std::max(r, max_abs(c));
  }
  return r;
}

namespace
{

void check_dims(const LaurentSeries &a, const LaurentSeries &b)
{
  if (a.dim() != b.dim())
  {
    throw Error(ErrorCode::DimensionMismatch,
                "series dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
}

int sum_trunc(const LaurentSeries &a, const LaurentSeries &b)
{
  if (a.exact() && b.exact())
  {
    return std::max(a.trunc_order(), b.trunc_order());
  }
  if (a.exact())
  {
    return b.trunc_order();
  }
  if (b.exact())
  {
    return a.trunc_order();
  }
  return std::min(a.trunc_order(), b.trunc_order());
}

}  // namespace

LaurentSeries series_add(const LaurentSeries &a, const LaurentSeries &b)
{
  check_dims(a, b);
  const int lo = std::min(a.min_order(), b.min_order());
  const int hi = std::max(lo, sum_trunc(a, b));
  LaurentSeries r(a.dim(), lo, hi);
  for (int i = lo; i <= hi; ++i)
  {
    r[i] = a.coeff(i) + b.coeff(i);
  }
  return a.exact() && b.exact() ? r.as_exact() : r;
}

LaurentSeries series_scale(const LaurentSeries &a, Complex s)
{
  std::vector<ComplexMatrix> c;
  c.reserve(a.coeffs().size());
  for (const auto &m : a.coeffs())
  {
    c.push_back(s * m);
  }
  return LaurentSeries(a.min_order(), std::move(c), a.exact());
}

LaurentSeries series_sub(const LaurentSeries &a, const LaurentSeries &b)
{
  return series_add(a, series_scale(b, -1.0));
}

LaurentSeries series_mul(const LaurentSeries &a, const LaurentSeries &b)
{
  check_dims(a, b);
  const int lo = a.min_order() + b.min_order();
  int hi = std::numeric_limits<int>::max();
  if (!a.exact())
  {
    hi = std::min(hi, a.trunc_order() + b.min_order());
  }
  if (!b.exact())
  {
    hi = std::min(hi, b.trunc_order() + a.min_order());
  }
  if (a.exact() && b.exact())
  {
    hi = a.trunc_order() + b.trunc_order();
  }
  LaurentSeries r(a.dim(), lo, hi);
  for (int i = a.min_order(); i <= a.trunc_order(); ++i)
  {
    for (int j = b.min_order(); j <= b.trunc_order() && i + j <= hi; ++j)
    {
      r[i + j].noalias() += a[i] * b[j];
    }
  }
  return a.exact() && b.exact() ? r.as_exact() : r;
}

LaurentSeries series_commutator(const LaurentSeries &a, const LaurentSeries &b)
{
  return series_sub(series_mul(a, b), series_mul(b, a));
}

ComplexMatrix series_eval(const LaurentSeries &a, Complex lambda)
{
  if (lambda == 0.0 && a.min_order() < 0)
  {
    throw Error(ErrorCode::EvalAtPole, "lambda = 0 with min_order " + std::to_string(a.min_order()));
  }
  std::vector<ComplexMatrix> terms;
  terms.reserve(a.coeffs().size());
  for (int i = a.min_order(); i <= a.trunc_order(); ++i)
  {
    if (i == 0)
    {
      terms.push_back(a[i]);
    }
    else
    {
      terms.push_back(std::pow(lambda, i) * a[i]);
    }
  }
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(terms.size());
  for (std::size_t k = 0; k < terms.size(); ++k)
  {
    order.emplace_back(max_abs(terms[k]), k);
  }
  std::sort(order.begin(), order.end());
  ComplexMatrix sum = ComplexMatrix::Zero(a.dim(), a.dim());
  for (const auto &[mag, k] : order)
  {
    sum += terms[k];
  }
  return sum;
}

LaurentSeries recenter(const LaurentSeries &a, Complex f)
{
  if (a.min_order() < 0)
  {
    throw Error(ErrorCode::NegativeOrderRecenter,
                "cannot recenter a series with pole order " + std::to_string(-a.min_order()));
  }
  const int top = a.trunc_order();
  LaurentSeries r(a.dim(), 0, top);
  // B_k = sum_{i >= k} binom(i, k) f^{i-k} A_i
  for (int i = a.min_order(); i <= top; ++i)
  {
    double binom = 1.0;  // binom(i, i)
    Complex fpow = 1.0;  // f^{i-k}
    for (int k = i; k >= 0; --k)
    {
      r[k] += (binom * fpow) * a[i];
      binom = binom * k / (i - k + 1);
      fpow *= f;
    }
  }
  return a.exact() ? r.as_exact() : r;
}

LaurentSeries transform_to_origin(const LaurentSeries &a)
{
  std::vector<ComplexMatrix> c;
  c.reserve(a.coeffs().size());
  for (int i = a.trunc_order(); i >= a.min_order(); --i)
  {
    c.push_back(-a[i]);
  }
  return LaurentSeries(-a.trunc_order() - 2, std::move(c), a.exact());
}

}  // namespace pqs
