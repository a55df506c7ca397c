// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_SERIES_HPP
#define PQS_SERIES_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace pqs
{

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Max absolute entry. This is the only norm used for residual reporting.
double max_abs(const ComplexMatrix &m);

//
// Truncated matrix-valued Laurent series
//
//   A(lambda) = sum_{i = min_order}^{trunc_order} lambda^i A_i
//
// Orders below min_order are zero. Orders above trunc_order are unknown
// (truncated) unless the series is marked exact, in which case they are zero.
// Model coefficients are exact: they are finite Laurent polynomials in lambda.
// Exactness only widens what arithmetic may report; it never changes a value.
//
class LaurentSeries
{
public:
  LaurentSeries() = default;

  // All-zero series with orders min_order..trunc_order.
  LaurentSeries(int dim, int min_order, int trunc_order);

  // Takes coefficients for orders min_order, min_order + 1, ...
  LaurentSeries(int min_order, std::vector<ComplexMatrix> coeffs, bool exact = false);

  static LaurentSeries constant(const ComplexMatrix &a0);
  static LaurentSeries identity(int dim);

  // Same coefficients, flagged as exact / truncated.
  LaurentSeries as_exact() const;
  LaurentSeries as_truncated() const;

  int dim() const { return dim_; }
  int min_order() const { return min_order_; }
  int trunc_order() const { return min_order_ + static_cast<int>(coeffs_.size()) - 1; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  bool exact() const { return exact_; }

  // Coefficient at order i, min_order <= i <= trunc_order.
  const ComplexMatrix &operator[](int i) const { return coeffs_[i - min_order_]; }
  ComplexMatrix &operator[](int i) { return coeffs_[i - min_order_]; }

  // Coefficient at order i, zero outside the retained range.
  ComplexMatrix coeff(int i) const;
  bool has(int i) const { return i >= min_order_ && i <= trunc_order(); }

  const std::vector<ComplexMatrix> &coeffs() const { return coeffs_; }

  // Max over retained orders of max_abs.
  double norm() const;

private:
  int dim_ = 0;
  int min_order_ = 0;
  std::vector<ComplexMatrix> coeffs_;
  bool exact_ = false;
};

LaurentSeries series_add(const LaurentSeries &a, const LaurentSeries &b);
LaurentSeries series_sub(const LaurentSeries &a, const LaurentSeries &b);
LaurentSeries series_scale(const LaurentSeries &a, Complex s);

// Sums keep orders known in both inputs: trunc is the smaller trunc_order of
// the truncated inputs (the larger one if both are exact).
//
// Truncated Cauchy product. Only orders whose value is fully determined by
// the inputs' retained coefficients are kept:
//   trunc = min(a.trunc + b.min, b.trunc + a.min),
// where the term belonging to an exact input is dropped.
LaurentSeries series_mul(const LaurentSeries &a, const LaurentSeries &b);

LaurentSeries series_commutator(const LaurentSeries &a, const LaurentSeries &b);

// Sum of lambda^i A_i over retained orders. Terms are added smallest first.
ComplexMatrix series_eval(const LaurentSeries &a, Complex lambda);

// Re-expands a Taylor series in mu = lambda - f, i.e. returns B with
// B(mu) = A(mu + f). Exact (binomial) for the retained polynomial.
LaurentSeries recenter(const LaurentSeries &a, Complex f);

// Maps a series in lambda to the series in mu = 1/lambda of the transformed
// Q-equation coefficient, -mu^{-2} A(1/mu). Order i goes to order -i-2.
LaurentSeries transform_to_origin(const LaurentSeries &a);

}  // namespace pqs

#endif  // PQS_SERIES_HPP
