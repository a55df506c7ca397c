// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_PAIR_MODEL_HPP
#define PQS_PAIR_MODEL_HPP

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pqs/expression.hpp"
#include "pqs/series.hpp"

namespace pqs
{

// N*N expressions in row-major order.
using ExpressionMatrix = std::vector<Expression>;

//
// Parametrized P-Q pair
//
//   Psi_x = P Psi,  Psi_lambda = Q Psi,
//   P = sum_{i >= m} lambda^i P_i(u, x),  Q = sum_{i >= n} lambda^i Q_i(u, x),
//
// where the state u evolves by du/dx = G(u, x). The pair is valid when
// Q_x - P_lambda + [Q, P] = 0 holds along that flow, order by order in lambda.
//
struct PairDefinition
{
  int dim = 1;
  int m = 0;
  int n = -1;
  std::vector<std::string> state_names;
  std::vector<Expression> vector_field;
  double x0 = 0.0;
  std::vector<Complex> u0;
  std::map<int, ExpressionMatrix> p;
  std::map<int, ExpressionMatrix> q;
};

class PairModel
{
public:
  // Validates the definition and compiles every expression. Throws
  // SchemaError for structural problems and UnknownSymbol for references to
  // undeclared symbols.
  explicit PairModel(PairDefinition def);

  const PairDefinition &definition() const { return def_; }
  int dim() const { return def_.dim; }
  int m() const { return def_.m; }
  int n() const { return def_.n; }
  int state_dim() const { return static_cast<int>(def_.state_names.size()); }
  double x0() const { return def_.x0; }
  const std::vector<Complex> &u0() const { return def_.u0; }

  // Highest stored order of P and Q (at least m and n respectively).
  int p_top() const { return p_top_; }
  int q_top() const { return q_top_; }

  ComplexVector vector_field_at(std::span<const Complex> u, double x) const;

  LaurentSeries p_at(std::span<const Complex> u, double x) const;
  LaurentSeries q_at(std::span<const Complex> u, double x) const;

  // Total x-derivative of Q along the flow, d/dx Q = sum_k dQ/du_k G_k + dQ/dx,
  // formed symbolically when the model is built.
  LaurentSeries q_x_at(std::span<const Complex> u, double x) const;

private:
  using CompiledMatrix = std::vector<CompiledExpression>;

  std::vector<Complex> slot_values(std::span<const Complex> u, double x) const;
  LaurentSeries eval_family(const std::map<int, CompiledMatrix> &family, int lo, int hi,
                            std::span<const Complex> values) const;

  PairDefinition def_;
  int p_top_ = 0;
  int q_top_ = 0;
  std::vector<CompiledExpression> field_;
  std::map<int, CompiledMatrix> p_;
  std::map<int, CompiledMatrix> q_;
  std::map<int, CompiledMatrix> q_x_;
};

struct PairCoefficients
{
  LaurentSeries p;
  LaurentSeries q;
};

// Numeric P and Q (exact Laurent polynomials) with min orders m and n.
PairCoefficients pair_coeffs_at(const PairModel &model, std::span<const Complex> u, double x);

struct OrderNorm
{
  int order;
  double norm;
};

// max_abs of Q_x^(i) - (i+1) P^(i+1) + sum_j [Q^(j), P^(i-j)] for every
// order i from m+n up to the highest order any term can reach.
std::vector<OrderNorm> compatibility_residual(const PairModel &model, std::span<const Complex> u,
                                              double x);

double max_norm(const std::vector<OrderNorm> &norms);

}  // namespace pqs

#endif  // PQS_PAIR_MODEL_HPP
