// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include "pqs/pair_model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "pqs/error.hpp"

namespace pqs
{

namespace
{

void schema_check(bool ok, const std::string &what)
{
  if (!ok)
  {
    throw Error(ErrorCode::SchemaError, what);
  }
}

bool valid_identifier(const std::string &s)
{
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
  {
    return false;
  }
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

PairModel::PairModel(PairDefinition def) : def_(std::move(def))
{
  const int nn = def_.dim * def_.dim;
  schema_check(def_.dim >= 1, "/dimension: must be a positive integer");
  schema_check(def_.m <= 0, "/m: must be <= 0");
  schema_check(def_.n < 0, "/n: must be < 0");
  schema_check(def_.vector_field.size() == def_.state_names.size(),
               "/vector_field: needs one expression per state variable");
  schema_check(def_.u0.size() == def_.state_names.size(), "/u0: needs one value per state variable");

  std::set<std::string, std::less<>> names;
  for (std::size_t k = 0; k < def_.state_names.size(); ++k)
  {
    const auto &s = def_.state_names[k];
    const std::string path = "/state/" + std::to_string(k);
    schema_check(valid_identifier(s), path + ": '" + s + "' is not an identifier");
    schema_check(s != "x" && s != "i", path + ": '" + s + "' is reserved");
    schema_check(names.insert(s).second, path + ": duplicate state name '" + s + "'");
  }

  for (const auto &[order, mat] : def_.p)
  {
    schema_check(order >= def_.m, "/P/" + std::to_string(order) + ": order below m");
    schema_check(static_cast<int>(mat.size()) == nn, "/P/" + std::to_string(order) + ": not N x N");
  }
  for (const auto &[order, mat] : def_.q)
  {
    schema_check(order >= def_.n, "/Q/" + std::to_string(order) + ": order below n");
    schema_check(static_cast<int>(mat.size()) == nn, "/Q/" + std::to_string(order) + ": not N x N");
  }

  std::vector<std::string> slots;
  slots.reserve(def_.state_names.size() + 1);
  slots.emplace_back("x");
  slots.insert(slots.end(), def_.state_names.begin(), def_.state_names.end());

  for (const auto &g : def_.vector_field)
  {
    field_.emplace_back(g, slots);
  }
  p_top_ = def_.m;
  for (const auto &[order, mat] : def_.p)
  {
    p_top_ = std::max(p_top_, order);
    auto &c = p_[order];
    for (const auto &e : mat)
    {
      c.emplace_back(e, slots);
    }
  }
  q_top_ = def_.n;
  for (const auto &[order, mat] : def_.q)
  {
    q_top_ = std::max(q_top_, order);
    auto &c = q_[order];
    auto &cx = q_x_[order];
    for (const auto &e : mat)
    {
      c.emplace_back(e, slots);
      Expression total = differentiate(e, "x");
      for (std::size_t k = 0; k < def_.state_names.size(); ++k)
      {
        const Expression d = differentiate(e, def_.state_names[k]);
        if (d.is_literal(0.0) || def_.vector_field[k].is_literal(0.0))
        {
          continue;
        }
        const Expression term = Expression::mul(d, def_.vector_field[k]);
        total = total.is_literal(0.0) ? term : Expression::add(total, term);
      }
      cx.emplace_back(total, slots);
    }
  }
}

std::vector<Complex> PairModel::slot_values(std::span<const Complex> u, double x) const
{
  if (static_cast<int>(u.size()) != state_dim())
  {
    throw Error(ErrorCode::DimensionMismatch, "state vector has " + std::to_string(u.size()) +
                                                  " entries, model declares " +
                                                  std::to_string(state_dim()));
  }
  std::vector<Complex> v;
  v.reserve(u.size() + 1);
  v.emplace_back(x, 0.0);
  v.insert(v.end(), u.begin(), u.end());
  return v;
}

ComplexVector PairModel::vector_field_at(std::span<const Complex> u, double x) const
{
  const auto values = slot_values(u, x);
  ComplexVector g(state_dim());
  for (int k = 0; k < state_dim(); ++k)
  {
    g(k) = field_[static_cast<std::size_t>(k)].eval(values);
  }
  return g;
}

LaurentSeries PairModel::eval_family(const std::map<int, CompiledMatrix> &family, int lo, int hi,
                                     std::span<const Complex> values) const
{
  LaurentSeries s(def_.dim, lo, hi);
  for (const auto &[order, mat] : family)
  {
    ComplexMatrix &c = s[order];
    for (int r = 0; r < def_.dim; ++r)
    {
      for (int col = 0; col < def_.dim; ++col)
      {
        const auto &e = mat[static_cast<std::size_t>(r * def_.dim + col)];
        if (!e.is_zero())
        {
          c(r, col) = e.eval(values);
        }
      }
    }
  }
  return s.as_exact();
}

LaurentSeries PairModel::p_at(std::span<const Complex> u, double x) const
{
  return eval_family(p_, def_.m, p_top_, slot_values(u, x));
}

LaurentSeries PairModel::q_at(std::span<const Complex> u, double x) const
{
  return eval_family(q_, def_.n, q_top_, slot_values(u, x));
}

LaurentSeries PairModel::q_x_at(std::span<const Complex> u, double x) const
{
  return eval_family(q_x_, def_.n, q_top_, slot_values(u, x));
}

PairCoefficients pair_coeffs_at(const PairModel &model, std::span<const Complex> u, double x)
{
  return {model.p_at(u, x), model.q_at(u, x)};
}

std::vector<OrderNorm> compatibility_residual(const PairModel &model, std::span<const Complex> u,
                                              double x)
{
  const LaurentSeries p = model.p_at(u, x);
  const LaurentSeries q = model.q_at(u, x);
  const LaurentSeries qx = model.q_x_at(u, x);
  const int lo = model.m() + model.n();
  const int hi = std::max({model.q_top(), model.p_top() - 1, model.q_top() + model.p_top()});
  std::vector<OrderNorm> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int i = lo; i <= hi; ++i)
  {
    ComplexMatrix r = qx.coeff(i) - static_cast<double>(i + 1) * p.coeff(i + 1);
    for (int j = q.min_order(); j <= q.trunc_order(); ++j)
    {
      const int k = i - j;
      if (p.has(k))
      {
        r.noalias() += q[j] * p[k];
        r.noalias() -= p[k] * q[j];
      }
    }
    out.push_back({i, max_abs(r)});
  }
  return out;
}

double max_norm(const std::vector<OrderNorm> &norms)
{
  double r = 0.0;
  for (const auto &o : norms)
  {
    r = std::max(r, o.norm);
  }
  return r;
}

}  // namespace pqs
