// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include "pqs/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "pqs/error.hpp"
#include "pqs/model_document.hpp"
#include "pqs/propagation.hpp"
#include "pqs/seed.hpp"

namespace pqs
{

namespace
{

// Constant Q, so compatibility reduces to P_lambda = 0.
// C(lambda) = exp(lambda + lambda^2 / 4).
constexpr const char *kScalarExact = R"doc({
  "dimension": 1,
  "m": 0,
  "n": -2,
  "state": ["u"],
  "x0": 0,
  "u0": ["1"],
  "vector_field": ["u"],
  "Q": {
    "-2": [["2"]],
    "-1": [["0.5"]],
    "0": [["1"]],
    "1": [["0.5"]]
  },
  "P": {
    "0": [["u"]]
  }
})doc";

constexpr const char *kAbelianDiag = R"doc({
  "dimension": 2,
  "m": 0,
  "n": -2,
  "state": ["u"],
  "x0": 0,
  "u0": ["1"],
  "vector_field": ["u"],
  "Q": {
    "-2": [["2", "0"], ["0", "-1"]],
    "-1": [["0.5", "0"], ["0", "0.25+0.5i"]],
    "0": [["1", "0"], ["0", "-0.5"]],
    "1": [["0.5", "0"], ["0", "0.25"]]
  },
  "P": {
    "0": [["u", "0"], ["0", "x"]]
  }
})doc";

// Q = A/lambda^2 + B/lambda + x s3, P = B/x + lambda s3 with s3 = diag(1, -1).
// Compatibility holds when A' = [B, A]/x and B' = [s3, A].
constexpr const char *kIrregular2x2 = R"doc({
  "dimension": 2,
  "m": 0,
  "n": -2,
  "state": ["a11", "a12", "a21", "a22", "b11", "b12", "b21", "b22"],
  "x0": 1,
  "u0": ["2", "0.5", "0.3", "-1.5", "0.4", "0.3", "-0.2", "0.1"],
  "vector_field": [
    "(b12*a21 - a12*b21)/x",
    "(b11*a12 + b12*a22 - a11*b12 - a12*b22)/x",
    "(b21*a11 + b22*a21 - a21*b11 - a22*b21)/x",
    "(b21*a12 - a21*b12)/x",
    "0",
    "2*a12",
    "-2*a21",
    "0"
  ],
  "Q": {
    "-2": [["a11", "a12"], ["a21", "a22"]],
    "-1": [["b11", "b12"], ["b21", "b22"]],
    "0": [["x", "0"], ["0", "-x"]]
  },
  "P": {
    "0": [["b11/x", "b12/x"], ["b21/x", "b22/x"]],
    "1": [["1", "0"], ["0", "-1"]]
  }
})doc";

// Q = R/lambda + x s3, P = R/x + D + lambda s3 with D = diag(r12*r21, 0).
// Compatibility holds when R' = [D, R].
constexpr const char *kRegularFuchsian = R"doc({
  "dimension": 2,
  "m": 0,
  "n": -1,
  "state": ["r11", "r12", "r21", "r22"],
  "x0": 1,
  "u0": ["0.3", "0.2", "0.1", "-0.2"],
  "vector_field": ["0", "r12*r21*r12", "-r12*r21*r21", "0"],
  "Q": {
    "-1": [["r11", "r12"], ["r21", "r22"]],
    "0": [["x", "0"], ["0", "-x"]]
  },
  "P": {
    "0": [["r11/x + r12*r21", "r12/x"], ["r21/x", "r22/x"]],
    "1": [["1", "0"], ["0", "-1"]]
  }
})doc";

// Q = R/lambda + S, P = R + W + lambda S with W = (x/4) [[0, 1], [-1, 0]].
// Compatibility holds when R' = [W, R] and S' = S + [W, S]. R has
// eigenvalues 1 and 0, and S(x0) has a nonzero (1,2) entry.
constexpr const char *kResonantRegular = R"doc({
  "dimension": 2,
  "m": 0,
  "n": -1,
  "state": ["r11", "r12", "r21", "r22", "s11", "s12", "s21", "s22"],
  "x0": 0,
  "u0": ["1", "0", "0", "0", "0", "1", "0.5", "0.2"],
  "vector_field": [
    "x/4*(r12 + r21)",
    "x/4*(r22 - r11)",
    "x/4*(r22 - r11)",
    "-x/4*(r12 + r21)",
    "s11 + x/4*(s12 + s21)",
    "s12 + x/4*(s22 - s11)",
    "s21 + x/4*(s22 - s11)",
    "s22 - x/4*(s12 + s21)"
  ],
  "Q": {
    "-1": [["r11", "r12"], ["r21", "r22"]],
    "0": [["s11", "s12"], ["s21", "s22"]]
  },
  "P": {
    "0": [["r11", "r12 + x/4"], ["r21 - x/4", "r22"]],
    "1": [["s11", "s12"], ["s21", "s22"]]
  }
})doc";

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d)
{
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

CatalogEntry make_entry(std::string name, std::string description, const char *doc, CatalogFeatures features,
                        int order, double x_end, int steps, ComplexMatrix leading)
{
  return CatalogEntry{std::move(name),
                      std::move(description),
                      doc,
                      parse_model(doc),
                      features,
                      order,
                      x_end,
                      steps,
                      std::move(leading)};
}

const std::vector<CatalogEntry> &entries()
{
  static const std::vector<CatalogEntry> all = [] {
    std::vector<CatalogEntry> v;
    v.push_back(make_entry("scalar_exact", "1x1 pair with constant Q and P = u(x); closed-form C", kScalarExact,
                           {.irregular = true, .scalar = true}, 12, 1.0, 1000, ComplexMatrix::Constant(1, 1, 2.0)));
    v.push_back(make_entry("abelian_diag", "2x2 diagonal pair, two decoupled scalar problems", kAbelianDiag,
                           {.irregular = true}, 12, 1.0, 1000, mat2(2.0, 0.0, 0.0, -1.0)));
    v.push_back(make_entry("irregular_2x2", "2x2 pair with a pole of order 2 and an isospectral leading matrix",
                           kIrregular2x2, {.irregular = true}, 10, 2.0, 1000, mat2(2.0, 0.5, 0.3, -1.5)));
    v.push_back(make_entry("regular_fuchsian", "2x2 simple-pole pair with non-resonant residue eigenvalues",
                           kRegularFuchsian, {.regular = true}, 8, 2.0, 1000, mat2(0.3, 0.2, 0.1, -0.2)));
    v.push_back(make_entry("resonant_regular", "2x2 simple-pole pair with residue eigenvalues 1 and 0",
                           kResonantRegular, {.regular = true, .resonant = true}, 8, 1.0, 1000,
                           mat2(1.0, 0.0, 0.0, 0.0)));
    return v;
  }();
  return all;
}

std::vector<std::size_t> spread_indices(std::size_t count, std::size_t points)
{
  std::vector<std::size_t> idx;
  if (count == 0)
  {
    return idx;
  }
  for (std::size_t k = 0; k < points; ++k)
  {
    const std::size_t i = points == 1 ? 0 : (k * (count - 1) + (points - 1) / 2) / (points - 1);
    if (idx.empty() || idx.back() != i)
    {
      idx.push_back(i);
    }
  }
  return idx;
}

void check(CatalogReport &rep, const char *what, double value, double tol)
{
  if (!(value < tol))
  {
    rep.failures.push_back(std::string(what) + " = " + std::to_string(value) + " (tolerance " +
                           std::to_string(tol) + ")");
  }
}

}  // namespace

std::vector<std::string> catalog_names()
{
  std::vector<std::string> names;
  for (const auto &e : entries())
  {
    names.push_back(e.name);
  }
  return names;
}

const CatalogEntry &catalog_get(std::string_view name)
{
  for (const auto &e : entries())
  {
    if (e.name == name)
    {
      return e;
    }
  }
  throw Error(ErrorCode::UnknownEntry, "no catalog entry named '" + std::string(name) + "'");
}

CatalogReport verify_catalog_entry(std::string_view name, const CheckTolerances &tol)
{
  const CatalogEntry &entry = catalog_get(name);
  const PairModel &model = entry.model;
  CatalogReport rep;
  rep.name = entry.name;

  const std::span<const Complex> u0(model.u0());
  rep.leading_error = max_abs(model.q_at(u0, model.x0())[model.n()] - entry.leading);
  check(rep, "leading matrix error", rep.leading_error, 1e-14);

  SeedOptions seed_opts;
  seed_opts.seed_tol = tol.seed_tol;
  PropagationOptions prop;
  prop.ode_tol = tol.ode_tol;

  Trajectory traj;
  if (entry.features.regular)
  {
    const RegularSeed seed = solve_regular_seed(model, entry.order, seed_opts);
    rep.seed_residual = max_norm(seed.residual_report);
    if (seed.c.size() > 1)
    {
      for (int i = 0; i <= seed.order; ++i)
      {
        rep.log_norm = std::max(rep.log_norm, max_abs(seed.c[1][i]));
      }
    }
    if (entry.features.resonant && !(rep.log_norm > 1e-6))
    {
      rep.failures.push_back("resonant entry produced no logarithmic coefficient");
    }
    traj = evolve_expansion_regular(seed, model, entry.x_end, entry.steps, prop);
  }
  else
  {
    const IrregularSeed seed = solve_irregular_seed(model, entry.order, seed_opts);
    rep.seed_residual = max_norm(seed.residual_report);
    traj = evolve_expansion(seed, model, entry.x_end, entry.steps, prop);
  }
  check(rep, "seed residual", rep.seed_residual, tol.seed_tol);

  for (std::size_t i : spread_indices(traj.samples.size(), 20))
  {
    rep.compat_max = std::max(rep.compat_max, max_norm(traj.samples[i].compat_norms));
  }
  check(rep, "compatibility residual", rep.compat_max, tol.compat_tol);

  rep.f_max = max_f_norm(traj);
  check(rep, "max F norm", rep.f_max, tol.f_tol);
  rep.h_max = residual_H(traj).max;
  check(rep, "max H norm", rep.h_max, tol.h_tol);
  const ConservationReport cons = conservation_laws(traj, prop);
  rep.j_drift = cons.max_drift;
  rep.j_eigenvalue_drift = cons.max_eigenvalue_drift;
  check(rep, "J drift", rep.j_drift, tol.j_tol);
  check(rep, "J eigenvalue drift", rep.j_eigenvalue_drift, tol.j_tol);
  rep.c0_deviation = max_c0_deviation(traj);
  check(rep, "C^(0) deviation", rep.c0_deviation, tol.c0_tol);
  rep.abel_deviation = abel_deviation(traj);
  check(rep, "Abel deviation", rep.abel_deviation, tol.abel_tol);
  return rep;
}

}  // namespace pqs
