// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_CATALOG_HPP
#define PQS_CATALOG_HPP

#include <string>
#include <string_view>
#include <vector>

#include "pqs/pair_model.hpp"
#include "pqs/series.hpp"

namespace pqs
{

struct CatalogFeatures
{
  bool irregular = false;
  bool regular = false;
  bool resonant = false;
  bool scalar = false;
};

struct CatalogEntry
{
  std::string name;
  std::string description;
  std::string document;  // model document text the entry is parsed from
  PairModel model;
  CatalogFeatures features;
  int order = 0;  // recommended M
  double x_end = 0.0;
  int steps = 0;
  ComplexMatrix leading;  // documented Q^(n) at (u0, x0)
};

std::vector<std::string> catalog_names();

// Throws UnknownEntry.
const CatalogEntry &catalog_get(std::string_view name);

struct CheckTolerances
{
  double seed_tol = 1e-11;
  double f_tol = 1e-8;
  double h_tol = 1e-6;
  double j_tol = 1e-8;
  double compat_tol = 1e-10;
  double c0_tol = 1e-13;
  double abel_tol = 1e-8;
  double ode_tol = 1e-6;
};

struct CatalogReport
{
  std::string name;
  double leading_error = 0.0;   // |Q^(n)(u0, x0) - documented|
  double compat_max = 0.0;      // at 20 points along the run
  double seed_residual = 0.0;
  double f_max = 0.0;
  double h_max = 0.0;
  double j_drift = 0.0;
  double j_eigenvalue_drift = 0.0;
  double c0_deviation = 0.0;
  double abel_deviation = 0.0;
  double log_norm = 0.0;  // max |C^(i,1)| at x0 (regular entries)
  std::vector<std::string> failures;

  bool pass() const { return failures.empty(); }
};

// Seeds at x0, runs the recommended trajectory and checks every monitor
// against `tol`. Throws UnknownEntry.
CatalogReport verify_catalog_entry(std::string_view name, const CheckTolerances &tol = {});

}  // namespace pqs

#endif  // PQS_CATALOG_HPP
