// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_TESTS_SUPPORT_HPP
#define PQS_TESTS_SUPPORT_HPP

#include <random>
#include <string>

#include "pqs/series.hpp"

namespace pqs::testing
{

inline ComplexMatrix random_matrix(std::mt19937_64 &rng, int dim, double scale = 1.0)
{
  std::uniform_real_distribution<double> d(-scale, scale);
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
  {
    for (int c = 0; c < dim; ++c)
    {
      m(r, c) = Complex(d(rng), d(rng));
    }
  }
  return m;
}

inline LaurentSeries random_series(std::mt19937_64 &rng, int dim, int min_order, int trunc_order,
                                   double scale = 1.0)
{
  LaurentSeries s(dim, min_order, trunc_order);
  for (int i = min_order; i <= trunc_order; ++i)
  {
    s[i] = random_matrix(rng, dim, scale);
  }
  return s;
}

inline ComplexMatrix scalar(Complex v)
{
  return ComplexMatrix::Constant(1, 1, v);
}

inline std::string data_path(const std::string &name)
{
  return std::string(PQS_TEST_DATA_DIR) + "/" + name;
}

}  // namespace pqs::testing

#endif  // PQS_TESTS_SUPPORT_HPP
