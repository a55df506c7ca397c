// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "pqs/catalog.hpp"
#include "pqs/error.hpp"
#include "pqs/propagation.hpp"
#include "pqs/seed.hpp"

namespace pqs
{
namespace
{

TEST(Catalog, ListsFiveEntries)
{
  const std::vector<std::string> expected{"scalar_exact", "abelian_diag", "irregular_2x2", "regular_fuchsian",
                                          "resonant_regular"};
  EXPECT_EQ(catalog_names(), expected);
}

TEST(Catalog, ScalarEntryShape)
{
  const CatalogEntry &e = catalog_get("scalar_exact");
  EXPECT_EQ(e.model.dim(), 1);
  EXPECT_EQ(e.model.n(), -2);
  EXPECT_EQ(e.model.m(), 0);
  EXPECT_TRUE(e.features.scalar);
}

TEST(Catalog, ResonantEntryHasUnitGap)
{
  const CatalogEntry &e = catalog_get("resonant_regular");
  const ComplexMatrix r = e.model.q_at(e.model.u0(), e.model.x0())[-1];
  Eigen::ComplexEigenSolver<ComplexMatrix> es(r, false);
  EXPECT_DOUBLE_EQ(std::abs(es.eigenvalues()(0) - es.eigenvalues()(1)), 1.0);
  EXPECT_TRUE(e.features.resonant);
}

TEST(Catalog, UnknownName)
{
  try
  {
    catalog_get("nope");
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::UnknownEntry);
  }
  EXPECT_THROW(verify_catalog_entry("nope"), Error);
}

TEST(Catalog, LeadingMatricesMatchDocumentation)
{
  for (const auto &name : catalog_names())
  {
    const CatalogEntry &e = catalog_get(name);
    const ComplexMatrix lead = e.model.q_at(e.model.u0(), e.model.x0())[e.model.n()];
    EXPECT_EQ(max_abs(lead - e.leading), 0.0) << name;
  }
}

class CatalogVerify : public ::testing::TestWithParam<std::string>
{
};

TEST_P(CatalogVerify, PassesAtDefaultTolerances)
{
  const CatalogReport r = verify_catalog_entry(GetParam());
  for (const auto &f : r.failures)
  {
    ADD_FAILURE() << f;
  }
  EXPECT_TRUE(r.pass());
  EXPECT_LT(r.compat_max, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(AllEntries, CatalogVerify,
                         ::testing::Values("scalar_exact", "abelian_diag", "irregular_2x2", "regular_fuchsian",
                                           "resonant_regular"));

TEST(Catalog, ScalarEntryResidualsAreTiny)
{
  const CatalogReport r = verify_catalog_entry("scalar_exact");
  EXPECT_LT(r.compat_max, 1e-12);
  EXPECT_LT(r.seed_residual, 1e-12);
  EXPECT_LT(r.f_max, 1e-12);
}

TEST(Catalog, ResonantEntryReportsLogs)
{
  EXPECT_GT(verify_catalog_entry("resonant_regular").log_norm, 1e-6);
  EXPECT_LE(verify_catalog_entry("regular_fuchsian").log_norm, 1e-12);
}

TEST(Catalog, AbelianEntryIsAProductOfScalarRuns)
{
  const CatalogEntry &abelian = catalog_get("abelian_diag");
  const IrregularSeed seed = solve_irregular_seed(abelian.model, abelian.order);
  const Trajectory t = evolve_expansion(seed, abelian.model, abelian.x_end, abelian.steps);

  // Each diagonal entry solved on its own as a 1x1 problem with the same data.
  for (int k = 0; k < 2; ++k)
  {
    std::vector<ComplexMatrix> coeffs;
    const LaurentSeries q = abelian.model.q_at(abelian.model.u0(), abelian.model.x0());
    for (int i = q.min_order(); i <= q.trunc_order(); ++i)
    {
      coeffs.push_back(ComplexMatrix::Constant(1, 1, q[i](k, k)));
    }
    const IrregularSeed s1 = solve_irregular_seed(LaurentSeries(q.min_order(), coeffs, true), abelian.order);
    for (const auto &sample : t.samples)
    {
      for (int i = 1; i <= abelian.order; ++i)
      {
        ASSERT_LT(std::abs(sample.c[i](k, k) - s1.c[i](0, 0)), 1e-12);
        ASSERT_EQ(sample.c[i](k, 1 - k), Complex(0.0));
      }
    }
    // Psi_0 entry k solves psi' = p_k psi with p_0 = u = e^x and p_1 = x.
    const auto &last = t.samples.back();
    const double x = last.x;
    const Complex expected = k == 0 ? std::exp(std::exp(x) - 1.0) : std::exp(0.5 * x * x);
    EXPECT_LT(std::abs(last.psi0(k, k) - expected) / std::abs(expected), 1e-10);
  }
}

}  // namespace
}  // namespace pqs
