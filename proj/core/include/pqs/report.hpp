// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_REPORT_HPP
#define PQS_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pqs/catalog.hpp"
#include "pqs/propagation.hpp"

namespace pqs
{

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// Hash of the canonical document text, as 16 lowercase hex digits.
std::string model_hash(const PairDefinition &def);

// 17 significant digits, which reads back to the same double.
std::string format_number(double v);

//
// Per-sample CSV table. Columns, in order:
//
//   x
//   <state>_re, <state>_im          for every state variable
//   F[i]                            seed-equation residual per order
//   H[i]                            empty on the two samples at each end
//   compat[i]                       compatibility residual per order
//   J[k]_<r><c>_re, J[k]_<r><c>_im  conserved matrices, row-major
//   det_psi0_re, det_psi0_im
//
// Rows end with LF. Output is deterministic for identical inputs.
//
std::string format_csv(const Trajectory &trajectory, const std::vector<std::string> &state_names,
                       const ConservationReport &conservation);

struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};

// Reads tables written by format_csv. Throws SchemaError on ragged rows or
// unparsable numbers.
CsvTable parse_csv(std::string_view text);

struct RunMetadata
{
  std::string model;  // catalog name or file path
  std::string hash;
  std::string kind;   // "irregular" or "regular"
  int order = 0;
  int steps = 0;
  double x0 = 0.0;
  double x_end = 0.0;
  CheckTolerances tolerances;
};

struct RunSummary
{
  double seed_residual = 0.0;
  double f_max = 0.0;
  double h_max = 0.0;
  double j_drift = 0.0;
  double j_eigenvalue_drift = 0.0;
  double compat_max = 0.0;
  double c0_deviation = 0.0;
  double abel_deviation = 0.0;
  double ode_error = 0.0;
  std::vector<std::pair<std::string, bool>> checks;

  bool pass() const;
};

// Fills every monitor of an evolved trajectory (including H, so the
// trajectory is updated) and flags each one against the tolerances.
RunSummary summarize_run(Trajectory &trajectory, const ConservationReport &conservation, double seed_residual,
                         const CheckTolerances &tol);

std::string format_summary_json(const RunMetadata &meta, const RunSummary &summary);

// Writes text verbatim (binary mode). Throws IoError.
void write_text_file(const std::string &path, std::string_view text);

}  // namespace pqs

#endif  // PQS_REPORT_HPP
