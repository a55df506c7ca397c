// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_CLI_HPP
#define PQS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace pqs
{

// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Runs one pqs invocation. `args` excludes the program name. Results go to
// `out`, diagnostics to `err`.
int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace pqs

#endif  // PQS_CLI_HPP
