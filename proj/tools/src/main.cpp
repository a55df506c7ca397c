// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "pqs/cli.hpp"

int main(int argc, char **argv)
{
  std::ios::sync_with_stdio(false);
  const std::vector<std::string> args(argv + 1, argv + argc);
  return pqs::run_command(args, std::cout, std::cerr);
}
