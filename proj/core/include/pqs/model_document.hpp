// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_MODEL_DOCUMENT_HPP
#define PQS_MODEL_DOCUMENT_HPP

#include <string>
#include <string_view>

#include "pqs/pair_model.hpp"

namespace pqs
{

// Model documents are JSON objects:
//
//   {
//     "dimension": 2, "m": 0, "n": -2,
//     "state": ["a", "b"],
//     "x0": 1.0,
//     "u0": ["2", "0.5-1i"],
//     "vector_field": ["a*b/x", "-b"],
//     "Q": {"-2": [["a", "0"], ["0", "-a"]], ...},
//     "P": {"0": [["b", "1"], ["0", "0"]]}
//   }
//
// Optional "name" and "description" strings are accepted and ignored. Any
// other key is a SchemaError. Error messages start with a JSON pointer to the
// offending value.
PairDefinition parse_model_definition(std::string_view text);
PairModel parse_model(std::string_view text);

// Reads a document from disk. Throws IoError if the file can't be read.
PairModel load_model_file(const std::string &path);

// Canonical document text (keys sorted, two-space indent, trailing LF).
// Parsing it back yields an identical definition.
std::string serialize_model(const PairDefinition &def);

// "a+bi" with 17 significant digits; purely real values print as "a".
std::string format_complex(Complex z);

// Parses a complex literal such as "1.5", "-2i" or "0.5-1e-3i".
Complex parse_complex(std::string_view text);

}  // namespace pqs

#endif  // PQS_MODEL_DOCUMENT_HPP
