// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include "pqs/model_document.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pqs/error.hpp"

namespace pqs
{

namespace
{

using nlohmann::json;

[[noreturn]] void schema_error(const std::string &path, const std::string &what)
{
  throw Error(ErrorCode::SchemaError, (path.empty() ? std::string("/") : path) + ": " + what);
}

const json &require(const json &doc, const char *key)
{
  const auto it = doc.find(key);
  if (it == doc.end())
  {
    schema_error(std::string("/") + key, "missing required key");
  }
  return *it;
}

int get_int(const json &v, const std::string &path)
{
  if (!v.is_number_integer())
  {
    schema_error(path, "expected an integer");
  }
  const auto value = v.get<long long>();
  if (value < -1000000 || value > 1000000)
  {
    schema_error(path, "integer out of range");
  }
  return static_cast<int>(value);
}

const std::string &get_string(const json &v, const std::string &path)
{
  if (!v.is_string())
  {
    schema_error(path, "expected a string");
  }
  return v.get_ref<const std::string &>();
}

// Re-raises expression errors with the document path in front.
Expression parse_at(const json &v, const std::string &path)
{
  const std::string &text = get_string(v, path);
  try
  {
    return parse_expression(text);
  }
  catch (const Error &e)
  {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

ExpressionMatrix parse_matrix(const json &v, int dim, const std::string &path)
{
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
  {
    schema_error(path, "expected an array of " + std::to_string(dim) + " rows");
  }
  ExpressionMatrix out;
  out.reserve(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
  for (int r = 0; r < dim; ++r)
  {
    const std::string row_path = path + "/" + std::to_string(r);
    const json &row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
    {
      schema_error(row_path, "expected an array of " + std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c)
    {
      out.push_back(parse_at(row[static_cast<std::size_t>(c)], row_path + "/" + std::to_string(c)));
    }
  }
  return out;
}

std::map<int, ExpressionMatrix> parse_family(const json &v, int dim, const std::string &path)
{
  if (!v.is_object())
  {
    schema_error(path, "expected an object mapping orders to matrices");
  }
  std::map<int, ExpressionMatrix> out;
  for (const auto &[key, value] : v.items())
  {
    const std::string entry_path = path + "/" + key;
    int order = 0;
    const char *first = key.data();
    const char *last = key.data() + key.size();
    const auto [ptr, ec] = std::from_chars(first, last, order);
    if (key.empty() || ec != std::errc() || ptr != last)
    {
      schema_error(entry_path, "order key is not an integer");
    }
    if (!out.emplace(order, parse_matrix(value, dim, entry_path)).second)
    {
      schema_error(entry_path, "duplicate order");
    }
  }
  return out;
}

std::string format_double(double v)
{
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), end);
}

json matrix_to_json(const ExpressionMatrix &m, int dim)
{
  json rows = json::array();
  for (int r = 0; r < dim; ++r)
  {
    json row = json::array();
    for (int c = 0; c < dim; ++c)
    {
      row.push_back(m[static_cast<std::size_t>(r * dim + c)].to_string());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json family_to_json(const std::map<int, ExpressionMatrix> &family, int dim)
{
  json out = json::object();
  for (const auto &[order, m] : family)
  {
    out[std::to_string(order)] = matrix_to_json(m, dim);
  }
  return out;
}

}  // namespace

Complex parse_complex(std::string_view text)
{
  const Expression e = parse_expression(text);
  if (e.kind() != Expression::Kind::Literal)
  {
    throw Error(ErrorCode::SyntaxError, "not a complex literal: '" + std::string(text) + "'");
  }
  return e.value();
}

std::string format_complex(Complex z)
{
  if (z.imag() == 0.0 && !std::signbit(z.imag()))
  {
    return format_double(z.real());
  }
  std::string s = format_double(z.real());
  s += std::signbit(z.imag()) ? "-" : "+";
  s += format_double(std::abs(z.imag()));
  s += 'i';
  return s;
}

PairDefinition parse_model_definition(std::string_view text)
{
  json doc;
  try
  {
    doc = json::parse(text.begin(), text.end());
  }
  catch (const json::parse_error &e)
  {
    schema_error("", std::string("malformed JSON (") + e.what() + ")");
  }
  if (!doc.is_object())
  {
    schema_error("", "document must be an object");
  }
  static const std::array<const char *, 11> known = {"dimension", "m",  "n", "state", "x0",   "u0",
                                                      "vector_field", "P", "Q", "name", "description"};
  for (const auto &[key, value] : doc.items())
  {
    bool ok = false;
    for (const char *k : known)
    {
      ok = ok || key == k;
    }
    if (!ok)
    {
      schema_error("/" + key, "unknown key");
    }
  }

  PairDefinition def;
  def.dim = get_int(require(doc, "dimension"), "/dimension");
  if (def.dim < 1 || def.dim > 64)
  {
    schema_error("/dimension", "must be between 1 and 64");
  }
  def.m = get_int(require(doc, "m"), "/m");
  def.n = get_int(require(doc, "n"), "/n");

  const json &state = require(doc, "state");
  if (!state.is_array())
  {
    schema_error("/state", "expected an array of identifiers");
  }
  for (std::size_t k = 0; k < state.size(); ++k)
  {
    def.state_names.push_back(get_string(state[k], "/state/" + std::to_string(k)));
  }

  const json &x0 = require(doc, "x0");
  if (!x0.is_number())
  {
    schema_error("/x0", "expected a number");
  }
  def.x0 = x0.get<double>();
  if (!std::isfinite(def.x0))
  {
    schema_error("/x0", "must be finite");
  }

  const json &u0 = require(doc, "u0");
  if (!u0.is_array())
  {
    schema_error("/u0", "expected an array of complex literals");
  }
  for (std::size_t k = 0; k < u0.size(); ++k)
  {
    const std::string path = "/u0/" + std::to_string(k);
    const Expression e = parse_at(u0[k], path);
    if (e.kind() != Expression::Kind::Literal)
    {
      schema_error(path, "expected a complex literal");
    }
    def.u0.push_back(e.value());
  }

  const json &field = require(doc, "vector_field");
  if (!field.is_array())
  {
    schema_error("/vector_field", "expected an array of expressions");
  }
  for (std::size_t k = 0; k < field.size(); ++k)
  {
    def.vector_field.push_back(parse_at(field[k], "/vector_field/" + std::to_string(k)));
  }

  def.p = parse_family(require(doc, "P"), def.dim, "/P");
  def.q = parse_family(require(doc, "Q"), def.dim, "/Q");
  return def;
}

PairModel parse_model(std::string_view text)
{
  return PairModel(parse_model_definition(text));
}

PairModel load_model_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string serialize_model(const PairDefinition &def)
{
  json doc = json::object();
  doc["dimension"] = def.dim;
  doc["m"] = def.m;
  doc["n"] = def.n;
  doc["state"] = def.state_names;
  doc["x0"] = def.x0;
  json u0 = json::array();
  for (const Complex &z : def.u0)
  {
    u0.push_back(format_complex(z));
  }
  doc["u0"] = std::move(u0);
  json field = json::array();
  for (const Expression &e : def.vector_field)
  {
    field.push_back(e.to_string());
  }
  doc["vector_field"] = std::move(field);
  doc["P"] = family_to_json(def.p, def.dim);
  doc["Q"] = family_to_json(def.q, def.dim);
  return doc.dump(2) + "\n";
}

}  // namespace pqs
