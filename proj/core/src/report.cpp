// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include "pqs/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "pqs/error.hpp"
#include "pqs/model_document.hpp"

namespace pqs
{

std::uint64_t fnv1a64(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes)
  {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string model_hash(const PairDefinition &def)
{
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize_model(def))));
  return buf.data();
}

std::string format_number(double v)
{
  std::array<char, 64> buf{};
  const auto end = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17).ptr;
  return std::string(buf.data(), end);
}

namespace
{

std::vector<int> orders_of(const std::vector<OrderNorm> &norms)
{
  std::vector<int> out;
  for (const auto &n : norms)
  {
    out.push_back(n.order);
  }
  return out;
}

std::string norm_at(const std::vector<OrderNorm> &norms, int order)
{
  for (const auto &n : norms)
  {
    if (n.order == order)
    {
      return format_number(n.norm);
    }
  }
  return {};
}

std::vector<int> h_orders(const Trajectory &t)
{
  for (const auto &s : t.samples)
  {
    if (!s.h_norms.empty())
    {
      return orders_of(s.h_norms);
    }
  }
  return {};
}

}  // namespace

std::string format_csv(const Trajectory &trajectory, const std::vector<std::string> &state_names,
                       const ConservationReport &conservation)
{
  std::string out;
  const auto &samples = trajectory.samples;
  const std::vector<int> f_orders = samples.empty() ? std::vector<int>{} : orders_of(samples.front().f_norms);
  const std::vector<int> hs = h_orders(trajectory);
  const std::vector<int> c_orders =
      samples.empty() ? std::vector<int>{} : orders_of(samples.front().compat_norms);
  const int dim = trajectory.dim;

  std::vector<std::string> header{"x"};
  for (const auto &name : state_names)
  {
    header.push_back(name + "_re");
    header.push_back(name + "_im");
  }
  for (int i : f_orders)
  {
    header.push_back("F[" + std::to_string(i) + "]");
  }
  for (int i : hs)
  {
    header.push_back("H[" + std::to_string(i) + "]");
  }
  for (int i : c_orders)
  {
    header.push_back("compat[" + std::to_string(i) + "]");
  }
  for (int k : conservation.orders)
  {
    for (int r = 0; r < dim; ++r)
    {
      for (int c = 0; c < dim; ++c)
      {
        const std::string base = "J[" + std::to_string(k) + "]_" + std::to_string(r + 1) + std::to_string(c + 1);
        header.push_back(base + "_re");
        header.push_back(base + "_im");
      }
    }
  }
  header.push_back("det_psi0_re");
  header.push_back("det_psi0_im");

  auto append_row = [&out](const std::vector<std::string> &cells) {
    for (std::size_t k = 0; k < cells.size(); ++k)
    {
      if (k > 0)
      {
        out += ',';
      }
      out += cells[k];
    }
    out += '\n';
  };
  append_row(header);

  std::vector<std::string> row;
  for (std::size_t s = 0; s < samples.size(); ++s)
  {
    const auto &sm = samples[s];
    row.clear();
    row.push_back(format_number(sm.x));
    for (Eigen::Index k = 0; k < sm.u.size(); ++k)
    {
      row.push_back(format_number(sm.u(k).real()));
      row.push_back(format_number(sm.u(k).imag()));
    }
    for (int i : f_orders)
    {
      row.push_back(norm_at(sm.f_norms, i));
    }
    for (int i : hs)
    {
      row.push_back(norm_at(sm.h_norms, i));
    }
    for (int i : c_orders)
    {
      row.push_back(norm_at(sm.compat_norms, i));
    }
    for (std::size_t k = 0; k < conservation.orders.size(); ++k)
    {
      const bool have = s < conservation.j.size();
      for (int r = 0; r < dim; ++r)
      {
        for (int c = 0; c < dim; ++c)
        {
          if (have)
          {
            const Complex v = conservation.j[s][k](r, c);
            row.push_back(format_number(v.real()));
            row.push_back(format_number(v.imag()));
          }
          else
          {
            row.emplace_back();
            row.emplace_back();
          }
        }
      }
    }
    const Complex det = sm.psi0.determinant();
    row.push_back(format_number(det.real()));
    row.push_back(format_number(det.imag()));
    append_row(row);
  }
  return out;
}

namespace
{

std::vector<std::string_view> split_line(std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true)
  {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos)
    {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

CsvTable parse_csv(std::string_view text)
{
  CsvTable table;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size())
  {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
    {
      end = text.size();
    }
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto cells = split_line(line);
    if (line_no == 1)
    {
      for (auto c : cells)
      {
        table.header.emplace_back(c);
      }
      continue;
    }
    if (cells.size() != table.header.size())
    {
      throw Error(ErrorCode::SchemaError, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(table.header.size()) + " cells");
    }
    std::vector<std::optional<double>> row;
    row.reserve(cells.size());
    for (auto c : cells)
    {
      if (c.empty())
      {
        row.emplace_back();
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size())
      {
        throw Error(ErrorCode::SchemaError,
                    "line " + std::to_string(line_no) + ": not a number: '" + std::string(c) + "'");
      }
      row.emplace_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

bool RunSummary::pass() const
{
  for (const auto &[name, ok] : checks)
  {
    if (!ok)
    {
      return false;
    }
  }
  return true;
}

RunSummary summarize_run(Trajectory &trajectory, const ConservationReport &conservation, double seed_residual,
                         const CheckTolerances &tol)
{
  RunSummary s;
  s.seed_residual = seed_residual;
  s.f_max = max_f_norm(trajectory);
  s.h_max = residual_H(trajectory).max;
  s.j_drift = conservation.max_drift;
  s.j_eigenvalue_drift = conservation.max_eigenvalue_drift;
  s.compat_max = max_compat_norm(trajectory);
  s.c0_deviation = max_c0_deviation(trajectory);
  s.abel_deviation = abel_deviation(trajectory);
  s.ode_error = trajectory.stats.global_error_estimate;
  s.checks = {
      {"seed_residual", s.seed_residual < tol.seed_tol},
      {"f_drift", s.f_max < tol.f_tol},
      {"h_residual", s.h_max < tol.h_tol},
      {"j_drift", s.j_drift < tol.j_tol},
      {"j_eigenvalue_drift", s.j_eigenvalue_drift < tol.j_tol},
      {"compatibility", s.compat_max < tol.compat_tol},
      {"c0_deviation", s.c0_deviation < tol.c0_tol},
      {"abel", s.abel_deviation < tol.abel_tol},
  };
  return s;
}

std::string format_summary_json(const RunMetadata &meta, const RunSummary &summary)
{
  using nlohmann::ordered_json;
  ordered_json doc;
  ordered_json m;
  m["model"] = meta.model;
  m["model_hash"] = meta.hash;
  m["kind"] = meta.kind;
  m["order"] = meta.order;
  m["steps"] = meta.steps;
  m["x0"] = meta.x0;
  m["x_end"] = meta.x_end;
  ordered_json t;
  t["seed_tol"] = meta.tolerances.seed_tol;
  t["f_tol"] = meta.tolerances.f_tol;
  t["h_tol"] = meta.tolerances.h_tol;
  t["j_tol"] = meta.tolerances.j_tol;
  t["compat_tol"] = meta.tolerances.compat_tol;
  t["c0_tol"] = meta.tolerances.c0_tol;
  t["abel_tol"] = meta.tolerances.abel_tol;
  t["ode_tol"] = meta.tolerances.ode_tol;
  m["tolerances"] = std::move(t);
  doc["metadata"] = std::move(m);
  ordered_json s;
  s["seed_residual"] = summary.seed_residual;
  s["f_max"] = summary.f_max;
  s["h_max"] = summary.h_max;
  s["j_drift"] = summary.j_drift;
  s["j_eigenvalue_drift"] = summary.j_eigenvalue_drift;
  s["compat_max"] = summary.compat_max;
  s["c0_deviation"] = summary.c0_deviation;
  s["abel_deviation"] = summary.abel_deviation;
  s["ode_error_estimate"] = summary.ode_error;
  ordered_json checks;
  for (const auto &[name, ok] : summary.checks)
  {
    checks[name] = ok ? "PASS" : "FAIL";
  }
  s["checks"] = std::move(checks);
  s["status"] = summary.pass() ? "PASS" : "FAIL";
  doc["summary"] = std::move(s);
  return doc.dump(2) + "\n";
}

void write_text_file(const std::string &path, std::string_view text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
  {
    throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
  }
}

}  // namespace pqs
