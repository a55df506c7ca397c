// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include "pqs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "pqs/catalog.hpp"
#include "pqs/error.hpp"
#include "pqs/model_document.hpp"
#include "pqs/propagation.hpp"
#include "pqs/report.hpp"
#include "pqs/seed.hpp"

namespace pqs
{

namespace
{

using nlohmann::ordered_json;

struct ModelSource
{
  const CatalogEntry *entry = nullptr;
  std::optional<PairModel> model;
  std::string label;
};

ModelSource resolve_model(const std::string &name_or_path)
{
  ModelSource src;
  src.label = name_or_path;
  if (std::filesystem::exists(name_or_path))
  {
    src.model.emplace(load_model_file(name_or_path));
    return src;
  }
  for (const auto &name : catalog_names())
  {
    if (name == name_or_path)
    {
      src.entry = &catalog_get(name_or_path);
      src.model.emplace(src.entry->model);
      return src;
    }
  }
  throw Error(ErrorCode::IoError, "'" + name_or_path + "' is neither a readable file nor a catalog entry");
}

struct RunOptions
{
  std::string model;
  int order = 0;
  std::optional<double> x_end;
  int steps = 0;
  bool regular = false;
  bool irregular = false;
  CheckTolerances tol;
};

int order_for(const ModelSource &src, const RunOptions &o)
{
  if (o.order > 0)
  {
    return o.order;
  }
  return src.entry != nullptr ? src.entry->order : 8;
}

int steps_for(const ModelSource &src, const RunOptions &o)
{
  if (o.steps > 0)
  {
    return o.steps;
  }
  return src.entry != nullptr ? src.entry->steps : 1000;
}

double x_end_for(const ModelSource &src, const RunOptions &o)
{
  if (o.x_end)
  {
    return *o.x_end;
  }
  return src.entry != nullptr ? src.entry->x_end : src.model->x0() + 1.0;
}

// Log expansions are used for simple poles unless --irregular is given.
bool use_regular(const ModelSource &src, const RunOptions &o)
{
  if (o.regular && o.irregular)
  {
    throw Error(ErrorCode::InvalidArgument, "--regular and --irregular are mutually exclusive");
  }
  if (o.regular || o.irregular)
  {
    return o.regular;
  }
  return src.model->n() == -1;
}

SeedOptions seed_options(const RunOptions &o)
{
  SeedOptions s;
  s.seed_tol = o.tol.seed_tol;
  return s;
}

PropagationOptions propagation_options(const RunOptions &o)
{
  PropagationOptions p;
  p.ode_tol = o.tol.ode_tol;
  return p;
}

ordered_json matrix_json(const ComplexMatrix &m)
{
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
  {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
    {
      row.push_back(format_complex(m(r, c)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json series_json(const LaurentSeries &s)
{
  ordered_json out = ordered_json::object();
  for (int i = s.min_order(); i <= s.trunc_order(); ++i)
  {
    out[std::to_string(i)] = matrix_json(s[i]);
  }
  return out;
}

ordered_json norms_json(const std::vector<OrderNorm> &norms)
{
  ordered_json out = ordered_json::object();
  for (const auto &n : norms)
  {
    out[std::to_string(n.order)] = n.norm;
  }
  return out;
}

struct SeedRun
{
  bool regular = false;
  std::optional<IrregularSeed> irregular;
  std::optional<RegularSeed> log;
  double residual = 0.0;
};

SeedRun run_seed(const ModelSource &src, const RunOptions &o)
{
  SeedRun run;
  run.regular = use_regular(src, o);
  const int order = order_for(src, o);
  if (run.regular)
  {
    run.log.emplace(solve_regular_seed(*src.model, order, seed_options(o)));
    run.residual = max_norm(run.log->residual_report);
  }
  else
  {
    run.irregular.emplace(solve_irregular_seed(*src.model, order, seed_options(o)));
    run.residual = max_norm(run.irregular->residual_report);
  }
  return run;
}

Trajectory run_trajectory(const SeedRun &seed, const ModelSource &src, const RunOptions &o)
{
  const double x_end = x_end_for(src, o);
  const int steps = steps_for(src, o);
  if (seed.regular)
  {
    return evolve_expansion_regular(*seed.log, *src.model, x_end, steps, propagation_options(o));
  }
  return evolve_expansion(*seed.irregular, *src.model, x_end, steps, propagation_options(o));
}

int cmd_seed(const RunOptions &o, std::ostream &out)
{
  const ModelSource src = resolve_model(o.model);
  const SeedRun run = run_seed(src, o);
  ordered_json doc;
  doc["model"] = src.label;
  doc["x0"] = src.model->x0();
  if (run.regular)
  {
    const RegularSeed &s = *run.log;
    doc["kind"] = "regular";
    doc["order"] = s.order;
    ordered_json c = ordered_json::object();
    for (std::size_t j = 0; j < s.c.size(); ++j)
    {
      c[std::to_string(j)] = series_json(s.c[j]);
    }
    doc["C"] = std::move(c);
    doc["resonant_orders"] = s.resonant_orders;
    doc["residuals"] = norms_json(s.residual_report);
    doc["normalization"] = s.normalization;
  }
  else
  {
    const IrregularSeed &s = *run.irregular;
    doc["kind"] = "irregular";
    doc["order"] = s.order;
    doc["n"] = s.n;
    doc["C"] = series_json(s.c);
    doc["Omega"] = series_json(s.omega);
    doc["residuals"] = norms_json(s.residual_report);
    doc["omega_offdiag"] = s.omega_offdiag;
    doc["sweeps"] = s.sweeps;
    doc["newton_steps"] = s.newton_steps;
    doc["normalization"] = s.normalization;
  }
  const bool ok = run.residual < o.tol.seed_tol;
  doc["max_residual"] = run.residual;
  doc["seed_tol"] = o.tol.seed_tol;
  doc["status"] = ok ? "PASS" : "FAIL";
  out << doc.dump(2) << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_evolve(const RunOptions &o, const std::string &csv_path, const std::string &summary_path,
               std::ostream &out)
{
  const ModelSource src = resolve_model(o.model);
  const SeedRun seed = run_seed(src, o);
  Trajectory traj = run_trajectory(seed, src, o);
  const ConservationReport cons = conservation_laws(traj, propagation_options(o));
  const RunSummary summary = summarize_run(traj, cons, seed.residual, o.tol);

  RunMetadata meta;
  meta.model = src.label;
  meta.hash = model_hash(src.model->definition());
  meta.kind = seed.regular ? "regular" : "irregular";
  meta.order = order_for(src, o);
  meta.steps = steps_for(src, o);
  meta.x0 = src.model->x0();
  meta.x_end = x_end_for(src, o);
  meta.tolerances = o.tol;

  if (!csv_path.empty())
  {
    write_text_file(csv_path, format_csv(traj, src.model->definition().state_names, cons));
  }
  const std::string json = format_summary_json(meta, summary);
  if (!summary_path.empty())
  {
    write_text_file(summary_path, json);
  }
  out << json;
  return summary.pass() ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const RunOptions &o, int points, std::ostream &out)
{
  if (points < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "--points must be positive");
  }
  const ModelSource src = resolve_model(o.model);
  const PairModel &model = *src.model;
  PropagationOptions prop = propagation_options(o);
  const StateRun run = evolve_state(model, x_end_for(src, o), steps_for(src, o), prop);
  const std::size_t count = run.grid.size();
  double worst = 0.0;
  bool header = false;
  std::size_t last = count;
  for (int k = 0; k < points; ++k)
  {
    const std::size_t i =
        points == 1 ? 0 : (static_cast<std::size_t>(k) * (count - 1) + static_cast<std::size_t>(points - 1) / 2) /
                              static_cast<std::size_t>(points - 1);
    if (i == last)
    {
      continue;
    }
    last = i;
    const ComplexVector &u = run.u[i];
    const auto norms =
        compatibility_residual(model, std::span<const Complex>(u.data(), static_cast<std::size_t>(u.size())),
                               run.grid[i]);
    if (!header)
    {
      out << "x";
      for (const auto &n : norms)
      {
        out << ",order[" << n.order << "]";
      }
      out << ",max\n";
      header = true;
    }
    out << format_number(run.grid[i]);
    for (const auto &n : norms)
    {
      out << ',' << format_number(n.norm);
    }
    const double m = max_norm(norms);
    out << ',' << format_number(m) << '\n';
    worst = std::max(worst, m);
  }
  const bool ok = worst < o.tol.compat_tol;
  out << "summary: max_residual=" << format_number(worst) << " tolerance=" << format_number(o.tol.compat_tol)
      << " status=" << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_conserve(const RunOptions &o, std::ostream &out)
{
  const ModelSource src = resolve_model(o.model);
  const SeedRun seed = run_seed(src, o);
  const Trajectory traj = run_trajectory(seed, src, o);
  const ConservationReport cons = conservation_laws(traj, propagation_options(o));
  out << "order,drift,eigenvalue_drift\n";
  for (std::size_t k = 0; k < cons.orders.size(); ++k)
  {
    out << cons.orders[k] << ',' << format_number(cons.drift[k]) << ',' << format_number(cons.eigenvalue_drift[k])
        << '\n';
  }
  const bool ok = cons.max_drift < o.tol.j_tol && cons.max_eigenvalue_drift < o.tol.j_tol;
  out << "summary: max_drift=" << format_number(cons.max_drift)
      << " max_eigenvalue_drift=" << format_number(cons.max_eigenvalue_drift)
      << " tolerance=" << format_number(o.tol.j_tol) << " status=" << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_recompose(const RunOptions &o, const std::string &lambda_text, std::ostream &out, std::ostream &err)
{
  const Complex lambda = parse_complex(lambda_text);
  const ModelSource src = resolve_model(o.model);
  if (!use_regular(src, o))
  {
    throw Error(ErrorCode::UnsupportedLambdaEvaluation, "Lambda is evaluated only for log (simple-pole) expansions");
  }
  if (std::abs(lambda) > 0.5 || std::abs(lambda) < 0.01)
  {
    err << "warning: |lambda| = " << std::abs(lambda) << " lies outside the annulus [0.01, 0.5]\n";
  }
  const SeedRun seed = run_seed(src, o);
  Recomposition r;
  double x = src.model->x0();
  if (o.x_end)
  {
    const Trajectory traj = run_trajectory(seed, src, o);
    r = recompose_solution(*src.model, traj, traj.samples.size() - 1, lambda);
    x = traj.samples.back().x;
  }
  else
  {
    r = recompose_solution(*src.model, *seed.log, lambda);
  }
  ordered_json doc;
  doc["model"] = src.label;
  doc["x"] = x;
  doc["lambda"] = format_complex(lambda);
  doc["order"] = order_for(src, o);
  doc["psi"] = matrix_json(r.psi);
  doc["lambda_residual"] = r.lambda_residual;
  doc["x_residual"] = r.x_residual;
  doc["lambda_residual_reduced"] = r.lambda_residual_reduced;
  doc["x_residual_reduced"] = r.x_residual_reduced;
  out << doc.dump(2) << '\n';
  const bool finite = std::isfinite(r.lambda_residual) && std::isfinite(r.x_residual);
  return finite ? kExitOk : kExitCheckFailed;
}

int cmd_catalog(bool list, const std::string &export_name, const std::string &out_path, std::ostream &out)
{
  if (list == !export_name.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "catalog needs exactly one of --list or --export NAME");
  }
  if (list)
  {
    for (const auto &name : catalog_names())
    {
      out << name << '\n';
    }
    return kExitOk;
  }
  const std::string doc = serialize_model(catalog_get(export_name).model.definition());
  if (out_path.empty())
  {
    out << doc;
  }
  else
  {
    write_text_file(out_path, doc);
  }
  return kExitOk;
}

int exit_code_for(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::SchemaError:
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownSymbol:
    case ErrorCode::UnknownEntry:
    case ErrorCode::InvalidArgument:
    case ErrorCode::IoError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ModelNotTheorem2:
    case ErrorCode::UnsupportedLambdaEvaluation:
      return kExitUsage;
    default:
      return kExitCheckFailed;
  }
}

void add_run_options(CLI::App *cmd, RunOptions &o, bool with_trajectory)
{
  cmd->add_option("--model", o.model, "Model document path or catalog entry name")->required();
  cmd->add_option("--order", o.order, "Truncation order M (default: catalog recommendation or 8)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--regular", o.regular, "Use the log expansion at a simple pole");
  cmd->add_flag("--irregular", o.irregular, "Use the exponential expansion even when n = -1");
  cmd->add_option("--seed-tol", o.tol.seed_tol, "Seed residual tolerance");
  if (with_trajectory)
  {
    cmd->add_option("--x-end", o.x_end, "End of the x interval");
    cmd->add_option("--steps", o.steps, "Integration steps")->check(CLI::PositiveNumber);
    cmd->add_option("--ode-tol", o.tol.ode_tol, "Per-step integrator error tolerance");
    cmd->add_option("--f-tol", o.tol.f_tol, "F drift tolerance");
    cmd->add_option("--h-tol", o.tol.h_tol, "H residual tolerance");
    cmd->add_option("--j-tol", o.tol.j_tol, "Conservation drift tolerance");
    cmd->add_option("--compat-tol", o.tol.compat_tol, "Compatibility residual tolerance");
  }
}

}  // namespace

int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Series expansions of P-Q pairs near singular points", "pqs"};
  app.require_subcommand(1);

  RunOptions seed_o;
  auto *seed = app.add_subcommand("seed", "Solve the frozen-x expansion at x0");
  add_run_options(seed, seed_o, false);

  RunOptions evolve_o;
  std::string csv_path;
  std::string summary_path;
  auto *evolve = app.add_subcommand("evolve", "Propagate the expansion in x and report monitors");
  add_run_options(evolve, evolve_o, true);
  evolve->add_option("--csv", csv_path, "Write the per-sample table here");
  evolve->add_option("--summary", summary_path, "Also write the JSON summary here");

  RunOptions verify_o;
  int points = 20;
  auto *verify = app.add_subcommand("verify", "Compatibility residual along the state trajectory");
  verify->add_option("--model", verify_o.model, "Model document path or catalog entry name")->required();
  verify->add_option("--x-end", verify_o.x_end, "End of the x interval");
  verify->add_option("--steps", verify_o.steps, "Integration steps")->check(CLI::PositiveNumber);
  verify->add_option("--points", points, "Number of sample points");
  verify->add_option("--compat-tol", verify_o.tol.compat_tol, "Compatibility residual tolerance");
  verify->add_option("--ode-tol", verify_o.tol.ode_tol, "Per-step integrator error tolerance");

  RunOptions conserve_o;
  auto *conserve = app.add_subcommand("conserve", "Drift of the conserved matrices J");
  add_run_options(conserve, conserve_o, true);

  RunOptions recompose_o;
  std::string lambda_text;
  auto *recompose = app.add_subcommand("recompose", "Truncated Psi and its equation residuals at lambda");
  add_run_options(recompose, recompose_o, true);
  recompose->add_option("--lambda", lambda_text, "Complex lambda, e.g. 0.1 or 0.05+0.02i")->required();

  bool list = false;
  std::string export_name;
  std::string export_path;
  auto *catalog = app.add_subcommand("catalog", "List or export the built-in models");
  catalog->add_flag("--list", list, "Print entry names");
  catalog->add_option("--export", export_name, "Print the model document of an entry");
  catalog->add_option("--out", export_path, "Write the exported document here");

  try
  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  }
  catch (const CLI::Success &e)
  {
    app.exit(e, out, err);
    return kExitOk;
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try
  {
    if (seed->parsed())
    {
      return cmd_seed(seed_o, out);
    }
    if (evolve->parsed())
    {
      return cmd_evolve(evolve_o, csv_path, summary_path, out);
    }
    if (verify->parsed())
    {
      return cmd_verify(verify_o, points, out);
    }
    if (conserve->parsed())
    {
      return cmd_conserve(conserve_o, out);
    }
    if (recompose->parsed())
    {
      return cmd_recompose(recompose_o, lambda_text, out, err);
    }
    return cmd_catalog(list, export_name, export_path, out);
  }
  catch (const Error &e)
  {
    err << "pqs: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  catch (const std::exception &e)
  {
    err << "pqs: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace pqs
