// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include "floquet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iostream>
#include <limits>
#include "floquet/error.hpp"
#include "floquet/oracles.hpp"
#include "floquet/timedomain.hpp"

namespace floquet
{

namespace fs = std::filesystem;

namespace
{

cplx ComplexFromJson(const Json &j)
{
  if (j.is_number())
  {
    return j.get<double>();
  }
  if (j.is_array() && j.size() == 2)
  {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw Error(ErrorKind::InvalidArgument, "expected a number or [re, im], got " + j.dump());
}

Json ComplexToJson(cplx z) { return Json::array({z.real(), z.imag()}); }

template <typename T>
T Get(const Json &j, const std::string &key, T fallback)
{
  return j.contains(key) && !j[key].is_null() ? j[key].get<T>() : fallback;
}

Json Section(const Json &cfg, const std::string &key)
{
  return cfg.contains(key) && cfg[key].is_object() ? cfg[key] : Json::object();
}

std::vector<int> IntRange(int lo, int hi, int step)
{
  std::vector<int> v;
  for (int x = lo; x <= hi; x += step)
  {
    v.push_back(x);
  }
  return v;
}

Provenance ProvenanceOf(const ProblemSettings &s, double dt = 0.0)
{
  return {s.kappa.preset, s.kappa.eps, dt};
}

// Columns appended to every CSV row.
const std::vector<std::string> kProvenanceColumns = {"K", "p", "bc", "kappa0", "kappa", "eps",
                                                     "dt"};

std::vector<std::string> WithProvenance(std::vector<std::string> head)
{
  head.insert(head.end(), kProvenanceColumns.begin(), kProvenanceColumns.end());
  return head;
}

void AppendProvenance(std::vector<CsvValue> &row, int K, int p, const ProblemSettings &s,
                      double eps, double dt)
{
  row.insert(row.end(), {static_cast<long long>(K), static_cast<long long>(p), s.bc,
                         s.bc == "absorbing" ? s.kappa0 : 0.0, s.kappa.preset, eps, dt});
}

Status Worst(Status a, Status b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

ExperimentOutput Output(const std::string &name)
{
  ExperimentOutput out;
  out.name = name;
  return out;
}

double SafeNumber(double x) { return std::isfinite(x) ? x : -1.0; }

Json DoubleOrNull(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Modulation ProblemSettings::BuildModulation() const { return Modulation::Preset(kappa); }

HarmonicProblem ProblemSettings::Build() const { return Build(K, p); }

HarmonicProblem ProblemSettings::Build(int K_, int p_) const
{
  return HarmonicProblem(BuildModulation(), BoundaryCondition::Parse(bc, kappa0), K_, p_,
                         boundary_toeplitz);
}

ProblemSettings ProblemSettings::FromJson(const Json &cfg)
{
  ProblemSettings s;
  const Json k = Section(cfg, "kappa");
  s.kappa.preset = Get<std::string>(k, "preset", s.kappa.preset);
  s.kappa.period = Get<double>(k, "T", s.kappa.period);
  s.kappa.eps = Get<double>(k, "eps", s.kappa.eps);
  s.kappa.value = Get<double>(k, "value", s.kappa.value);
  if (k.contains("coefficients"))
  {
    for (const Json &c : k["coefficients"])
    {
      s.kappa.coefficients.push_back(ComplexFromJson(c));
    }
  }
  s.bc = Get<std::string>(cfg, "bc", s.bc);
  s.kappa0 = Get<double>(cfg, "kappa0", s.kappa0);
  s.K = Get<int>(cfg, "K", s.K);
  s.p = Get<int>(cfg, "p", s.p);
  s.boundary_toeplitz = Get<bool>(cfg, "boundary_toeplitz", s.boundary_toeplitz);
  return s;
}

Json ProblemSettings::ToJson() const
{
  Json k = {{"preset", kappa.preset}, {"T", kappa.period}, {"eps", kappa.eps}, {"value", kappa.value}};
  if (!kappa.coefficients.empty())
  {
    Json c = Json::array();
    for (const cplx &z : kappa.coefficients)
    {
      c.push_back(ComplexToJson(z));
    }
    k["coefficients"] = c;
  }
  return {{"kappa", k},   {"bc", bc}, {"kappa0", kappa0},
          {"K", K},       {"p", p},   {"boundary_toeplitz", boundary_toeplitz}};
}

Json DefaultConfig()
{
  ProblemSettings s;
  Json cfg = s.ToJson();
  cfg["margin"] = 1.0;
  cfg["seed"] = 1;
  cfg["workers"] = 1;
  cfg["dense_limit"] = 6000;
  cfg["dt"] = 1.0 / 400.0;
  cfg["periods"] = 5;
  cfg["converge"] = {{"K_values", IntRange(2, 20, 2)},
                     {"p_values", IntRange(2, 24, 2)},
                     {"K_sweep_p", 40},
                     {"p_sweep_K", 30},
                     {"K_ref", 30},
                     {"p_ref", 40},
                     {"target", nullptr},
                     {"coarse_K", 8},
                     {"coarse_p", 12},
                     {"radius", 0.1},
                     {"plateau", 1e-9},
                     {"min_factor", 2.0}};
  cfg["localize"] = {{"p_values", {4, 8, 12}}, {"check_p", {4}}, {"C", 0.0105}, {"band_lo", 4}};
  cfg["folding"] = {{"K_values", {8, 16, 32}}, {"l", 1}, {"target", {0.0, -0.44}},
                    {"ratio_pair", {16, 32}}, {"min_ratio", 2.0}};
  std::vector<double> grid;
  for (int i = 0; i <= 20; i++)
  {
    grid.push_back(i / 20.0);
  }
  const double level = AbsorbingLevel(0.5, 2.0);
  cfg["eps_path"] = {{"grid", grid},
                     {"kappa_r", 1.0},
                     {"starts", {{0.0, 0.0}, {kPi / 2, level}, {-kPi / 2, level}}},
                     {"radius", 0.5},
                     {"jump_constant", 5.0}};
  cfg["sturm"] = {{"K", 160}};
  cfg["time"] = {{"relative_tol", 1e-3}, {"energy_tol", 0.02}, {"stride", 1}};
  cfg["oracle"] = {{"absorbing_K", 5}, {"absorbing_p", 20}, {"neumann_K", 2},
                   {"neumann_p", 15},  {"neumann_count", 6}, {"tol_absorbing", 1e-6},
                   {"tol_neumann", 1e-8}};
  const Json exp_cos = {{"preset", "exp-cos"}, {"T", 1.0}, {"eps", 0.0}, {"value", 1.0}};
  cfg["experiments"] = {
      {"spectrum", {{"K", 20}, {"p", 10}}},
      {"validate-time", {{"kappa", exp_cos}, {"kappa0", 0.1}, {"K", 25}, {"p", 20}}},
      {"localize", {{"K", 30}}},
      {"folding", {{"kappa", exp_cos}, {"kappa0", 0.5}, {"p", 10}}},
      {"eps-path", {{"kappa", exp_cos}, {"kappa0", 0.5}, {"K", 10}, {"p", 10}}},
      {"diagnose", {{"K", 20}, {"p", 10}}},
  };
  return cfg;
}

Json ResolveConfig(const Json &cfg, const std::string &name, const Json &overrides)
{
  Json resolved = cfg;
  resolved.erase("experiments");
  if (cfg.contains("experiments") && cfg["experiments"].contains(name))
  {
    resolved.merge_patch(cfg["experiments"][name]);
  }
  resolved.merge_patch(overrides);
  return resolved;
}

cplx BelowOriginTarget(const HarmonicProblem &problem, double axis_tol)
{
  SolveOptions opt;
  opt.vectors = false;
  const SpectrumReport r = SolveSpectrum(problem, opt);
  const FloquetMode *best = nullptr;
  for (const FloquetMode &m : r.modes)
  {
    if (m.fold_index == 0 && std::abs(m.omega.real()) <= axis_tol && m.omega.imag() < -axis_tol &&
        (!best || m.omega.imag() > best->omega.imag()))
    {
      best = &m;
    }
  }
  if (!best)
  {
    throw Error(ErrorKind::NotFound, "no in-zone eigenvalue on the negative imaginary axis");
  }
  return best->omega;
}

void AnalyzeConvergence(ConvergenceResult &res)
{
  res.plateau_index = -1;
  for (std::size_t i = 0; i < res.cells.size(); i++)
  {
    if (!res.cells[i].gap && res.cells[i].error <= res.plateau_level)
    {
      res.plateau_index = static_cast<int>(i);
      break;
    }
  }
  const int last = res.plateau_index >= 0 ? res.plateau_index
                                          : static_cast<int>(res.cells.size()) - 1;
  res.strictly_decreasing = last >= 0;
  for (int i = 0; i <= last; i++)
  {
    if (res.cells[i].gap || (i > 0 && !(res.cells[i].error < res.cells[i - 1].error)))
    {
      res.strictly_decreasing = false;
    }
  }
  res.mean_factor = 0.0;
  if (last >= 1 && !res.cells[0].gap && !res.cells[last].gap)
  {
    const double hi = res.cells[0].error;
    // Zero error at the plateau cell would make the factor infinite.
    const double lo = std::max(res.cells[last].error, std::numeric_limits<double>::min());
    res.mean_factor = std::pow(hi / lo, 1.0 / last);
  }
  const bool ok = res.plateau_index >= 0 && res.strictly_decreasing &&
                  (res.plateau_index == 0 || res.mean_factor >= res.min_factor);
  res.status = ok ? Status::Pass : Status::Fail;
}

ConvergenceResult ConvergenceSweep(const ProblemSettings &s, const std::string &parameter,
                                   const std::vector<int> &values, int fixed, cplx reference,
                                   const ConvergenceOptions &options)
{
  if (parameter != "K" && parameter != "p")
  {
    throw Error(ErrorKind::InvalidArgument, "sweep parameter must be K or p");
  }
  ConvergenceResult res;
  res.parameter = parameter;
  res.fixed = fixed;
  res.reference = reference;
  res.target = reference;
  res.plateau_level = options.plateau_level;
  res.min_factor = options.min_factor;
  auto cell = [&](int value)
  {
    ConvergenceCell c;
    c.value = value;
    const int K = parameter == "K" ? value : fixed;
    const int p = parameter == "K" ? fixed : value;
    try
    {
      const FloquetMode m = SolveTargeted(s.Build(K, p), reference);
      c.omega = m.omega;
      c.error = std::abs(m.omega - reference);
      if (c.error > options.radius)
      {
        c.gap = true;
        c.note = "no eigenvalue within radius";
      }
    }
    catch (const Error &e)
    {
      c.gap = true;
      c.note = e.what();
      c.error = std::numeric_limits<double>::quiet_NaN();
    }
    return c;
  };
  const int workers = std::max(1, options.workers);
  for (std::size_t i = 0; i < values.size(); i += workers)
  {
    std::vector<std::future<ConvergenceCell>> batch;
    for (std::size_t j = i; j < std::min(values.size(), i + workers); j++)
    {
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, cell,
                                 values[j]));
    }
    for (auto &f : batch)
    {
      res.cells.push_back(f.get());
    }
  }
  AnalyzeConvergence(res);
  return res;
}

int BestLocalizedMode(const SpectrumReport &report, double residual_limit)
{
  int best = -1;
  double best_tail = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < report.modes.size(); i++)
  {
    const FloquetMode &m = report.modes[i];
    if (m.fold_index != 0 || std::abs(m.omega) < 1e-6 || !m.has_vectors() ||
        !(m.residual <= residual_limit))
    {
      continue;
    }
    double tail = 0.0;
    for (int n = -m.u_hat.K(); n <= m.u_hat.K(); n++)
    {
      if (2 * std::abs(n) > m.u_hat.K())
      {
        tail += m.u_hat.harmonic(n).squaredNorm();
      }
    }
    if (tail < best_tail)
    {
      best_tail = tail;
      best = static_cast<int>(i);
    }
  }
  if (best < 0)
  {
    throw Error(ErrorKind::NotFound, "no non-constant Brillouin-zone mode with small residual");
  }
  return best;
}

std::vector<EpsPath> TrackEpsPaths(const ProblemSettings &s, const std::vector<double> &grid,
                                   const std::vector<cplx> &starts, const EpsPathOptions &options)
{
  std::vector<EpsPath> paths(starts.size());
  for (std::size_t k = 0; k < starts.size(); k++)
  {
    paths[k].start = starts[k];
  }
  const Modulation periodic = s.BuildModulation();
  SolveOptions opt;
  opt.vectors = false;
  for (std::size_t i = 0; i < grid.size(); i++)
  {
    const double eps = grid[i];
    const HarmonicProblem problem(Modulation::Affine(options.kappa_r, eps, periodic),
                                  BoundaryCondition::Parse(s.bc, s.kappa0), s.K, s.p,
                                  s.boundary_toeplitz);
    const SpectrumReport report = SolveSpectrum(problem, opt);
    for (EpsPath &path : paths)
    {
      if (path.lost)
      {
        continue;
      }
      const cplx prev = path.points.empty() ? path.start : path.points.back().omega;
      try
      {
        const FloquetMode &m = MatchEigenvalue(report, prev, options.radius);
        EpsPathPoint pt;
        pt.eps = eps;
        pt.omega = m.omega;
        if (!path.points.empty())
        {
          pt.jump = std::abs(m.omega - prev);
          const double de = eps - path.points.back().eps;
          pt.flagged = pt.jump > options.jump_constant * de;
        }
        else
        {
          pt.jump = std::abs(m.omega - path.start);
        }
        path.points.push_back(pt);
      }
      catch (const Error &)
      {
        path.lost = true;
      }
    }
  }
  return paths;
}

const std::vector<std::string> &ExperimentNames()
{
  static const std::vector<std::string> names = {"spectrum", "converge",       "validate-time",
                                                 "localize", "folding",        "eps-path",
                                                 "oracle-compare", "sturm",    "diagnose"};
  return names;
}

int ExitCode(Status status)
{
  switch (status)
  {
    case Status::Pass:
      return 0;
    case Status::Advisory:
      return 3;
    case Status::Fail:
      return 2;
  }
  return 2;
}

namespace
{

Json RegionJson(const RegionResult &r)
{
  Json v = Json::array();
  for (const RegionViolation &x : r.violations)
  {
    v.push_back({{"index", x.index}, {"omega", ComplexToJson(x.omega)}, {"excess", x.excess}});
  }
  return {{"status", ToString(r.status)}, {"C_kappa_prime", r.C_prime},
          {"threshold_K", r.threshold},   {"below_threshold", r.below_threshold},
          {"max_im", r.max_im},           {"max_abs_im", r.max_abs_im},
          {"tolerance", r.tolerance},     {"violations", v}};
}

ExperimentOutput RunSpectrumExperiment(const Json &cfg, const fs::path &out)
{
  ExperimentOutput res = Output("spectrum");
  ProblemSettings s = ProblemSettings::FromJson(cfg);
  Json diag = Json::object();
  for (const std::string &bc : cfg.value("bcs", std::vector<std::string>{"absorbing", "neumann"}))
  {
    s.bc = bc;
    const HarmonicProblem problem = s.Build();
    SolveOptions opt;
    opt.dense_limit = Get<int>(cfg, "dense_limit", 6000);
    const SpectrumReport report = SolveSpectrum(problem, opt);
    const fs::path file = out / ("spectrum_" + bc + ".csv");
    WriteModesCsv(file, report, ProvenanceOf(s));
    res.files.push_back(file);
    const RegionResult region = RegionCheck(report, problem, Get<double>(cfg, "margin", 1.0));
    double best_corr = 0.0, best_abs = std::numeric_limits<double>::infinity();
    for (const FloquetMode &m : report.modes)
    {
      if (std::abs(m.omega) <= 1e-8)
      {
        best_corr = std::max(best_corr, ConstantModeCorrelation(m));
        best_abs = std::min(best_abs, std::abs(m.omega));
      }
    }
    const bool constant_ok = best_corr >= 1.0 - 1e-8;
    diag[bc] = {{"C_inv", report.diagnostics.C_inv},
                {"C_kappa_prime", report.diagnostics.C_kappa_prime},
                {"c_kappa", report.diagnostics.c_kappa},
                {"C_kappa", report.diagnostics.C_kappa},
                {"Omega", report.Omega},
                {"K", report.K},
                {"p", report.p},
                {"kappa0", report.kappa0},
                {"modes", report.modes.size()},
                {"refined", report.refined},
                {"region", RegionJson(region)},
                {"constant_mode", {{"abs_omega", DoubleOrNull(best_abs)}, {"correlation", best_corr}}}};
    res.status = Worst(res.status, region.status);
    if (!constant_ok)
    {
      res.status = Status::Fail;
      res.message += bc + ": constant mode missing; ";
    }
    std::cerr << "spectrum " << bc << ": " << report.modes.size() << " modes in " << report.seconds
              << " s\n";
  }
  const fs::path dfile = out / "spectrum_diagnostics.json";
  WriteJson(dfile, diag);
  res.files.push_back(dfile);
  res.summary = diag;
  return res;
}

ExperimentOutput RunConvergeExperiment(const Json &cfg, const fs::path &out)
{
  ExperimentOutput res = Output("converge");
  const ProblemSettings s = ProblemSettings::FromJson(cfg);
  const Json c = Section(cfg, "converge");
  const int K_ref = Get<int>(c, "K_ref", 30), p_ref = Get<int>(c, "p_ref", 40);
  cplx target;
  if (c.contains("target") && !c["target"].is_null())
  {
    target = ComplexFromJson(c["target"]);
  }
  else
  {
    target = BelowOriginTarget(s.Build(Get<int>(c, "coarse_K", 8), Get<int>(c, "coarse_p", 12)));
  }
  // Reference cached on disk by config hash.
  Json key = s.ToJson();
  key["K_ref"] = K_ref;
  key["p_ref"] = p_ref;
  key["target"] = ComplexToJson(target);
  const fs::path cache = out / "cache" / ("reference-" + Sha256(key.dump()).substr(0, 16) + ".json");
  cplx reference;
  if (fs::exists(cache))
  {
    reference = ComplexFromJson(ReadJson(cache)["omega"]);
  }
  else
  {
    const FloquetMode ref = SolveTargeted(s.Build(K_ref, p_ref), target);
    reference = ref.omega;
    WriteJson(cache, {{"key", key}, {"omega", ComplexToJson(reference)}, {"residual", ref.residual}});
  }
  ConvergenceOptions opt;
  opt.radius = Get<double>(c, "radius", 0.1);
  opt.plateau_level = Get<double>(c, "plateau", 1e-9);
  opt.min_factor = Get<double>(c, "min_factor", 2.0);
  opt.workers = Get<int>(cfg, "workers", 1);
  struct Sweep
  {
    std::string parameter;
    std::vector<int> values;
    int fixed;
  };
  const Sweep sweeps[] = {
      {"K", c.value("K_values", IntRange(2, 20, 2)), Get<int>(c, "K_sweep_p", 40)},
      {"p", c.value("p_values", IntRange(2, 24, 2)), Get<int>(c, "p_sweep_K", 30)}};
  res.summary["target"] = ComplexToJson(target);
  res.summary["reference"] = ComplexToJson(reference);
  res.summary["K_ref"] = K_ref;
  res.summary["p_ref"] = p_ref;
  for (const Sweep &sw : sweeps)
  {
    ConvergenceResult r = ConvergenceSweep(s, sw.parameter, sw.values, sw.fixed, reference, opt);
    r.K_ref = K_ref;
    r.p_ref = p_ref;
    const fs::path file = out / ("converge_" + sw.parameter + ".csv");
    CsvWriter csv(file, WithProvenance({"parameter", "value", "re_omega", "im_omega", "error",
                                        "gap", "plateau", "re_reference", "im_reference"}));
    for (std::size_t i = 0; i < r.cells.size(); i++)
    {
      const ConvergenceCell &cl = r.cells[i];
      std::vector<CsvValue> row = {sw.parameter, static_cast<long long>(cl.value),
                                   cl.omega.real(), cl.omega.imag(), cl.error,
                                   static_cast<long long>(cl.gap),
                                   static_cast<long long>(r.plateau_index >= 0 &&
                                                          static_cast<int>(i) >= r.plateau_index),
                                   reference.real(), reference.imag()};
      const int K = sw.parameter == "K" ? cl.value : sw.fixed;
      const int p = sw.parameter == "K" ? sw.fixed : cl.value;
      AppendProvenance(row, K, p, s, s.kappa.eps, 0.0);
      csv.Row(row);
    }
    res.files.push_back(file);
    Json errors = Json::array();
    for (const ConvergenceCell &cl : r.cells)
    {
      errors.push_back(DoubleOrNull(cl.error));
    }
    res.summary[sw.parameter] = {{"values", sw.values},
                                 {"fixed", sw.fixed},
                                 {"errors", errors},
                                 {"plateau_index", r.plateau_index},
                                 {"strictly_decreasing", r.strictly_decreasing},
                                 {"mean_factor", r.mean_factor},
                                 {"status", ToString(r.status)}};
    res.status = Worst(res.status, r.status);
    if (r.status != Status::Pass)
    {
      res.message += sw.parameter + "-sweep criterion not met; ";
    }
  }
  return res;
}

ExperimentOutput RunValidateTimeExperiment(const Json &cfg, const fs::path &out)
{
  ExperimentOutput res = Output("validate-time");
  const ProblemSettings s = ProblemSettings::FromJson(cfg);
  const HarmonicProblem problem = s.Build();
  const double T = problem.modulation().period();
  const double dt = Get<double>(cfg, "dt", T / 400.0);
  const int periods = Get<int>(cfg, "periods", 5);
  const Json tc = Section(cfg, "time");
  SolveOptions opt;
  opt.dense_limit = Get<int>(cfg, "dense_limit", 6000);
  const SpectrumReport report = SolveSpectrum(problem, opt);
  const FloquetMode &mode = report.modes[BestLocalizedMode(report)];
  const ValidationResult v = FloquetValidation(problem, mode, dt, periods, Get<int>(tc, "stride", 1));
  const fs::path file = out / "time_trace.csv";
  CsvWriter csv(file, TraceCsvHeader());
  for (const TraceRow &r : v.rows)
  {
    csv.Row({r.t, r.energy, r.norm_u, r.norm_v, r.d_norm, r.d_relative, r.d_energy_relative,
             static_cast<long long>(s.K), static_cast<long long>(s.p), s.bc,
             s.bc == "absorbing" ? s.kappa0 : 0.0, s.kappa.preset, s.kappa.eps, dt});
  }
  res.files.push_back(file);
  double worst_ratio = 0.0;
  for (double r : v.energy_ratios)
  {
    worst_ratio = std::max(worst_ratio, std::abs(r / v.predicted_ratio - 1.0));
  }
  const double rel_tol = Get<double>(tc, "relative_tol", 1e-3);
  const double energy_tol = Get<double>(tc, "energy_tol", 0.02);
  res.summary = {{"omega", ComplexToJson(mode.omega)},
                 {"omega_raw", ComplexToJson(mode.omega_raw)},
                 {"residual", mode.residual},
                 {"dt", dt},
                 {"periods", periods},
                 {"max_relative", v.max_relative},
                 {"max_energy_relative", v.max_energy_relative},
                 {"quasi_periodicity_defect", v.quasi_periodicity_defect},
                 {"energy_ratios", v.energy_ratios},
                 {"predicted_ratio", v.predicted_ratio},
                 {"max_ratio_deviation", worst_ratio},
                 {"bloch_defect", BlochDefectNorm(problem, mode)}};
  if (!(v.max_relative <= rel_tol) || !(worst_ratio <= energy_tol))
  {
    res.status = Status::Fail;
    res.message = "time-domain tolerance exceeded";
  }
  const fs::path sfile = out / "time_summary.json";
  WriteJson(sfile, res.summary);
  res.files.push_back(sfile);
  return res;
}

ExperimentOutput RunLocalizeExperiment(const Json &cfg, const fs::path &out)
{
  ExperimentOutput res = Output("localize");
  const ProblemSettings s = ProblemSettings::FromJson(cfg);
  const Json lc = Section(cfg, "localize");
  const std::vector<int> ps = lc.value("p_values", std::vector<int>{4, 8, 12});
  const std::vector<int> check = lc.value("check_p", std::vector<int>{4});
  const double C = Get<double>(lc, "C", 0.0105);
  const int band_lo = Get<int>(lc, "band_lo", 4);
  const fs::path file = out / "localization.csv";
  CsvWriter csv(file, WithProvenance({"mode", "re_omega", "im_omega", "n", "norm", "slope",
                                      "bound"}));
  Json per_p = Json::array();
  for (int p : ps)
  {
    const HarmonicProblem problem = s.Build(s.K, p);
    const SpectrumReport report = SolveSpectrum(problem);
    const double C_inv = report.diagnostics.C_inv;
    double worst_slope = -std::numeric_limits<double>::infinity(), worst_bound = 0.0;
    int zone = 0, steep = 0;
    for (std::size_t i = 0; i < report.modes.size(); i++)
    {
      const FloquetMode &m = report.modes[i];
      if (m.fold_index != 0)
      {
        continue;
      }
      zone++;
      const LocalizationProfile prof = Localization(m, problem.basis(), C_inv, band_lo);
      worst_slope = std::max(worst_slope, prof.slope);
      worst_bound = std::max(worst_bound, prof.bound_constant);
      steep += prof.slope <= -2.0 ? 1 : 0;
      for (int n = -prof.K; n <= prof.K; n++)
      {
        std::vector<CsvValue> row = {static_cast<long long>(i), m.omega.real(), m.omega.imag(),
                                     static_cast<long long>(n), prof.norm(n),
                                     SafeNumber(prof.slope) == -1.0 && !std::isfinite(prof.slope)
                                         ? CsvValue(std::string("-inf"))
                                         : CsvValue(prof.slope),
                                     n == 0 ? 0.0 : C * C_inv * C_inv / (double(n) * n)};
        AppendProvenance(row, s.K, p, s, s.kappa.eps, 0.0);
        csv.Row(row);
      }
    }
    const bool checked = std::find(check.begin(), check.end(), p) != check.end();
    const bool ok = worst_slope <= -2.0 && worst_bound <= C;
    if (checked && !ok)
    {
      res.status = Status::Fail;
      res.message += "p=" + std::to_string(p) + " localization criterion not met; ";
    }
    per_p.push_back({{"p", p},
                     {"C_inv", C_inv},
                     {"zone_modes", zone},
                     {"modes_with_slope_le_-2", steep},
                     {"max_slope", DoubleOrNull(worst_slope)},
                     {"max_bound_constant", worst_bound},
                     {"checked", checked}});
  }
  res.files.push_back(file);
  res.summary = {{"C", C}, {"K", s.K}, {"per_p", per_p}};
  return res;
}

ExperimentOutput RunFoldingExperiment(const Json &cfg, const fs::path &out)
{
  ExperimentOutput res = Output("folding");
  const ProblemSettings s = ProblemSettings::FromJson(cfg);
  const Json fc = Section(cfg, "folding");
  const std::vector<int> Ks = fc.value("K_values", std::vector<int>{8, 16, 32});
  const int l = Get<int>(fc, "l", 1);
  const cplx target = fc.contains("target") ? ComplexFromJson(fc["target"]) : cplx(0.0, -0.44);
  const std::vector<int> pair = fc.value("ratio_pair", std::vector<int>{16, 32});
  const fs::path file = out / "folding.csv";
  CsvWriter csv(file, WithProvenance({"l", "re_omega", "im_omega", "residual", "folded_residual"}));
  std::map<int, double> folded;
  Json rows = Json::array();
  for (int K : Ks)
  {
    const HarmonicProblem problem = s.Build(K, s.p);
    const FloquetMode m = SolveTargeted(problem, target);
    const double fr = FoldingResidual(problem, m, l);
    folded[K] = fr;
    std::vector<CsvValue> row = {static_cast<long long>(l), m.omega.real(), m.omega.imag(),
                                 m.residual, fr};
    AppendProvenance(row, K, s.p, s, s.kappa.eps, 0.0);
    csv.Row(row);
    rows.push_back({{"K", K}, {"omega", ComplexToJson(m.omega)}, {"residual", m.residual},
                    {"folded_residual", fr}});
  }
  res.files.push_back(file);
  res.summary = {{"l", l}, {"target", ComplexToJson(target)}, {"cells", rows}};
  if (pair.size() == 2 && folded.count(pair[0]) && folded.count(pair[1]))
  {
    const double ratio = folded[pair[0]] / folded[pair[1]];
    res.summary["ratio"] = ratio;
    if (!(ratio >= Get<double>(fc, "min_ratio", 2.0)))
    {
      res.status = Status::Fail;
      res.message = "folded residual ratio below threshold";
    }
  }
  return res;
}

ExperimentOutput RunEpsPathExperiment(const Json &cfg, const fs::path &out)
{
  ExperimentOutput res = Output("eps-path");
  const ProblemSettings s = ProblemSettings::FromJson(cfg);
  const Json ec = Section(cfg, "eps_path");
  std::vector<double> grid = ec.value("grid", std::vector<double>{0.0, 0.5, 1.0});
  std::vector<cplx> starts;
  if (ec.contains("starts"))
  {
    for (const Json &z : ec["starts"])
    {
      starts.push_back(ComplexFromJson(z));
    }
  }
  else
  {
    starts.push_back(0.0);
  }
  EpsPathOptions opt;
  opt.kappa_r = Get<double>(ec, "kappa_r", 1.0);
  opt.radius = Get<double>(ec, "radius", 0.5);
  opt.jump_constant = Get<double>(ec, "jump_constant", 5.0);
  const std::vector<EpsPath> paths = TrackEpsPaths(s, grid, starts, opt);
  const fs::path file = out / "eps_path.csv";
  CsvWriter csv(file, WithProvenance({"path", "re_omega", "im_omega", "jump", "flagged",
                                      "re_start", "im_start"}));
  Json summary = Json::array();
  for (std::size_t k = 0; k < paths.size(); k++)
  {
    int flagged = 0;
    for (const EpsPathPoint &pt : paths[k].points)
    {
      flagged += pt.flagged ? 1 : 0;
      std::vector<CsvValue> row = {static_cast<long long>(k), pt.omega.real(), pt.omega.imag(),
                                   pt.jump, static_cast<long long>(pt.flagged),
                                   paths[k].start.real(), paths[k].start.imag()};
      AppendProvenance(row, s.K, s.p, s, pt.eps, 0.0);
      csv.Row(row);
    }
    const double start_gap = paths[k].points.empty() ? -1.0 : paths[k].points.front().jump;
    summary.push_back({{"start", ComplexToJson(paths[k].start)},
                       {"points", paths[k].points.size()},
                       {"lost", paths[k].lost},
                       {"flagged", flagged},
                       {"start_distance", start_gap}});
    if (paths[k].lost || flagged > 0)
    {
      res.status = Worst(res.status, Status::Advisory);
    }
  }
  res.files.push_back(file);
  res.summary = {{"paths", summary}, {"kappa_r", opt.kappa_r}};
  return res;
}

ExperimentOutput RunOracleCompareExperiment(const Json &cfg, const fs::path &out)
{
  ExperimentOutput res = Output("oracle-compare");
  const Json oc = Section(cfg, "oracle");
  ProblemSettings s = ProblemSettings::FromJson(cfg);
  s.kappa = ModulationConfig{"const", s.kappa.period, 0.0, 1.0, {}};
  const fs::path file = out / "oracle_compare.csv";
  CsvWriter csv(file, WithProvenance({"set", "length", "index", "printed", "det_abs", "analytic_re",
                                      "analytic_im", "computed_re", "computed_im", "distance"}));
  auto nearest = [](const SpectrumReport &r, cplx z)
  {
    const FloquetMode *best = nullptr;
    for (const FloquetMode &m : r.modes)
    {
      if (!best || std::abs(m.omega - z) < std::abs(best->omega - z))
      {
        best = &m;
      }
    }
    return best->omega;
  };
  auto count_within = [](const SpectrumReport &r, const std::vector<cplx> &targets, double tol)
  {
    int count = 0;
    for (const FloquetMode &m : r.modes)
    {
      for (const cplx &z : targets)
      {
        if (std::abs(m.omega - z) <= tol && std::abs(m.omega) > tol)
        {
          count++;
          break;
        }
      }
    }
    return count;
  };
  auto emit = [&](const std::string &set, double length, const ResonanceSet &rs,
                  const SpectrumReport &rep, int K, int p, const ProblemSettings &ps)
  {
    for (const Resonance &r : rs.members)
    {
      const cplx c = nearest(rep, r.folded);
      std::vector<CsvValue> row = {set,
                                   length,
                                   static_cast<long long>(r.index),
                                   static_cast<long long>(r.printed),
                                   SafeNumber(r.det_abs),
                                   r.folded.real(),
                                   r.folded.imag(),
                                   c.real(),
                                   c.imag(),
                                   std::abs(c - r.folded)};
      AppendProvenance(row, K, p, ps, 0.0, 0.0);
      csv.Row(row);
    }
  };

  // Absorbing.
  s.bc = "absorbing";
  const int aK = Get<int>(oc, "absorbing_K", 5), ap = Get<int>(oc, "absorbing_p", 20);
  const HarmonicProblem ap_problem = s.Build(aK, ap);
  SolveOptions eig_only;
  eig_only.vectors = false;
  const SpectrumReport arep = SolveSpectrum(ap_problem, eig_only);
  const double Om = ap_problem.Omega();
  const ComplexBox window{-(aK + 1) * Om, (aK + 1) * Om, -5.0, 1.0};
  const double tol_a = Get<double>(oc, "tol_absorbing", 1e-6);
  Json absorbing = Json::object();
  for (double length : {2.0, 1.0})
  {
    const ResonanceSet rs = AbsorbingConstResonances(s.kappa0, window, Om, length);
    emit("absorbing", length, rs, arep, aK, ap, s);
    std::vector<cplx> nonzero;
    for (const cplx &z : rs.Folded())
    {
      if (std::abs(z) > 0.0)
      {
        nonzero.push_back(z);
      }
    }
    absorbing[length == 2.0 ? "domain_length_2" : "unit_length"] = {
        {"level", AbsorbingLevel(s.kappa0, length)},
        {"matched_within_tol", count_within(arep, nonzero, tol_a)}};
  }
  // Neumann.
  s.bc = "neumann";
  const int nK = Get<int>(oc, "neumann_K", 2), np = Get<int>(oc, "neumann_p", 15);
  const int count = Get<int>(oc, "neumann_count", 6);
  const HarmonicProblem np_problem = s.Build(nK, np);
  const SpectrumReport nrep = SolveSpectrum(np_problem, eig_only);
  const ResonanceSet ns = NeumannConstResonances(1.0, 2.0, count, np_problem.Omega());
  emit("neumann", 2.0, ns, nrep, nK, np, s);
  double worst = 0.0;
  for (const Resonance &r : ns.members)
  {
    worst = std::max(worst, std::abs(nearest(nrep, r.folded) - r.folded));
  }
  res.files.push_back(file);
  res.summary = {{"absorbing", absorbing}, {"neumann_max_distance", worst}};
  if (absorbing["domain_length_2"]["matched_within_tol"].get<int>() < 3 ||
      !(worst <= Get<double>(oc, "tol_neumann", 1e-8)))
  {
    res.status = Status::Fail;
    res.message = "oracle mismatch";
  }
  return res;
}

ExperimentOutput RunSturmExperiment(const Json &cfg, const fs::path &out)
{
  ExperimentOutput res = Output("sturm");
  const ProblemSettings s = ProblemSettings::FromJson(cfg);
  const int K = Get<int>(Section(cfg, "sturm"), "K", 160);
  const fs::path file = out / "sturm.csv";
  CsvWriter csv(file, WithProvenance({"case", "n", "mu", "exact"}));
  const Modulation modulated = s.BuildModulation();
  const Modulation constant = Modulation::Constant(1.0, s.kappa.period);
  Json summary = Json::object();
  for (const auto &[name, kappa] :
       {std::pair<std::string, const Modulation *>{"modulated", &modulated},
        std::pair<std::string, const Modulation *>{"constant", &constant}})
  {
    const SturmLiouvilleResult sl = SturmLiouville(*kappa, K);
    const int keep = K + 1;
    double worst_exact = 0.0;
    for (int n = 0; n < keep; n++)
    {
      double exact = -1.0;
      if (name == "constant")
      {
        const int k = (n + 1) / 2;
        exact = std::pow(k * kappa->frequency(), 2);
        worst_exact = std::max(worst_exact, std::abs(sl.eigenvalues(n) - exact));
      }
      std::vector<CsvValue> row = {name, static_cast<long long>(n), sl.eigenvalues(n), exact};
      AppendProvenance(row, K, 0, s, s.kappa.eps, 0.0);
      csv.Row(row);
    }
    summary[name] = {{"imag_leakage", sl.imag_leakage},
                     {"min_nonzero", sl.eigenvalues.tail(sl.eigenvalues.size() - 1).minCoeff()},
                     {"mu0", sl.eigenvalues(0)},
                     {"growth_exponent", GrowthExponent(sl.eigenvalues, 5, K / 2)}};
    if (name == "constant")
    {
      summary[name]["max_exact_error"] = worst_exact;
    }
  }
  res.files.push_back(file);
  res.summary = summary;
  return res;
}

ExperimentOutput RunDiagnoseExperiment(const Json &cfg, const fs::path &out)
{
  ExperimentOutput res = Output("diagnose");
  const ProblemSettings s = ProblemSettings::FromJson(cfg);
  const HarmonicProblem problem = s.Build();
  const SpectrumReport report = SolveSpectrum(problem);
  const double margin = Get<double>(cfg, "margin", 1.0);
  const RegionResult region = RegionCheck(report, problem, margin);
  const double C = Get<double>(Section(cfg, "localize"), "C", 0.0105);
  Json modes = Json::array();
  Status worst = region.status;
  for (std::size_t i = 0; i < report.modes.size(); i++)
  {
    const FloquetMode &m = report.modes[i];
    if (m.fold_index != 0)
    {
      continue;
    }
    const LocalizationProfile prof = Localization(m, problem.basis(), report.diagnostics.C_inv);
    const Status residual_status = m.residual <= 1e-8 ? Status::Pass : Status::Advisory;
    const bool bound_ok = prof.bound_constant <= C;
    const Status loc_status = prof.slope <= -2.0 && bound_ok ? Status::Pass : Status::Advisory;
    worst = Worst(worst, Worst(residual_status, loc_status));
    modes.push_back({{"index", i},
                     {"omega", ComplexToJson(m.omega)},
                     {"residual", m.residual},
                     {"residual_status", ToString(residual_status)},
                     {"norms", prof.norms},
                     {"slope", DoubleOrNull(prof.slope)},
                     {"bound_constant", prof.bound_constant},
                     {"localization_status", ToString(loc_status)},
                     {"folding_residual_l1", problem.K() >= 1 ? FoldingResidual(problem, m, 1) : 0.0},
                     {"bloch_defect", BlochDefectNorm(problem, m)}});
  }
  const int threshold = KThreshold(report.diagnostics.C_inv, margin);
  Json doc = {{"config", s.ToJson()},
              {"C_inv", report.diagnostics.C_inv},
              {"C_kappa_prime", report.diagnostics.C_kappa_prime},
              {"c_kappa", report.diagnostics.c_kappa},
              {"C_kappa", report.diagnostics.C_kappa},
              {"k_threshold", threshold},
              {"advisory_below_threshold", problem.K() < threshold},
              {"region", RegionJson(region)},
              {"max_zone_frequency", MaxZoneFrequency(report)},
              {"modes", modes},
              {"status", ToString(worst)}};
  const fs::path file = out / "diagnose.json";
  WriteJson(file, doc);
  res.files.push_back(file);
  res.status = worst;
  res.summary = {{"status", ToString(worst)}, {"zone_modes", modes.size()},
                 {"region", ToString(region.status)}};
  return res;
}

}  // namespace

ExperimentOutput RunExperiment(const std::string &name, const Json &resolved, const fs::path &out)
{
  fs::create_directories(out);
  if (name == "spectrum")
  {
    return RunSpectrumExperiment(resolved, out);
  }
  if (name == "converge")
  {
    return RunConvergeExperiment(resolved, out);
  }
  if (name == "validate-time")
  {
    return RunValidateTimeExperiment(resolved, out);
  }
  if (name == "localize")
  {
    return RunLocalizeExperiment(resolved, out);
  }
  if (name == "folding")
  {
    return RunFoldingExperiment(resolved, out);
  }
  if (name == "eps-path")
  {
    return RunEpsPathExperiment(resolved, out);
  }
  if (name == "oracle-compare")
  {
    return RunOracleCompareExperiment(resolved, out);
  }
  if (name == "sturm")
  {
    return RunSturmExperiment(resolved, out);
  }
  if (name == "diagnose")
  {
    return RunDiagnoseExperiment(resolved, out);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown experiment '" + name + "'");
}

Json RunAll(const Json &cfg, const fs::path &out, const Json &overrides)
{
  fs::create_directories(out);
  const fs::path cfg_file = out / "config.json";
  WriteJson(cfg_file, cfg);
  Json artifacts = Json::array();
  Json experiments = Json::array();
  Status overall = Status::Pass;
  auto add_artifact = [&](const fs::path &file, const std::string &experiment)
  {
    artifacts.push_back({{"path", fs::relative(file, out).generic_string()},
                         {"experiment", experiment},
                         {"bytes", fs::file_size(file)},
                         {"sha256", Sha256File(file)}});
  };
  add_artifact(cfg_file, "all");
  for (const std::string &name : ExperimentNames())
  {
    Json entry = {{"name", name}};
    try
    {
      const ExperimentOutput r = RunExperiment(name, ResolveConfig(cfg, name, overrides), out);
      for (const fs::path &f : r.files)
      {
        add_artifact(f, name);
      }
      entry["status"] = ToString(r.status);
      entry["message"] = r.message;
      entry["summary"] = r.summary;
      overall = Worst(overall, r.status);
    }
    catch (const std::exception &e)
    {
      entry["status"] = ToString(Status::Fail);
      entry["message"] = e.what();
      overall = Status::Fail;
    }
    std::cerr << name << ": " << entry["status"].get<std::string>() << '\n';
    experiments.push_back(entry);
  }
  Json manifest = {{"artifacts", artifacts},
                   {"experiments", experiments},
                   {"status", ToString(overall)},
                   {"exit_code", ExitCode(overall)}};
  WriteJson(out / "manifest.json", manifest);
  return manifest;
}

}  // namespace floquet
