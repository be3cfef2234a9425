// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_EXPERIMENTS_HPP
#define FLOQUET_EXPERIMENTS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>
#include "floquet/diagnostics.hpp"
#include "floquet/io.hpp"

namespace floquet
{

// Problem parameters as they appear in a config file.
struct ProblemSettings
{
  ModulationConfig kappa;
  std::string bc = "absorbing";
  double kappa0 = 0.5;
  int K = 10;
  int p = 10;
  bool boundary_toeplitz = false;

  Modulation BuildModulation() const;
  HarmonicProblem Build() const;
  HarmonicProblem Build(int K, int p) const;

  static ProblemSettings FromJson(const Json &cfg);
  Json ToJson() const;
};

// Built-in defaults, including per-experiment sections under "experiments".
Json DefaultConfig();

// cfg without "experiments", merge-patched with cfg["experiments"][name] and then with the
// command-line overrides.
Json ResolveConfig(const Json &cfg, const std::string &name, const Json &overrides = Json::object());

// In-zone eigenvalue on the negative imaginary axis nearest the origin, from a full solve.
cplx BelowOriginTarget(const HarmonicProblem &problem, double axis_tol = 1e-6);

struct ConvergenceCell
{
  int value = 0;  // K or p of the cell
  cplx omega;
  double error = 0.0;
  bool gap = false;
  std::string note;
};

struct ConvergenceResult
{
  std::string parameter;  // "K" or "p"
  int fixed = 0;          // the other parameter
  int K_ref = 0, p_ref = 0;
  cplx target, reference;
  std::vector<ConvergenceCell> cells;
  int plateau_index = -1;  // first cell with error <= plateau_level, -1 when never reached
  double plateau_level = 1e-9;
  bool strictly_decreasing = false;  // over cells up to the plateau
  double mean_factor = 0.0;          // geometric mean decay factor per step before the plateau
  double min_factor = 2.0;
  Status status = Status::Fail;
};

struct ConvergenceOptions
{
  double radius = 0.1;
  double plateau_level = 1e-9;
  double min_factor = 2.0;
  int workers = 1;
};

// Tracks the eigenvalue nearest reference across the sweep by shift-invert.
ConvergenceResult ConvergenceSweep(const ProblemSettings &s, const std::string &parameter,
                                   const std::vector<int> &values, int fixed, cplx reference,
                                   const ConvergenceOptions &options = {});

// Analysis of an error sequence (shared with ConvergenceSweep).
void AnalyzeConvergence(ConvergenceResult &result);

// Non-constant Brillouin-zone mode with the smallest tail mass beyond |n| > K/2.
int BestLocalizedMode(const SpectrumReport &report, double residual_limit = 1e-8);

struct EpsPathPoint
{
  double eps = 0.0;
  cplx omega;
  double jump = 0.0;  // |omega_i - omega_{i-1}|
  bool flagged = false;
};

struct EpsPath
{
  cplx start;
  std::vector<EpsPathPoint> points;
  bool lost = false;
};

struct EpsPathOptions
{
  double kappa_r = 1.0;
  double radius = 0.5;
  double jump_constant = 5.0;  // flag when jump > jump_constant * d_eps
};

// kappa_eps = kappa_r + eps * s.kappa; each path continued by nearest match.
std::vector<EpsPath> TrackEpsPaths(const ProblemSettings &s, const std::vector<double> &grid,
                                   const std::vector<cplx> &starts,
                                   const EpsPathOptions &options = {});

struct ExperimentOutput
{
  std::string name;
  Status status = Status::Pass;
  std::string message;
  std::vector<std::filesystem::path> files;
  Json summary = Json::object();
};

// Subcommand names accepted by RunExperiment, in run order.
const std::vector<std::string> &ExperimentNames();

// Runs one experiment with an already resolved config, writing into out.
ExperimentOutput RunExperiment(const std::string &name, const Json &resolved,
                               const std::filesystem::path &out);

// Runs every experiment, records failures, writes manifest.json and returns it.
// manifest["exit_code"]: 0 ok, 2 hard failure, 3 advisory only.
Json RunAll(const Json &cfg, const std::filesystem::path &out,
            const Json &overrides = Json::object());

int ExitCode(Status status);

}  // namespace floquet

#endif  // FLOQUET_EXPERIMENTS_HPP
