// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include "floquet/assembly.hpp"
#include "floquet/error.hpp"
#include "floquet/experiments.hpp"
#include "floquet/io.hpp"

namespace
{

struct Flags
{
  std::string config;
  std::string out = "out";
  std::optional<std::string> bc;
  std::optional<double> kappa0;
  std::optional<int> harmonics;
  std::optional<int> degree;
  std::optional<int> periods;
  std::optional<double> dt;
  std::optional<std::string> kappa;
  std::optional<double> eps;
  std::optional<double> period;
  std::optional<int> workers;
  std::optional<int> seed;
  std::optional<double> margin;
  bool boundary_toeplitz = false;
};

void AddCommonFlags(CLI::App *cmd, Flags &f)
{
  cmd->add_option("--config", f.config, "JSON config file");
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--bc", f.bc, "boundary condition")
      ->check(CLI::IsMember({"absorbing", "neumann"}));
  cmd->add_option("--kappa0", f.kappa0, "absorbing boundary coefficient");
  cmd->add_option("--harmonics,-K", f.harmonics, "harmonic truncation K");
  cmd->add_option("--degree,-p", f.degree, "polynomial degree p");
  cmd->add_option("--periods", f.periods, "number of modulation periods");
  cmd->add_option("--dt", f.dt, "time step");
  cmd->add_option("--kappa", f.kappa, "modulation preset")
      ->check(CLI::IsMember({"const", "one-plus-eps-exp-cos", "exp-cos", "cos-cos"}));
  cmd->add_option("--eps", f.eps, "modulation amplitude");
  cmd->add_option("--period", f.period, "modulation period T");
  cmd->add_option("--workers", f.workers, "sweep worker count");
  cmd->add_option("--seed", f.seed, "seed for randomized checks");
  cmd->add_option("--margin", f.margin, "K-threshold margin");
  cmd->add_flag("--boundary-toeplitz", f.boundary_toeplitz,
                "apply the Toeplitz factor to the boundary term");
}

floquet::Json Overrides(const Flags &f)
{
  floquet::Json o = floquet::Json::object();
  if (f.bc)
  {
    o["bc"] = *f.bc;
    o["bcs"] = {*f.bc};
  }
  if (f.kappa0)
  {
    o["kappa0"] = *f.kappa0;
  }
  if (f.harmonics)
  {
    o["K"] = *f.harmonics;
  }
  if (f.degree)
  {
    o["p"] = *f.degree;
  }
  if (f.periods)
  {
    o["periods"] = *f.periods;
  }
  if (f.dt)
  {
    o["dt"] = *f.dt;
  }
  if (f.kappa)
  {
    o["kappa"]["preset"] = *f.kappa;
  }
  if (f.eps)
  {
    o["kappa"]["eps"] = *f.eps;
  }
  if (f.period)
  {
    o["kappa"]["T"] = *f.period;
  }
  if (f.workers)
  {
    o["workers"] = *f.workers;
  }
  if (f.seed)
  {
    o["seed"] = *f.seed;
  }
  if (f.margin)
  {
    o["margin"] = *f.margin;
  }
  if (f.boundary_toeplitz)
  {
    o["boundary_toeplitz"] = true;
  }
  return o;
}

floquet::Json LoadConfig(const Flags &f)
{
  floquet::Json cfg = floquet::DefaultConfig();
  if (!f.config.empty())
  {
    cfg.merge_patch(floquet::ReadJson(f.config));
  }
  return cfg;
}

int Export(const Flags &f)
{
  using namespace floquet;
  const Json cfg = ResolveConfig(LoadConfig(f), "export", Overrides(f));
  const ProblemSettings s = ProblemSettings::FromJson(cfg);
  const HarmonicProblem problem = s.Build();
  const std::filesystem::path out(f.out);
  std::filesystem::create_directories(out);
  WriteBasisCsv(problem.basis(), (out / "basis.csv").string());
  const BlockPencil block = AssembleBlock(problem);
  const QuadraticPencil quad = AssembleQuadratic(problem);
  WriteMatricesCsv(out / "pencil.csv", {{"A", &block.A},
                                        {"Bmass", &block.Bmass},
                                        {"M2", &quad.M2},
                                        {"C1", &quad.C1},
                                        {"K0", &quad.K0}});
  std::cout << Json({{"files", {"basis.csv", "pencil.csv"}}, {"dim", problem.dim()}}).dump(2)
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Floquet exponents and Bloch modes of the 1D time-modulated wave equation"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::string> names = floquet::ExperimentNames();
  names.push_back("all");
  names.push_back("export");
  for (const std::string &name : names)
  {
    CLI::App *cmd = app.add_subcommand(name, name == "all"      ? "run every experiment"
                                             : name == "export" ? "write basis and pencil CSV"
                                                                : "run the " + name + " experiment");
    AddCommonFlags(cmd, flags);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  try
  {
    if (name == "export")
    {
      return Export(flags);
    }
    const floquet::Json cfg = LoadConfig(flags);
    if (name == "all")
    {
      const floquet::Json manifest = floquet::RunAll(cfg, flags.out, Overrides(flags));
      std::cout << floquet::Json({{"status", manifest["status"]},
                                  {"artifacts", manifest["artifacts"].size()},
                                  {"manifest", (std::filesystem::path(flags.out) / "manifest.json")
                                                   .generic_string()}})
                       .dump(2)
                << '\n';
      return manifest["exit_code"].get<int>();
    }
    const floquet::ExperimentOutput r = floquet::RunExperiment(
        name, floquet::ResolveConfig(cfg, name, Overrides(flags)), flags.out);
    floquet::Json files = floquet::Json::array();
    for (const auto &file : r.files)
    {
      files.push_back(file.generic_string());
    }
    std::cout << floquet::Json({{"experiment", r.name},
                                {"status", floquet::ToString(r.status)},
                                {"message", r.message},
                                {"files", files},
                                {"summary", r.summary}})
                     .dump(2)
              << '\n';
    return floquet::ExitCode(r.status);
  }
  catch (const floquet::Error &e)
  {
    std::cerr << "error [" << floquet::ToString(e.kind()) << "]: " << e.what() << '\n';
    return 2;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
