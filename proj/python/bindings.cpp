// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>
#include "floquet/eigensolver.hpp"
#include "floquet/error.hpp"
#include "floquet/experiments.hpp"
#include "floquet/io.hpp"
#include "floquet/oracles.hpp"
#include "floquet/timedomain.hpp"

namespace py = pybind11;
using namespace floquet;

namespace
{

Json Parse(const std::string &text) { return text.empty() ? Json::object() : Json::parse(text); }

py::dict ModeDict(const FloquetMode &m)
{
  py::dict d;
  d["omega"] = m.omega;
  d["omega_raw"] = m.omega_raw;
  d["fold_index"] = m.fold_index;
  d["residual"] = m.residual;
  d["constant_correlation"] = ConstantModeCorrelation(m);
  if (m.has_vectors())
  {
    d["u_hat"] = CMatrix(m.u_hat.AsMatrix());
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_floquet1d, mod)
{
  mod.doc() = "Floquet exponents and Bloch modes of the 1D time-modulated wave equation";

  py::register_exception<Error>(mod, "FloquetError", PyExc_RuntimeError);

  mod.def("default_config", [] { return DefaultConfig().dump(); });
  mod.def("experiment_names", [] { return ExperimentNames(); });
  mod.def("resolve_config", [](const std::string &cfg, const std::string &name, const std::string &overrides)
          { return ResolveConfig(Parse(cfg), name, Parse(overrides)).dump(); },
          py::arg("cfg"), py::arg("name"), py::arg("overrides") = "");

  mod.def(
      "solve_spectrum",
      [](const std::string &settings, bool vectors)
      {
        const HarmonicProblem pr = ProblemSettings::FromJson(Parse(settings)).Build();
        SolveOptions opt;
        opt.vectors = vectors;
        SpectrumReport r;
        {
          py::gil_scoped_release release;
          r = SolveSpectrum(pr, opt);
        }
        py::list modes;
        for (const FloquetMode &m : r.modes)
        {
          modes.append(ModeDict(m));
        }
        py::dict out;
        out["modes"] = modes;
        out["C_inv"] = r.diagnostics.C_inv;
        out["C_kappa_prime"] = r.diagnostics.C_kappa_prime;
        out["c_kappa"] = r.diagnostics.c_kappa;
        out["C_kappa"] = r.diagnostics.C_kappa;
        out["Omega"] = r.Omega;
        out["K"] = r.K;
        out["p"] = r.p;
        out["bc"] = r.bc;
        out["seconds"] = r.seconds;
        return out;
      },
      py::arg("settings"), py::arg("vectors") = true);

  mod.def(
      "solve_targeted",
      [](const std::string &settings, cplx target)
      { return ModeDict(SolveTargeted(ProblemSettings::FromJson(Parse(settings)).Build(), target)); },
      py::arg("settings"), py::arg("target"));

  mod.def(
      "growth_constant",
      [](const std::string &kappa)
      {
        Json cfg;
        cfg["kappa"] = Parse(kappa);
        return GrowthConstant(ProblemSettings::FromJson(cfg).BuildModulation());
      },
      py::arg("kappa"));

  mod.def("absorbing_level", &AbsorbingLevel, py::arg("kappa0"), py::arg("length") = 1.0);

  mod.def(
      "run_experiment",
      [](const std::string &name, const std::string &cfg, const std::filesystem::path &out)
      {
        ExperimentOutput r;
        {
          py::gil_scoped_release release;
          r = RunExperiment(name, ResolveConfig(Parse(cfg), name), out);
        }
        Json j = {{"name", r.name}, {"status", ToString(r.status)}, {"message", r.message}, {"summary", r.summary}};
        j["files"] = Json::array();
        for (const auto &f : r.files)
        {
          j["files"].push_back(f.string());
        }
        return j.dump();
      },
      py::arg("name"), py::arg("cfg"), py::arg("out"));

  mod.def(
      "run_all",
      [](const std::string &cfg, const std::filesystem::path &out)
      {
        py::gil_scoped_release release;
        return RunAll(Parse(cfg), out).dump();
      },
      py::arg("cfg"), py::arg("out"));

  mod.def("sha256_file", &Sha256File, py::arg("path"));
  mod.def("mode_csv_header", &ModeCsvHeader);
  mod.def("trace_csv_header", &TraceCsvHeader);
}
