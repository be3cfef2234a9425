// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_EIGENSOLVER_HPP
#define FLOQUET_EIGENSOLVER_HPP

#include <map>
#include <string>
#include <vector>
#include "floquet/assembly.hpp"

namespace floquet
{

// Representative of omega modulo Omega with Re in (-Omega/2, Omega/2].
cplx BrillouinFold(cplx omega, double Omega);
// l with BrillouinFold(omega) = omega - l Omega.
int FoldIndex(cplx omega, double Omega);

struct FloquetMode
{
  cplx omega;          // Brillouin representative
  cplx omega_raw;      // eigenvalue of the truncated pencil
  int fold_index = 0;  // omega_raw = omega + fold_index * Omega
  HarmonicVector u_hat;
  HarmonicVector z_hat;
  double residual = 0.0;  // ResidualForm at (omega_raw, u_hat); NaN without vectors
  std::string fingerprint;

  bool has_vectors() const { return u_hat.size() > 0; }
};

struct SpectrumDiagnostics
{
  double C_inv = 0.0;
  double C_kappa_prime = 0.0;
  double c_kappa = 0.0;
  double C_kappa = 0.0;
};

struct SpectrumReport
{
  std::vector<FloquetMode> modes;
  SpectrumDiagnostics diagnostics;
  double seconds = 0.0;
  int K = 0;
  int p = 0;
  std::string bc;
  double kappa0 = 0.0;
  double Omega = 0.0;
  std::string modulation;
  std::map<std::string, std::string> echo;
  int refined = 0;  // modes improved by inverse iteration
};

struct SolveOptions
{
  bool vectors = true;
  bool refine = true;
  double refine_threshold = 1e-8;
  int refine_limit = 256;
  int dense_limit = 6000;
};

// All 2N eigenvalues of the block pencil as omega = -i lambda, unfolded.
std::vector<cplx> BlockEigenvalues(const BlockPencil &pencil, int dense_limit = 6000);

// Finite eigenvalues omega of L0 x = i omega L1 x.
std::vector<cplx> FastTimeEigenvalues(const FastTimePencil &pencil, int dense_limit = 6000);

SpectrumReport SolveSpectrum(const HarmonicProblem &problem, const SolveOptions &options = {});

// Mode within radius of target (folded omega), nearest first; ties by residual then |Im|.
const FloquetMode &MatchEigenvalue(const SpectrumReport &report, cplx target, double radius);

// Shift-invert iteration on the block pencil for the raw eigenvalue nearest target.
FloquetMode SolveTargeted(const HarmonicProblem &problem, cplx target, double tol = 1e-14,
                          int max_iterations = 60);

// |<c, u>| / (||c|| ||u||) with c the x-constant n=0 vector.
double ConstantModeCorrelation(const FloquetMode &mode);

struct NearPair
{
  int i, j;
  double distance;
  double correlation;
};

// Pairs of raw eigenvalues closer than tol, with eigenvector correlation.
std::vector<NearPair> NearCoincidentPairs(const SpectrumReport &report, double tol);

}  // namespace floquet

#endif  // FLOQUET_EIGENSOLVER_HPP
