// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_DIAGNOSTICS_HPP
#define FLOQUET_DIAGNOSTICS_HPP

#include <string>
#include <vector>
#include "floquet/assembly.hpp"
#include "floquet/eigensolver.hpp"

namespace floquet
{

enum class Status
{
  Pass,
  Advisory,
  Fail,
};

const char *ToString(Status status);

struct LocalizationProfile
{
  std::vector<double> norms;  // ||u_n||_M, index n + K
  int K = 0;
  int band_lo = 4, band_hi = 0;
  // Least-squares slope of log ||u_n|| against log |n| over the band, both signs of n.
  // -infinity when fewer than two band entries exceed the noise floor.
  double slope = 0.0;
  double C_inv = 0.0;
  // max over 1 <= |n| <= K of n^2 ||u_n|| / C_inv^2.
  double bound_constant = 0.0;

  double norm(int n) const { return norms[n + K]; }
};

// Norms below floor * max norm are excluded from the slope fit.
LocalizationProfile Localization(const FloquetMode &mode, const SpatialBasis &basis,
                                 double C_inv, int band_lo = 4, double floor = 1e-13);

// ResidualForm at (omega_raw + l Omega, F^{-l} u), the pair equivalent to (omega, u) under
// the expansion e^{-i n Omega t}.
double FoldingResidual(const HarmonicProblem &problem, const FloquetMode &mode, int l);

struct RegionViolation
{
  int index;
  cplx omega;
  double excess;
};

struct RegionResult
{
  Status status = Status::Pass;
  bool below_threshold = false;  // K not above the threshold rule: result is advisory
  int threshold = 0;
  double C_prime = 0.0;
  double tolerance = 1e-6;
  double max_im = 0.0;      // max Im omega
  double max_abs_im = 0.0;  // max |Im omega|
  std::vector<RegionViolation> violations;
};

// Im omega <= C'_kappa (absorbing) or |Im omega| <= C'_kappa (Neumann).
RegionResult RegionCheck(const SpectrumReport &report, const HarmonicProblem &problem,
                         double margin = 1.0, double tol = 1e-6);

// Smallest integer K > margin C_inv^2.
int KThreshold(double C_inv, double margin = 1.0);

// Smallest integer K with K^q > margin C_inv^2.
int RelaxedKThreshold(double C_inv, double margin, double q);

// sqrt(sum_{K<|n|<=3K} ||sum_m kappa_{n-m} grad u_m||^2).
double BlochDefectNorm(const HarmonicProblem &problem, const FloquetMode &mode);

// Largest |omega| over Brillouin-zone modes (fold index 0).
double MaxZoneFrequency(const SpectrumReport &report);

}  // namespace floquet

#endif  // FLOQUET_DIAGNOSTICS_HPP
