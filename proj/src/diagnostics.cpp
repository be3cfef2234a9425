// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include "floquet/diagnostics.hpp"

#include <cmath>
#include <limits>
#include "floquet/error.hpp"

namespace floquet
{

const char *ToString(Status status)
{
  switch (status)
  {
    case Status::Pass:
      return "pass";
    case Status::Advisory:
      return "advisory";
    case Status::Fail:
      return "fail";
  }
  return "fail";
}

LocalizationProfile Localization(const FloquetMode &mode, const SpatialBasis &basis,
                                 double C_inv, int band_lo, double floor)
{
  if (!mode.has_vectors())
  {
    throw Error(ErrorKind::InvalidArgument, "localization needs the mode vector");
  }
  LocalizationProfile prof;
  prof.K = mode.u_hat.K();
  prof.band_lo = band_lo;
  prof.band_hi = prof.K;
  prof.C_inv = C_inv;
  const CMatrix M = basis.M().cast<cplx>();
  double peak = 0.0;
  for (int n = -prof.K; n <= prof.K; n++)
  {
    const CVector un = mode.u_hat.harmonic(n);
    const double v = std::sqrt(std::abs(un.dot(M * un)));
    prof.norms.push_back(v);
    peak = std::max(peak, v);
    if (n != 0)
    {
      prof.bound_constant = std::max(prof.bound_constant, double(n) * n * v / (C_inv * C_inv));
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int n = -prof.K; n <= prof.K; n++)
  {
    const int a = std::abs(n);
    const double v = prof.norm(n);
    if (a < band_lo || a > prof.band_hi || !(v > floor * peak))
    {
      continue;
    }
    const double x = std::log(static_cast<double>(a)), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    count++;
  }
  const double den = count * sxx - sx * sx;
  prof.slope = (count >= 2 && den > 0.0) ? (count * sxy - sx * sy) / den
                                         : -std::numeric_limits<double>::infinity();
  return prof;
}

double FoldingResidual(const HarmonicProblem &problem, const FloquetMode &mode, int l)
{
  if (std::abs(l) > problem.K())
  {
    throw Error(ErrorKind::InvalidArgument, "folding shift |l| must not exceed K");
  }
  const HarmonicVector folded = FoldShift(mode.u_hat, -l);
  return ResidualForm(problem, mode.omega_raw + static_cast<double>(l) * problem.Omega(), folded);
}

int KThreshold(double C_inv, double margin)
{
  if (margin < 1.0)
  {
    throw Error(ErrorKind::InvalidArgument, "margin must be at least 1", margin);
  }
  return static_cast<int>(std::floor(margin * C_inv * C_inv + 1e-9)) + 1;
}

int RelaxedKThreshold(double C_inv, double margin, double q)
{
  if (!(q > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "decay exponent must be positive", q);
  }
  const double target = margin * C_inv * C_inv;
  int K = std::max(1, static_cast<int>(std::floor(std::pow(target, 1.0 / q))) - 1);
  while (std::pow(static_cast<double>(K), q) <= target)
  {
    K++;
  }
  return K;
}

RegionResult RegionCheck(const SpectrumReport &report, const HarmonicProblem &problem,
                         double margin, double tol)
{
  RegionResult res;
  res.tolerance = tol;
  res.C_prime = report.diagnostics.C_kappa_prime;
  res.threshold = KThreshold(report.diagnostics.C_inv, margin);
  res.below_threshold = problem.K() < res.threshold;
  const bool neumann = problem.bc().kind == BcKind::Neumann;
  for (std::size_t i = 0; i < report.modes.size(); i++)
  {
    const cplx w = report.modes[i].omega;
    res.max_im = std::max(res.max_im, w.imag());
    res.max_abs_im = std::max(res.max_abs_im, std::abs(w.imag()));
    const double measure = neumann ? std::abs(w.imag()) : w.imag();
    const double excess = measure - res.C_prime;
    if (excess > tol)
    {
      res.violations.push_back({static_cast<int>(i), w, excess});
    }
  }
  if (!res.violations.empty())
  {
    res.status = res.below_threshold ? Status::Advisory : Status::Fail;
  }
  return res;
}

double BlochDefectNorm(const HarmonicProblem &problem, const FloquetMode &mode)
{
  const int K = problem.K();
  const Modulation kappa = problem.modulation().WithOrder(4 * K);
  const CMatrix S = problem.basis().S().cast<cplx>();
  double sum = 0.0;
  for (int n = K + 1; n <= 3 * K; n++)
  {
    for (int sign : {-1, 1})
    {
      const int nn = sign * n;
      CVector v = CVector::Zero(problem.spatial_dim());
      for (int m = -K; m <= K; m++)
      {
        const cplx c = kappa.coefficient(nn - m);
        if (std::abs(c) < 1e-15)
        {
          continue;
        }
        v += c * mode.u_hat.harmonic(m);
      }
      sum += std::abs(v.dot(S * v));
    }
  }
  return std::sqrt(sum);
}

double MaxZoneFrequency(const SpectrumReport &report)
{
  double best = 0.0;
  for (const FloquetMode &m : report.modes)
  {
    if (m.fold_index == 0)
    {
      best = std::max(best, std::abs(m.omega));
    }
  }
  return best;
}

}  // namespace floquet
