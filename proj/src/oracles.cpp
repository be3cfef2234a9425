// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include "floquet/oracles.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include "floquet/eigensolver.hpp"
#include "floquet/error.hpp"

namespace floquet
{

std::vector<cplx> ResonanceSet::Folded(double tol) const
{
  std::vector<cplx> out;
  for (const Resonance &r : members)
  {
    bool seen = false;
    for (const cplx &z : out)
    {
      seen = seen || std::abs(z - r.folded) <= tol;
    }
    if (!seen)
    {
      out.push_back(r.folded);
    }
  }
  return out;
}

cplx AbsorbingDeterminant(cplx omega, double kappa0, double length)
{
  const cplx e = std::exp(kI * omega * length);
  return (1.0 - kappa0) * (1.0 - kappa0) * e - (1.0 + kappa0) * (1.0 + kappa0) / e;
}

double AbsorbingLevel(double kappa0, double length)
{
  return -std::log((1.0 + kappa0) / (1.0 - kappa0)) / length;
}

ResonanceSet AbsorbingConstResonances(double kappa0, const ComplexBox &window, double Omega,
                                      double length)
{
  if (!(kappa0 > 0.0 && kappa0 < 1.0))
  {
    throw Error(ErrorKind::Domain, "kappa0 must lie in (0, 1)", kappa0);
  }
  if (!(length > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "interval length must be positive", length);
  }
  ResonanceSet set;
  std::ostringstream g;
  g << "absorbing kappa=1 kappa0=" << kappa0 << " L=" << length;
  set.generator = g.str();
  if (window.Contains(0.0))
  {
    set.members.push_back(
        {0.0, 0.0, 0, std::numeric_limits<double>::quiet_NaN(), true});
  }
  const double level = AbsorbingLevel(kappa0, length);
  const double spacing = kPi / length;
  const int lo = static_cast<int>(std::floor(window.re_min / spacing)) - 1;
  const int hi = static_cast<int>(std::ceil(window.re_max / spacing)) + 1;
  for (int m = lo; m <= hi; m++)
  {
    const cplx z(m * spacing, level);
    if (!window.Contains(z))
    {
      continue;
    }
    set.members.push_back({z, BrillouinFold(z, Omega), m,
                           std::abs(AbsorbingDeterminant(z, kappa0, length)), m % 2 == 0});
  }
  return set;
}

ResonanceSet NeumannConstResonances(double kappa, double length, int count, double Omega)
{
  if (count < 1)
  {
    throw Error(ErrorKind::InvalidArgument, "count must be at least 1", count);
  }
  ResonanceSet set;
  std::ostringstream g;
  g << "neumann kappa=" << kappa << " L=" << length;
  set.generator = g.str();
  for (int k = 0; k <= count; k++)
  {
    const cplx z(std::sqrt(kappa) * k * kPi / length, 0.0);
    set.members.push_back(
        {z, BrillouinFold(z, Omega), k, std::numeric_limits<double>::quiet_NaN(), true});
  }
  return set;
}

SturmLiouvilleResult SturmLiouville(const Modulation &kappa, int K)
{
  const Modulation k2 = kappa.WithOrder(2 * K);
  const CMatrix T = ToeplitzMatrix(k2, K);
  const int H = 2 * K + 1;
  CMatrix DD = CMatrix::Zero(H, H);
  for (int n = -K; n <= K; n++)
  {
    DD(n + K, n + K) = std::pow(n * kappa.frequency(), 2);
  }
  Eigen::LLT<CMatrix> llt(T);
  if (llt.info() != Eigen::Success)
  {
    throw Error(ErrorKind::PositivityViolation, "Toeplitz matrix of kappa is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> eig(DD, T);
  if (eig.info() != Eigen::Success)
  {
    throw Error(ErrorKind::Numeric, "Sturm-Liouville eigensolver failed");
  }
  SturmLiouvilleResult res;
  res.K = K;
  res.eigenvalues = eig.eigenvalues();
  res.eigenvectors = eig.eigenvectors();
  const CVector general = Eigen::ComplexEigenSolver<CMatrix>(llt.solve(DD), false).eigenvalues();
  res.imag_leakage = 0.0;
  for (const cplx &mu : general)
  {
    res.imag_leakage = std::max(res.imag_leakage, std::abs(mu.imag()) / std::max(1.0, std::abs(mu)));
  }
  return res;
}

SturmLiouvilleResult SturmLiouvilleCount(const Modulation &kappa, int count)
{
  SturmLiouvilleResult full = SturmLiouville(kappa, std::max(2, 4 * count));
  const int keep = std::min<int>(count + 1, static_cast<int>(full.eigenvalues.size()));
  full.eigenvalues.conservativeResize(keep);
  full.eigenvectors.conservativeResize(Eigen::NoChange, keep);
  return full;
}

double GrowthExponent(const RVector &mu, int lo, int hi)
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int i = std::max(lo, 1); i <= hi && i < mu.size(); i++)
  {
    if (!(mu(i) > 0.0))
    {
      continue;
    }
    const double x = std::log(static_cast<double>(i)), y = std::log(mu(i));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n++;
  }
  if (n < 2)
  {
    throw Error(ErrorKind::InvalidArgument, "growth fit needs at least two positive values");
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace
{

struct Split
{
  double kappa_bar;
  CMatrix offdiag;  // T_kappa_eps - kappa_bar I
  std::vector<Eigen::PartialPivLU<CMatrix>> blocks;
  double r0_norm = 0.0;
};

Split SplitProblem(const HarmonicProblem &problem, cplx omega)
{
  if (problem.boundary_toeplitz())
  {
    throw Error(ErrorKind::UnsupportedVariant,
                "resolvent series assumes a boundary term without Toeplitz factor");
  }
  Split s;
  const CMatrix &T = problem.toeplitz();
  s.kappa_bar = T(problem.K(), problem.K()).real();
  s.offdiag = T - s.kappa_bar * CMatrix::Identity(T.rows(), T.cols());
  const RMatrix &M = problem.basis().M();
  const RMatrix &S = problem.basis().S();
  const RMatrix &B = problem.basis().B();
  const double k0 = problem.bc().damping();
  for (int n = -problem.K(); n <= problem.K(); n++)
  {
    const cplx w = omega + static_cast<double>(n) * problem.Omega();
    const CMatrix block = (-w * w * M + s.kappa_bar * S).cast<cplx>() - kI * k0 * w * B.cast<cplx>();
    Eigen::JacobiSVD<CMatrix> svd(block);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 1e-12 * smax))
    {
      std::ostringstream msg;
      msg << "omega=" << omega << " is a resonance of the unmodulated problem (harmonic " << n
          << ")";
      throw Error(ErrorKind::NearResonance, msg.str(), smax / smin);
    }
    s.r0_norm = std::max(s.r0_norm, 1.0 / smin);
    s.blocks.emplace_back(block);
  }
  return s;
}

void ApplyR0(const Split &s, Eigen::Map<CMatrix> U)
{
  for (Eigen::Index c = 0; c < U.cols(); c++)
  {
    U.col(c) = s.blocks[c].solve(CVector(U.col(c)));
  }
}

}  // namespace

ResolventResult ResolventSeries(const HarmonicProblem &problem, cplx omega, double eps, int order,
                                const HarmonicVector &load)
{
  if (order < 0)
  {
    throw Error(ErrorKind::InvalidArgument, "series order must be nonnegative");
  }
  if (load.K() != problem.K() || load.dim() != problem.spatial_dim())
  {
    throw Error(ErrorKind::DimensionMismatch, "load does not match the problem truncation");
  }
  const Split s = SplitProblem(problem, omega);
  ResolventResult res;
  res.kappa_bar = s.kappa_bar;
  const double Dnorm = problem.K() * problem.Omega() + std::abs(omega);
  if (eps > 0.0)
  {
    const double Enorm = Eigen::JacobiSVD<CMatrix>(s.offdiag / eps).singularValues()(0);
    res.radius = Enorm > 0.0 ? 1.0 / (Dnorm * Dnorm * Enorm * s.r0_norm)
                             : std::numeric_limits<double>::infinity();
    res.within_radius = eps < res.radius;
  }
  else
  {
    res.radius = std::numeric_limits<double>::infinity();
  }
  const CMatrix S = problem.basis().S().cast<cplx>();
  HarmonicVector term = load;
  ApplyR0(s, term.AsMatrix());
  HarmonicVector sum = term;
  res.partial.push_back(sum);
  for (int k = 1; k <= order; k++)
  {
    // term <- -R0 (offdiag x S) term
    HarmonicVector next(problem.K(), problem.spatial_dim());
    next.AsMatrix() = -(S * (term.AsMatrix() * s.offdiag.transpose()));
    ApplyR0(s, next.AsMatrix());
    term = next;
    sum.data() += term.data();
    res.partial.push_back(sum);
  }
  res.u = sum;
  return res;
}

CMatrix EffectiveResolvent(const HarmonicProblem &problem, cplx omega, int order)
{
  const int N = problem.dim();
  CMatrix R(N, N);
  for (int j = 0; j < N; j++)
  {
    HarmonicVector e(problem.K(), problem.spatial_dim());
    e.data()(j) = 1.0;
    R.col(j) = ResolventSeries(problem, omega, 0.0, order, e).u.data();
  }
  return R;
}

}  // namespace floquet
