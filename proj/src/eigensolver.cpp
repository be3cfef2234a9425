// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "floquet/eigensolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include "floquet/error.hpp"
#include "floquet/timedomain.hpp"

namespace floquet
{

namespace
{

void CheckSize(Eigen::Index n, int limit)
{
  if (n > limit)
  {
    throw Error(ErrorKind::SizeLimit,
                "pencil dimension " + std::to_string(n) + " exceeds dense limit " +
                    std::to_string(limit),
                static_cast<double>(n));
  }
}

bool IsIdentity(const CMatrix &B)
{
  return (B - CMatrix::Identity(B.rows(), B.cols())).cwiseAbs().maxCoeff() < 1e-13;
}

// Standard matrix Bmass^{-1} A.
CMatrix Standardize(const BlockPencil &pencil)
{
  if (IsIdentity(pencil.Bmass))
  {
    return pencil.A;
  }
  return Eigen::PartialPivLU<CMatrix>(pencil.Bmass).solve(pencil.A);
}

struct Geev
{
  CVector values;
  CMatrix vectors;
};

Geev RunGeev(CMatrix A, bool vectors)
{
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Geev out;
  out.values.resize(n);
  if (vectors)
  {
    out.vectors.resize(n, n);
  }
  lapack_complex_double dummy = 0.0;
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, A.data(), n,
                    out.values.data(), &dummy, 1, vectors ? out.vectors.data() : &dummy,
                    vectors ? n : 1);
  if (info != 0)
  {
    std::ostringstream s;
    s << "zgeev failed with info=" << info;
    if (info > 0)
    {
      s << "; eigenvalues " << 0 << ".." << info - 1 << " did not converge";
    }
    throw Error(ErrorKind::Numeric, s.str(), info);
  }
  return out;
}

double MassNorm(const HarmonicProblem &problem, const HarmonicVector &u)
{
  const auto U = u.AsMatrix();
  return std::sqrt(std::abs((U.adjoint() * problem.basis().M().cast<cplx>() * U).trace()));
}

FloquetMode MakeMode(const HarmonicProblem &problem, cplx omega_raw, const CVector &x)
{
  const int N = problem.dim();
  FloquetMode mode;
  mode.omega_raw = omega_raw;
  mode.omega = BrillouinFold(omega_raw, problem.Omega());
  mode.fold_index = FoldIndex(omega_raw, problem.Omega());
  mode.fingerprint = problem.fingerprint();
  HarmonicVector u(problem.K(), problem.spatial_dim(), x.head(N));
  HarmonicVector z(problem.K(), problem.spatial_dim(), x.tail(N));
  double nrm = MassNorm(problem, u);
  if (!(nrm > 0.0))
  {
    nrm = 1.0;
  }
  // Fix the phase by the largest entry so repeated runs agree.
  Eigen::Index arg = 0;
  u.data().cwiseAbs().maxCoeff(&arg);
  const cplx phase = std::abs(u.data()(arg)) > 0.0 ? std::conj(u.data()(arg)) /
                                                          std::abs(u.data()(arg))
                                                    : cplx(1.0);
  u.data() *= phase / nrm;
  z.data() *= phase / nrm;
  mode.u_hat = std::move(u);
  mode.z_hat = std::move(z);
  mode.residual = ResidualForm(problem, omega_raw, mode.u_hat);
  return mode;
}

// One inverse-iteration step on Q(omega); kept only if the residual drops.
bool Refine(const HarmonicProblem &problem, FloquetMode &mode)
{
  const CMatrix Q = AssembleQuadratic(problem).Evaluate(mode.omega_raw);
  Eigen::PartialPivLU<CMatrix> lu(Q);
  CVector y = lu.solve(mode.u_hat.data());
  if (!y.allFinite() || !(y.norm() > 0.0))
  {
    return false;
  }
  HarmonicVector u(problem.K(), problem.spatial_dim(), y);
  u.data() /= MassNorm(problem, u);
  const double r = ResidualForm(problem, mode.omega_raw, u);
  if (!(r < mode.residual))
  {
    return false;
  }
  mode.u_hat = u;
  mode.z_hat = ShiftedDerivative(u, mode.omega_raw, problem.Omega());
  mode.residual = r;
  return true;
}

bool ModeLess(const FloquetMode &a, const FloquetMode &b)
{
  const double ia = std::abs(a.omega.imag()), ib = std::abs(b.omega.imag());
  if (ia != ib)
  {
    return ia < ib;
  }
  if (a.omega.real() != b.omega.real())
  {
    return a.omega.real() < b.omega.real();
  }
  return a.fold_index < b.fold_index;
}

}  // namespace

cplx BrillouinFold(cplx omega, double Omega)
{
  return omega - static_cast<double>(FoldIndex(omega, Omega)) * Omega;
}

int FoldIndex(cplx omega, double Omega)
{
  if (!(Omega > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "Omega must be positive", Omega);
  }
  double l = std::round(omega.real() / Omega);
  double r = omega.real() - l * Omega;
  // Half-open (-Omega/2, Omega/2]; points within round-off of -Omega/2 move up.
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(omega.real()));
  if (r <= -0.5 * Omega + tol)
  {
    l -= 1.0;
  }
  else if (r > 0.5 * Omega + tol)
  {
    l += 1.0;
  }
  return static_cast<int>(l);
}

std::vector<cplx> BlockEigenvalues(const BlockPencil &pencil, int dense_limit)
{
  CheckSize(pencil.A.rows(), dense_limit);
  const Geev g = RunGeev(Standardize(pencil), false);
  std::vector<cplx> out(g.values.size());
  for (Eigen::Index i = 0; i < g.values.size(); i++)
  {
    out[i] = -kI * g.values(i);
  }
  return out;
}

std::vector<cplx> FastTimeEigenvalues(const FastTimePencil &pencil, int dense_limit)
{
  CheckSize(pencil.L0.rows(), dense_limit);
  const lapack_int n = static_cast<lapack_int>(pencil.L0.rows());
  CMatrix A = pencil.L0, B = pencil.L1;
  CVector alpha(n), beta(n);
  lapack_complex_double dummy = 0.0;
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, A.data(), n, B.data(), n,
                                        alpha.data(), beta.data(), &dummy, 1, &dummy, 1);
  if (info != 0)
  {
    throw Error(ErrorKind::Numeric, "zggev failed with info=" + std::to_string(info), info);
  }
  std::vector<cplx> out;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (lapack_int i = 0; i < n; i++)
  {
    if (std::abs(beta(i)) > 1e-13 * std::abs(alpha(i)) && std::abs(beta(i)) > 1e-15 / scale)
    {
      out.push_back(-kI * alpha(i) / beta(i));
    }
  }
  return out;
}

SpectrumReport SolveSpectrum(const HarmonicProblem &problem, const SolveOptions &options)
{
  const auto start = std::chrono::steady_clock::now();
  const BlockPencil pencil = AssembleBlock(problem);
  CheckSize(pencil.A.rows(), options.dense_limit);
  const Geev g = RunGeev(Standardize(pencil), options.vectors);

  SpectrumReport report;
  report.K = problem.K();
  report.p = problem.p();
  report.bc = problem.bc().name();
  report.kappa0 = problem.bc().damping();
  report.Omega = problem.Omega();
  report.modulation = problem.modulation().label();
  report.modes.reserve(g.values.size());
  for (Eigen::Index i = 0; i < g.values.size(); i++)
  {
    const cplx omega_raw = -kI * g.values(i);
    if (!std::isfinite(omega_raw.real()) || !std::isfinite(omega_raw.imag()))
    {
      throw Error(ErrorKind::Numeric, "non-finite eigenvalue at index " + std::to_string(i));
    }
    if (options.vectors)
    {
      report.modes.push_back(MakeMode(problem, omega_raw, g.vectors.col(i)));
    }
    else
    {
      FloquetMode m;
      m.omega_raw = omega_raw;
      m.omega = BrillouinFold(omega_raw, problem.Omega());
      m.fold_index = FoldIndex(omega_raw, problem.Omega());
      m.residual = std::numeric_limits<double>::quiet_NaN();
      m.fingerprint = problem.fingerprint();
      report.modes.push_back(std::move(m));
    }
  }
  if (options.vectors && options.refine)
  {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < report.modes.size(); i++)
    {
      if (report.modes[i].residual > options.refine_threshold)
      {
        order.push_back(i);
      }
    }
    // Worst residuals first.
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
              { return report.modes[a].residual > report.modes[b].residual; });
    if (static_cast<int>(order.size()) > options.refine_limit)
    {
      order.resize(options.refine_limit);
    }
    for (std::size_t i : order)
    {
      report.refined += Refine(problem, report.modes[i]) ? 1 : 0;
    }
  }
  std::stable_sort(report.modes.begin(), report.modes.end(), ModeLess);

  report.diagnostics.C_inv = InverseConstant(problem.basis());
  report.diagnostics.C_kappa_prime = GrowthConstant(problem.modulation());
  report.diagnostics.c_kappa = problem.modulation().lower_bound();
  report.diagnostics.C_kappa = problem.modulation().upper_bound();
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

const FloquetMode &MatchEigenvalue(const SpectrumReport &report, cplx target, double radius)
{
  if (!(radius > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "match radius must be positive", radius);
  }
  const FloquetMode *best = nullptr;
  double best_d = 0.0;
  for (const FloquetMode &m : report.modes)
  {
    const double d = std::abs(m.omega - target);
    if (d > radius)
    {
      continue;
    }
    if (!best)
    {
      best = &m;
      best_d = d;
      continue;
    }
    const double tie = 1e-12 * std::max(1.0, best_d);
    if (d < best_d - tie)
    {
      best = &m;
      best_d = d;
    }
    else if (std::abs(d - best_d) <= tie)
    {
      const double ra = std::isnan(m.residual) ? 0.0 : m.residual;
      const double rb = std::isnan(best->residual) ? 0.0 : best->residual;
      if (ra < rb || (ra == rb && std::abs(m.omega.imag()) < std::abs(best->omega.imag())))
      {
        best = &m;
        best_d = std::min(d, best_d);
      }
    }
  }
  if (!best)
  {
    std::ostringstream s;
    s << "no eigenvalue within " << radius << " of " << target;
    throw Error(ErrorKind::NotFound, s.str(), radius);
  }
  return *best;
}

constexpr double kAcceptResidual = 1e-9;
constexpr Eigen::Index kDenseFallback = 6000;

FloquetMode SolveTargeted(const HarmonicProblem &problem, cplx target, double tol,
                          int max_iterations)
{
  const BlockPencil pencil = AssembleBlock(problem);
  const CMatrix A = Standardize(pencil);
  const Eigen::Index n = A.rows();
  const double scale = A.cwiseAbs().rowwise().sum().maxCoeff();
  cplx shift = kI * target;
  CVector x = CVector::Ones(n).normalized();
  cplx lambda = shift;
  int refactor = 0;
  auto lu = std::make_unique<Eigen::PartialPivLU<CMatrix>>(A - shift * CMatrix::Identity(n, n));
  double last_res = std::numeric_limits<double>::infinity();
  double res = last_res;
  for (int it = 0; it < max_iterations; it++)
  {
    CVector y = lu->solve(x);
    if (!y.allFinite() || !(y.norm() > 0.0))
    {
      throw Error(ErrorKind::Numeric, "shift-invert iteration broke down");
    }
    x = y.normalized();
    const CVector Ax = A * x;
    lambda = x.dot(Ax);
    res = (Ax - lambda * x).norm() / scale;
    if (res < tol)
    {
      break;
    }
    // Re-factor at the current estimate when convergence stalls.
    if (res > 0.5 * last_res && refactor < 3)
    {
      shift = lambda;
      lu = std::make_unique<Eigen::PartialPivLU<CMatrix>>(A - shift * CMatrix::Identity(n, n));
      refactor++;
    }
    last_res = res;
  }
  if (res >= kAcceptResidual && n <= kDenseFallback)
  {
    // Clustered spectrum: shift at the dense eigenvalue nearest the target.
    const Eigen::ComplexEigenSolver<CMatrix> es(A, false);
    Eigen::Index best = 0;
    (es.eigenvalues().array() - kI * target).abs().minCoeff(&best);
    shift = es.eigenvalues()(best);
    lu = std::make_unique<Eigen::PartialPivLU<CMatrix>>(
        A - (shift + 1e-10 * scale) * CMatrix::Identity(n, n));
    x = CVector::Ones(n).normalized();
    for (int it = 0; it < 4; it++)
    {
      x = lu->solve(x).normalized();
    }
    const CVector Ax = A * x;
    lambda = x.dot(Ax);
    res = (Ax - lambda * x).norm() / scale;
  }
  if (!(res < kAcceptResidual))
  {
    throw Error(ErrorKind::Numeric, "shift-invert iteration did not converge", res);
  }
  return MakeMode(problem, -kI * lambda, x);
}

double ConstantModeCorrelation(const FloquetMode &mode)
{
  if (!mode.has_vectors())
  {
    return 0.0;
  }
  const cplx c = mode.u_hat.harmonic(0)(0);
  return std::abs(c) / mode.u_hat.data().norm();
}

std::vector<NearPair> NearCoincidentPairs(const SpectrumReport &report, double tol)
{
  std::vector<NearPair> out;
  const auto &m = report.modes;
  for (std::size_t i = 0; i < m.size(); i++)
  {
    for (std::size_t j = i + 1; j < m.size(); j++)
    {
      const double d = std::abs(m[i].omega_raw - m[j].omega_raw);
      if (d < tol)
      {
        double corr = std::numeric_limits<double>::quiet_NaN();
        if (m[i].has_vectors() && m[j].has_vectors())
        {
          corr = std::abs(m[i].u_hat.data().dot(m[j].u_hat.data())) /
                 (m[i].u_hat.data().norm() * m[j].u_hat.data().norm());
        }
        out.push_back({static_cast<int>(i), static_cast<int>(j), d, corr});
      }
    }
  }
  return out;
}

}  // namespace floquet
