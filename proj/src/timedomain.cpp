// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include "floquet/timedomain.hpp"

#include <cmath>
#include "floquet/error.hpp"

namespace floquet
{

namespace
{

double Quad(const RMatrix &G, const CVector &x) { return std::abs(x.dot(G.cast<cplx>() * x)); }

}  // namespace

State CnStep(const HarmonicProblem &problem, const State &state, double dt,
             const Forcing &forcing)
{
  if (!(dt > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "time step must be positive", dt);
  }
  const RMatrix &M = problem.basis().M();
  const RMatrix &S = problem.basis().S();
  const RMatrix &B = problem.basis().B();
  const double k0 = problem.bc().damping();
  const double tm = state.t + 0.5 * dt;
  const double km = problem.modulation()(tm);
  // Eliminating u_{n+1} = u_n + dt/2 (v_n + v_{n+1}).
  const RMatrix lhs = M + 0.5 * dt * k0 * B + 0.25 * dt * dt * km * S;
  const RMatrix rhs = M - 0.5 * dt * k0 * B - 0.25 * dt * dt * km * S;
  CVector b = rhs.cast<cplx>() * state.v - dt * km * (S.cast<cplx>() * state.u);
  if (forcing)
  {
    b += dt * forcing(tm);
  }
  Eigen::PartialPivLU<RMatrix> lu(lhs);
  if (!(std::abs(lu.determinant()) > 0.0))
  {
    throw Error(ErrorKind::Numeric, "singular Crank-Nicolson step matrix");
  }
  State next;
  next.t = state.t + dt;
  next.v = lu.solve(b.real()).cast<cplx>() + kI * lu.solve(b.imag()).cast<cplx>();
  next.u = state.u + 0.5 * dt * (state.v + next.v);
  if (!next.u.allFinite() || !next.v.allFinite())
  {
    throw Error(ErrorKind::Numeric, "non-finite state after Crank-Nicolson step");
  }
  return next;
}

std::vector<State> CnIntegrate(const HarmonicProblem &problem, const State &initial, double dt,
                               int steps, const Forcing &forcing)
{
  std::vector<State> traj;
  traj.reserve(steps + 1);
  traj.push_back(initial);
  for (int s = 0; s < steps; s++)
  {
    traj.push_back(CnStep(problem, traj.back(), dt, forcing));
  }
  return traj;
}

double Energy(const HarmonicProblem &problem, const State &state)
{
  return 0.5 * (Quad(problem.basis().M(), state.v) +
                problem.modulation()(state.t) * Quad(problem.basis().S(), state.u));
}

double EnergyIdentityResidual(const HarmonicProblem &problem, const std::vector<State> &traj,
                              const Forcing &forcing)
{
  if (traj.empty())
  {
    return 0.0;
  }
  const RMatrix &S = problem.basis().S();
  const RMatrix &B = problem.basis().B();
  const double k0 = problem.bc().damping();
  auto rate = [&](const State &s)
  {
    double r = 0.5 * problem.modulation().Derivative(s.t) * Quad(S, s.u) - k0 * Quad(B, s.v);
    if (forcing)
    {
      r += s.v.dot(forcing(s.t)).real();
    }
    return r;
  };
  const double E0 = Energy(problem, traj.front());
  double integral = 0.0, worst = 0.0;
  double prev = rate(traj.front());
  for (std::size_t k = 1; k < traj.size(); k++)
  {
    const double cur = rate(traj[k]);
    integral += 0.5 * (traj[k].t - traj[k - 1].t) * (prev + cur);
    prev = cur;
    worst = std::max(worst, std::abs(Energy(problem, traj[k]) - E0 - integral));
  }
  return worst;
}

double GrowthConstant(const Modulation &kappa, int nodes)
{
  const double T = kappa.period();
  auto root = [&](double a, double b)
  {
    const bool rising = kappa.Derivative(a) > 0.0;
    for (int it = 0; it < 60; it++)
    {
      const double m = 0.5 * (a + b);
      ((kappa.Derivative(m) > 0.0) == rising ? a : b) = m;
    }
    return 0.5 * (a + b);
  };
  // On each interval where kappa' > 0 the integrand integrates to log kappa(b) - log kappa(a).
  double sum = 0.0;
  double start = 0.0;
  bool positive = kappa.Derivative(0.0) > 0.0;
  for (int j = 1; j <= nodes; j++)
  {
    const double t0 = T * (j - 1) / nodes, t1 = T * j / nodes;
    const bool next = kappa.Derivative(t1) > 0.0;
    if (next != positive)
    {
      const double r = root(t0, t1);
      if (positive)
      {
        sum += std::log(kappa(r) / kappa(start));
      }
      start = r;
      positive = next;
    }
  }
  if (positive)
  {
    sum += std::log(kappa(T) / kappa(start));
  }
  return 2.0 * sum / T;
}

CVector BlochTimeEval(const FloquetMode &mode, double Omega, double t)
{
  CVector out = CVector::Zero(mode.u_hat.dim());
  for (int n = -mode.u_hat.K(); n <= mode.u_hat.K(); n++)
  {
    out += std::exp(-kI * (mode.omega_raw + n * Omega) * t) * mode.u_hat.harmonic(n);
  }
  return out;
}

CVector BlochTimeDerivative(const FloquetMode &mode, double Omega, double t)
{
  CVector out = CVector::Zero(mode.u_hat.dim());
  for (int n = -mode.u_hat.K(); n <= mode.u_hat.K(); n++)
  {
    const cplx s = mode.omega_raw + static_cast<double>(n) * Omega;
    out += -kI * s * std::exp(-kI * s * t) * mode.u_hat.harmonic(n);
  }
  return out;
}

ValidationResult FloquetValidation(const HarmonicProblem &problem, const FloquetMode &mode,
                                   double dt, int periods, int stride)
{
  if (mode.fingerprint != problem.fingerprint())
  {
    throw Error(ErrorKind::ConfigMismatch,
                "mode from '" + mode.fingerprint + "' used with '" + problem.fingerprint() + "'");
  }
  if (!mode.has_vectors())
  {
    throw Error(ErrorKind::InvalidArgument, "mode has no eigenvector");
  }
  const double T = problem.modulation().period();
  const double Om = problem.Omega();
  const int per = static_cast<int>(std::lround(T / dt));
  if (per < 1 || std::abs(per * dt - T) > 1e-9 * T)
  {
    throw Error(ErrorKind::InvalidArgument, "dt must divide the period", dt);
  }
  const RMatrix &M = problem.basis().M();
  const RMatrix &S = problem.basis().S();
  ValidationResult res;
  res.steps_per_period = per;
  res.predicted_ratio = std::exp(2.0 * mode.omega_raw.imag() * T);

  State s{0.0, BlochTimeEval(mode, Om, 0.0), BlochTimeDerivative(mode, Om, 0.0)};
  const State s0 = s;
  CVector u_T = s.u;
  double period_start_energy = Energy(problem, s);
  auto record = [&](const State &st)
  {
    const CVector U = BlochTimeEval(mode, Om, st.t);
    const CVector dU = BlochTimeDerivative(mode, Om, st.t);
    const CVector d = st.u - U, dd = st.v - dU;
    TraceRow row;
    row.t = st.t;
    row.energy = Energy(problem, st);
    row.norm_u = std::sqrt(Quad(M, st.u));
    row.norm_v = std::sqrt(Quad(M, st.v));
    row.d_norm = std::sqrt(Quad(M, dd)) + std::sqrt(Quad(S, d));
    row.d_relative = std::sqrt(Quad(M, d)) / std::sqrt(Quad(M, U));
    row.d_energy_relative = row.d_norm / (std::sqrt(Quad(M, dU)) + std::sqrt(Quad(S, U)));
    res.max_relative = std::max(res.max_relative, row.d_relative);
    res.max_energy_relative = std::max(res.max_energy_relative, row.d_energy_relative);
    res.rows.push_back(row);
  };
  record(s);
  const int steps = per * periods;
  for (int k = 1; k <= steps; k++)
  {
    s = CnStep(problem, s, dt);
    s.t = k * dt;
    if (k % stride == 0 || k == steps)
    {
      record(s);
    }
    if (k == per)
    {
      u_T = s.u;
    }
    if (k % per == 0)
    {
      const double E = Energy(problem, s);
      res.energy_ratios.push_back(E / period_start_energy);
      period_start_energy = E;
    }
  }
  const CVector gap = (s0.u * std::exp(-kI * mode.omega_raw * T)).real() - u_T.real();
  res.quasi_periodicity_defect = std::sqrt(Quad(M, gap.cast<cplx>()));
  return res;
}

}  // namespace floquet
