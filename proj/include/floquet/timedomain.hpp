// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_TIMEDOMAIN_HPP
#define FLOQUET_TIMEDOMAIN_HPP

#include <functional>
#include <vector>
#include "floquet/assembly.hpp"
#include "floquet/eigensolver.hpp"

namespace floquet
{

// Spatially discrete state; v = du/dt.
struct State
{
  double t = 0.0;
  CVector u, v;
};

// Galerkin load (f(t), phi_i).
using Forcing = std::function<CVector(double)>;

// One Crank-Nicolson step of u' = v, M v' = -kappa S u - kappa0 B v + f with kappa and f
// taken at t + dt/2. Only the modulation, boundary and basis of the problem are used.
State CnStep(const HarmonicProblem &problem, const State &state, double dt,
             const Forcing &forcing = nullptr);

// Initial state followed by the states after each of the given steps.
std::vector<State> CnIntegrate(const HarmonicProblem &problem, const State &initial, double dt,
                               int steps, const Forcing &forcing = nullptr);

// (1/2)(v^H M v + kappa(t) u^H S u).
double Energy(const HarmonicProblem &problem, const State &state);

// max_k |E(t_k) - E(t_0) - int (kappa'/2 |grad u|^2 + Re(v, f) - kappa0 |v|_Gamma^2)| with
// the integral by the trapezoidal rule on the stored times.
double EnergyIdentityResidual(const HarmonicProblem &problem, const std::vector<State> &traj,
                              const Forcing &forcing = nullptr);

// (2/T) int_0^T (kappa')_+ / kappa dt, kappa' from the coefficient series.
double GrowthConstant(const Modulation &kappa, int nodes = 8192);

// U(t) = sum_n u_n e^{-i(omega + n Omega) t} at the raw eigenvalue, and dU/dt.
CVector BlochTimeEval(const FloquetMode &mode, double Omega, double t);
CVector BlochTimeDerivative(const FloquetMode &mode, double Omega, double t);

struct TraceRow
{
  double t = 0.0;
  double energy = 0.0;       // E_h of the integrated solution
  double norm_u = 0.0;       // ||u||
  double norm_v = 0.0;       // ||du/dt||
  double d_norm = 0.0;       // ||d/dt d|| + ||grad d||, d = u - U
  double d_relative = 0.0;   // ||d|| / ||U||
  double d_energy_relative = 0.0;  // d_norm / (||dU/dt|| + ||grad U||)
};

struct ValidationResult
{
  std::vector<TraceRow> rows;
  double max_relative = 0.0;
  double max_energy_relative = 0.0;
  // ||Re(u(0) e^{-i omega T}) - Re u(T)|| for the integrated solution u.
  double quasi_periodicity_defect = 0.0;
  std::vector<double> energy_ratios;  // E(kT) / E((k-1)T)
  double predicted_ratio = 0.0;       // e^{2 Im omega T}
  int steps_per_period = 0;
};

// Integrates from (U(0), dU/dt(0)) and compares with U(t). Rows every stride steps.
ValidationResult FloquetValidation(const HarmonicProblem &problem, const FloquetMode &mode,
                                   double dt, int periods, int stride = 1);

}  // namespace floquet

#endif  // FLOQUET_TIMEDOMAIN_HPP
