// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_ORACLES_HPP
#define FLOQUET_ORACLES_HPP

#include <string>
#include <vector>
#include "floquet/assembly.hpp"

namespace floquet
{

struct ComplexBox
{
  double re_min = -50.0, re_max = 50.0, im_min = -10.0, im_max = 10.0;

  bool Contains(cplx z) const
  {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

struct Resonance
{
  cplx value;
  cplx folded;
  int index = 0;         // m in pi m / L, or k for Neumann
  double det_abs = 0.0;  // |det A(omega)|, NaN where not applicable
  bool printed = false;  // member of the 2 pi-spaced closed form
};

struct ResonanceSet
{
  std::string generator;
  std::vector<Resonance> members;

  // Distinct folded members.
  std::vector<cplx> Folded(double tol = 1e-12) const;
};

// (1 - k0)^2 e^{i omega L} - (1 + k0)^2 e^{-i omega L}.
cplx AbsorbingDeterminant(cplx omega, double kappa0, double length = 1.0);

// -log((1 + k0) / (1 - k0)) / L.
double AbsorbingLevel(double kappa0, double length = 1.0);

// kappa = 1, absorbing k0 in (0,1), interval of the given length: {0} and
// {(pi m - i log((1+k0)/(1-k0))) / L} in the window. Even m form the closed form
// {2 pi k - i log(...)} at L = 1; all m are zeros of the determinant.
ResonanceSet AbsorbingConstResonances(double kappa0, const ComplexBox &window, double Omega,
                                      double length = 1.0);

// {sqrt(kappa) k pi / L : k = 0..count}.
ResonanceSet NeumannConstResonances(double kappa, double length, int count, double Omega);

struct SturmLiouvilleResult
{
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // Fourier coefficients of p_n, columns, T_kappa-orthonormal
  // max |Im mu| / max(1, |mu|) over the nonsymmetric reduction T^{-1} D^* D
  double imag_leakage = 0.0;
  int K = 0;
};

// (D^* D) p = mu T_kappa p on harmonics -K..K.
SturmLiouvilleResult SturmLiouville(const Modulation &kappa, int K);

// Uses K = 4 * count (at least 2) and keeps the first count + 1 eigenvalues.
SturmLiouvilleResult SturmLiouvilleCount(const Modulation &kappa, int count);

// Least-squares slope of log mu_n against log n over lo <= n <= hi.
double GrowthExponent(const RVector &mu, int lo, int hi);

struct ResolventResult
{
  HarmonicVector u;                     // sum up to the requested order
  std::vector<HarmonicVector> partial;  // partial sums, orders 0..order
  double kappa_bar = 0.0;
  double radius = 0.0;  // printed radius estimate for eps
  bool within_radius = true;
};

// kappa_eps = kappa_r + eps kappa_per is the problem modulation. kappa_bar is the
// mean, E = (T_kappa_eps - kappa_bar I) / eps, and
// u = R0 sum_n (-eps (E x S) R0)^n b with R0 the decoupled unmodulated resolvent.
ResolventResult ResolventSeries(const HarmonicProblem &problem, cplx omega, double eps, int order,
                                const HarmonicVector &load);

// The same series as a dense matrix (effective resolvent of the discrete problem).
CMatrix EffectiveResolvent(const HarmonicProblem &problem, cplx omega, int order);

}  // namespace floquet

#endif  // FLOQUET_ORACLES_HPP
