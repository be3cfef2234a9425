// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_ASSEMBLY_HPP
#define FLOQUET_ASSEMBLY_HPP

#include <string>
#include "floquet/harmonic_vector.hpp"
#include "floquet/modulation.hpp"
#include "floquet/spectral1d.hpp"

namespace floquet
{

enum class BcKind
{
  Absorbing,
  Neumann,
};

struct BoundaryCondition
{
  BcKind kind = BcKind::Absorbing;
  double kappa0 = 0.5;

  static BoundaryCondition Absorbing(double kappa0) { return {BcKind::Absorbing, kappa0}; }
  static BoundaryCondition Neumann() { return {BcKind::Neumann, 0.0}; }
  // Parses "absorbing" / "neumann".
  static BoundaryCondition Parse(const std::string &name, double kappa0);

  std::string name() const { return kind == BcKind::Absorbing ? "absorbing" : "neumann"; }
  // kappa0 for absorbing, 0 for Neumann.
  double damping() const { return kind == BcKind::Absorbing ? kappa0 : 0.0; }
};

// Truncated coupled-harmonics problem. Harmonic index outer, spatial inner.
class HarmonicProblem
{
public:
  HarmonicProblem(const Modulation &kappa, BoundaryCondition bc, int K, SpatialBasis basis,
                  bool boundary_toeplitz = false);
  HarmonicProblem(const Modulation &kappa, BoundaryCondition bc, int K, int p,
                  bool boundary_toeplitz = false);

  const Modulation &modulation() const { return kappa_; }
  const BoundaryCondition &bc() const { return bc_; }
  const SpatialBasis &basis() const { return basis_; }
  int K() const { return K_; }
  int p() const { return basis_.degree(); }
  int harmonics() const { return 2 * K_ + 1; }
  int spatial_dim() const { return basis_.dim(); }
  int dim() const { return harmonics() * spatial_dim(); }
  double Omega() const { return kappa_.frequency(); }
  bool boundary_toeplitz() const { return boundary_toeplitz_; }

  // T_kappa on harmonics -K..K.
  const CMatrix &toeplitz() const { return toeplitz_; }
  // diag(-i n Omega).
  CVector derivative_diagonal() const;

  // "K=..;p=..;bc=..;kappa0=..;kappa=<hex>".
  std::string fingerprint() const;

private:
  Modulation kappa_;
  BoundaryCondition bc_;
  int K_;
  SpatialBasis basis_;
  bool boundary_toeplitz_;
  CMatrix toeplitz_;
};

// Q(omega) = -omega^2 M2 - i omega C1 + K0.
struct QuadraticPencil
{
  CMatrix M2, C1, K0;

  CMatrix Evaluate(cplx omega) const { return -omega * omega * M2 - kI * omega * C1 + K0; }
};

// A x = i omega Bmass x, x = (u; z), z = (-i omega + D) u.
struct BlockPencil
{
  CMatrix A, Bmass;
};

// L0 x = i omega L1 x.
struct FastTimePencil
{
  CMatrix L0, L1;
};

QuadraticPencil AssembleQuadratic(const HarmonicProblem &problem);
BlockPencil AssembleBlock(const HarmonicProblem &problem);
// Absorbing only.
FastTimePencil AssembleFastTime(const HarmonicProblem &problem);

// Q(omega) u without forming Q.
HarmonicVector ApplyQuadratic(const HarmonicProblem &problem, cplx omega,
                              const HarmonicVector &u);

// d/domega Q(omega) u.
HarmonicVector ApplyQuadraticDerivative(const HarmonicProblem &problem, cplx omega,
                                        const HarmonicVector &u);

// a_omega^K(u, v) = v^H Q(omega) u.
cplx FormValue(const HarmonicProblem &problem, cplx omega, const HarmonicVector &u,
               const HarmonicVector &v);

struct ForcedSolution
{
  HarmonicVector u;
  double condition = 0.0;  // 1-norm estimate
  double residual = 0.0;   // ||Q u - b|| / ||b||
};

// Solves Q(omega) u = b. Throws NearResonance (value = condition) above the limit.
ForcedSolution SolveForced(const HarmonicProblem &problem, cplx omega, const HarmonicVector &b,
                           double condition_limit = 1e12);

// Discrete dual norm ||Q(omega) u||_{M^{-1}} / ||u||_M.
double ResidualForm(const HarmonicProblem &problem, cplx omega, const HarmonicVector &u);

// Reporting constants for the continuity and Garding estimates.
struct FormConstants
{
  double frequency_bound = 0.0;  // K Omega + |omega|
  double kappa_lower = 0.0;      // c_kappa
  double kappa_upper = 0.0;      // C_kappa
  double trace = 0.0;            // C_Gamma^2: ||u||_Gamma^2 <= C_Gamma^2 ||u||_{H1}^2
  // |a(u,v)| <= continuity ||u||_{H1,K} ||v||_{H1,K}.
  double continuity = 0.0;
  // Re a(u,u) >= (c_kappa/2)||grad u||^2 - garding (K + |omega|)^2 ||u||^2, real omega.
  double garding = 0.0;
};

FormConstants ComputeFormConstants(const HarmonicProblem &problem, cplx omega);

// H1 norm squared sum_n (||u_n||^2 + ||grad u_n||^2).
double H1NormSquared(const HarmonicProblem &problem, const HarmonicVector &u);

}  // namespace floquet

#endif  // FLOQUET_ASSEMBLY_HPP
