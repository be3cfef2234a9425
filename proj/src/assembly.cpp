// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include "floquet/assembly.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include "floquet/error.hpp"

namespace floquet
{

namespace
{

CMatrix Kron(const CMatrix &A, const CMatrix &B)
{
  CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); i++)
  {
    for (Eigen::Index j = 0; j < A.cols(); j++)
    {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return out;
}

CMatrix Identity(int n) { return CMatrix::Identity(n, n); }

}  // namespace

BoundaryCondition BoundaryCondition::Parse(const std::string &name, double kappa0)
{
  if (name == "absorbing")
  {
    return Absorbing(kappa0);
  }
  if (name == "neumann")
  {
    return Neumann();
  }
  throw Error(ErrorKind::InvalidArgument, "unknown boundary condition '" + name + "'");
}

HarmonicProblem::HarmonicProblem(const Modulation &kappa, BoundaryCondition bc, int K,
                                 SpatialBasis basis, bool boundary_toeplitz)
  : kappa_(kappa.WithOrder(2 * K)), bc_(bc), K_(K), basis_(std::move(basis)),
    boundary_toeplitz_(boundary_toeplitz)
{
  if (K < 0)
  {
    throw Error(ErrorKind::InvalidArgument, "K must be nonnegative");
  }
  if (bc_.kind == BcKind::Absorbing && !(bc_.kappa0 > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "absorbing boundary needs kappa0 > 0", bc_.kappa0);
  }
  if (!(kappa_.lower_bound() > 0.0))
  {
    throw Error(ErrorKind::PositivityViolation, "modulation must be positive");
  }
  toeplitz_ = ToeplitzMatrix(kappa_, K_);
}

HarmonicProblem::HarmonicProblem(const Modulation &kappa, BoundaryCondition bc, int K, int p,
                                 bool boundary_toeplitz)
  : HarmonicProblem(kappa, bc, K, SpatialBasis::Build(p), boundary_toeplitz)
{
}

CVector HarmonicProblem::derivative_diagonal() const
{
  CVector d(harmonics());
  for (int n = -K_; n <= K_; n++)
  {
    d(n + K_) = -kI * (n * Omega());
  }
  return d;
}

std::string HarmonicProblem::fingerprint() const
{
  std::ostringstream s;
  s << "K=" << K_ << ";p=" << p() << ";bc=" << bc_.name() << ";kappa0=" << bc_.damping()
    << ";btoep=" << boundary_toeplitz_ << ";kappa=" << std::hex << kappa_.fingerprint();
  return s.str();
}

QuadraticPencil AssembleQuadratic(const HarmonicProblem &problem)
{
  const int H = problem.harmonics();
  const CMatrix M = problem.basis().M().cast<cplx>();
  const CMatrix S = problem.basis().S().cast<cplx>();
  const CMatrix B = problem.basis().B().cast<cplx>();
  const CMatrix D = problem.derivative_diagonal().asDiagonal();
  const CMatrix &T = problem.toeplitz();
  const double k0 = problem.bc().damping();

  QuadraticPencil q;
  q.M2 = Kron(Identity(H), M);
  q.C1 = 2.0 * Kron(D, M);
  q.K0 = Kron(D * D, M) + Kron(T, S);
  if (k0 > 0.0)
  {
    const CMatrix W = problem.boundary_toeplitz() ? T : Identity(H);
    q.C1 += k0 * Kron(W, B);
    q.K0 += k0 * Kron(W * D, B);
  }
  return q;
}

BlockPencil AssembleBlock(const HarmonicProblem &problem)
{
  const int H = problem.harmonics();
  const int N = problem.dim();
  const CMatrix M = problem.basis().M().cast<cplx>();
  const CMatrix S = problem.basis().S().cast<cplx>();
  const CMatrix B = problem.basis().B().cast<cplx>();
  const CMatrix D = problem.derivative_diagonal().asDiagonal();
  const CMatrix &T = problem.toeplitz();
  const double k0 = problem.bc().damping();

  BlockPencil pencil;
  pencil.A = CMatrix::Zero(2 * N, 2 * N);
  const CMatrix DM = Kron(D, M);
  const CMatrix IM = Kron(Identity(H), M);
  pencil.A.topLeftCorner(N, N) = DM;
  pencil.A.topRightCorner(N, N) = -IM;
  pencil.A.bottomLeftCorner(N, N) = Kron(T, S);
  pencil.A.bottomRightCorner(N, N) = DM;
  if (k0 > 0.0)
  {
    pencil.A.bottomRightCorner(N, N) +=
        k0 * Kron(problem.boundary_toeplitz() ? T : Identity(H), B);
  }
  pencil.Bmass = CMatrix::Zero(2 * N, 2 * N);
  pencil.Bmass.topLeftCorner(N, N) = IM;
  pencil.Bmass.bottomRightCorner(N, N) = IM;
  return pencil;
}

FastTimePencil AssembleFastTime(const HarmonicProblem &problem)
{
  if (problem.bc().kind != BcKind::Absorbing)
  {
    throw Error(ErrorKind::UnsupportedVariant,
                "the fast-time pencil is defined for absorbing boundaries only");
  }
  const QuadraticPencil q = AssembleQuadratic(problem);
  return {q.K0, q.C1};
}

HarmonicVector ApplyQuadratic(const HarmonicProblem &problem, cplx omega,
                              const HarmonicVector &u)
{
  if (u.K() != problem.K() || u.dim() != problem.spatial_dim())
  {
    throw Error(ErrorKind::DimensionMismatch, "vector does not match the problem truncation");
  }
  const int K = problem.K();
  const double Om = problem.Omega();
  const RMatrix &M = problem.basis().M();
  const RMatrix &S = problem.basis().S();
  const RMatrix &B = problem.basis().B();
  const double k0 = problem.bc().damping();
  const auto U = u.AsMatrix();

  HarmonicVector out(K, u.dim());
  auto R = out.AsMatrix();
  // Stiffness: column n gets S sum_m T_{nm} U_m.
  R = S.cast<cplx>() * (U * problem.toeplitz().transpose());
  CMatrix Z(U.rows(), U.cols());
  for (int n = -K; n <= K; n++)
  {
    const cplx s = omega + static_cast<double>(n) * Om;
    R.col(n + K) -= s * s * (M.cast<cplx>() * U.col(n + K));
    Z.col(n + K) = -kI * s * U.col(n + K);
  }
  if (k0 > 0.0)
  {
    if (problem.boundary_toeplitz())
    {
      Z = Z * problem.toeplitz().transpose();
    }
    R += k0 * (B.cast<cplx>() * Z);
  }
  return out;
}

HarmonicVector ApplyQuadraticDerivative(const HarmonicProblem &problem, cplx omega,
                                        const HarmonicVector &u)
{
  const int K = problem.K();
  const double Om = problem.Omega();
  const RMatrix &M = problem.basis().M();
  const RMatrix &B = problem.basis().B();
  const double k0 = problem.bc().damping();
  const auto U = u.AsMatrix();
  HarmonicVector out(K, u.dim());
  auto R = out.AsMatrix();
  for (int n = -K; n <= K; n++)
  {
    const cplx s = omega + static_cast<double>(n) * Om;
    R.col(n + K) = -2.0 * s * (M.cast<cplx>() * U.col(n + K));
  }
  if (k0 > 0.0)
  {
    CMatrix Z = -kI * CMatrix(U);
    if (problem.boundary_toeplitz())
    {
      Z = Z * problem.toeplitz().transpose();
    }
    R += k0 * (B.cast<cplx>() * Z);
  }
  return out;
}

cplx FormValue(const HarmonicProblem &problem, cplx omega, const HarmonicVector &u,
               const HarmonicVector &v)
{
  const HarmonicVector Qu = ApplyQuadratic(problem, omega, u);
  return v.data().dot(Qu.data());
}

ForcedSolution SolveForced(const HarmonicProblem &problem, cplx omega, const HarmonicVector &b,
                           double condition_limit)
{
  if (b.K() != problem.K() || b.dim() != problem.spatial_dim())
  {
    throw Error(ErrorKind::DimensionMismatch, "load does not match the problem truncation");
  }
  const CMatrix Q = AssembleQuadratic(problem).Evaluate(omega);
  Eigen::PartialPivLU<CMatrix> lu(Q);
  const double rcond = lu.rcond();
  const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(condition <= condition_limit))
  {
    std::ostringstream s;
    s << "Q(omega) is near-singular at omega=" << omega << " (condition " << condition << ")";
    throw Error(ErrorKind::NearResonance, s.str(), condition);
  }
  ForcedSolution sol{HarmonicVector(problem.K(), problem.spatial_dim(), lu.solve(b.data())),
                     condition, 0.0};
  const double bn = b.data().norm();
  sol.residual = (Q * sol.u.data() - b.data()).norm() / (bn > 0.0 ? bn : 1.0);
  return sol;
}

double ResidualForm(const HarmonicProblem &problem, cplx omega, const HarmonicVector &u)
{
  const Eigen::LLT<RMatrix> mass(problem.basis().M());
  const auto U = u.AsMatrix();
  const double unorm =
      std::sqrt(std::abs((U.adjoint() * problem.basis().M().cast<cplx>() * U).trace()));
  if (!(unorm > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "residual of a zero vector");
  }
  const HarmonicVector r = ApplyQuadratic(problem, omega, u);
  const auto Rm = r.AsMatrix();
  const CMatrix MinvR = mass.solve(RMatrix::Identity(u.dim(), u.dim())).cast<cplx>() * Rm;
  const double rn = std::sqrt(std::abs((Rm.adjoint() * MinvR).trace()));
  return rn / unorm;
}

double H1NormSquared(const HarmonicProblem &problem, const HarmonicVector &u)
{
  const auto U = u.AsMatrix();
  const CMatrix G = (problem.basis().M() + problem.basis().S()).cast<cplx>();
  return std::abs((U.adjoint() * G * U).trace());
}

FormConstants ComputeFormConstants(const HarmonicProblem &problem, cplx omega)
{
  FormConstants c;
  const double Om = problem.Omega();
  c.frequency_bound = problem.K() * Om + std::abs(omega);
  c.kappa_lower = problem.modulation().lower_bound();
  c.kappa_upper = problem.modulation().upper_bound();
  const RMatrix MS = problem.basis().M() + problem.basis().S();
  Eigen::GeneralizedSelfAdjointEigenSolver<RMatrix> trace(problem.basis().B(), MS,
                                                           Eigen::EigenvaluesOnly);
  c.trace = trace.eigenvalues().maxCoeff();
  const double k0 = problem.bc().damping();
  const double wall = problem.boundary_toeplitz() ? c.kappa_upper : 1.0;
  c.continuity = c.frequency_bound * c.frequency_bound + c.kappa_upper +
                 k0 * wall * c.frequency_bound * c.trace;
  c.garding = std::pow(std::max(1.0, Om), 2);
  return c;
}

}  // namespace floquet
