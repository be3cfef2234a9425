// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include "floquet/spectral1d.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include "floquet/error.hpp"

namespace floquet
{

namespace
{

// P_0..P_p and derivatives at x by the three-term recurrence.
void Legendre(int p, double x, RVector &P, RVector &dP)
{
  P.resize(p + 1);
  dP.resize(p + 1);
  P(0) = 1.0;
  dP(0) = 0.0;
  if (p >= 1)
  {
    P(1) = x;
    dP(1) = 1.0;
  }
  for (int n = 1; n < p; n++)
  {
    P(n + 1) = ((2 * n + 1) * x * P(n) - n * P(n - 1)) / (n + 1);
    dP(n + 1) = dP(n - 1) + (2 * n + 1) * P(n);
  }
}

void CheckDomain(double x)
{
  if (!(std::abs(x) <= 1.0))
  {
    throw Error(ErrorKind::Domain, "point " + std::to_string(x) + " outside [-1, 1]", x);
  }
}

}  // namespace

GaussRule GaussLegendre(int n)
{
  if (n < 1)
  {
    throw Error(ErrorKind::InvalidArgument, "Gauss rule needs at least one node");
  }
  GaussRule rule{RVector(n), RVector(n)};
  RVector P, dP;
  for (int i = 0; i < (n + 1) / 2; i++)
  {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; it++)
    {
      Legendre(n, x, P, dP);
      const double dx = P(n) / dP(n);
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    Legendre(n, x, P, dP);
    const double w = 2.0 / ((1.0 - x * x) * dP(n) * dP(n));
    rule.x(i) = -x;
    rule.x(n - 1 - i) = x;
    rule.w(i) = w;
    rule.w(n - 1 - i) = w;
  }
  if (n % 2 == 1)
  {
    rule.x(n / 2) = 0.0;
  }
  return rule;
}

SpatialBasis SpatialBasis::Build(int p, int extra_nodes)
{
  if (p < 1)
  {
    throw Error(ErrorKind::InvalidDegree, "degree must be at least 1, got " + std::to_string(p),
                p);
  }
  SpatialBasis basis;
  basis.p_ = p;
  const GaussRule rule = GaussLegendre(p + 1 + std::max(extra_nodes, 0));
  const int q = static_cast<int>(rule.x.size());
  RMatrix V(p + 1, q), dV(p + 1, q);
  for (int j = 0; j < q; j++)
  {
    V.col(j) = basis.Values(rule.x(j));
    dV.col(j) = basis.Derivatives(rule.x(j));
  }
  basis.M_ = V * rule.w.asDiagonal() * V.transpose();
  basis.S_ = dV * rule.w.asDiagonal() * dV.transpose();
  const RVector left = basis.Values(-1.0), right = basis.Values(1.0);
  basis.B_ = left * left.transpose() + right * right.transpose();
  // Blocked products are not bitwise symmetric.
  for (RMatrix *A : {&basis.M_, &basis.S_, &basis.B_})
  {
    *A = 0.5 * (*A + A->transpose()).eval();
  }
  return basis;
}

RVector SpatialBasis::Values(double x) const
{
  CheckDomain(x);
  RVector P, dP;
  Legendre(p_, x, P, dP);
  for (int i = 0; i <= p_; i++)
  {
    P(i) *= std::sqrt((2.0 * i + 1.0) / 2.0);
  }
  return P;
}

RVector SpatialBasis::Derivatives(double x) const
{
  CheckDomain(x);
  RVector P, dP;
  Legendre(p_, x, P, dP);
  for (int i = 0; i <= p_; i++)
  {
    dP(i) *= std::sqrt((2.0 * i + 1.0) / 2.0);
  }
  return dP;
}

CVector SpatialBasis::Evaluate(const CVector &coeffs, const std::vector<double> &points) const
{
  if (coeffs.size() != dim())
  {
    throw Error(ErrorKind::DimensionMismatch, "coefficient vector length must be p+1");
  }
  CVector out(points.size());
  for (std::size_t j = 0; j < points.size(); j++)
  {
    out(j) = Values(points[j]).cast<cplx>().transpose() * coeffs;
  }
  return out;
}

RVector SpatialBasis::Evaluate(const RVector &coeffs, const std::vector<double> &points) const
{
  return Evaluate(CVector(coeffs.cast<cplx>()), points).real();
}

double InverseConstant(const SpatialBasis &basis)
{
  Eigen::GeneralizedSelfAdjointEigenSolver<RMatrix> eig(basis.S(), basis.M(),
                                                         Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
  {
    std::ostringstream dump;
    dump << "generalized eigensolver failed for (S, M) with p=" << basis.degree() << "\nS=\n"
         << basis.S() << "\nM=\n"
         << basis.M();
    throw Error(ErrorKind::Numeric, dump.str());
  }
  return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

void WriteBasisCsv(const SpatialBasis &basis, const std::string &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  }
  out << "matrix,i,j,value\n" << std::setprecision(17);
  const std::pair<const char *, const RMatrix *> mats[] = {
      {"M", &basis.M()}, {"S", &basis.S()}, {"B", &basis.B()}};
  for (const auto &[name, A] : mats)
  {
    for (int i = 0; i < A->rows(); i++)
    {
      for (int j = 0; j < A->cols(); j++)
      {
        out << name << ',' << i << ',' << j << ',' << (*A)(i, j) << '\n';
      }
    }
  }
}

}  // namespace floquet
