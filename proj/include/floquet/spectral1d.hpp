// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_SPECTRAL1D_HPP
#define FLOQUET_SPECTRAL1D_HPP

#include <string>
#include <vector>
#include "floquet/types.hpp"

namespace floquet
{

struct GaussRule
{
  RVector x, w;
};

// Gauss-Legendre rule with n nodes on (-1, 1), exact to degree 2n-1.
GaussRule GaussLegendre(int n);

// phi_i = sqrt((2i+1)/2) P_i on (-1, 1), i = 0..p.
class SpatialBasis
{
public:
  // Matrices by Gauss-Legendre quadrature on p + 1 + extra_nodes nodes.
  static SpatialBasis Build(int p, int extra_nodes = 5);

  int degree() const { return p_; }
  int dim() const { return p_ + 1; }

  const RMatrix &M() const { return M_; }
  const RMatrix &S() const { return S_; }
  const RMatrix &B() const { return B_; }

  // phi_0(x)..phi_p(x) and their derivatives; |x| <= 1.
  RVector Values(double x) const;
  RVector Derivatives(double x) const;

  // sum_i c_i phi_i(x_j).
  CVector Evaluate(const CVector &coeffs, const std::vector<double> &points) const;
  RVector Evaluate(const RVector &coeffs, const std::vector<double> &points) const;

private:
  int p_ = 0;
  RMatrix M_, S_, B_;
};

// sqrt of the largest generalized eigenvalue of (S, M).
double InverseConstant(const SpatialBasis &basis);

// Rows "matrix,i,j,value" for M, S and B.
void WriteBasisCsv(const SpatialBasis &basis, const std::string &path);

}  // namespace floquet

#endif  // FLOQUET_SPECTRAL1D_HPP
