// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include "floquet/harmonic_vector.hpp"

#include <string>
#include "floquet/error.hpp"

namespace floquet
{

HarmonicVector::HarmonicVector(int K, int dim)
  : HarmonicVector(K, dim, CVector::Zero(static_cast<Eigen::Index>(2 * K + 1) * dim))
{
}

HarmonicVector::HarmonicVector(int K, int dim, CVector data)
  : K_(K), dim_(dim), data_(std::move(data))
{
  if (K < 0 || dim < 0)
  {
    throw Error(ErrorKind::InvalidArgument, "K and dim must be nonnegative");
  }
  if (data_.size() != static_cast<Eigen::Index>(2 * K + 1) * dim)
  {
    throw Error(ErrorKind::DimensionMismatch,
                "harmonic vector data has length " + std::to_string(data_.size()) +
                    ", expected (2K+1)*dim = " + std::to_string((2 * K + 1) * dim));
  }
}

Eigen::Index HarmonicVector::Offset(int n) const
{
  if (n < -K_ || n > K_)
  {
    throw Error(ErrorKind::InvalidArgument,
                "harmonic " + std::to_string(n) + " outside -K..K with K=" + std::to_string(K_));
  }
  return static_cast<Eigen::Index>(n + K_) * dim_;
}

HarmonicVector ShiftedDerivative(const HarmonicVector &v, cplx omega, double Omega)
{
  HarmonicVector out = v;
  for (int n = -v.K(); n <= v.K(); n++)
  {
    out.harmonic(n) *= -kI * (omega + static_cast<double>(n) * Omega);
  }
  return out;
}

HarmonicVector FoldShift(const HarmonicVector &v, int l)
{
  const int H = v.harmonics();
  if (std::abs(l) > H)
  {
    throw Error(ErrorKind::InvalidArgument, "fold shift |l| exceeds 2K+1");
  }
  HarmonicVector out(v.K(), v.dim());
  for (int n = -v.K(); n <= v.K(); n++)
  {
    const int src = ((n - l + v.K()) % H + H) % H - v.K();
    out.harmonic(n) = v.harmonic(src);
  }
  return out;
}

cplx Pairing(const HarmonicVector &u, const HarmonicVector &v, const RMatrix &gram)
{
  if (u.K() != v.K() || u.dim() != v.dim() || gram.rows() != u.dim() ||
      gram.cols() != u.dim())
  {
    throw Error(ErrorKind::DimensionMismatch, "pairing needs matching K, dim and gram size");
  }
  const CMatrix Gu = gram.cast<cplx>() * u.AsMatrix();
  return (v.AsMatrix().conjugate().cwiseProduct(Gu)).sum();
}

}  // namespace floquet
