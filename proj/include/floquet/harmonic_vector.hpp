// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_HARMONIC_VECTOR_HPP
#define FLOQUET_HARMONIC_VECTOR_HPP

#include "floquet/types.hpp"

namespace floquet
{

// Coefficients v_n, n = -K..K, each a spatial vector of length dim. Stored
// harmonic-major: entry n occupies data[(n + K) * dim, (n + K + 1) * dim).
class HarmonicVector
{
public:
  HarmonicVector() = default;
  HarmonicVector(int K, int dim);
  HarmonicVector(int K, int dim, CVector data);

  int K() const { return K_; }
  int dim() const { return dim_; }
  int harmonics() const { return 2 * K_ + 1; }
  Eigen::Index size() const { return data_.size(); }

  auto harmonic(int n) { return data_.segment(Offset(n), dim_); }
  auto harmonic(int n) const { return data_.segment(Offset(n), dim_); }

  // Spatial dim x (2K+1) view, one column per harmonic.
  Eigen::Map<CMatrix> AsMatrix() { return {data_.data(), dim_, harmonics()}; }
  Eigen::Map<const CMatrix> AsMatrix() const { return {data_.data(), dim_, harmonics()}; }

  const CVector &data() const { return data_; }
  CVector &data() { return data_; }

private:
  Eigen::Index Offset(int n) const;

  int K_ = 0;
  int dim_ = 0;
  CVector data_;
};

// (-i omega + D) v, i.e. entry n scaled by -i (omega + n Omega).
HarmonicVector ShiftedDerivative(const HarmonicVector &v, cplx omega, double Omega);

// (F^l v)_n = v_{n-l}, indices wrapped periodically into -K..K.
HarmonicVector FoldShift(const HarmonicVector &v, int l);

// sum_n v_n^H G u_n.
cplx Pairing(const HarmonicVector &u, const HarmonicVector &v, const RMatrix &gram);

}  // namespace floquet

#endif  // FLOQUET_HARMONIC_VECTOR_HPP
