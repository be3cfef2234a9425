// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_MODULATION_HPP
#define FLOQUET_MODULATION_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>
#include "floquet/types.hpp"

namespace floquet
{

// Fourier coefficients c_n, n = -order..order, of a T-periodic signal under the
// convention c(t) = sum_n c_n e^{-i n Omega t}, c_n = (1/T) int_0^T c(t) e^{+i n Omega t} dt.
class CoefficientTable
{
public:
  CoefficientTable() = default;
  CoefficientTable(int order, std::vector<cplx> values);

  int order() const { return order_; }

  // Throws NeedsMoreCoefficients for |n| > order.
  cplx operator()(int n) const;

  // Zero outside the stored range; for exact trigonometric polynomials.
  cplx AtOrZero(int n) const;

  const std::vector<cplx> &values() const { return values_; }

private:
  int order_ = 0;
  std::vector<cplx> values_{cplx(0.0)};
};

using Sampler = std::function<double(double)>;

// Periodic trapezoidal rule on max(4 order + 1, 256) nodes unless nodes > 0 is
// given. Hermitian symmetry c_{-n} = conj(c_n) is imposed exactly.
CoefficientTable FourierCoefficients(const Sampler &kappa, double period, int order,
                                     int nodes = 0);

// Number of quadrature nodes used for a given coefficient order.
int QuadratureNodes(int order);

// Matrix of the truncated multiplication operator: (T u)_n = sum_m c_{n-m} u_m,
// rows and columns indexed by n, m = -K..K.
CMatrix ToeplitzMatrix(const CoefficientTable &coeffs, int K);

struct ModulationConfig
{
  // One of: const, one-plus-eps-exp-cos, exp-cos, cos-cos, coefficients.
  std::string preset = "one-plus-eps-exp-cos";
  double period = 1.0;
  double eps = 0.1;
  double value = 1.0;
  // Nonnegative-index coefficients c_0..c_m for the coefficient-list form.
  std::vector<cplx> coefficients;
};

// The T-periodic, real, positive coefficient kappa(t). Immutable.
class Modulation
{
public:
  static constexpr int kDefaultOrder = 96;

  Modulation(double period, Sampler sampler, std::string label, int order = kDefaultOrder);

  // Exact trigonometric polynomial with c_{-n} = conj(c_n).
  static Modulation FromCoefficients(double period, const std::vector<cplx> &nonnegative,
                                     std::string label = "coefficients");
  static Modulation Constant(double value, double period = 1.0);
  static Modulation Preset(const ModulationConfig &config);
  // base + eps * periodic(t).
  static Modulation Affine(double base, double eps, const Modulation &periodic);

  // Same signal with coefficients recomputed up to the requested order.
  Modulation WithOrder(int order) const;

  double period() const { return period_; }
  double frequency() const { return 2.0 * kPi / period_; }
  double operator()(double t) const { return (*sampler_)(t); }
  // Derivative of the truncated Fourier series.
  double Derivative(double t) const;

  const CoefficientTable &coefficients() const { return coeffs_; }
  cplx coefficient(int n) const;
  int order() const { return coeffs_.order(); }
  bool exact() const { return exact_; }
  bool IsConstant(double tol = 1e-14) const;

  // Sampled ess-inf / ess-sup.
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }

  const std::string &label() const { return label_; }
  std::uint64_t fingerprint() const { return fingerprint_; }

private:
  Modulation() = default;
  void Finalize();

  double period_ = 1.0;
  std::shared_ptr<const Sampler> sampler_;
  CoefficientTable coeffs_;
  bool exact_ = false;
  std::string label_;
  double lower_ = 0.0, upper_ = 0.0;
  std::uint64_t fingerprint_ = 0;
};

CMatrix ToeplitzMatrix(const Modulation &kappa, int K);

}  // namespace floquet

#endif  // FLOQUET_MODULATION_HPP
