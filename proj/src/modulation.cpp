// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include "floquet/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include "floquet/error.hpp"

namespace floquet
{

const char *ToString(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::InvalidModulation:
      return "invalid-modulation";
    case ErrorKind::PositivityViolation:
      return "positivity-violation";
    case ErrorKind::NeedsMoreCoefficients:
      return "needs-more-coefficients";
    case ErrorKind::DimensionMismatch:
      return "dimension-mismatch";
    case ErrorKind::InvalidDegree:
      return "invalid-degree";
    case ErrorKind::Domain:
      return "domain-error";
    case ErrorKind::Numeric:
      return "numeric-error";
    case ErrorKind::NearResonance:
      return "near-resonance";
    case ErrorKind::UnsupportedVariant:
      return "unsupported-variant";
    case ErrorKind::SizeLimit:
      return "size-limit";
    case ErrorKind::NotFound:
      return "not-found";
    case ErrorKind::InvalidArgument:
      return "invalid-argument";
    case ErrorKind::ConfigMismatch:
      return "config-mismatch";
  }
  return "error";
}

CoefficientTable::CoefficientTable(int order, std::vector<cplx> values)
  : order_(order), values_(std::move(values))
{
  if (order < 0 || values_.size() != static_cast<std::size_t>(2 * order + 1))
  {
    throw Error(ErrorKind::DimensionMismatch, "coefficient table needs 2*order+1 entries");
  }
}

cplx CoefficientTable::operator()(int n) const
{
  if (std::abs(n) > order_)
  {
    throw Error(ErrorKind::NeedsMoreCoefficients,
                "coefficient " + std::to_string(n) + " requested, order is " +
                    std::to_string(order_),
                std::abs(n));
  }
  return values_[n + order_];
}

cplx CoefficientTable::AtOrZero(int n) const
{
  return std::abs(n) > order_ ? cplx(0.0) : values_[n + order_];
}

int QuadratureNodes(int order) { return std::max(4 * order + 1, 256); }

CoefficientTable FourierCoefficients(const Sampler &kappa, double period, int order,
                                     int nodes)
{
  if (order < 0)
  {
    throw Error(ErrorKind::InvalidArgument, "order must be nonnegative");
  }
  if (!(period > 0.0))
  {
    throw Error(ErrorKind::InvalidModulation, "period must be positive");
  }
  const int m = nodes > 0 ? nodes : QuadratureNodes(order);
  const double omega = 2.0 * kPi / period;
  std::vector<double> samples(m);
  for (int j = 0; j < m; j++)
  {
    samples[j] = kappa(period * j / m);
    if (!std::isfinite(samples[j]))
    {
      throw Error(ErrorKind::InvalidModulation,
                  "sampler returned a non-finite value at t=" + std::to_string(period * j / m));
    }
  }
  std::vector<cplx> values(2 * order + 1);
  for (int n = 0; n <= order; n++)
  {
    cplx sum = 0.0;
    for (int j = 0; j < m; j++)
    {
      const double phase = n * omega * (period * j / m);
      sum += samples[j] * cplx(std::cos(phase), std::sin(phase));
    }
    sum /= static_cast<double>(m);
    if (n == 0)
    {
      sum = sum.real();
    }
    values[order + n] = sum;
    values[order - n] = std::conj(sum);
  }
  return CoefficientTable(order, std::move(values));
}

CMatrix ToeplitzMatrix(const CoefficientTable &coeffs, int K)
{
  if (2 * K > coeffs.order())
  {
    // Entries with |n - m| up to 2K are needed.
    throw Error(ErrorKind::NeedsMoreCoefficients,
                "Toeplitz matrix for K=" + std::to_string(K) + " needs order " +
                    std::to_string(2 * K),
                2 * K);
  }
  const int size = 2 * K + 1;
  CMatrix T(size, size);
  for (int i = 0; i < size; i++)
  {
    for (int j = 0; j < size; j++)
    {
      T(i, j) = coeffs(i - j);
    }
  }
  return T;
}

CMatrix ToeplitzMatrix(const Modulation &kappa, int K)
{
  if (kappa.exact())
  {
    const int size = 2 * K + 1;
    CMatrix T(size, size);
    for (int i = 0; i < size; i++)
    {
      for (int j = 0; j < size; j++)
      {
        T(i, j) = kappa.coefficients().AtOrZero(i - j);
      }
    }
    return T;
  }
  return ToeplitzMatrix(kappa.coefficients(), K);
}

namespace
{

std::uint64_t Fnv1a(std::uint64_t hash, const void *data, std::size_t size)
{
  const auto *bytes = static_cast<const unsigned char *>(data);
  for (std::size_t i = 0; i < size; i++)
  {
    hash ^= bytes[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace

Modulation::Modulation(double period, Sampler sampler, std::string label, int order)
  : period_(period), sampler_(std::make_shared<const Sampler>(std::move(sampler))),
    label_(std::move(label))
{
  if (!(period > 0.0) || !std::isfinite(period))
  {
    throw Error(ErrorKind::InvalidModulation, "period must be positive and finite");
  }
  coeffs_ = FourierCoefficients(*sampler_, period_, order);
  Finalize();
}

Modulation Modulation::FromCoefficients(double period, const std::vector<cplx> &nonnegative,
                                        std::string label)
{
  if (nonnegative.empty())
  {
    throw Error(ErrorKind::InvalidModulation, "coefficient list is empty");
  }
  if (!(period > 0.0))
  {
    throw Error(ErrorKind::InvalidModulation, "period must be positive");
  }
  const int order = static_cast<int>(nonnegative.size()) - 1;
  std::vector<cplx> values(2 * order + 1);
  for (int n = 0; n <= order; n++)
  {
    const cplx c = n == 0 ? cplx(nonnegative[0].real()) : nonnegative[n];
    values[order + n] = c;
    values[order - n] = std::conj(c);
  }
  Modulation m;
  m.period_ = period;
  m.coeffs_ = CoefficientTable(order, values);
  m.exact_ = true;
  m.label_ = std::move(label);
  const double omega = 2.0 * kPi / period;
  m.sampler_ = std::make_shared<const Sampler>(
      [values, order, omega](double t)
      {
        double sum = values[order].real();
        for (int n = 1; n <= order; n++)
        {
          sum += 2.0 * (values[order + n] * std::exp(cplx(0.0, -n * omega * t))).real();
        }
        return sum;
      });
  m.Finalize();
  return m;
}

Modulation Modulation::Constant(double value, double period)
{
  return FromCoefficients(period, {cplx(value)}, "const");
}

Modulation Modulation::Preset(const ModulationConfig &config)
{
  const double omega = 2.0 * kPi / config.period;
  const double eps = config.eps;
  if (config.preset == "const")
  {
    return Constant(config.value, config.period);
  }
  if (config.preset == "one-plus-eps-exp-cos")
  {
    return Modulation(
        config.period, [=](double t) { return 1.0 + eps * std::exp(std::cos(omega * t)); },
        "one-plus-eps-exp-cos");
  }
  if (config.preset == "exp-cos")
  {
    return Modulation(
        config.period, [=](double t) { return std::exp(std::cos(omega * t)); }, "exp-cos");
  }
  if (config.preset == "cos-cos")
  {
    return Modulation(
        config.period, [=](double t) { return std::cos(std::cos(omega * t)); }, "cos-cos");
  }
  if (config.preset == "coefficients")
  {
    return FromCoefficients(config.period, config.coefficients);
  }
  throw Error(ErrorKind::InvalidModulation, "unknown modulation preset '" + config.preset + "'");
}

Modulation Modulation::Affine(double base, double eps, const Modulation &periodic)
{
  if (periodic.exact())
  {
    std::vector<cplx> c(periodic.order() + 1);
    for (int n = 0; n <= periodic.order(); n++)
    {
      c[n] = eps * periodic.coefficients()(n);
    }
    c[0] += base;
    return FromCoefficients(periodic.period(), c, "affine(" + periodic.label() + ")");
  }
  auto sampler = periodic.sampler_;
  return Modulation(
      periodic.period(), [=](double t) { return base + eps * (*sampler)(t); },
      "affine(" + periodic.label() + ")", periodic.order());
}

Modulation Modulation::WithOrder(int order) const
{
  if (exact_ || order <= coeffs_.order())
  {
    return *this;
  }
  Modulation m = *this;
  m.coeffs_ = FourierCoefficients(*sampler_, period_, order);
  m.Finalize();
  return m;
}

double Modulation::Derivative(double t) const
{
  const double omega = frequency();
  double sum = 0.0;
  for (int n = 1; n <= coeffs_.order(); n++)
  {
    // d/dt [c_n e^{-in w t} + conj] = 2 Re(-i n w c_n e^{-in w t})
    sum += 2.0 * (cplx(0.0, -n * omega) * coeffs_(n) * std::exp(cplx(0.0, -n * omega * t)))
                     .real();
  }
  return sum;
}

cplx Modulation::coefficient(int n) const
{
  return exact_ ? coeffs_.AtOrZero(n) : coeffs_(n);
}

bool Modulation::IsConstant(double tol) const
{
  for (int n = 1; n <= coeffs_.order(); n++)
  {
    if (std::abs(coeffs_(n)) > tol)
    {
      return false;
    }
  }
  return true;
}

void Modulation::Finalize()
{
  constexpr int kSamples = 4096;
  lower_ = std::numeric_limits<double>::infinity();
  upper_ = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < kSamples; j++)
  {
    const double v = (*sampler_)(period_ * j / kSamples);
    if (!std::isfinite(v))
    {
      throw Error(ErrorKind::InvalidModulation, "sampler returned a non-finite value");
    }
    lower_ = std::min(lower_, v);
    upper_ = std::max(upper_, v);
  }
  if (lower_ <= 0.0)
  {
    throw Error(ErrorKind::PositivityViolation,
                "modulation '" + label_ + "' has min sampled value " + std::to_string(lower_),
                lower_);
  }
  std::uint64_t h = 1469598103934665603ull;
  h = Fnv1a(h, label_.data(), label_.size());
  h = Fnv1a(h, &period_, sizeof(period_));
  // Low-order coefficients identify the signal; the order itself does not.
  const int keep = std::min(coeffs_.order(), 16);
  for (int n = 0; n <= keep; n++)
  {
    const cplx c = coeffs_(n);
    double parts[2] = {c.real(), c.imag()};
    for (double &p : parts)
    {
      // Round so that recomputation with more nodes hashes identically.
      p = std::round(p * 1e10) / 1e10 + 0.0;
    }
    h = Fnv1a(h, parts, sizeof(parts));
  }
  fingerprint_ = h;
}

}  // namespace floquet
