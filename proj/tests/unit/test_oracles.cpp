// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <random>
#include "floquet/assembly.hpp"
#include "floquet/error.hpp"
#include "floquet/oracles.hpp"
#include "test_support.hpp"

using namespace floquet;

TEST_CASE("absorbing resonance level")
{
  CHECK(AbsorbingLevel(0.5) == doctest::Approx(-1.0986122886681098).epsilon(1e-15));
  CHECK(std::abs(AbsorbingLevel(1e-9)) < 1e-8);
  CHECK_THROWS_AS(AbsorbingConstResonances(1.5, ComplexBox{}, 2 * kPi), Error);
}

TEST_CASE("enumerated absorbing resonances are determinant zeros")
{
  const ResonanceSet rs = AbsorbingConstResonances(0.5, ComplexBox{-20.0, 20.0, -3.0, 1.0}, 2 * kPi);
  int checked = 0;
  for (const Resonance &r : rs.members)
  {
    if (std::abs(r.value) == 0.0)
    {
      continue;
    }
    // Determinant written out independently.
    const cplx ex = std::exp(kI * r.value);
    const cplx det = 0.25 * ex - 2.25 / ex;
    CHECK(std::abs(det) <= 1e-10);
    CHECK(std::abs(AbsorbingDeterminant(r.value, 0.5)) <= 1e-10);
    CHECK(r.value.imag() == doctest::Approx(-std::log(3.0)));
    checked++;
  }
  CHECK(checked >= 10);
  const auto printed = std::count_if(rs.members.begin(), rs.members.end(), [](const Resonance &r)
                                     { return r.printed && std::abs(r.value) > 0.0; });
  for (const Resonance &r : rs.members)
  {
    if (r.printed && std::abs(r.value) > 0.0)
    {
      const double k = r.value.real() / (2 * kPi);
      CHECK(std::abs(k - std::round(k)) < 1e-12);
    }
  }
  CHECK(printed >= 5);
}

TEST_CASE("Neumann resonances")
{
  const ResonanceSet a = NeumannConstResonances(1.0, 1.0, 4, 100.0);
  for (int k = 0; k <= 4; k++)
  {
    CHECK(std::abs(a.members[k].value - k * kPi) < 1e-14);
  }
  const ResonanceSet b = NeumannConstResonances(1.0, 2.0, 4, 100.0);
  const ResonanceSet c = NeumannConstResonances(4.0, 2.0, 4, 100.0);
  for (int k = 0; k <= 4; k++)
  {
    CHECK(std::abs(b.members[k].value - k * kPi / 2) < 1e-14);
    CHECK(std::abs(c.members[k].value - 2.0 * b.members[k].value) < 1e-14);
  }
  const ResonanceSet f = NeumannConstResonances(1.0, 2.0, 6, 2 * kPi);
  CHECK(std::abs(f.members[3].folded - (1.5 * kPi - 2 * kPi)) < 1e-14);
}

TEST_CASE("Sturm-Liouville with constant coefficient gives Fourier eigenvalues")
{
  const SturmLiouvilleResult r = SturmLiouville(Modulation::Constant(1.0), 6);
  const double expected[] = {0.0, 1.0, 1.0, 4.0, 4.0, 9.0, 9.0};
  for (int n = 0; n < 7; n++)
  {
    CHECK(std::abs(r.eigenvalues(n) - expected[n] * 4 * kPi * kPi) < 1e-9);
  }
  CHECK(r.imag_leakage <= 1e-10);
}

TEST_CASE("Sturm-Liouville eigenvalues for the modulated coefficient are real and nonnegative")
{
  const SturmLiouvilleResult r = SturmLiouvilleCount(test::OnePlusEpsExpCos(), 20);
  CHECK(r.eigenvalues.size() == 21);
  CHECK(std::abs(r.eigenvalues(0)) < 1e-9);
  for (int n = 1; n < 21; n++)
  {
    CHECK(r.eigenvalues(n) > 0.0);
    CHECK(r.eigenvalues(n) >= r.eigenvalues(n - 1));
  }
  CHECK(r.imag_leakage <= 1e-10);
}

TEST_CASE("Sturm-Liouville coefficients of a smooth function decay algebraically")
{
  // |sin(pi t)|^3 is C^2 with a jump in the third derivative: coefficients ~ n^-4.
  const Modulation k = test::OnePlusEpsExpCos();
  const int K = 80;
  const SturmLiouvilleResult r = SturmLiouville(k, K);
  const CoefficientTable f = FourierCoefficients(
      [](double t) { return std::pow(std::abs(std::sin(kPi * t)), 3); }, 1.0, K, 8192);
  CVector fhat(2 * K + 1);
  for (int n = -K; n <= K; n++)
  {
    fhat(n + K) = f(n);
  }
  const CVector c = r.eigenvectors.adjoint() * ToeplitzMatrix(k.WithOrder(2 * K), K) * fhat;
  // Pair the doubly degenerate levels, then fit the envelope.
  RVector env(K / 2);
  for (int j = 1; j <= K / 2; j++)
  {
    env(j - 1) = std::hypot(std::abs(c(2 * j - 1)), std::abs(c(2 * j)));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int j = 4; j <= K / 4; j++)
  {
    const double x = std::log(double(j)), y = std::log(env(j - 1));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    count++;
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  CHECK(slope <= -3.5);
  CHECK(slope >= -4.5);
}

TEST_CASE("growth exponent of a pure power")
{
  RVector mu(50);
  for (int n = 0; n < 50; n++)
  {
    mu(n) = 3.0 * std::pow(double(n), 2.5);
  }
  CHECK(GrowthExponent(mu, 5, 40) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("resolvent series collapses without modulation")
{
  std::mt19937 rng(41);
  const Modulation per = test::ExpCos();
  const HarmonicProblem pr(Modulation::Affine(1.0, 0.0, per), BoundaryCondition::Absorbing(0.5), 3, 8);
  const HarmonicVector b = test::RandomHarmonic(3, 9, rng);
  const cplx w(0.7, 0.3);
  const ResolventResult rs = ResolventSeries(pr, w, 0.0, 2, b);
  const ForcedSolution direct = SolveForced(pr, w, b);
  CHECK((rs.u.data() - direct.u.data()).norm() <= 1e-12 * direct.u.data().norm());
  CHECK((rs.partial[0].data() - direct.u.data()).norm() <= 1e-12 * direct.u.data().norm());
}

TEST_CASE("resolvent series converges geometrically in the order")
{
  std::mt19937 rng(43);
  const double eps = 0.05;
  const HarmonicProblem pr(Modulation::Affine(1.0, eps, test::ExpCos()), BoundaryCondition::Absorbing(0.5),
                           3, 8);
  const HarmonicVector b = test::RandomHarmonic(3, 9, rng);
  const cplx w(0.7, 0.3);
  const ResolventResult rs = ResolventSeries(pr, w, eps, 4, b);
  const CVector direct = SolveForced(pr, w, b).u.data();
  std::vector<double> err;
  for (const HarmonicVector &p : rs.partial)
  {
    err.push_back((p.data() - direct).norm());
  }
  for (std::size_t m = 1; m < err.size(); m++)
  {
    CHECK(err[m] < 0.5 * err[m - 1]);
  }
  CHECK(rs.radius > 0.0);
  const CMatrix R = EffectiveResolvent(pr, w, 4);
  CHECK((R * b.data() - rs.u.data()).norm() < 1e-12 * direct.norm());
  CHECK_THROWS_AS(ResolventSeries(HarmonicProblem(Modulation::Affine(1.0, eps, test::ExpCos()),
                                                  BoundaryCondition::Absorbing(0.5), 3, 8, true),
                                  w, eps, 1, b),
                  Error);
}
