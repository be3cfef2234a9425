// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <Eigen/Eigenvalues>
#include <random>
#include "floquet/eigensolver.hpp"
#include "floquet/error.hpp"
#include "floquet/oracles.hpp"
#include "floquet/timedomain.hpp"
#include "test_support.hpp"

using namespace floquet;

namespace
{

State RandomState(int dim, std::mt19937 &rng)
{
  std::normal_distribution<double> g;
  State s;
  s.u = CVector(dim);
  s.v = CVector(dim);
  for (int i = 0; i < dim; i++)
  {
    const double w = std::exp(-0.7 * i);
    s.u(i) = w * cplx(g(rng), g(rng));
    s.v(i) = w * cplx(g(rng), g(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("energy of simple states")
{
  const HarmonicProblem pr(test::OnePlusEpsExpCos(), BoundaryCondition::Absorbing(0.5), 0, 6);
  State s;
  s.u = CVector::Zero(7);
  s.v = CVector::Zero(7);
  s.u(0) = 3.0;
  CHECK(Energy(pr, s) == 0.0);
  s.u.setZero();
  s.v(0) = 1.0;
  CHECK(Energy(pr, s) == doctest::Approx(0.5));
}

TEST_CASE("energy matches quadrature of its integral definition")
{
  std::mt19937 rng(23);
  const HarmonicProblem pr(test::OnePlusEpsExpCos(), BoundaryCondition::Absorbing(0.5), 0, 6);
  State s = RandomState(7, rng);
  s.t = 0.3;
  const GaussRule q = GaussLegendre(30);
  double e = 0.0;
  for (int j = 0; j < q.x.size(); j++)
  {
    cplx v = 0.0, du = 0.0;
    for (int i = 0; i < 7; i++)
    {
      const double h = 1e-5;
      v += s.v(i) * test::Phi(i, q.x(j));
      // Five-point stencil of the independent Legendre evaluation.
      const double x = q.x(j);
      du += s.u(i) * (-test::Phi(i, x + 2 * h) + 8 * test::Phi(i, x + h) - 8 * test::Phi(i, x - h) +
                      test::Phi(i, x - 2 * h)) /
            (12 * h);
    }
    e += q.w(j) * 0.5 * (std::norm(v) + pr.modulation()(s.t) * std::norm(du));
  }
  CHECK(std::abs(Energy(pr, s) - e) < 1e-9 * e);
}

TEST_CASE("Crank-Nicolson conserves the energy of a Neumann eigenmode")
{
  const HarmonicProblem pr(Modulation::Constant(1.0), BoundaryCondition::Neumann(), 0, 8);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(pr.basis().S());
  State s;
  s.u = es.eigenvectors().col(3).cast<cplx>();
  s.v = CVector::Zero(9);
  const std::vector<State> traj = CnIntegrate(pr, s, 0.01, 200);
  const double e0 = Energy(pr, traj.front());
  for (const State &x : traj)
  {
    CHECK(std::abs(Energy(pr, x) - e0) < 1e-12 * e0);
  }
}

TEST_CASE("Crank-Nicolson is second order")
{
  std::mt19937 rng(29);
  const HarmonicProblem pr(test::ExpCos(), BoundaryCondition::Absorbing(0.3), 0, 6);
  const State s0 = RandomState(7, rng);
  auto at_end = [&](int steps) { return CnIntegrate(pr, s0, 0.5 / steps, steps).back().u; };
  const CVector a = at_end(100), b = at_end(200), c = at_end(400);
  const double ratio = (a - b).norm() / (b - c).norm();
  CHECK(ratio >= 3.2);
  CHECK(ratio <= 4.8);
}

TEST_CASE("absorbing energy does not increase while kappa decreases")
{
  std::mt19937 rng(31);
  const HarmonicProblem pr(test::ExpCos(), BoundaryCondition::Absorbing(0.5), 0, 8);
  // kappa' <= 0 on [0, T/2].
  const std::vector<State> traj = CnIntegrate(pr, RandomState(9, rng), 0.005, 100);
  for (std::size_t k = 1; k < traj.size(); k++)
  {
    CHECK(Energy(pr, traj[k]) <= Energy(pr, traj[k - 1]) * (1 + 1e-14));
  }
}

TEST_CASE("energy identity residual")
{
  std::mt19937 rng(37);
  {
    const HarmonicProblem pr(Modulation::Constant(2.0), BoundaryCondition::Neumann(), 0, 8);
    const std::vector<State> traj = CnIntegrate(pr, RandomState(9, rng), 0.01, 100);
    CHECK(EnergyIdentityResidual(pr, traj) <= 1e-10);
  }
  const HarmonicProblem pr(test::ExpCos(), BoundaryCondition::Absorbing(0.5), 0, 8);
  const State s0 = RandomState(9, rng);
  std::vector<double> scaled;
  for (double dt : {1e-2, 5e-3, 2.5e-3})
  {
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    scaled.push_back(EnergyIdentityResidual(pr, CnIntegrate(pr, s0, dt, steps)) / (dt * dt));
  }
  CHECK(scaled[1] <= 1.25 * scaled[0]);
  CHECK(scaled[2] <= 1.25 * scaled[1]);
  CHECK(scaled[2] >= 0.75 * scaled[1]);
}

TEST_CASE("growth constant")
{
  CHECK(GrowthConstant(Modulation::Constant(3.0)) == 0.0);
  const Modulation k = Modulation::Preset({"exp-cos", 2 * kPi, 0.0, 1.0, {}});
  CHECK(std::abs(GrowthConstant(k) - 2.0 / kPi) < 1e-10);
  const Modulation fast = Modulation::Preset({"exp-cos", kPi, 0.0, 1.0, {}});
  CHECK(std::abs(GrowthConstant(fast) - 2.0 * GrowthConstant(k)) < 1e-10);
}

TEST_CASE("Bloch evaluation is quasi-periodic")
{
  const HarmonicProblem pr(test::OnePlusEpsExpCos(), BoundaryCondition::Absorbing(0.5), 4, 6);
  const FloquetMode m = SolveTargeted(pr, cplx(0.0, -0.54));
  const CVector u0 = BlochTimeEval(m, pr.Omega(), 0.0);
  CVector sum = CVector::Zero(7);
  for (int n = -4; n <= 4; n++)
  {
    sum += m.u_hat.harmonic(n);
  }
  CHECK((u0 - sum).norm() == 0.0);
  const double T = pr.modulation().period();
  const CVector uT = BlochTimeEval(m, pr.Omega(), T);
  CHECK((uT - std::exp(-kI * m.omega_raw * T) * u0).norm() < 1e-12);
  CHECK(uT.norm() == doctest::Approx(std::exp(m.omega.imag() * T) * u0.norm()).epsilon(1e-12));
  CHECK(m.omega.imag() < 0.0);
  const double h = 1e-6;
  const CVector fd = (BlochTimeEval(m, pr.Omega(), 0.2 + h) - BlochTimeEval(m, pr.Omega(), 0.2 - h)) / (2 * h);
  CHECK((BlochTimeDerivative(m, pr.Omega(), 0.2) - fd).norm() < 1e-6 * fd.norm());
}

TEST_CASE("Floquet validation of a constant-coefficient resonance is integrator-limited")
{
  const HarmonicProblem pr(Modulation::Constant(1.0), BoundaryCondition::Absorbing(0.5), 1, 12);
  const FloquetMode m = SolveTargeted(pr, cplx(kPi / 2, AbsorbingLevel(0.5, 2.0)));
  const double coarse = FloquetValidation(pr, m, 1.0 / 100, 1).max_relative;
  const double fine = FloquetValidation(pr, m, 1.0 / 200, 1).max_relative;
  CHECK(coarse / fine >= 3.2);
  CHECK(coarse / fine <= 4.8);
}

TEST_CASE("Floquet validation defect decreases with the harmonic truncation")
{
  const Modulation k = test::ExpCos();
  std::vector<double> defects;
  for (int K : {5, 10, 20})
  {
    const HarmonicProblem pr(k, BoundaryCondition::Absorbing(0.1), K, 10);
    const FloquetMode m = SolveTargeted(pr, cplx(1.8191, -0.1016));
    defects.push_back(FloquetValidation(pr, m, 1.0 / 800, 1).max_relative);
  }
  CHECK(defects[1] < defects[0]);
  CHECK(defects[2] < defects[1]);
}

TEST_CASE("Floquet validation rejects mismatched inputs")
{
  const HarmonicProblem a(test::OnePlusEpsExpCos(), BoundaryCondition::Absorbing(0.5), 3, 6);
  const HarmonicProblem b(test::OnePlusEpsExpCos(), BoundaryCondition::Absorbing(0.5), 4, 6);
  const FloquetMode m = SolveTargeted(a, cplx(0.0, -0.54));
  CHECK_THROWS_AS(FloquetValidation(b, m, 0.01, 1), Error);
  CHECK_THROWS_AS(FloquetValidation(a, m, 0.3, 1), Error);
}
