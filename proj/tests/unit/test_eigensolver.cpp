// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <algorithm>
#include "floquet/eigensolver.hpp"
#include "floquet/error.hpp"
#include "floquet/oracles.hpp"
#include "test_support.hpp"

using namespace floquet;

namespace
{

bool HasMode(const SpectrumReport &r, cplx z, double tol)
{
  return std::any_of(r.modes.begin(), r.modes.end(),
                     [&](const FloquetMode &m) { return std::abs(m.omega - z) <= tol; });
}

bool HasConstantMode(const SpectrumReport &r)
{
  return std::any_of(r.modes.begin(), r.modes.end(), [](const FloquetMode &m)
                     { return std::abs(m.omega) <= 1e-8 && ConstantModeCorrelation(m) >= 1 - 1e-8; });
}

}  // namespace

TEST_CASE("Brillouin folding")
{
  const double Om = 2 * kPi;
  CHECK(std::abs(BrillouinFold(Om, Om)) < 1e-15);
  CHECK(std::abs(BrillouinFold(0.6 * Om, Om) - (-0.4 * Om)) < 1e-14);
  CHECK(std::abs(BrillouinFold(cplx(3.2 * Om, -5.0), Om) - cplx(0.2 * Om, -5.0)) < 1e-13);
  CHECK(std::abs(BrillouinFold(0.5 * Om, Om) - 0.5 * Om) < 1e-15);
  CHECK(std::abs(BrillouinFold(-0.5 * Om, Om) - 0.5 * Om) < 1e-14);
  CHECK(FoldIndex(3.2 * Om, Om) == 3);
}

TEST_CASE("constant-coefficient Neumann spectrum folds the cosine frequencies")
{
  const HarmonicProblem pr(Modulation::Constant(1.0), BoundaryCondition::Neumann(), 2, 15);
  const SpectrumReport r = SolveSpectrum(pr);
  CHECK(HasConstantMode(r));
  for (const Resonance &res : NeumannConstResonances(1.0, 2.0, 6, pr.Omega()).members)
  {
    CHECK(HasMode(r, res.folded, 1e-8));
    CHECK(HasMode(r, BrillouinFold(-res.value, pr.Omega()), 1e-8));
  }
}

TEST_CASE("constant-coefficient absorbing spectrum lies on the analytic line")
{
  const HarmonicProblem pr(Modulation::Constant(1.0), BoundaryCondition::Absorbing(0.5), 2, 20);
  SolveOptions opt;
  opt.vectors = false;
  const SpectrumReport r = SolveSpectrum(pr, opt);
  CHECK(HasMode(r, 0.0, 1e-8));
  // Domain (-1, 1) has length 2.
  const double level = AbsorbingLevel(0.5, 2.0);
  CHECK(level == doctest::Approx(-std::log(3.0) / 2));
  const auto on_line = std::count_if(r.modes.begin(), r.modes.end(), [&](const FloquetMode &m)
                                     { return std::abs(m.omega.imag() - level) < 1e-6; });
  CHECK(on_line >= 3);
}

TEST_CASE("every report contains the constant mode")
{
  for (const BoundaryCondition bc : {BoundaryCondition::Absorbing(0.5), BoundaryCondition::Neumann()})
  {
    for (const Modulation &k : {Modulation::Constant(1.0), test::OnePlusEpsExpCos()})
    {
      CHECK(HasConstantMode(SolveSpectrum(HarmonicProblem(k, bc, 3, 6))));
    }
  }
}

TEST_CASE("modes are normalized, folded and have small residuals")
{
  const HarmonicProblem pr(test::OnePlusEpsExpCos(), BoundaryCondition::Absorbing(0.5), 4, 6);
  const SpectrumReport r = SolveSpectrum(pr);
  CHECK(r.modes.size() == 2u * pr.dim());
  for (const FloquetMode &m : r.modes)
  {
    CHECK(std::abs(m.u_hat.data().norm() - 1.0) < 1e-12);
    CHECK(std::abs(m.omega_raw - (m.omega + double(m.fold_index) * pr.Omega())) < 1e-10);
    CHECK(m.omega.real() > -pr.Omega() / 2 - 1e-9);
    CHECK(m.omega.real() <= pr.Omega() / 2 + 1e-9);
  }
  const auto small = std::count_if(r.modes.begin(), r.modes.end(),
                                   [](const FloquetMode &m) { return m.residual <= 1e-8; });
  CHECK(small >= static_cast<long>(r.modes.size() * 9 / 10));
  CHECK(r.diagnostics.C_kappa_prime > 0.0);
}

TEST_CASE("eigenvalue matching")
{
  auto report = [](std::initializer_list<std::pair<cplx, double>> modes)
  {
    SpectrumReport r;
    for (const auto &[w, residual] : modes)
    {
      FloquetMode m;
      m.omega = w;
      m.omega_raw = w;
      m.residual = residual;
      r.modes.push_back(m);
    }
    return r;
  };
  // Nearest wins.
  const SpectrumReport near = report({{cplx(0.0, -1.0), 1e-10}, {cplx(1.0, -0.5), 1e-12}, {cplx(-1.0, -0.5), 1e-9}});
  CHECK(MatchEigenvalue(near, cplx(0.0, -1.0), 0.1).omega == cplx(0.0, -1.0));
  CHECK(MatchEigenvalue(near, cplx(0.0, -0.5), 2.0).omega == cplx(0.0, -1.0));
  // Equidistant: smaller residual wins.
  const SpectrumReport tie = report({{cplx(-1.0, -0.5), 1e-9}, {cplx(1.0, -0.5), 1e-12}});
  CHECK(MatchEigenvalue(tie, cplx(0.0, -0.5), 2.0).omega == cplx(1.0, -0.5));
  // Equidistant with equal residuals: smaller |Im| wins.
  const SpectrumReport level = report({{cplx(0.5, -3.0), 1e-11}, {cplx(0.5, 0.0), 1e-11}});
  CHECK(MatchEigenvalue(level, cplx(0.5, -1.5), 2.0).omega == cplx(0.5, 0.0));
  CHECK_THROWS_AS(MatchEigenvalue(near, cplx(5.0, 5.0), 0.1), Error);
}

TEST_CASE("targeted solve agrees with the dense spectrum")
{
  const HarmonicProblem pr(test::OnePlusEpsExpCos(), BoundaryCondition::Absorbing(0.5), 5, 8);
  const SpectrumReport r = SolveSpectrum(pr);
  const cplx target(0.0, -0.54);
  // Folded copies of the same mode cluster near the target; compare with the unfolded one.
  const FloquetMode *dense = nullptr;
  for (const FloquetMode &m : r.modes)
  {
    if (m.fold_index == 0 && (!dense || std::abs(m.omega - target) < std::abs(dense->omega - target)))
    {
      dense = &m;
    }
  }
  REQUIRE(dense != nullptr);
  const FloquetMode t = SolveTargeted(pr, target);
  CHECK(std::abs(t.omega - dense->omega) < 1e-10);
  CHECK(t.residual < 1e-10);
}

TEST_CASE("targeted solve reports failure instead of returning a poor pair")
{
  const HarmonicProblem pr(test::ExpCos(), BoundaryCondition::Absorbing(0.5), 4, 6);
  try
  {
    const FloquetMode m = SolveTargeted(pr, cplx(0.0, -0.44));
    CHECK(m.residual < 1e-9);
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::Numeric);
  }
}

TEST_CASE("size limit is enforced")
{
  SolveOptions opt;
  opt.dense_limit = 10;
  try
  {
    SolveSpectrum(HarmonicProblem(test::OnePlusEpsExpCos(), BoundaryCondition::Neumann(), 2, 4), opt);
    FAIL("expected size-limit");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::SizeLimit);
  }
}

TEST_CASE("near-coincident pairs are reported for the doubled constant-coefficient spectrum")
{
  const HarmonicProblem pr(Modulation::Constant(1.0), BoundaryCondition::Neumann(), 1, 6);
  const SpectrumReport r = SolveSpectrum(pr);
  CHECK(!NearCoincidentPairs(r, 1e-8).empty());
}
