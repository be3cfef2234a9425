# Copyright 2026 The floquet1d Authors
# SPDX-License-Identifier: Apache-2.0

import math

import pytest

import floquet1d


def test_constant_mode_in_every_configuration():
    for bc in ("absorbing", "neumann"):
        for kappa in ({"preset": "const", "value": 1.0}, {"preset": "one-plus-eps-exp-cos", "eps": 0.1}):
            r = floquet1d.solve_spectrum(floquet1d.problem(bc=bc, kappa=kappa, K=3, p=6))
            assert len(r["modes"]) == 2 * 7 * 7
            assert any(abs(m["omega"]) <= 1e-8 and m["constant_correlation"] >= 1 - 1e-8 for m in r["modes"])


def test_modes_are_folded_into_the_zone():
    r = floquet1d.solve_spectrum(floquet1d.problem(K=2, p=4))
    half = r["Omega"] / 2
    for m in r["modes"]:
        assert -half - 1e-9 < m["omega"].real <= half + 1e-9
        assert m["u_hat"].shape == (5, 5)


def test_growth_constant_of_exp_cos():
    c = floquet1d.growth_constant({"preset": "exp-cos", "T": 2 * math.pi})
    assert abs(c - 2 / math.pi) < 1e-10
    assert floquet1d.growth_constant({"preset": "const", "value": 3.0}) == 0.0


def test_absorbing_level():
    assert floquet1d.absorbing_level(0.5) == pytest.approx(-math.log(3.0), rel=1e-15)
    assert floquet1d.absorbing_level(0.5, 2.0) == pytest.approx(-math.log(3.0) / 2, rel=1e-15)


def test_targeted_solve():
    m = floquet1d.solve_targeted(floquet1d.problem(K=6, p=8), -0.54j)
    assert m["residual"] < 1e-9
    assert abs(m["omega"] - (-0.5433j)) < 1e-3


def test_errors_are_raised():
    with pytest.raises(floquet1d.FloquetError):
        floquet1d.solve_spectrum(floquet1d.problem(bc="dirichlet"))
    with pytest.raises(floquet1d.FloquetError):
        floquet1d.run_experiment("nope", "/tmp/floquet1d-nope")


def test_resolve_config_merges_experiment_section():
    r = floquet1d.resolve_config(floquet1d.default_config(), "validate-time", {"K": 7})
    assert r["K"] == 7
    assert r["kappa"]["preset"] == "exp-cos"
    assert "experiments" not in r
    assert set(floquet1d.experiment_names()) >= {"spectrum", "converge", "validate-time", "localize"}
