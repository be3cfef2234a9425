# Copyright 2026 The floquet1d Authors
# SPDX-License-Identifier: Apache-2.0

import json
import os
import pathlib
import subprocess

import pytest

HERE = pathlib.Path(__file__).parent


@pytest.fixture(scope="session")
def tiny_config():
    import floquet1d

    cfg = floquet1d.default_config()
    patch = json.loads((HERE / "tiny_config.json").read_text())
    for key, value in patch.items():
        if isinstance(value, dict) and isinstance(cfg.get(key), dict):
            for sub, v in value.items():
                if isinstance(v, dict) and isinstance(cfg[key].get(sub), dict):
                    cfg[key][sub].update(v)
                else:
                    cfg[key][sub] = v
        else:
            cfg[key] = value
    return cfg


@pytest.fixture(scope="session")
def cli_run(tmp_path_factory):
    """Output directory of `floquet all` on the tiny config."""
    cli = os.environ.get("FLOQUET_CLI")
    if not cli:
        pytest.skip("FLOQUET_CLI not set")
    out = tmp_path_factory.mktemp("cli")
    proc = subprocess.run(
        [cli, "all", "--config", str(HERE / "tiny_config.json"), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode in (0, 3), proc.stderr
    return out


@pytest.fixture(scope="session")
def binding_run(tmp_path_factory, tiny_config):
    import floquet1d

    out = tmp_path_factory.mktemp("bindings")
    floquet1d.run_all(out, tiny_config)
    return out
