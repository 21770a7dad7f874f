import math

import pytest

import sdcouple


def test_mesh_counts():
    m = sdcouple.mesh_counts(2)
    assert (m["vertices"], m["cells"], m["interface"]) == (15, 8, 2)
    assert m["exterior_fluid"] == 6 and m["exterior_porous"] == 6
    assert math.isclose(m["h"], math.sqrt(2) / 2)


def test_config_presets_and_validation():
    text = sdcouple.config("test3")
    assert "S0=1e-10\n" in text and "eta=0.10000000000000001\n" in text
    assert "n=8\n" in sdcouple.config("test1", n=8)
    with pytest.raises(ValueError):
        sdcouple.config("test1", sigma=0)


def test_small_run():
    r = sdcouple.run("test1", n=2, sigma="2^-3")
    assert len(r["steps"]) == 9
    assert math.isfinite(r["max_err_w"]) and r["max_err_w"] > 0
    assert r["max_div_residual"] < 1e-9


def test_convergence_table():
    table = sdcouple.convergence("h", [1, 2], "test1", sigma="2^-3")
    lines = table.strip().splitlines()
    assert lines[0].startswith("param,norm_w_exact")
    assert len(lines) == 3 and lines[2].split(",")[4] != ""


def test_helpers():
    assert sdcouple.conv_order(4.0, 1.0) == 2.0
    assert sdcouple.infsup(2) > 0.1
    assert sdcouple.eval_exact("v", 0.0, 1.0, 0.0) == (1.0, 2.0)
    assert "Errata" in sdcouple.docs()


def test_checks():
    results = sdcouple.check(False)
    assert len(results) >= 12
    assert all(ok for _, ok, _ in results)
