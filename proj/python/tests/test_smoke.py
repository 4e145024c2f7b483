import json
import math
import os
import pathlib

import jsonschema
import numpy as np
import pytest

import sympsturm

ROOT = pathlib.Path(os.environ.get("SYMPSTURM_ROOT", pathlib.Path(__file__).resolve().parents[2]))


def schema(name):
    return json.loads((ROOT / "schemas" / f"{name}.schema.json").read_text())


def problem(name):
    return (ROOT / "problems" / name).read_text()


def test_commands_and_theorems():
    assert "clm" in sympsturm.commands()
    assert "alternation" in sympsturm.theorem_ids()
    assert sympsturm.SCHEMA_VERSION == 1


def test_rotation_clm_report():
    r = sympsturm.run("clm", problem("rotation_clm.json"))
    assert r.exit_code == 0
    assert r.data["value"] == 2
    jsonschema.validate(r.data, schema("index_report"))


def test_problem_as_dict_and_csv():
    p = json.loads(problem("harmonic_cz.json"))
    r = sympsturm.run("cz", p, format="csv")
    assert r.data["value"] == 4
    assert r.text.startswith("kind,t0,mult,pos,zero,neg,contribution\n")


def test_normal_form_is_stable():
    once = sympsturm.parse_problem(problem("flow.json"), "flow")
    assert sympsturm.parse_problem(once, "flow") == once


def test_input_errors_raise():
    with pytest.raises(sympsturm.InputError, match="symmetric"):
        sympsturm.run("cz", problem("bad_asymmetric.json"))
    with pytest.raises(ValueError):
        sympsturm.parse_problem("{", "triple")


def test_verify_reports():
    reports = sympsturm.verify("alternation", trials=4, seed=3)
    assert len(reports) == 4
    for r in reports:
        jsonschema.validate(r, schema("theorem_report"))
        assert r["verdict"]
    assert reports == sympsturm.verify("alternation", trials=4, seed=3, jobs=2)


def test_verify_command_exit_code():
    r = sympsturm.run("verify", theorem="conj-focal-pair", trials=20, seed=1)
    assert r.exit_code == 1


def test_kepler():
    r = sympsturm.run("kepler", h=-0.5, e=0.0)
    jsonschema.validate(r.data, schema("kepler"))
    assert r.data["pass"]
    assert abs(r.data["s_star"] - math.pi) < 1e-9
    assert sympsturm.kepler_curvature(-0.5, 1.0) == pytest.approx(1.0)


def test_numeric_entry_points():
    assert sympsturm.cz_constant_flow(np.eye(2), 4 * math.pi) == 4
    ld = np.array([[1.0], [0.0]])
    assert sympsturm.clm_constant_flow(ld, ld, np.eye(2), 2 * math.pi) == 2
    L = sympsturm.random_lagrangian(2, 5)
    assert L.shape == (4, 2)
    a, b, c = (sympsturm.random_lagrangian(2, s) for s in (1, 2, 3))
    assert 0 <= sympsturm.triple_index(a, b, c) <= 2
    with pytest.raises(sympsturm.DegeneratePathError):
        sympsturm.cz_constant_flow(np.zeros((2, 2)), 1.0)
