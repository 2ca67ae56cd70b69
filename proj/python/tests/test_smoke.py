import json
import os
import pathlib

import numpy as np
import pytest

import nordenlab

DATA = pathlib.Path(os.environ.get("NORDEN_DATA_DIR", pathlib.Path(__file__).resolve().parents[2] / "data"))


def test_expression_jet():
    e = nordenlab.Expression("x1*sin(x2)", 2)
    value, grad, hess = e.jet([0.5, 0.3])
    assert value == pytest.approx(0.5 * np.sin(0.3))
    assert grad == pytest.approx([np.sin(0.3), 0.5 * np.cos(0.3)])
    assert hess[0, 1] == pytest.approx(np.cos(0.3))
    with pytest.raises(nordenlab.ParseError):
        nordenlab.Expression("x1 +", 2)


def test_flat_fields():
    c = nordenlab.flat_kahler(2)
    f = nordenlab.fields(c, [0.1, 0.2, 0.3, 0.4])
    J, g = f["J"], f["g"]
    assert np.allclose(J @ J, -np.eye(4))
    assert np.allclose(J.T @ g @ J, -g)
    assert np.abs(f["F"]).max() == 0.0
    assert np.abs(f["R0"]).max() == 0.0


def test_conformal_chart():
    c = nordenlab.load_chart(str(DATA / "conformal_4.json"))
    p = c.sample_points(1)[0]
    r = nordenlab.classify(c, p)
    assert r["member"]["W1"] and not r["member"]["W0"]
    f = nordenlab.fields(c, p)
    R = f["R0"]
    assert np.allclose(R, -R.transpose(1, 0, 2, 3))
    assert np.allclose(R, R.transpose(2, 3, 0, 1))


def test_check_reports():
    c = nordenlab.load_chart(str(DATA / "conformal_4.json"))
    reports = nordenlab.check(c, "prop-4.1", points=4)
    assert reports and nordenlab.all_passed(reports)
    assert list(reports[0]) == ["check", "hypothesis", "points_tested", "max_residual", "tolerance", "status", "details"]
    twisted = nordenlab.load_chart(str(DATA / "twisted_4.json"))
    assert {r["status"] for r in nordenlab.check(twisted, "prop-3.2", points=4)} == {"skipped"}
    with pytest.raises(nordenlab.ArgumentError):
        nordenlab.check(c, "nope")


def test_round_trip_and_cli():
    c = nordenlab.conformal_flat(2, "x1*x2")
    again = nordenlab.chart_from_json(c.to_json())
    assert again.to_json() == c.to_json()
    code, out, _ = nordenlab.run_cli(["builtin", "flat-kahler", "--n", "2"])
    assert code == 0 and json.loads(out)["dimension"] == 4
    code, _, err = nordenlab.run_cli(["validate", "nosuchfile.json"])
    assert code == 2 and "nosuchfile.json" in err


def test_closed_form_table():
    rows = nordenlab.closed_form_table()
    assert len(rows) == 10
    assert sum(not r["agrees"] for r in rows) == 3
