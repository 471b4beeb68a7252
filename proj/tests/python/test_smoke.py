import json
import math

import pytest

import chaoscope


def test_version_and_config():
    assert chaoscope.__version__
    cfg = chaoscope.default_config()
    assert cfg["grid_points"] == 100000
    assert cfg["ladder_depth"] == 5


def test_list_families():
    ids = {f["id"] for f in chaoscope.list_families()}
    assert {"sin_ax", "log_sine", "logistic_357"} <= ids
    assert all("omega" in f for f in chaoscope.list_families("continuous"))


def test_evaluate_and_crossings():
    assert chaoscope.evaluate("sin_ax", "2", 0.25) == pytest.approx(math.sin(0.5))
    xs = chaoscope.scan_crossings("sin_ax", "1", "2", f"0.1:{2 * math.pi - 0.1}")
    assert [round(c["z"], 9) for c in xs] == [round(v, 9) for v in (math.pi / 3, math.pi, 5 * math.pi / 3)]


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        chaoscope.evaluate("no_such_family", "1", 0.0)
    with pytest.raises(ArithmeticError):
        chaoscope.evaluate("log_sine", "0.5", 0.0)
    with pytest.raises(ValueError):
        chaoscope.classify("sin_ax", "0:10", config={"bogus": 1})


def test_classify_negative_control():
    cfg = chaoscope.default_config()
    cfg.update(grid_points=20000, pair_samples=4)
    v = chaoscope.classify("linear_ax", "-10:10", config=cfg)
    assert v["label"] == "sensitive_only"
    assert v["evidence"]


def test_tail_and_taxonomy():
    t = chaoscope.tail_stats("logistic_357", "0.3", "0.300000001")
    assert 0 <= t["liminf_est"] < t["limsup_est"]
    p = chaoscope.classify_point("mixed_rat_irr", "1/2")
    assert p["label"] == "discontinuity"


def test_cli_in_process():
    code, out, err = chaoscope.run_cli("list", "--json")
    assert code == 0
    assert json.loads(out)
    code, _, err = chaoscope.run_cli("classify", "sin_ax")
    assert code == 1
    assert "--range" in err
