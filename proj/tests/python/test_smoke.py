import math

import pytest

import threshold_lab as tl


def box(depth=-1.0, half=0.5, b=0.75):
    return tl.potential({
        "b": b,
        "pieces": [{"from": -half, "to": half, "poly": [depth], "harmonics": []}],
    })


def test_potential_evaluation_and_moments():
    v = box()
    assert v(0.0) == -1.0
    assert v(2.0) == 0.0
    assert v.moment(0) == pytest.approx(-1.0)
    assert v.moment(0, "negative-half") == pytest.approx(-0.5)


def test_resonance_detection():
    u = tl.potential({"b": 1.0, "pieces": [
        {"from": -0.25, "to": 0.75, "poly": [-math.pi ** 2], "harmonics": []}]})
    res = tl.detect_resonance(u)
    assert res["resonant"]
    assert res["theta"] == pytest.approx(-1.0, abs=1e-8)
    assert res["u0"] == pytest.approx(math.sqrt(0.5), abs=1e-8)
    assert res["du0"] == pytest.approx(-math.pi * math.sqrt(0.5), abs=1e-8)


def test_tune_to_resonance():
    u = tl.potential({"b": 1.25, "pieces": [
        {"from": 0.0, "to": 1.0, "poly": [-1.0], "harmonics": []}]})
    gamma = tl.tune_to_resonance(u, 5.0, 15.0)
    assert gamma == pytest.approx(math.pi ** 2, abs=1e-8)


def test_point_interaction():
    assert tl.point_interaction_eigenvalue(1.0, -2.0) == pytest.approx(-1.0)
    assert tl.point_interaction_eigenvalue(1.0, 2.0) is None


def test_square_well_eigenvalue():
    q = box(b=1.0)
    zero = tl.potential({"b": 1.0, "pieces": []})
    result = tl.find_negative_eigenvalues(zero, q, tl.scaling({"kind": "const", "alpha": 1.0}), 1.0)
    assert len(result["eigenvalues"]) == 1
    # even-state transcendental equation q tan(q/2) = omega
    omega = result["omegas"][0]
    qq = math.sqrt(1.0 - omega ** 2)
    assert qq * math.tan(qq / 2.0) == pytest.approx(omega, rel=1e-8)


def test_corollary_prediction_and_threshold():
    u = tl.potential({"b": 0.75, "pieces": []})
    v = box()
    f = tl.scaling({"kind": "const", "alpha": 1.0})
    p = tl.predict(u, v, f)
    assert p["k"] == pytest.approx(-0.5, abs=1e-9)
    assert p["conditions_ok"]

    e = tl.threshold_eigenvalue(u, v, f, 1e-3)
    assert e == pytest.approx(-1e-6 / 4.0, rel=0.02)

    positive = box(depth=1.0)
    assert tl.threshold_eigenvalue(u, positive, f, 1e-3) is None


def test_quasimode_summary():
    u = tl.potential({"b": 1.0, "pieces": [
        {"from": -0.25, "to": 0.75, "poly": [-math.pi ** 2], "harmonics": []}]})
    v = tl.potential({"b": 1.25, "pieces": [
        {"from": -1.0, "to": 1.0, "poly": [],
         "harmonics": [{"A": 1.0, "w": math.pi, "phi": 0.0, "kind": "cos"}]}]})
    q = tl.quasimode("t4", u, v, tl.scaling({"kind": "power", "c": 1.0, "p": 0.2}), 1e-4)
    assert q["k_lambda"] == pytest.approx(0.25, rel=0.02)
    assert abs(q["junction_errors"]["psi_right"]) < 1e-9
    assert q["omega"] == pytest.approx(1e-4 * (1e-4 ** 0.2) * q["k_lambda"], rel=1e-9)


def test_sweep_from_config(tmp_path):
    (tmp_path / "U.json").write_text('{"b": 0.75, "pieces": []}')
    (tmp_path / "V.json").write_text(
        '{"b": 0.75, "pieces": [{"from": -0.5, "to": 0.5, "poly": [-1.0], "harmonics": []}]}')
    (tmp_path / "F.json").write_text('{"kind": "const", "alpha": 1.0}')
    (tmp_path / "exp.json").write_text("""{
        "U_path": "U.json", "V_path": "V.json", "scaling_path": "F.json",
        "case": "auto",
        "lambda_grid": {"lambda_max": 1e-2, "lambda_min": 1e-4, "points": 9},
        "tolerances": {"k_rel": 0.05}
    }""")
    report = tl.sweep(str(tmp_path / "exp.json"))
    assert report["verdict"] == "pass"
    assert report["fitted_k"] == pytest.approx(0.5, rel=0.05)
    assert all(row["status"] == "ok" for row in report["rows"])


def test_config_error():
    with pytest.raises(ValueError):
        tl.Potential.from_json("{bad json")
