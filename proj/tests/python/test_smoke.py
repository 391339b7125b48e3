import json

import pytest

import extwm


def test_zeros_of_f():
    zeros = extwm.zeros_of_f()
    assert len(zeros) == 4
    ref = [0.8733, 2.3886, 3.9466, 5.51186]
    assert all(abs(z - r) < 5e-4 for z, r in zip(zeros, ref))


def test_budget_constants():
    drop, rise = extwm.budget_constants()
    assert drop == pytest.approx(-2.1799, abs=1e-3)
    assert rise == pytest.approx(2.52841, abs=1e-3)


def test_exact_areas():
    areas = extwm.exact_areas()
    assert areas["first_strip"].startswith("2.2078565636")
    assert areas["second_strip_fraction"] == "1224711443/322180000"


def test_harmonic_profile():
    q = extwm.find_harmonic(1)
    assert q["slope"] == pytest.approx(3.786299310951, abs=1e-9)
    assert q["energy"] == pytest.approx(7.16803122, abs=1e-5)


def test_weyl_m_free():
    # closed form at lam = 1: m0 = -1/2 + i/2
    m = extwm.weyl_m(1.0, potential="free")
    assert m["re_m"] == pytest.approx(-0.5, abs=1e-10)
    assert m["im_m"] == pytest.approx(0.5, abs=1e-10)
    assert m["wronskian_dev"] < 1e-10


def test_coercivity_sample_deterministic():
    a = extwm.coercivity_sample(100, seed=7)
    b = extwm.coercivity_sample(100, seed=7)
    assert a == b
    assert a["violations"] == 0


def test_run_config_roundtrip():
    cfg = {"kind": "coercivity", "params": {"samples": 50, "control": False}}
    code, summary = extwm.run_config(json.dumps(cfg))
    assert code == 0
    report = json.loads(summary)
    assert report["kind"] == "coercivity"
    assert report["all_pass"] is True
    assert all(c["pass"] for c in report["checks"])


def test_run_config_rejects_bad_input():
    with pytest.raises(ValueError):
        extwm.run_config("{}")
    with pytest.raises(ValueError):
        extwm.run_config('{"kind": "coercivity", "params": {"bogus": 1}}')
    with pytest.raises(ValueError):
        extwm.run_config("not json")
