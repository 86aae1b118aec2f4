import math

import numpy as np
import pytest

import wavedecay

BUMP_SLOPE = 96 / (25 * math.sqrt(5))


def small_config(**checks):
    return {
        "schema_version": wavedecay.SCHEMA_VERSION,
        "name": "py-smoke",
        "profile": {"dim_mode": "line-1d", "family": "radial-bump", "L": 1.0, "a": 0.1},
        "data": {"family": "bump", "u0_amplitude": 1.0, "u1_amplitude": 0.5},
        "solver": {"h": 0.02, "T_final": 4.0, "sample_stride": 5},
        "checks": {"R_list": [2.0], **checks},
    }


def test_profile_eta():
    p = wavedecay.profile_constants("radial-3d", "radial-bump", 1.0, 0.1)
    assert p["eta"] == pytest.approx(0.2 * BUMP_SLOPE, rel=1e-13)
    assert p["applicable"]
    assert not wavedecay.profile_constants("line-1d", "radial-bump", 1.0, -0.5)["applicable"]
    with pytest.raises(wavedecay.PreconditionError):
        wavedecay.profile_constants("line-1d", "radial-bump", 1.0, -2.0)


def test_run_experiment():
    (summary,) = wavedecay.run_experiment(small_config(conservation={}, morawetz={}))
    assert summary["complete"]
    assert all(c["status"] == "pass" for c in summary["checks"])
    assert summary["metrics"]["conservation_drift"] < 1e-3


def test_config_error():
    cfg = small_config()
    cfg["checks"]["R_list"] = [0.5]
    with pytest.raises(wavedecay.ConfigError, match="R > L"):
        wavedecay.run_experiment(cfg)


def test_fit_decay():
    t = np.linspace(1.0, 50.0, 100)
    fit = wavedecay.fit_decay(t, 3.0 / t**2, 1.0, 50.0)
    assert fit["ok"]
    assert fit["p"] == pytest.approx(2.0, rel=1e-12)


def test_gronwall_constant_series():
    t = np.linspace(0.0, 10.0, 101)
    cert = wavedecay.gronwall_bound(t, np.ones_like(t), 5.0, 0.5, 0.0, 1.0)
    assert cert["dominated"]
    assert len(cert["bound"]) == len(cert["bound_t"])


def test_riesz_integral_zero_mean():
    n, h = 64, 0.2
    x = (np.arange(n) - n / 2) * h
    X, Y = np.meshgrid(x, x, indexing="ij")

    def bump(r2):
        return np.where(r2 < 1, (1 - r2) ** 4, 0.0)

    f = bump((X - 1.5) ** 2 + Y**2) - bump((X + 1.5) ** 2 + Y**2)
    v = wavedecay.riesz_integral(f, h, 1.0)
    assert v > 0
    with pytest.raises(wavedecay.PreconditionError):
        wavedecay.riesz_integral(bump(X**2 + Y**2), h, 1.0)


def test_verify_suite():
    rep = wavedecay.verify_suite("gronwall")
    assert rep["suite"] == "gronwall"
    assert rep["passed"]
