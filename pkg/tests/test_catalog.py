"""Built-in algebra library and its self-verification suite."""
from fractions import Fraction

import numpy as np
import pytest

from lieharm import (
    CatalogError,
    classify,
    get,
    names,
    run_verification_suite,
    tension,
)

from conftest import rand_pd, with_metric


def test_names_lists_every_entry():
    got = set(names())
    assert {"e1", "heis3", "so3", "sl2", "nilp5", "abelian", "e2flat",
            "aff2solv", "tangent"} <= got


def test_unknown_entry_raises():
    with pytest.raises(CatalogError):
        get("nosuch")


def test_entry_parameters_feed_through():
    e = get("e1", a=2.5)
    assert np.allclose(np.asarray(e.ela.bracket([1, 0], [0, 1]), float),
                       [2.5, 0.0])
    h = get("heis3", alpha=0.7)
    assert np.allclose(np.asarray(h.ela.bracket([0, 1, 0], [0, 0, 1]), float),
                       [0.7, 0.0, 0.0])
    s = get("so3", alphas=(2.0, 2.0, 2.0))
    assert np.allclose(np.asarray(s.ela.gram, float), 2.0 * np.eye(3))
    a = get("abelian", n=4)
    assert a.ela.dim == 4 and a.expected["kill_dim"] == 4


def test_expected_values_match_measurements(rng):
    for name in ("e1", "heis3", "so3", "nilp5", "abelian", "e2flat",
                 "aff2solv", "sl2"):
        entry = get(name)
        ela = entry.ela
        assert ela.is_unimodular() == entry.expected["unimodular"]
        cov = np.asarray(ela.gram, float) @ np.asarray(
            ela.unimodular_vector(), float)
        assert np.allclose(cov, np.asarray(entry.expected["u_covector"],
                                           dtype=float), atol=1e-10)
        if "kill_dim" in entry.expected:
            assert ela.killing_subalgebra().shape[1] == entry.expected["kill_dim"]


def test_rejected_parameters():
    with pytest.raises(CatalogError):
        get("aff2solv", beta=-1.0)  # degenerates to an abelian direction sum
    with pytest.raises(CatalogError):
        get("abelian", n=0)
    with pytest.raises(CatalogError):
        get("e2flat", lam=-2.0)


def test_exact_entries():
    e = get("e1", a=Fraction(3, 2), exact=True)
    assert e.ela.exact
    u = e.ela.unimodular_vector()
    assert list(u) == [Fraction(0), Fraction(-3, 2)]


def test_tangent_entry_carries_construction(rng):
    entry = get("tangent", base="e1")
    assert entry.ela.dim == 4
    proj = entry.extras["projection"]
    base = entry.extras["base"]
    tau = np.asarray(tension(proj), float)
    assert np.allclose(tau, -np.asarray(base.unimodular_vector(), float),
                       atol=1e-10)
    flags = classify(proj).flags
    assert not flags["biharmonic"]  # the 2-dim base is not unimodular

    entry2 = get("tangent", base="heis3")
    assert entry2.ela.dim == 6
    flags2 = classify(entry2.extras["projection"]).flags
    assert flags2["harmonic"] and flags2["biharmonic"]


def test_verification_suite_is_green():
    report = run_verification_suite(seed=7)
    failures = [c for c in report.checks if not c.passed]
    assert report.passed, f"failures: {[c.name for c in failures]}"
    assert len(report.checks) >= 80


def test_verification_suite_serializes():
    report = run_verification_suite(seed=1)
    doc = report.to_dict()
    assert doc["passed"] is True
    assert len(doc["checks"]) == len(report.checks)
    sample = doc["checks"][0]
    assert {"name", "expected", "measured", "passed"} <= set(sample)
