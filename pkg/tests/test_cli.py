"""Command-line interface: exit codes, output schema, round-trips."""
import json

import numpy as np
import pytest

from lieharm import load_algebra
from lieharm.cli import main

from conftest import rand_pd


HEIS_DOC = {
    "name": "heis3",
    "dim": 3,
    "brackets": [{"i": 1, "j": 2, "coeffs": [[0, 1.0]]}],
    "metric": "identity",
}

E1_DOC = {
    "name": "e1",
    "dim": 2,
    "brackets": [{"i": 0, "j": 1, "coeffs": [[0, 1.0]]}],
    "metric": "identity",
}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_check_text_output(tmp_path, capsys):
    path = write(tmp_path, "heis.json", HEIS_DOC)
    rc, out, _ = run(capsys, ["check", path])
    assert rc == 0
    assert "unimodular: True" in out
    assert "Killing subalgebra: dim 1" in out


def test_check_json_schema(tmp_path, capsys):
    path = write(tmp_path, "heis.json", HEIS_DOC)
    rc, out, _ = run(capsys, ["--format", "json", "check", path])
    assert rc == 0
    doc = json.loads(out)
    assert doc["unimodular"] is True
    assert doc["kill_dim"] == 1
    assert doc["dim"] == 3


def test_analyze_character_flags(tmp_path, capsys):
    write(tmp_path, "e1.json", E1_DOC)
    map_path = write(tmp_path, "char.json", {
        "source": "e1.json",
        "target": {"name": "line", "dim": 1, "brackets": [],
                   "metric": "identity"},
        "xi": [[0.0, 1.0]],
    })
    rc, out, _ = run(capsys, ["--format", "json", "analyze", map_path])
    assert rc == 0
    doc = json.loads(out)
    assert set(doc) >= {"tension", "bitension", "flags", "defects"}
    assert doc["flags"]["biharmonic"] is True
    assert doc["flags"]["harmonic"] is False
    assert np.linalg.norm(np.asarray(doc["bitension"], dtype=float)) < 1e-8


def test_analyze_non_homomorphism_exits_one(tmp_path, capsys):
    write(tmp_path, "heis.json", HEIS_DOC)
    map_path = write(tmp_path, "bad.json", {
        "source": "heis.json",
        "target": "heis.json",
        "xi": [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
    })
    rc, out, _ = run(capsys, ["--format", "json", "analyze", map_path])
    assert rc == 1
    doc = json.loads(out)
    # schema is stable even on failure
    assert set(doc) >= {"tension", "bitension", "flags", "defects"}
    assert doc["tension"] is None
    assert doc["defects"]["homomorphism"] > 0.1


def test_cone_reports_dimension(tmp_path, capsys):
    path = write(tmp_path, "heis.json", HEIS_DOC)
    rc, out, _ = run(capsys, ["cone", path])
    assert rc == 0
    assert "dimension: 4" in out


def test_semidirect_build_and_round_trip(tmp_path, capsys):
    write(tmp_path, "e1.json", E1_DOC)
    sd_path = write(tmp_path, "tangent.json", {"tangent": "e1.json"})
    out_path = str(tmp_path / "total.json")
    rc, out, _ = run(capsys, ["--format", "json", "semidirect", sd_path,
                              "-o", out_path])
    assert rc == 0
    doc = json.loads(out)
    assert doc["flags"]["harmonic"] is False
    assert np.allclose(np.asarray(doc["tension"], dtype=float), [0.0, 1.0],
                       atol=1e-10)

    total = load_algebra(out_path)
    assert total.dim == 4
    rc2, out2, _ = run(capsys, ["--format", "json", "check", out_path])
    assert rc2 == 0
    assert json.loads(out2)["dim"] == 4


def test_catalog_listing_and_suite(capsys):
    rc, out, _ = run(capsys, ["catalog", "heis3"])
    assert rc == 0
    assert "ch_dim: 4" in out

    rc, out, _ = run(capsys, ["catalog"])
    assert rc == 0
    assert "0 failures" in out

    rc, _, err = run(capsys, ["catalog", "nosuch"])
    assert rc == 1


def test_exact_mode_round_trip(tmp_path, capsys):
    doc = {
        "name": "e1x", "dim": 2,
        "brackets": [{"i": 0, "j": 1, "coeffs": [[0, "3/2"]]}],
        "metric": "identity",
    }
    path = write(tmp_path, "exact.json", doc)
    rc, out, _ = run(capsys, ["--exact", "--format", "json", "check", path])
    assert rc == 0
    parsed = json.loads(out)
    assert parsed["u_vector"] == [0, "-3/2"]


def test_exact_mode_rejects_floats(tmp_path, capsys):
    doc = {
        "name": "f", "dim": 2,
        "brackets": [{"i": 0, "j": 1, "coeffs": [[0, 0.37]]}],
        "metric": "identity",
    }
    path = write(tmp_path, "floaty.json", doc)
    rc, _, err = run(capsys, ["--exact", "check", path])
    assert rc == 2


def test_parse_failure_exits_two(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text("{oops")
    rc, _, err = run(capsys, ["check", str(p)])
    assert rc == 2
    rc, _, err = run(capsys, ["check", str(tmp_path / "missing.json")])
    assert rc == 2


def test_validation_failure_exits_one(tmp_path, capsys):
    doc = dict(HEIS_DOC)
    doc["metric"] = [[1.0, 2.0, 0.0], [2.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    path = write(tmp_path, "nonpd.json", doc)
    rc, _, err = run(capsys, ["check", path])
    assert rc == 1


def test_tol_flag_loosens_hom_acceptance(tmp_path, capsys):
    write(tmp_path, "heis.json", HEIS_DOC)
    xi = (np.eye(3) + 2e-6 * np.ones((3, 3))).tolist()
    map_path = write(tmp_path, "near.json", {
        "source": "heis.json", "target": "heis.json", "xi": xi,
    })
    rc_strict, *_ = run(capsys, ["analyze", map_path])
    assert rc_strict == 1
    rc_loose, *_ = run(capsys, ["--tol", "1e-4", "analyze", map_path])
    assert rc_loose == 0
