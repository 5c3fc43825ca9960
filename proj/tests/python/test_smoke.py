import json
from pathlib import Path

import jsonschema
import pytest

import ltsep

SCHEMA = json.loads((Path(__file__).resolve().parents[2] / "schema" / "verdict.schema.json").read_text())

PARITY = "alphabet: a\nstates: 2\ntrans: 0 a 1\ntrans: 1 a 0\nI1: 0\nF1: 0\nI2: 0\nF2: 1\n"


def test_parity_is_inseparable_for_both_classes():
    for problem in ("lt", "ltt"):
        v = ltsep.decide(PARITY, problem)
        jsonschema.validate(v, SCHEMA)
        assert v["status"] == "inseparable"
        assert v["separable"] is False
        assert len(v["witness"]["pair"]["w1"]) % 2 == 0


def test_threshold_family_optimal_threshold():
    spec = ltsep.gen_threshold_family(1)
    assert ltsep.decide(spec, "fixed", k=1, d=2)["status"] == "inseparable"
    v = ltsep.decide(spec, "fixed", k=1, d=3, emit_separator=True)
    jsonschema.validate(v, SCHEMA)
    assert v["status"] == "separable"
    assert v["separator"]["d"] == 3


def test_sat_reduction():
    assert ltsep.decide(ltsep.gen_sat("1 0\n"), "ltt")["status"] == "inseparable"
    assert ltsep.decide(ltsep.gen_sat("1 0\n-1 0\n"), "ltt")["status"] == "separable"


def test_profiles_and_equivalence():
    assert ltsep.profiles(["a", "b", "c"], "bacccaabcbaabba", 6)[8] == "(aab,cba)"
    assert ltsep.equivalent(["a"], "aaaa", "aaaaa", 1, 3)
    assert not ltsep.equivalent(["a"], "aa", "aaa", 1, 3)


def test_bounds():
    assert ltsep.threshold_bound(1, 1, 2) == 16
    assert ltsep.threshold_bound(3, 2, 3) == 63**21
    assert ltsep.profile_width_bound(2) == 12


def test_errors():
    with pytest.raises(ltsep.ParseError):
        ltsep.decide("alphabet: a\n", "lt")
    with pytest.raises(ValueError):
        ltsep.decide(PARITY, "fixed")
    code, out, err = ltsep.run_cli(["decide", "/nonexistent.spec"])
    assert code == 3 and "cannot open" in err


def test_cli_round_trip(tmp_path):
    spec = tmp_path / "p.spec"
    spec.write_text(ltsep.gen_parity())
    code, out, _ = ltsep.run_cli(["decide", str(spec), "--class", "ltt", "--json", "--no-timing"])
    assert code == 1
    jsonschema.validate(json.loads(out), SCHEMA)
    assert ltsep.normalize_spec(spec.read_text()) == ltsep.gen_parity()
