"""Smoke tests for the _conegames extension module."""

import math
import sys

import _conegames as cg


def approx(a, b, tol=1e-6):
    return abs(a - b) <= tol


def test_algebra_info():
    info = cg.algebra_info({"kind": "sym", "n": 3})
    assert info["rank"] == 3
    assert info["dim"] == 6
    info = cg.algebra_info({"kind": "sum", "parts": [{"kind": "rn", "n": 2}, {"kind": "spin", "n": 4}]})
    assert info["rank"] == 4
    assert info["dim"] == 6


def test_value_and_mixed():
    inst = {
        "algebra": {"kind": "rn", "n": 2},
        "operator": {"type": "dense", "matrix": [[1, -1], [-1, 1]]},
    }
    sol = cg.value(inst)
    assert approx(sol["value"], 0.0)
    assert sol["gap"] <= 1e-5

    mixed = cg.completely_mixed(inst)
    assert mixed["verdict"] == "completely_mixed"
    assert approx(mixed["xbar"][0], 0.5, 1e-9)


def test_classify():
    inst = {
        "algebra": {"kind": "sym", "n": 2},
        "operator": {"type": "lyap_mat", "A": [[0, 1], [-1, 0]]},
    }
    rep = cg.classify(inst, which="all", budget=16, seed=3)
    assert rep["lyapunov_like"]["verdict"] == "certified"
    assert rep["z"]["verdict"] == "certified"
    assert rep["positive"]["verdict"] == "refuted"


def test_irreducible():
    inst = {
        "algebra": {"kind": "sym", "n": 2},
        "operator": {"type": "lyap_mat", "A": [[0, 1], [-1, 0]]},
    }
    rep = cg.irreducible(inst, mode="space")
    assert rep["verdict"] == "irreducible"
    assert rep["method"] == "invariant_subspace"

    nilpotent = {
        "algebra": {"kind": "rn", "n": 2},
        "operator": {"type": "dense", "matrix": [[0, 1], [0, 0]]},
    }
    rep = cg.irreducible(nilpotent, mode="cone")
    assert rep["verdict"] == "reducible"


def test_fixtures_reproduce():
    fixtures = {f["label"]: f for f in cg.fixtures()}
    assert "ex31" in fixtures and "ex52" in fixtures
    sol = cg.value(fixtures["ex32"])
    assert approx(sol["value"], -1.0)


def test_suite():
    rep = cg.verify("thm31", seed=5, trials=5)
    assert rep["passes"] == rep["trials"] == 10
    assert rep["failures"] == []


def test_errors():
    try:
        cg.value({"algebra": {"kind": "rn", "n": 2}, "operator": {"type": "dense", "matrix": [[1]]}})
    except ValueError as err:
        assert "matrix" in str(err)
    else:
        raise AssertionError("expected ValueError for a malformed instance")


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
