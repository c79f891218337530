from pathlib import Path

import pytest

import novikit

CORPUS = Path(__file__).resolve().parents[2] / "corpus"


def pres(name):
    return (CORPUS / name).read_text()


def test_collect_in_sol():
    assert novikit.collect(pres("sol.pc"), "t a t^-1") == novikit.collect(pres("sol.pc"), "a^2 b")


def test_hirsch():
    assert novikit.hirsch(pres("z4.pc")) == {"hirsch": 4, "poly_z": True}


def test_klein_is_acyclic():
    r = novikit.homology(CORPUS / "klein.cx", "a=0, b=1")
    assert r["verdict"] == "ACYCLIC"
    assert r["trace_length"] == 2
    assert novikit.fingerprint(str(CORPUS / "klein.cx"), "a=0, b=1", 3) == [0, 0, 0]


def test_wedge_has_free_homology():
    r = novikit.homology(CORPUS / "wedge.cx", "t=1")
    assert r["verdict"] == "FREE_HOMOLOGY"
    assert r["betti"] == [0, 0, 1]


def test_duality_refuses_non_manifolds():
    assert not novikit.duality(CORPUS / "torus.cx")["violated"]
    with pytest.raises(novikit.NovikitError, match="NOT_A_MANIFOLD"):
        novikit.duality(CORPUS / "wedge.cx", "t=1")


def test_mapping_torus_text_round_trips(tmp_path):
    cx = tmp_path / "sol.cx"
    cx.write_text(novikit.mapping_torus([[2, 1], [1, 1]]))
    assert novikit.homology(cx, "t=1")["verdict"] == "ACYCLIC"


def test_advisor():
    v = novikit.advise("cw", 2, pres("z1.pc"), euler=1, kernel_finite=True)
    assert v["verdict"] == "HOMOTOPY_NOT_FG"
    assert "euler-characteristic-nonzero" in [c["clause"] for c in v["citations"]]
    assert novikit.advise("manifold", 4, pres("z4.pc"))["target"] == "pi_2"


def test_obstruction():
    r = novikit.obstruction(CORPUS / "wedge.cx", "t=1")
    assert r["conclusion"] == "OBSTRUCTED"


def test_errors_carry_codes():
    with pytest.raises(novikit.NovikitError, match="UNDECLARED_GENERATOR"):
        novikit.collect(pres("z2.pc"), "q")
