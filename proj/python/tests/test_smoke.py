import json

import pytest

import fbasis


def test_parse_round_trip():
    text = fbasis.parse_set("residue(3,1) | finite{1,5,9}")
    assert fbasis.parse_set(text) == text
    with pytest.raises(fbasis.ParseError):
        fbasis.parse_set("residue(2,2)")


def test_membership_and_density():
    assert fbasis.member(7, "residue(3,1)") is True
    assert fbasis.member(10**9, "sampled(1000000){2,3}") is None
    assert fbasis.enumerate_prefix("geom(2)", 20) == [2, 4, 8, 16]
    d = fbasis.natural_density("residue(2,0) | residue(4,1)")
    assert d["kind"] == "Exact" and d["lower"] == "3/4"


def test_weight_sum_verdicts():
    assert fbasis.weight_sum("residue(2,0)", "pow(1,-1)")["kind"] == "Diverges"
    v = fbasis.weight_sum("geom(2)", "pow(1,-1)")
    assert v["kind"] == "Converges" and float(v["bound"]) <= 1 + 1e-6


def test_admissibility():
    assert fbasis.check_admissible("pow(1,1/2)", "statistical", "2")["kind"] == "Proved"
    v = fbasis.check_admissible("pow(1,1)", "statistical", "2")
    assert v["kind"] == "Refuted" and v["witness"] == "cofinite{}"


def test_build_basis_l1():
    out = fbasis.build_basis("const(2)", "l1", "summable(const(1/2))", 4)
    assert out["system"]["coefficients"] == ["1", "1/2", "3/4", "9/8"]
    assert out["biorthogonality"]["ok"]
    assert out["defect"]["equals_target"]


def test_operator_norms():
    assert fbasis.op_norm(["1", "1/2", "3/4"], 2, "l1")["value"] == "2"
    assert fbasis.solve_b_next(["1", "1"], "sqrt(2)", "l2") == "sqrt(2)"
    assert fbasis.remainder_norm(["1", "1/2"], 1, "l1")["value"] == "3"


def test_separation():
    sep = fbasis.plank_separator("pow(1,2)", "linf", "1/10")
    assert sep["identity_holds"]
    with pytest.raises(fbasis.Error):
        fbasis.plank_separator("const(2)", "linf", "1/10")
    w = fbasis.cluster_witness("pow(1,1/2)", "2", ["pow(1,-1)"], 100)
    assert w["found"] and w["m"] == 2
    prof = fbasis.lemma1_profile("const(1)", ["unit(1)"], [1, 10, 100])
    assert prof["bound_holds"] and prof["b_decreasing"]


def test_cli_run():
    code, report, _ = fbasis.run(["classify-set", "--set", "residue(2,0)", "--filter", "statistical"])
    assert code == 0
    assert json.loads(report)["class"] == "Stationary"
    code, _, _ = fbasis.run(["no-such-command"])
    assert code == 64
