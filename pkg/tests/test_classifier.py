import pytest

from xgroup import constructors as cons
from xgroup.classifier import TheoremCase, classify, cross_validate, explain
from xgroup.engine import Group
from xgroup.errors import Unclassified
from xgroup.xcheck import is_x_bruteforce, verify_witness, Witness


def test_classify_nilpotent_cases():
    assert classify(cons.basic_abelian([12]).group).label == "1.1"
    assert classify(cons.basic_abelian([]).group).label == "1.1"
    assert classify(cons.basic_abelian([5, 5]).group).label == "1.2"
    assert classify(cons.extraspecial(3, "p").group).label == "1.3"
    case = classify(cons.extraspecial(3, "p_squared").group)
    assert case.label == "1.3" and case.parameters["exponent_kind"] == "p_squared"
    for kind, order in (("dihedral", 16), ("semidihedral", 16),
                        ("quaternion", 16), ("quaternion", 8)):
        case = classify(cons.two_group(kind, order).group)
        assert case.label == "1.4"
        assert case.parameters["kind"] == kind


def test_classify_supersoluble_cases():
    case = classify(cons.metacyclic(7, 3, 2).group)
    assert case.label == "2.1.1"
    case = classify(cons.quaternion_metacyclic(5, 8).group)
    assert case.label == "2.1.2"
    case = classify(cons.metacyclic(5, 4, 4).group)
    assert case.label == "2.1.3"
    assert case.parameters["q"] == 2
    assert case.parameters["z_order"] == 2
    case = classify(cons.extraspecial_frobenius(7, 3, 1).group)
    assert case.label == "2.2"


def test_classify_deep_cases():
    assert classify(cons.sym_alt(4, False).group).label == "3.1.1"
    assert classify(cons.sym_alt(4, True).group).label == "3.1.1"
    assert classify(
        cons.affine_frobenius(3, ("cyclic", 8)).group).label == "3.1.2.1"
    assert classify(
        cons.affine_frobenius(3, ("quaternion", 8)).group).label == "3.1.2.2"
    assert classify(
        cons.affine_frobenius(7, ("case_2_1_3", 3, 4)).group).label == "3.1.2.4"
    assert classify(
        cons.affine_frobenius(5, ("sl2_3",)).group).label == "3.1.2.5"
    assert classify(cons.matrix_group("SL2", 3).group).label == "3.2.1"
    assert classify(cons.sl2p_dot2(3).group).label == "3.2.1"
    assert classify(cons.heisenberg_extension(5, 3).group).label == "3.2.2"
    assert classify(cons.matrix_group("SL2", 5).group).label == "4.1"
    assert classify(cons.sl2p_dot2(5).group).label == "4.1"
    assert classify(cons.matrix_group("PSL2", 7).group).label == "4.2"
    assert classify(cons.matrix_group("PSL2", 9).group).label == "4.2"
    assert classify(cons.m10().group).label == "4.2"


def test_classify_negatives_carry_witnesses():
    for rec in (cons.sym_alt(5, False), cons.basic_abelian([3, 3, 3]),
                cons.metacyclic(15, 4, 2), cons.matrix_group("SL2", 7),
                cons.matrix_group("PSL2", 11)):
        case = classify(rec.group)
        assert case.label == "NotX"
        w = case.parameters["witness"]
        assert verify_witness(rec.group, Witness(w["a"], w["b"], w["x"]))


def test_fermat_mersenne_gate():
    assert classify(cons.matrix_group("PSL2", 5).group).label == "4.2"
    assert classify(cons.matrix_group("PSL2", 7).group).label == "4.2"
    assert classify(cons.matrix_group("PSL2", 17).group).label == "4.2"
    assert classify(cons.matrix_group("PSL2", 11).group).label == "NotX"
    assert classify(cons.matrix_group("PSL2", 13).group).label == "NotX"
    # PSL2(3) is the alternating group of degree 4
    assert classify(cons.matrix_group("PSL2", 3).group).label == "3.1.1"


def test_alias_normalization():
    for rec in (cons.matrix_group("SL2", 4), cons.matrix_group("PSL2", 5),
                cons.sym_alt(5, True)):
        case = classify(rec.group)
        assert case.label == "4.2"
        assert sorted(case.parameters["aliases"]) == [4, 5]


def test_evidence_nonempty_for_positive_cases():
    for rec in (cons.basic_abelian([12]), cons.metacyclic(7, 3, 2),
                cons.sym_alt(4, False), cons.matrix_group("SL2", 5)):
        case = classify(rec.group)
        assert case.label != "NotX"
        assert case.evidence


def test_explain(s4, q8):
    report = explain(s4)
    assert report["label"] == "3.1.1"
    assert any("minimal normal" in line for line in report["evidence"])
    report = explain(q8)
    assert report["label"] == "1.4"
    assert any("quaternion" in line for line in report["evidence"])
    report = explain(cons.extraspecial_frobenius(7, 3, 1).group)
    assert report["label"] == "2.2"
    assert any("extraspecial" in line for line in report["evidence"])
    assert any("odd" in line for line in report["evidence"])


def test_unclassified_raises_above_cap():
    big = cons.sym_alt(7, False).group
    with pytest.raises(Unclassified):
        classify(big)


def test_case_constructor_round_trip_small():
    records = [
        cons.basic_abelian([12]), cons.basic_abelian([5, 5]),
        cons.extraspecial(3, "p"), cons.two_group("quaternion", 16),
        cons.metacyclic(7, 3, 2), cons.quaternion_metacyclic(5, 8),
        cons.metacyclic(5, 4, 4), cons.sym_alt(4, False),
        cons.affine_frobenius(3, ("cyclic", 8)),
        cons.affine_frobenius(3, ("quaternion", 8)),
        cons.matrix_group("SL2", 3), cons.matrix_group("SL2", 5),
        cons.matrix_group("PSL2", 7),
    ]
    for rec in records:
        case = classify(rec.group)
        assert case.label == rec.intended_case, rec.family


def test_parameters_recovered():
    case = classify(cons.metacyclic(7, 3, 2).group)
    assert case.parameters == {"c_order": 7, "d_order": 3}
    case = classify(cons.quaternion_metacyclic(5, 8).group)
    assert case.parameters["c_order"] == 5
    assert case.parameters["d_order"] == 8
    case = classify(cons.affine_frobenius(3, ("cyclic", 8)).group)
    assert case.parameters["p"] == 3 and case.parameters["m"] == 8
    case = classify(cons.matrix_group("SL2", 5).group)
    assert case.parameters["p"] == 5 and case.parameters["extended"] is False
    case = classify(cons.sl2p_dot2(5).group)
    assert case.parameters["p"] == 5 and case.parameters["extended"] is True


def test_exclusivity_by_branch():
    # sibling supersoluble cases demand incompatible centers
    c211 = classify(cons.metacyclic(7, 3, 2).group)
    c213 = classify(cons.metacyclic(5, 4, 4).group)
    assert c211.label == "2.1.1" and c213.label == "2.1.3"
    from xgroup.engine import center
    assert center(cons.metacyclic(7, 3, 2).group).order == 1
    assert center(cons.metacyclic(5, 4, 4).group).order > 1


def test_cross_validate_toy():
    entries = [("dih12", _dih12()), ("c1", cons.basic_abelian([]))]
    summary = cross_validate(entries)
    assert summary["entries"] == 2
    assert summary["mismatches"] == 0
    by_name = {r["name"]: r for r in summary["rows"]}
    assert by_name["dih12"]["label"] == "NotX"
    assert by_name["dih12"]["brute"] == "NotX"
    assert by_name["c1"]["label"] == "1.1"
    assert by_name["c1"]["brute"] == "IsX"


def _dih12():
    rec = cons.metacyclic(6, 2, 5)
    rec.family = "dihedral"
    rec.parameters = {"order": 12}
    rec.intended_case = cons.NOT_X
    return rec


def test_dih12_witness_structure():
    g = cons.metacyclic(6, 2, 5).group
    verdict = is_x_bruteforce(g)
    assert verdict.result == "NotX"
    w = verdict.witness
    from xgroup.engine import fingerprint, centralizer, SubgroupSet, center
    assert w.subgroup_fingerprint(g) == fingerprint(
        cons.sym_alt(3, False).group)
    sub = SubgroupSet(g, w.subgroup_members(g))
    cent = centralizer(g, sub)
    assert cent.members == center(g).members
    assert cent.order == 2
