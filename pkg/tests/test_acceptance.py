"""Acceptance gate: each criterion runs at its stated tolerance (these are
exact classifications, so tolerances are equalities) and prints one line."""

import math

import pytest

from xgroup import constructors as cons
from xgroup import corpus as corpus_mod
from xgroup import xcheck
from xgroup.classifier import classify
from xgroup.engine import (
    SubgroupSet,
    centralizer,
    fingerprint,
    generalized_fitting,
    subgroups_up_to_conjugacy,
)
from xgroup.tower import (
    TowerSpec,
    build_tower,
    negative_control_levels,
    verify_tower,
)

POSITIVE_TABLE = {
    "c12": "1.1",
    "elab_25": "1.2",
    "extraspecial_27_exp_p": "1.3",
    "extraspecial_27_exp_p2": "1.3",
    "dihedral_16": "1.4",
    "semidihedral_16": "1.4",
    "quaternion_16": "1.4",
    "metacyclic_7_3_2": "2.1.1",
    "quat_metacyclic_5_8": "2.1.2",
    "metacyclic_5_4_4": "2.1.3",
    "extraspecial_frobenius_7_3_1": "2.2",
    "sym_4": "3.1.1",
    "alt_4": "3.1.1",
    "affine_3_cyclic_8": "3.1.2.1",
    "affine_3_quaternion_8": "3.1.2.2",
    "affine_13_case212_3_8": "3.1.2.3",
    "affine_7_case213_3_4": "3.1.2.4",
    "affine_5_sl2_3": "3.1.2.5",
    "affine_7_sl2_3_dot2": "3.1.2.6",
    "affine_11_sl2_5": "3.1.2.7",
    "sl2_3": "3.2.1",
    "sl2_3_dot2": "3.2.1",
    "heisenberg_ext_5_3": "3.2.2",
    "sl2_5": "4.1",
    "sl2_5_dot2": "4.1",
    "sl2_4": "4.2",
    "psl2_5": "4.2",
    "alt_5": "4.2",
    "psl2_7": "4.2",
    "psl2_9": "4.2",
    "mathieu_10": "4.2",
    "psl2_17": "4.2",
}

NEGATIVE_TABLE = ("neg_sym_5", "neg_pgl2_9", "neg_dihedral_12", "neg_elab_27",
                  "neg_sl2_7", "neg_psl2_11", "neg_metacyclic_15_4_2",
                  "neg_sym_6")


@pytest.fixture(scope="session")
def corpus_built():
    return dict(corpus_mod.build_entries(corpus_mod.standard_suite()))


def _report(criterion: str, ok: bool, detail: str = "") -> None:
    state = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {criterion}: {state}{' - ' + detail if detail else ''}")


def _cap_for(record) -> int:
    return record.parameters.get("brute_cap_override",
                                 xcheck.BRUTE_CAP_DEFAULT)


def test_criterion_1_positive_classification_table(corpus_built):
    failures = []
    for name, expected in POSITIVE_TABLE.items():
        record = corpus_built[name]
        case = classify(record.group, brute_cap=_cap_for(record))
        if case.label != expected:
            failures.append(f"{name}: {case.label} != {expected}")
            continue
        if record.group.order <= _cap_for(record):
            verdict = xcheck.is_x_bruteforce(record.group, cap=_cap_for(record))
            if not verdict.is_x:
                failures.append(f"{name}: brute says NotX")
    _report("1 (positive table)", not failures, "; ".join(failures))
    assert not failures


def test_criterion_2_negative_table(corpus_built):
    failures = []
    for name in NEGATIVE_TABLE:
        record = corpus_built[name]
        g = record.group
        case = classify(g)
        verdict = xcheck.is_x_bruteforce(g)
        if case.label != "NotX" or verdict.result != "NotX":
            failures.append(f"{name}: label={case.label} brute={verdict.result}")
            continue
        if not xcheck.verify_witness(g, verdict.witness):
            failures.append(f"{name}: invalid witness")
    # pinned witness fingerprints
    s5 = corpus_built["neg_sym_5"].group
    w5 = xcheck.is_x_bruteforce(s5).witness
    if w5.certificate_fingerprint(s5) != fingerprint(cons.dihedral_group(12)):
        failures.append("sym5 witness certificate is not 2 x Sym(3)")
    pgl = corpus_built["neg_pgl2_9"].group
    wp = xcheck.is_x_bruteforce(pgl).witness
    if wp.certificate_fingerprint(pgl) != fingerprint(cons.dihedral_group(20)):
        failures.append("pgl2(9) witness certificate is not Dih(20)")
    d12 = corpus_built["neg_dihedral_12"].group
    wd = xcheck.is_x_bruteforce(d12).witness
    if wd.subgroup_fingerprint(d12) != fingerprint(cons.sym_alt(3, False).group):
        failures.append("dih12 witness subgroup is not Sym(3)")
    _report("2 (negative table)", not failures, "; ".join(failures))
    assert not failures


def test_criterion_3_oracle_agreement(corpus_built):
    built = list(corpus_built.items())
    within_cap = [(n, r) for n, r in built if r.group.order <= _cap_for(r)]
    assert len(within_cap) >= 60, f"only {len(within_cap)} groups within cap"
    bad = corpus_mod.oracle_agreement_failures(
        built, xcheck.BRUTE_CAP_DEFAULT)
    _report("3 (oracle agreement)", not bad,
            f"{len(within_cap)} groups, disagreements: {bad}")
    assert not bad


def test_criterion_4_pair_reduction(corpus_built):
    built = list(corpus_built.items())
    small = [n for n, r in built if r.group.order <= 100]
    bad = corpus_mod.pair_reduction_failures(built, order_limit=100)
    _report("4 (pair reduction)", not bad,
            f"{len(small)} groups of order <= 100, failures: {bad}")
    assert not bad


def test_criterion_5_subgroup_closedness(corpus_built):
    built = list(corpus_built.items())
    bad = corpus_mod.subgroup_closedness_failures(built, order_limit=720)
    _report("5 (subgroup closedness)", not bad, f"violations: {bad}")
    assert not bad


def test_criterion_6_frobenius_composition(corpus_built):
    built = list(corpus_built.items())
    bad = corpus_mod.frobenius_composition_failures(
        built, xcheck.BRUTE_CAP_DEFAULT)
    _report("6 (Frobenius composition)", not bad, f"failures: {bad}")
    assert not bad


def test_criterion_7_fstar_property(corpus_built):
    built = list(corpus_built.items())
    bad = corpus_mod.fstar_self_centralizing_failures(built)
    _report("7 (F* contains its centralizer)", not bad, f"failures: {bad}")
    assert not bad


def test_criterion_8_towers():
    expectations = [
        (TowerSpec("prufer", 4, p=3), "1.1"),
        (TowerSpec("prufer2_ext", 4, y_order=2), "1.4"),
        (TowerSpec("prufer2_ext", 4, y_order=4), "1.4"),
        (TowerSpec("prufer_metacyclic", 3, p=5, d=4), "2.1.1"),
        (TowerSpec("prufer_metacyclic", 3, p=7, d=3), "2.1.1"),
    ]
    failures = []
    for spec, label in expectations:
        levels = build_tower(spec)
        rep = verify_tower(levels, spec)
        if not (rep.all_is_x and rep.labels_constant and rep.embeddings_ok
                and rep.stabilization_ok):
            failures.append(spec.describe())
        if any(row["theorem_case"] != label for row in rep.levels):
            failures.append(f"{spec.describe()}: wrong label")
    neg = negative_control_levels(2)
    if xcheck.is_x_bruteforce(neg[0]).result != "NotX":
        failures.append("negative control level 1 not flagged")
    _report("8 (towers)", not failures, "; ".join(failures))
    assert not failures


def test_criterion_9_determinism(tmp_path):
    from xgroup.cli import main
    d1, d2 = tmp_path / "run1", tmp_path / "run2"
    rc1 = main(["--workers", "8", "corpus", "--suite", "standard",
                "--out", str(d1)])
    rc2 = main(["--workers", "8", "corpus", "--suite", "standard",
                "--out", str(d2)])
    s1 = (d1 / "summary.tsv").read_bytes()
    s2 = (d2 / "summary.tsv").read_bytes()
    ok = s1 == s2 and rc1 == rc2 == 0
    _report("9 (determinism)", ok,
            f"rc=({rc1},{rc2}) identical={s1 == s2}")
    assert s1 == s2
    assert rc1 == 0 and rc2 == 0


def test_criterion_10_subgroup_census(corpus_built):
    failures = []
    s3 = cons.sym_alt(3, False).group
    classes = subgroups_up_to_conjugacy(s3)
    if (len(classes), sum(c.class_size for c in classes)) != (4, 6):
        failures.append("Sym(3) census")
    s4 = corpus_built["sym_4"].group
    classes = subgroups_up_to_conjugacy(s4)
    if (len(classes), sum(c.class_size for c in classes)) != (11, 30):
        failures.append("Sym(4) census")
    q8 = corpus_built["quaternion_8"].group
    classes = subgroups_up_to_conjugacy(q8)
    if len(classes) != 6 or any(c.class_size != 1 for c in classes):
        failures.append("Q8 census")
    _report("10 (subgroup census)", not failures, "; ".join(failures))
    assert not failures
