"""Named corpus suites and the property checks run over them.

The standard suite covers every constructor family plus fillers; the negative
suite holds the deliberate counterexamples. Suite entries are (name, builder)
pairs; builders return ConstructionRecords lazily so the CLI can fail fast on
unresolvable entries without building everything up front.
"""

from __future__ import annotations

import math
from typing import Callable

from . import constructors as cons
from . import xcheck
from .engine import (
    Group,
    SubgroupSet,
    as_group,
    centralizer,
    generalized_fitting,
    subgroups_up_to_conjugacy,
)
from .errors import CapExceeded

SuiteEntry = tuple[str, Callable[[], cons.ConstructionRecord]]


def _entry(name: str, fn: Callable[[], cons.ConstructionRecord],
           **extra) -> SuiteEntry:
    if extra:
        def build():
            rec = fn()
            rec.parameters.update(extra)
            return rec
        return (name, build)
    return (name, fn)


def standard_suite() -> list[SuiteEntry]:
    e = []
    # positive classification table
    e.append(_entry("c12", lambda: cons.basic_abelian([12])))
    e.append(_entry("elab_25", lambda: cons.basic_abelian([5, 5])))
    e.append(_entry("extraspecial_27_exp_p", lambda: cons.extraspecial(3, "p")))
    e.append(_entry("extraspecial_27_exp_p2",
                    lambda: cons.extraspecial(3, "p_squared")))
    e.append(_entry("dihedral_16", lambda: cons.two_group("dihedral", 16)))
    e.append(_entry("semidihedral_16",
                    lambda: cons.two_group("semidihedral", 16)))
    e.append(_entry("quaternion_16", lambda: cons.two_group("quaternion", 16)))
    e.append(_entry("metacyclic_7_3_2", lambda: cons.metacyclic(7, 3, 2)))
    e.append(_entry("quat_metacyclic_5_8",
                    lambda: cons.quaternion_metacyclic(5, 8)))
    e.append(_entry("metacyclic_5_4_4", lambda: cons.metacyclic(5, 4, 4)))
    e.append(_entry("extraspecial_frobenius_7_3_1",
                    lambda: cons.extraspecial_frobenius(7, 3, 1)))
    e.append(_entry("sym_4", lambda: cons.sym_alt(4, False)))
    e.append(_entry("alt_4", lambda: cons.sym_alt(4, True)))
    e.append(_entry("affine_3_cyclic_8",
                    lambda: cons.affine_frobenius(3, ("cyclic", 8))))
    e.append(_entry("affine_3_quaternion_8",
                    lambda: cons.affine_frobenius(3, ("quaternion", 8))))
    e.append(_entry("affine_13_case212_3_8",
                    lambda: cons.affine_frobenius(13, ("case_2_1_2", 3, 8)),
                    brute_cap_override=4200))
    e.append(_entry("affine_7_case213_3_4",
                    lambda: cons.affine_frobenius(7, ("case_2_1_3", 3, 4))))
    e.append(_entry("affine_5_sl2_3",
                    lambda: cons.affine_frobenius(5, ("sl2_3",))))
    e.append(_entry("affine_7_sl2_3_dot2",
                    lambda: cons.affine_frobenius(7, ("sl2_3_dot2",))))
    e.append(_entry("affine_11_sl2_5",
                    lambda: cons.affine_frobenius(11, ("sl2_5",))))
    e.append(_entry("sl2_3", lambda: cons.matrix_group("SL2", 3)))
    e.append(_entry("sl2_3_dot2", lambda: cons.sl2p_dot2(3)))
    e.append(_entry("heisenberg_ext_5_3",
                    lambda: cons.heisenberg_extension(5, 3)))
    e.append(_entry("sl2_5", lambda: cons.matrix_group("SL2", 5)))
    e.append(_entry("sl2_5_dot2", lambda: cons.sl2p_dot2(5)))
    e.append(_entry("sl2_4", lambda: cons.matrix_group("SL2", 4)))
    e.append(_entry("psl2_5", lambda: cons.matrix_group("PSL2", 5)))
    e.append(_entry("alt_5", lambda: cons.sym_alt(5, True)))
    e.append(_entry("psl2_7", lambda: cons.matrix_group("PSL2", 7)))
    e.append(_entry("psl2_9", lambda: cons.matrix_group("PSL2", 9)))
    e.append(_entry("mathieu_10", lambda: cons.m10()))
    e.append(_entry("psl2_17", lambda: cons.matrix_group("PSL2", 17)))
    # negatives (also present in the dedicated negative suite)
    e.extend(negative_suite())
    # fillers: cyclic, elementary abelian, 2-groups, metacyclic variants
    e.append(_entry("cyclic_1", lambda: cons.basic_abelian([])))
    for n in (2, 3, 6, 30, 96):
        e.append(_entry(f"cyclic_{n}", lambda n=n: cons.basic_abelian([n])))
    for p in (2, 3, 7):
        e.append(_entry(f"elab_{p}sq", lambda p=p: cons.basic_abelian([p, p])))
    e.append(_entry("dihedral_8", lambda: cons.two_group("dihedral", 8)))
    e.append(_entry("dihedral_32", lambda: cons.two_group("dihedral", 32)))
    e.append(_entry("dihedral_64", lambda: cons.two_group("dihedral", 64)))
    e.append(_entry("semidihedral_32",
                    lambda: cons.two_group("semidihedral", 32)))
    e.append(_entry("quaternion_8", lambda: cons.two_group("quaternion", 8)))
    e.append(_entry("quaternion_32", lambda: cons.two_group("quaternion", 32)))
    e.append(_entry("extraspecial_125_exp_p",
                    lambda: cons.extraspecial(5, "p")))
    e.append(_entry("extraspecial_125_exp_p2",
                    lambda: cons.extraspecial(5, "p_squared")))
    e.append(_entry("metacyclic_7_3_4", lambda: cons.metacyclic(7, 3, 4)))
    e.append(_entry("metacyclic_5_2_4", lambda: cons.metacyclic(5, 2, 4)))
    e.append(_entry("metacyclic_9_3_4", lambda: cons.metacyclic(9, 3, 4)))
    e.append(_entry("quat_metacyclic_3_8",
                    lambda: cons.quaternion_metacyclic(3, 8)))
    e.append(_entry("quat_metacyclic_9_16",
                    lambda: cons.quaternion_metacyclic(9, 16)))
    e.append(_entry("affine_3_cyclic_4",
                    lambda: cons.affine_frobenius(3, ("cyclic", 4))))
    e.append(_entry("affine_5_cyclic_8",
                    lambda: cons.affine_frobenius(5, ("cyclic", 8))))
    e.append(_entry("affine_5_quaternion_8",
                    lambda: cons.affine_frobenius(5, ("quaternion", 8))))
    e.append(_entry("affine_7_cyclic_16",
                    lambda: cons.affine_frobenius(7, ("cyclic", 16))))
    return e


def negative_suite() -> list[SuiteEntry]:
    return [
        _entry("neg_sym_5", lambda: cons.sym_alt(5, False)),
        _entry("neg_pgl2_9", lambda: cons.pgl2(9)),
        _entry("neg_dihedral_12", lambda: _dihedral12_record()),
        _entry("neg_elab_27", lambda: cons.basic_abelian([3, 3, 3])),
        _entry("neg_sl2_7", lambda: cons.matrix_group("SL2", 7)),
        _entry("neg_psl2_11", lambda: cons.matrix_group("PSL2", 11)),
        _entry("neg_metacyclic_15_4_2", lambda: cons.metacyclic(15, 4, 2)),
        _entry("neg_sym_6", lambda: cons.sym_alt(6, False)),
    ]


def _dihedral12_record() -> cons.ConstructionRecord:
    rec = cons.metacyclic(6, 2, 5)
    rec.family = "dihedral"
    rec.parameters = {"order": 12}
    return rec


SUITES = {"standard": standard_suite, "negative": negative_suite}


def resolve_suite(name: str) -> list[SuiteEntry]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return SUITES[name]()


_RECORD_MEMO: dict[str, cons.ConstructionRecord] = {}


def build_entries(entries: list[SuiteEntry]) -> list[tuple[str, cons.ConstructionRecord]]:
    """Build (or reuse) the records for the given entries. Constructions are
    deterministic, so records are memoized per entry name for the process."""
    out = []
    for name, build in entries:
        if name not in _RECORD_MEMO:
            _RECORD_MEMO[name] = build()
        out.append((name, _RECORD_MEMO[name]))
    return out


# ---------------------------------------------------------------------------
# property checks shared between the corpus command and the acceptance tests


def oracle_agreement_failures(built, brute_cap: int) -> list[str]:
    bad = []
    for name, rec in built:
        cap = rec.parameters.get("brute_cap_override", brute_cap)
        if rec.group.order > cap:
            continue
        vb = xcheck.is_x_bruteforce(rec.group, cap=cap)
        vr = xcheck.is_x_recursive(rec.group, cap=cap)
        if vb.result != vr.result:
            bad.append(name)
    return bad


def fstar_self_centralizing_failures(built) -> list[str]:
    bad = []
    for name, rec in built:
        gf = generalized_fitting(rec.group)
        fstar = gf["fstar"]
        if fstar.order == rec.group.order:
            continue
        cent = centralizer(rec.group, fstar)
        if not cent.members <= fstar.members:
            bad.append(name)
    return bad


def frobenius_composition_failures(built, brute_cap: int) -> list[str]:
    """Constructed Frobenius groups whose kernel and complement pass the
    membership check must pass it themselves."""
    bad = []
    for name, rec in built:
        g = rec.group
        cap = rec.parameters.get("brute_cap_override", brute_cap)
        if g.order > cap:
            continue
        fs = xcheck.frobenius_structure(g)
        if fs is None:
            continue
        kernel_ok = xcheck.is_x_members(g, fs["kernel"].members)
        complement_ok = xcheck.is_x_members(g, fs["complement"].members)
        if not (kernel_ok and complement_ok):
            continue
        if not xcheck.is_x_bruteforce(g, cap=cap).is_x:
            bad.append(name)
    return bad


def pair_reduction_failures(built, order_limit: int = 100) -> list[str]:
    """For small corpus members, the pair criterion must agree with the
    exhaustive all-subgroups criterion."""
    bad = []
    for name, rec in built:
        g = rec.group
        if g.order > order_limit:
            continue
        pair_verdict = xcheck.is_x_bruteforce(g).is_x
        exhaustive = True
        for sc in subgroups_up_to_conjugacy(g):
            H = sc.representative
            if H.order == max(g.element_order(x) for x in H.sorted_members):
                continue  # cyclic
            cent = centralizer(g, H)
            if not cent.members <= H.members:
                exhaustive = False
                break
        if pair_verdict != exhaustive:
            bad.append(name)
    return bad


def subgroup_closedness_failures(built, order_limit: int = 720,
                                 enum_cap: int = 2048) -> list[str]:
    bad = []
    for name, rec in built:
        g = rec.group
        if g.order > order_limit:
            continue
        if not xcheck.is_x_bruteforce(g).is_x:
            continue
        try:
            audit = xcheck.subgroup_closure_audit(g, enum_cap=enum_cap)
        except CapExceeded:
            continue
        if audit["violations"]:
            bad.append(name)
    return bad
