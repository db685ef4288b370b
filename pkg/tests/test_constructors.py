import pytest

from xgroup.constructors import (
    NOT_X,
    affine_frobenius,
    basic_abelian,
    dihedral_group,
    extraspecial,
    extraspecial_frobenius,
    heisenberg_extension,
    m10,
    matrix_group,
    metacyclic,
    pgl2,
    quaternion_metacyclic,
    sl2p_dot2,
    sym_alt,
    two_group,
)
from xgroup.engine import (
    SubgroupSet,
    as_group,
    center,
    centralizer,
    closure,
    derived_subgroup,
    fingerprint,
    quotient,
    subgroups_up_to_conjugacy,
    sylow,
)
from xgroup.errors import (
    CapExceeded,
    ConstraintViolation,
    InvalidParameter,
)
from xgroup.xcheck import frobenius_structure


def order_census(group):
    counts = {}
    for i in range(group.order):
        o = group.element_order(i)
        counts[o] = counts.get(o, 0) + 1
    return counts


def test_basic_abelian():
    rec = basic_abelian([12])
    assert rec.group.order == 12 and rec.intended_case == "1.1"
    rec = basic_abelian([3, 3])
    assert rec.group.order == 9 and rec.intended_case == "1.2"
    rec = basic_abelian([3, 3, 3])
    assert rec.group.order == 27 and rec.intended_case == NOT_X
    rec = basic_abelian([2, 4])
    assert rec.intended_case == NOT_X
    rec = basic_abelian([3, 4])
    assert rec.intended_case == "1.1"
    with pytest.raises(InvalidParameter):
        basic_abelian([1])


def test_two_group_census():
    q8 = two_group("quaternion", 8)
    assert order_census(q8.group) == {1: 1, 2: 1, 4: 6}

    sd16 = two_group("semidihedral", 16).group
    census = order_census(sd16)
    assert census[8] == 4
    maximal = [sc.representative for sc in subgroups_up_to_conjugacy(sd16)
               if sc.representative.order == 8]
    cyclic_max = [H for H in maximal
                  if max(sd16.element_order(x) for x in H.sorted_members) == 8]
    assert len(cyclic_max) == 1

    d16 = two_group("dihedral", 16).group
    assert center(d16).order == 2

    assert two_group("dihedral", 4).group.order == 4
    with pytest.raises(InvalidParameter):
        two_group("semidihedral", 8)
    with pytest.raises(InvalidParameter):
        two_group("quaternion", 4)
    with pytest.raises(InvalidParameter):
        two_group("dihedral", 24)


def test_extraspecial():
    rec = extraspecial(3, "p")
    g = rec.group
    assert g.order == 27
    assert max(g.element_order(i) for i in range(27)) == 3
    assert center(g).order == 3

    rec = extraspecial(3, "p_squared")
    assert order_census(rec.group) == {1: 1, 3: 8, 9: 18}

    rec = extraspecial(5, "p")
    g = rec.group
    assert g.order == 125
    assert all(g.element_order(i) == 5 for i in range(1, 125))

    with pytest.raises(InvalidParameter):
        extraspecial(2, "p")


def test_sym_alt():
    assert sym_alt(4, False).group.order == 24
    assert sym_alt(5, True).group.order == 60
    rec = sym_alt(5, False)
    assert rec.group.order == 120 and rec.intended_case == NOT_X
    assert sym_alt(7, False).group.order == 5040
    assert sym_alt(7, True).group.order == 2520
    with pytest.raises(InvalidParameter):
        sym_alt(8, False)


def test_matrix_group_orders():
    for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 17):
        rec = matrix_group("SL2", q)
        assert rec.group.order == q * (q * q - 1)
    for q in (2, 3, 4, 5, 7, 9, 11, 13, 17):
        rec = matrix_group("PSL2", q)
        expected = q * (q * q - 1) // (2 if q % 2 else 1)
        assert rec.group.order == expected
    assert matrix_group("GL2", 3).group.order == 48
    with pytest.raises(CapExceeded):
        matrix_group("GL2", 13)
    with pytest.raises(InvalidParameter):
        matrix_group("SL2", 6)


def test_sl2_5_structure():
    rec = matrix_group("SL2", 5)
    from xgroup.engine import structure_tests
    st = structure_tests(rec.group)
    assert st["is_quasisimple"] and not st["is_simple"]
    assert center(rec.group).order == 2


def test_psl2_7_simple():
    from xgroup.engine import is_simple_group
    assert is_simple_group(matrix_group("PSL2", 7).group)


def test_psl2_9_matches_alt6():
    psl = matrix_group("PSL2", 9).group
    a6 = sym_alt(6, True).group
    assert fingerprint(psl) == fingerprint(a6)


def test_pgl2_9():
    rec = pgl2(9)
    assert rec.group.order == 720
    orders = {rec.group.element_order(i) for i in range(720)}
    assert 10 in orders and 8 in orders


def test_sl2p_dot2():
    rec = sl2p_dot2(3)
    g = rec.group
    assert g.order == 48
    syl = sylow(g, 2)
    assert syl.order == 16
    assert fingerprint(as_group(g, syl)) == \
        fingerprint(two_group("quaternion", 16).group)
    inner = closure(g, [g.generator_indices[0], g.generator_indices[1]])
    outer_orders = {g.element_order(i) for i in range(48)
                    if i not in inner.members}
    assert outer_orders <= {4, 8}
    assert 2 not in outer_orders

    rec5 = sl2p_dot2(5)
    assert rec5.group.order == 240
    from xgroup.engine import generalized_fitting
    gf = generalized_fitting(rec5.group)
    assert fingerprint(as_group(rec5.group, gf["fstar"])) == \
        fingerprint(matrix_group("SL2", 5).group)

    with pytest.raises(InvalidParameter):
        sl2p_dot2(7)


def test_m10():
    rec = m10()
    g = rec.group
    assert g.order == 720
    assert {g.element_order(i) for i in range(720)} == {1, 2, 3, 4, 5, 8}
    d = derived_subgroup(g, SubgroupSet(g, range(720)))
    assert d.order == 360
    assert fingerprint(as_group(g, d)) == \
        fingerprint(matrix_group("PSL2", 9).group)


def test_m10_overgroup_order_sets_distinct():
    # the three index-2 subgroups over PSL2(9) are told apart by order sets
    from xgroup.gf import GF
    from xgroup.constructors import _sl2_generator_mats, _projective_perm
    from xgroup.engine import Group
    F = GF(9)
    sl_mats = _sl2_generator_mats(F)
    psl_gens = [_projective_perm(F, M) for M in sl_mats]
    delta = _projective_perm(F, (F.generator(), 0, 0, 1))
    frob = [F.frobenius(x) for x in range(9)] + [9]
    pgamma = Group.from_generators(10, psl_gens + [delta, frob])
    psl = closure(pgamma, [pgamma.index_of(tuple(p)) for p in psl_gens])
    reps = []
    for x in range(pgamma.order):
        if x in psl.members:
            continue
        if all(pgamma.mul(int(pgamma.inv[r]), x) not in psl.members
               for r in reps):
            reps.append(x)
    order_sets = []
    for r in reps:
        members = set(psl.members)
        members.update(pgamma.mul(r, m) for m in psl.members)
        order_sets.append(frozenset(pgamma.element_order(i) for i in members))
    assert len(set(order_sets)) == 3
    assert sum(1 for s in order_sets if s == frozenset({1, 2, 3, 4, 5, 8})) == 1


def test_metacyclic():
    rec = metacyclic(7, 3, 2)
    assert rec.group.order == 21 and rec.intended_case == "2.1.1"
    fs = frobenius_structure(rec.group)
    assert fs["kernel"].order == 7 and fs["complement"].order == 3

    rec = metacyclic(5, 4, 4)
    assert rec.group.order == 20 and rec.intended_case == "2.1.3"
    assert center(rec.group).order == 2
    z = center(rec.group)
    q = quotient(rec.group, z)
    assert fingerprint(q) == fingerprint(dihedral_group(10))

    rec = metacyclic(15, 4, 2)
    assert rec.group.order == 60 and rec.intended_case == NOT_X
    assert center(rec.group).order == 1

    with pytest.raises(InvalidParameter):
        metacyclic(9, 2, 3)  # gcd(u, m) != 1
    with pytest.raises(InvalidParameter):
        metacyclic(7, 2, 2)  # u^n != 1


def test_quaternion_metacyclic():
    rec = quaternion_metacyclic(5, 8)
    g = rec.group
    assert g.order == 40 and rec.intended_case == "2.1.2"
    c = closure(g, [g.generator_indices[0]])
    assert centralizer(g, c).order == 20
    d0 = closure(g, [g.generator_indices[1]])
    assert fingerprint(quotient(g, d0)) == fingerprint(dihedral_group(10))

    assert quaternion_metacyclic(3, 8).group.order == 24
    assert quaternion_metacyclic(9, 16).group.order == 144
    with pytest.raises(InvalidParameter):
        quaternion_metacyclic(4, 8)


def test_affine_frobenius_positive():
    rec = affine_frobenius(3, ("cyclic", 8))
    assert rec.group.order == 72 and rec.intended_case == "3.1.2.1"
    fs = frobenius_structure(rec.group)
    assert fs["kernel"].order == 9 and fs["complement"].order == 8

    rec = affine_frobenius(3, ("quaternion", 8))
    assert rec.group.order == 72 and rec.intended_case == "3.1.2.2"
    fs = frobenius_structure(rec.group)
    assert fs["kernel"].order == 9 and fs["complement"].order == 8

    assert affine_frobenius(13, ("case_2_1_2", 3, 8)).group.order == 4056
    assert affine_frobenius(7, ("case_2_1_3", 3, 4)).group.order == 588
    assert affine_frobenius(5, ("sl2_3",)).group.order == 600
    assert affine_frobenius(7, ("sl2_3_dot2",)).group.order == 2352


def test_affine_frobenius_constraints():
    with pytest.raises(ConstraintViolation) as err:
        affine_frobenius(11, ("sl2_3_dot2",))
    assert "±1 (mod 8)" in err.value.condition

    with pytest.raises(ConstraintViolation):
        affine_frobenius(3, ("cyclic", 2))  # 2 divides p-1
    with pytest.raises(ConstraintViolation):
        affine_frobenius(3, ("cyclic", 5))  # 5 does not divide p^2-1
    with pytest.raises(ConstraintViolation):
        affine_frobenius(7, ("sl2_5",))  # 60 does not divide 48


def test_affine_sl2_5():
    rec = affine_frobenius(11, ("sl2_5",))
    assert rec.group.order == 14520
    assert rec.intended_case == "3.1.2.7"
    assert rec.group.representation_kind == "permutation-hashed"


def test_extraspecial_frobenius():
    rec = extraspecial_frobenius(7, 3, 1)
    assert rec.group.order == 1029 and rec.intended_case == "2.2"
    fs = frobenius_structure(rec.group)
    assert fs["kernel"].order == 343 and fs["complement"].order == 3

    with pytest.raises(ConstraintViolation):
        extraspecial_frobenius(7, 3, 3)
    with pytest.raises(InvalidParameter):
        extraspecial_frobenius(7, 2, 1)  # d even


def test_heisenberg_extension():
    rec = heisenberg_extension(5, 3)
    g = rec.group
    assert g.order == 375 and rec.intended_case == "3.2.2"
    assert rec.parameters["matrix"] == [0, 4, 1, 4]
    # acting group centralizes the center of the kernel
    n = closure(g, [g.generator_indices[0], g.generator_indices[1]])
    assert n.order == 125
    zn = center(as_group(g, n))
    assert zn.order == 5
    # quotient by Z(N) is Frobenius
    zn_parent = SubgroupSet(
        g, [n.sorted_members[i] for i in zn.sorted_members])
    assert frobenius_structure(quotient(g, zn_parent)) is not None

    with pytest.raises(ConstraintViolation):
        heisenberg_extension(3, 3)  # p+1 = 4 has no odd divisor > 1
    with pytest.raises(ConstraintViolation):
        heisenberg_extension(5, 2)


def test_frobenius_postcondition_equivalence():
    # engine-level Frobenius detection agrees with the arithmetic
    # fixed-point-free construction checks
    for rec in (metacyclic(7, 3, 2), affine_frobenius(3, ("cyclic", 8)),
                extraspecial_frobenius(7, 3, 1)):
        fs = frobenius_structure(rec.group)
        assert fs is not None
        k, c = fs["kernel"], fs["complement"]
        assert k.order * c.order == rec.group.order
        import math
        assert math.gcd(k.order, c.order) == 1


def test_construction_postconditions_rerun():
    # order formulas from the construction records
    assert affine_frobenius(3, ("cyclic", 8)).group.order == 9 * 8
    assert heisenberg_extension(5, 3).group.order == 125 * 3
    assert extraspecial_frobenius(7, 3, 1).group.order == 343 * 3
    assert matrix_group("SL2", 7).group.order == 7 * 48
