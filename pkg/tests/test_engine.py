import numpy as np
import pytest

from xgroup.engine import (
    ENUM_CAP_DEFAULT,
    Group,
    SubgroupSet,
    all_subgroups_bruteforce,
    as_group,
    center,
    centralizer,
    chief_factor_orders,
    class_representatives,
    closure,
    conjugacy_classes,
    derived_subgroup,
    fingerprint,
    fitting,
    generalized_fitting,
    normalizer,
    p_core,
    perfect_residual,
    quotient,
    structure_tests,
    subgroup_predicates,
    subgroups_up_to_conjugacy,
    sylow,
)
from xgroup.errors import CapExceeded, InvalidPermutation, NotNormal

from conftest import cyclic_group, sym_group


def test_sym4_from_generators(s4):
    assert s4.order == 24
    assert s4.representation_kind == "dense-table"
    s4.validate()


def test_empty_generating_set_gives_trivial_group():
    g = Group.from_generators(2, [])
    assert g.order == 1
    assert g.degree == 2


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        Group.from_generators(5, [[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]], cap=10)


def test_invalid_permutation_rejected():
    with pytest.raises(InvalidPermutation):
        Group.from_generators(3, [[0, 0, 1]])


def test_mul_and_inverse(s4):
    for i in range(s4.order):
        assert s4.mul(i, int(s4.inv[i])) == 0
        assert s4.mul(0, i) == i


def test_element_orders(s4, q8):
    assert s4.element_order(0) == 1
    # q8: 1 identity, 1 involution, 6 of order 4
    counts = {}
    for i in range(q8.order):
        counts[q8.element_order(i)] = counts.get(q8.element_order(i), 0) + 1
    assert counts == {1: 1, 2: 1, 4: 6}


def test_closure_examples(s4, q8):
    three_cycle = s4.index_of((1, 2, 0, 3))
    sub = closure(s4, [three_cycle])
    assert sub.order == 3

    assert closure(s4, []).order == 1

    i_elt = next(i for i in range(q8.order) if q8.element_order(i) == 4)
    j_elt = next(i for i in range(q8.order)
                 if q8.element_order(i) == 4
                 and i not in closure(q8, [i_elt]).members)
    assert closure(q8, [i_elt, j_elt]).order == 8


def test_closure_idempotent_monotone(s4):
    seed = [1, 2]
    c1 = closure(s4, seed)
    c2 = closure(s4, c1.members)
    assert c1.members == c2.members
    bigger = closure(s4, seed + [3])
    assert c1.members <= bigger.members


def test_centralizer_examples(s3, s4, q8):
    t = s3.index_of((1, 0, 2))
    assert centralizer(s3, t).order == 2

    i_elt = next(i for i in range(q8.order) if q8.element_order(i) == 4)
    assert centralizer(q8, i_elt).order == 4

    dt = s4.index_of((1, 0, 3, 2))
    assert centralizer(s4, dt).order == 8


def test_centralizer_of_set_equals_intersection_over_generators(s4):
    v4 = closure(s4, [s4.index_of((1, 0, 3, 2)), s4.index_of((2, 3, 0, 1))])
    cent = centralizer(s4, v4)
    inter = set(range(s4.order))
    for g in v4.generators:
        inter &= centralizer(s4, g).members
    assert cent.members == frozenset(inter)


def test_conjugacy_classes(s3, s4, q8):
    assert sorted(len(c) for c in conjugacy_classes(s3)) == [1, 2, 3]
    assert sorted(len(c) for c in conjugacy_classes(q8)) == [1, 1, 2, 2, 2]
    assert sorted(len(c) for c in conjugacy_classes(s4)) == [1, 3, 6, 6, 8]


def test_class_ordering_deterministic(s4):
    classes = conjugacy_classes(s4)
    keys = [(s4.element_order(c[0]), len(c), c[0]) for c in classes]
    assert keys == sorted(keys)


def test_subgroup_predicates(s4, s5):
    v4 = closure(s4, [s4.index_of((1, 0, 3, 2)), s4.index_of((2, 3, 0, 1))])
    preds = subgroup_predicates(s4, v4)
    assert preds == {"is_cyclic": False, "is_abelian": True,
                     "is_normal": True, "is_perfect": False}

    c4 = closure(s4, [s4.index_of((1, 2, 3, 0))])
    preds = subgroup_predicates(s4, c4)
    assert preds == {"is_cyclic": True, "is_abelian": True,
                     "is_normal": False, "is_perfect": False}

    evens = [i for i in range(s5.order)
             if _sign(s5.perms[i].tolist()) == 1]
    a5 = SubgroupSet(s5, evens)
    preds = subgroup_predicates(s5, a5)
    assert preds == {"is_cyclic": False, "is_abelian": False,
                     "is_normal": True, "is_perfect": True}


def _sign(images):
    seen = [False] * len(images)
    sign = 1
    for s in range(len(images)):
        if seen[s]:
            continue
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = images[x]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def test_derived_subgroup(s4, q8):
    assert derived_subgroup(
        s4, SubgroupSet(s4, range(24))).order == 12
    assert derived_subgroup(
        q8, SubgroupSet(q8, range(8))).members == center(q8).members
    c6 = cyclic_group(6)
    assert derived_subgroup(c6, SubgroupSet(c6, range(6))).order == 1


def test_quotient(s4, q8):
    z = center(q8)
    v4 = quotient(q8, z)
    assert v4.order == 4
    assert all(v4.element_order(i) <= 2 for i in range(4))

    v4_in_s4 = closure(s4, [s4.index_of((1, 0, 3, 2)),
                            s4.index_of((2, 3, 0, 1))])
    q = quotient(s4, v4_in_s4)
    assert q.order == 6
    assert fingerprint(q) == fingerprint(sym_group(3))

    c4 = closure(s4, [s4.index_of((1, 2, 3, 0))])
    with pytest.raises(NotNormal):
        quotient(s4, c4)


def test_quotient_order_formula(s4):
    a4 = derived_subgroup(s4, SubgroupSet(s4, range(24)))
    q = quotient(s4, a4)
    assert q.order * a4.order == s4.order


def test_sylow(s4):
    syl3 = sylow(s4, 3)
    assert syl3.order == 3
    syl2 = sylow(s4, 2)
    assert syl2.order == 8
    from xgroup.constructors import two_group
    d8 = two_group("dihedral", 8).group
    assert fingerprint(as_group(s4, syl2)) == fingerprint(d8)

    c12 = cyclic_group(12)
    assert sylow(c12, 2).order == 4
    assert sylow(c12, 5).order == 1


def test_p_core(s4, q8):
    assert p_core(s4, 2).order == 4
    assert p_core(s4, 3).order == 1
    assert p_core(q8, 2).order == 8


def test_fitting(s4, s5, q8):
    assert fitting(s4).order == 4
    assert fitting(s5).order == 1
    assert fitting(q8).order == 8


def test_generalized_fitting(s4, s5):
    gf = generalized_fitting(s5)
    assert gf["fitting"].order == 1
    assert len(gf["components"]) == 1
    assert gf["components"][0].order == 60
    assert gf["fstar"].order == 60

    gf4 = generalized_fitting(s4)
    assert gf4["fitting"].order == 4
    assert gf4["components"] == []
    assert gf4["fstar"].order == 4


def test_fstar_contains_centralizer(s4, s5, q8):
    for g in (s4, s5, q8):
        gf = generalized_fitting(g)
        cent = centralizer(g, gf["fstar"])
        assert cent.members <= gf["fstar"].members


def test_structure_tests(s4):
    c6 = cyclic_group(6)
    assert structure_tests(c6) == {
        "is_nilpotent": True, "is_supersoluble": True,
        "is_simple": False, "is_quasisimple": False}
    assert structure_tests(s4) == {
        "is_nilpotent": False, "is_supersoluble": False,
        "is_simple": False, "is_quasisimple": False}


def test_structure_tests_sl25():
    from xgroup.constructors import matrix_group
    sl25 = matrix_group("SL2", 5).group
    st = structure_tests(sl25)
    assert st == {"is_nilpotent": False, "is_supersoluble": False,
                  "is_simple": False, "is_quasisimple": True}


def test_subgroup_census_spot_checks(s3, s4, q8):
    classes3 = subgroups_up_to_conjugacy(s3)
    assert len(classes3) == 4
    assert sum(c.class_size for c in classes3) == 6

    classes4 = subgroups_up_to_conjugacy(s4)
    assert len(classes4) == 11
    assert sum(c.class_size for c in classes4) == 30

    classes8 = subgroups_up_to_conjugacy(q8)
    assert len(classes8) == 6
    assert all(c.class_size == 1 for c in classes8)


def test_census_against_bruteforce_small():
    for builder, arg in [(sym_group, 3), (sym_group, 4), (cyclic_group, 36)]:
        g = builder(arg)
        enumerated = subgroups_up_to_conjugacy(g)
        brute = all_subgroups_bruteforce(g)
        assert sum(c.class_size for c in enumerated) == len(brute)


def test_census_cap():
    c = cyclic_group(12)
    with pytest.raises(CapExceeded):
        subgroups_up_to_conjugacy(c, cap=6)


def test_lagrange_for_enumerated_subgroups(s4):
    for sc in subgroups_up_to_conjugacy(s4):
        assert s4.order % sc.representative.order == 0


def test_fingerprint_examples():
    from xgroup.constructors import matrix_group, sym_alt, basic_abelian
    sl23 = matrix_group("SL2", 3).group
    fp = fingerprint(sl23)
    assert fp.order == 24
    assert fp.center_order == 2
    assert fp.derived_order == 8
    assert fp.element_order_multiset == ((1, 1), (2, 1), (3, 8), (4, 6), (6, 8))

    a5 = sym_alt(5, True).group
    sl24 = matrix_group("SL2", 4).group
    psl25 = matrix_group("PSL2", 5).group
    assert fingerprint(a5) == fingerprint(sl24) == fingerprint(psl25)

    c4 = basic_abelian([4]).group
    v4 = basic_abelian([2, 2]).group
    assert fingerprint(c4) != fingerprint(v4)
    assert fingerprint(c4).element_order_multiset == ((1, 1), (2, 1), (4, 2))
    assert fingerprint(v4).element_order_multiset == ((1, 1), (2, 3))


def test_fingerprint_relabeling_invariance():
    rng = np.random.default_rng(7)
    fixtures = [sym_group(3), sym_group(4), cyclic_group(12)]
    from xgroup.constructors import two_group
    fixtures.append(two_group("quaternion", 8).group)
    fixtures.append(two_group("dihedral", 16).group)
    for g in fixtures:
        fp = fingerprint(g)
        relabel = np.concatenate(
            [[0], 1 + rng.permutation(g.order - 1)]).astype(np.int64)
        inverse = np.argsort(relabel)
        table = np.empty((g.order, g.order), dtype=np.int64)
        for i in range(g.order):
            for j in range(g.order):
                table[i, j] = inverse[g.mul(int(relabel[i]), int(relabel[j]))]
        h = Group.from_table(table.tolist())
        assert fingerprint(h) == fp


def test_regular_representation_of_sl25_closes_to_120():
    from xgroup.constructors import matrix_group
    sl25 = matrix_group("SL2", 5).group
    assert sl25.order == 120
    lam = []
    for g in sl25.generator_indices:
        lam.append([sl25.mul(g, x) for x in range(120)])
    reg = Group.from_generators(120, lam)
    assert reg.order == 120


def test_normalizer(s4):
    c4 = closure(s4, [s4.index_of((1, 2, 3, 0))])
    n = normalizer(s4, c4)
    assert n.order == 8


def test_chief_factors_s4(s4):
    assert chief_factor_orders(s4) == [4, 3, 2]


def test_perfect_residual(s5):
    r = perfect_residual(s5)
    assert r.order == 60


def test_word_roundtrip(s5):
    for x in [0, 1, 17, 100]:
        w = s5.word_for(x)
        assert s5.evaluate_word(w) == x
