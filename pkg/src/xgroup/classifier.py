"""Decision tree assigning a finite group its structure-case label.

Labels mirror the classification's numbering: nilpotent cases 1.1-1.4,
supersoluble non-nilpotent 2.1.1-2.2, generalized-Fitting-driven cases
3.1.1-3.2.2, and the almost-simple cases 4.1/4.2. Groups matching no case get
"NotX" with a machine-checkable witness when the order permits a brute scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .engine import (
    Group,
    SubgroupSet,
    as_group,
    center,
    centralizer,
    class_closures,
    derived_subgroup,
    fingerprint,
    generalized_fitting,
    is_simple_group,
    normal_closure,
    prime_factors,
    quotient,
    quotient_with_map,
    structure_tests,
    subgroup_predicates,
    sylow,
)
from .errors import CapExceeded, InvalidParameter, NotNormal, Unclassified
from .gf import GF, is_prime
from . import constructors as cons
from . import xcheck

CASE_LABELS = (
    "1.1", "1.2", "1.3", "1.4",
    "2.1.1", "2.1.2", "2.1.3", "2.2",
    "3.1.1",
    "3.1.2.1", "3.1.2.2", "3.1.2.3", "3.1.2.4", "3.1.2.5", "3.1.2.6", "3.1.2.7",
    "3.2.1", "3.2.2",
    "4.1", "4.2",
    "NotX",
)


@dataclass
class TheoremCase:
    label: str
    parameters: dict = field(default_factory=dict)
    evidence: list = field(default_factory=list)

    @property
    def is_x(self) -> bool:
        return self.label != "NotX"


_REF_CACHE: dict = {}


def _ref_print(name: str):
    if name in _REF_CACHE:
        return _REF_CACHE[name]
    if name == "SL2_3":
        g = cons.matrix_group("SL2", 3).group
    elif name == "SL2_5":
        g = cons.matrix_group("SL2", 5).group
    elif name == "SL2_3_dot2":
        g = cons.sl2p_dot2(3).group
    elif name == "sym4":
        g = cons.sym_alt(4, False).group
    elif name == "alt4":
        g = cons.sym_alt(4, True).group
    elif name == "m10":
        g = cons.m10().group
    elif name.startswith("dihedral_"):
        g = cons.dihedral_group(int(name.split("_")[1]))
    elif name.startswith("semidihedral_"):
        g = cons.two_group("semidihedral", int(name.split("_")[1])).group
    elif name.startswith("quaternion_"):
        g = cons.two_group("quaternion", int(name.split("_")[1])).group
    elif name.startswith("psl2_"):
        g = _psl2_reference(int(name.split("_")[1]))
    else:
        raise InvalidParameter(f"unknown reference {name}")
    fp = fingerprint(g)
    _REF_CACHE[name] = fp
    return fp


def _psl2_reference(q: int) -> Group:
    F = GF(q)
    gens = [cons._projective_perm(F, M) for M in cons._sl2_generator_mats(F)]
    return Group.from_generators(q + 1, gens)


def _is_fermat(p: int) -> bool:
    return p >= 3 and is_prime(p) and (p - 1) & (p - 2) == 0


def _is_mersenne(p: int) -> bool:
    return p >= 3 and is_prime(p) and (p + 1) & p == 0


def classify(parent: Group, brute_cap: int = xcheck.BRUTE_CAP_DEFAULT) -> TheoremCase:
    """Case label for the group, or NotX with witness, or Unclassified."""
    key = ("classify", brute_cap)
    if key in parent._cache:
        return parent._cache[key]
    case = _classify_uncached(parent, brute_cap)
    parent._cache[key] = case
    return case


def _classify_uncached(parent: Group, brute_cap: int) -> TheoremCase:
    st = structure_tests(parent)
    result = None
    if st["is_nilpotent"]:
        result = _classify_nilpotent(parent)
    elif st["is_supersoluble"]:
        result = _classify_supersoluble(parent)
    else:
        result = _classify_deep(parent, brute_cap)
    if result is not None:
        return result
    if parent.order <= brute_cap:
        verdict = xcheck.is_x_bruteforce(parent, cap=brute_cap)
        if verdict.result == "NotX":
            w = verdict.witness
            return TheoremCase("NotX", {
                "witness": {"a": w.a, "b": w.b, "x": w.x},
            }, [])
        raise Unclassified(
            f"group of order {parent.order} matches no case but the brute "
            f"scan confirms the self-centralizing property; classifier gap")
    raise Unclassified(
        f"group of order {parent.order} matches no case and exceeds the "
        f"brute cap {brute_cap}")


def explain(parent: Group, brute_cap: int = xcheck.BRUTE_CAP_DEFAULT) -> dict:
    case = classify(parent, brute_cap)
    return {"label": case.label, "parameters": case.parameters,
            "evidence": case.evidence}


# ---------------------------------------------------------------------------


def _classify_nilpotent(parent: Group) -> Optional[TheoremCase]:
    n = parent.order
    orders = parent.element_orders
    max_order = int(orders.max())
    if max_order == n:
        return TheoremCase("1.1", {"n": n}, [f"cyclic of order {n}"])
    primes = prime_factors(n)
    if len(primes) == 1:
        p = primes[0]
        if n == p * p and all(int(o) in (1, p) for o in orders):
            return TheoremCase("1.2", {"p": p},
                               [f"elementary abelian of order {p}^2"])
        if n == p ** 3 and p % 2 == 1:
            z = center(parent)
            d = derived_subgroup(parent)
            if z.order == p and d.members == z.members:
                kind = "p" if max_order == p else "p_squared"
                return TheoremCase(
                    "1.3", {"p": p, "exponent_kind": kind},
                    [f"extraspecial of order {p}^3",
                     f"exponent {'p' if kind == 'p' else 'p^2'}"])
        if p == 2 and n >= 8:
            fp = fingerprint(parent)
            for kind, min_order in (("dihedral", 8), ("semidihedral", 16),
                                    ("quaternion", 8)):
                if n >= min_order and fp == _ref_print(f"{kind}_{n}"):
                    return TheoremCase(
                        "1.4", {"kind": kind, "order": n},
                        [f"nilpotent 2-group, {kind} fingerprint"])
    return None


def _hall_complement_members(parent: Group, q: int) -> Optional[frozenset]:
    """Elements of order coprime to q, when they form a subgroup."""
    members = frozenset(i for i in range(parent.order)
                        if math.gcd(parent.element_order(i), q) == 1)
    probe = SubgroupSet(parent, members)
    from .engine import _closure_indices
    if _closure_indices(parent, probe.generators) != members:
        return None
    return members


def _classify_supersoluble(parent: Group) -> Optional[TheoremCase]:
    primes = prime_factors(parent.order)
    p = max(primes)
    P = sylow(parent, p)
    if not subgroup_predicates(parent, P)["is_normal"]:
        return None
    p_orders = [parent.element_order(x) for x in P.sorted_members]
    P_cyclic = max(p_orders) == P.order

    if P_cyclic:
        fs = xcheck.frobenius_structure(parent)
        if fs is not None:
            K, L = fs["kernel"], fs["complement"]
            k_cyclic = max(parent.element_order(x)
                           for x in K.sorted_members) == K.order
            l_cyclic = max(parent.element_order(x)
                           for x in L.sorted_members) == L.order
            if k_cyclic and l_cyclic:
                return TheoremCase(
                    "2.1.1", {"c_order": K.order, "d_order": L.order},
                    [f"Frobenius with cyclic kernel of order {K.order}",
                     f"cyclic complement of order {L.order}",
                     "every nontrivial complement element acts without fixed points"])
        case = _check_2_1_2(parent)
        if case is not None:
            return case
        case = _check_2_1_3(parent)
        if case is not None:
            return case
        return None

    # extraspecial Sylow for the largest prime
    if P.order == p ** 3 and p % 2 == 1:
        Pg = as_group(parent, P)
        zp = center(Pg)
        dp = derived_subgroup(Pg)
        if zp.order == p and dp.members == zp.members:
            fs = xcheck.frobenius_structure(parent)
            if fs is not None and fs["kernel"].members == P.members:
                L = fs["complement"]
                l_cyclic = max(parent.element_order(x)
                               for x in L.sorted_members) == L.order
                if l_cyclic and L.order % 2 == 1 and (p - 1) % L.order == 0:
                    return TheoremCase(
                        "2.2", {"p": p, "complement_order": L.order},
                        [f"Frobenius with extraspecial kernel of order {p}^3",
                         f"cyclic complement of order {L.order}",
                         f"{L.order} is odd and divides p-1 = {p - 1}"])
    return None


def _check_2_1_2(parent: Group) -> Optional[TheoremCase]:
    D = sylow(parent, 2)
    if D.order < 8:
        return None
    if fingerprint(as_group(parent, D)) != _ref_print(f"quaternion_{D.order}"):
        return None
    C_members = _hall_complement_members(parent, 2)
    if C_members is None or len(C_members) * D.order != parent.order:
        return None
    C = SubgroupSet(parent, C_members)
    if max(parent.element_order(x) for x in C.sorted_members) != C.order:
        return None
    if C.order % 2 == 0 or C.order < 3:
        return None
    cent = centralizer(parent, C)
    if cent.order != C.order * D.order // 2:
        return None
    if max(parent.element_order(x) for x in cent.sorted_members) != cent.order:
        return None
    d0_members = cent.members & D.members
    if len(d0_members) != D.order // 2:
        return None
    D0 = SubgroupSet(parent, d0_members)
    try:
        q = quotient(parent, D0)
    except NotNormal:
        return None
    if fingerprint(q) != fingerprint(cons.dihedral_group(2 * C.order)):
        return None
    return TheoremCase(
        "2.1.2", {"c_order": C.order, "d_order": D.order},
        [f"quaternion Sylow 2-subgroup of order {D.order}",
         f"cyclic odd normal complement of order {C.order}",
         "centralizer of C is C x D0 with D0 cyclic of index 2 in D",
         f"G/D0 is dihedral of order {2 * C.order}"])


def _check_2_1_3(parent: Group) -> Optional[TheoremCase]:
    primes = prime_factors(parent.order)
    q = min(primes)
    D = sylow(parent, q)
    if max(parent.element_order(x) for x in D.sorted_members) != D.order:
        return None
    C_members = _hall_complement_members(parent, q)
    if C_members is None or len(C_members) * D.order != parent.order:
        return None
    C = SubgroupSet(parent, C_members)
    if max(parent.element_order(x) for x in C.sorted_members) != C.order:
        return None
    Z = center(parent)
    if not (1 < Z.order < D.order and Z.members <= D.members):
        return None
    try:
        gq = quotient(parent, Z)
    except (NotNormal, CapExceeded):
        return None
    if xcheck.frobenius_structure(gq) is None:
        return None
    cd = centralizer(parent, C).members & D.members
    action_order = D.order // len(cd)
    return TheoremCase(
        "2.1.3", {"q": q, "c_order": C.order, "d_order": D.order,
                  "z_order": Z.order, "action_order": action_order},
        [f"smallest prime q = {q} with cyclic Sylow q-subgroup of order {D.order}",
         f"cyclic normal q-complement of order {C.order}",
         f"1 < |Z(G)| = {Z.order} < |D| = {D.order}",
         "G/Z(G) is a Frobenius group"])


# ---------------------------------------------------------------------------


def _classify_deep(parent: Group, brute_cap: int) -> Optional[TheoremCase]:
    gf = generalized_fitting(parent)
    fstar = gf["fstar"]
    comps = gf["components"]
    if not comps:
        return _classify_deep_nilpotent_fstar(parent, fstar, brute_cap)
    if len(comps) > 1:
        return None
    K = comps[0]
    if fstar.members != K.members:
        return None
    zk = centralizer(parent, K).members & K.members
    if len(zk) == 1:
        return _classify_simple_fstar(parent, K)
    return _classify_quasisimple_fstar(parent, K, len(zk))


def _classify_deep_nilpotent_fstar(parent: Group, fstar: SubgroupSet,
                                   brute_cap: int) -> Optional[TheoremCase]:
    n = fstar.order
    orders = [parent.element_order(x) for x in fstar.sorted_members]
    primes = prime_factors(n) if n > 1 else []
    if len(primes) != 1:
        return None
    p = primes[0]
    if n == p * p and all(o in (1, p) for o in orders):
        for x in fstar.sorted_members:
            if x == 0:
                continue
            orbit_cl = normal_closure(
                parent, [x], parent.generator_indices or
                list(range(1, parent.order)))
            if orbit_cl != fstar.members:
                return None
        if p == 2:
            fp = fingerprint(parent)
            for name, label in (("sym4", "Sym(4)"), ("alt4", "Alt(4)")):
                if fp == _ref_print(name):
                    return TheoremCase(
                        "3.1.1", {"p": 2, "type": label},
                        ["F* elementary abelian of order 4, minimal normal",
                         f"fingerprint matches {label}"])
            return None
        return _classify_affine(parent, p, fstar)
    if n == p ** 3:
        return _classify_extraspecial_fstar(parent, p, fstar)
    return None


def _classify_affine(parent: Group, p: int,
                     fstar: SubgroupSet) -> Optional[TheoremCase]:
    fs = xcheck.frobenius_structure(parent)
    if fs is None or fs["kernel"].members != fstar.members:
        return None
    G0 = fs["complement"]
    g0 = as_group(parent, G0)
    m = g0.order
    evidence = [f"F* elementary abelian of order {p}^2, minimal normal",
                f"Frobenius with kernel F* and complement of order {m}"]
    g0_cyclic = int(g0.element_orders.max()) == m
    if g0_cyclic:
        if (p * p - 1) % m == 0 and (p - 1) % m != 0:
            evidence += [f"complement cyclic of order {m}",
                         f"{m} divides p^2-1 = {p * p - 1}",
                         f"{m} does not divide p-1 = {p - 1}"]
            return TheoremCase("3.1.2.1", {"p": p, "m": m}, evidence)
        return None
    fp0 = fingerprint(g0)
    if m >= 8 and (m & (m - 1)) == 0 and fp0 == _ref_print(f"quaternion_{m}"):
        evidence.append(f"complement quaternion of order {m}")
        return TheoremCase("3.1.2.2", {"p": p, "m": m}, evidence)
    if fp0 == _ref_print("SL2_3"):
        evidence.append("complement fingerprint matches SL2(3)")
        return TheoremCase("3.1.2.5", {"p": p}, evidence)
    if fp0 == _ref_print("SL2_3_dot2"):
        if p % 8 in (1, 7):
            evidence += ["complement fingerprint matches SL2(3).2",
                         f"p = {p} is +-1 mod 8"]
            return TheoremCase("3.1.2.6", {"p": p}, evidence)
        return None
    if fp0 == _ref_print("SL2_5"):
        if (p * p - 1) % 60 == 0:
            evidence += ["complement fingerprint matches SL2(5)",
                         f"60 divides p^2-1 = {p * p - 1}"]
            return TheoremCase("3.1.2.7", {"p": p}, evidence)
        return None
    sub_case = classify(g0)
    if sub_case.label == "2.1.2":
        c_order = sub_case.parameters["c_order"]
        eps = 1 if p % 4 == 1 else -1
        if (p - eps) % c_order == 0:
            evidence += [f"complement is a 2.1.2 group with |C| = {c_order}",
                         f"|C| divides p - ({eps}) = {p - eps}"]
            return TheoremCase(
                "3.1.2.3",
                {"p": p, "eps": eps, "c_order": c_order,
                 "d_order": sub_case.parameters["d_order"]}, evidence)
        return None
    if sub_case.label == "2.1.3":
        pars = sub_case.parameters
        d_is_2group = pars["q"] == 2
        cd_maximal = pars["action_order"] == 2
        c_odd = pars["c_order"] % 2 == 1
        divides = (p - 1) % pars["c_order"] == 0 or (p + 1) % pars["c_order"] == 0
        if d_is_2group and cd_maximal and c_odd and divides:
            evidence += [
                f"complement is a 2.1.3 group with cyclic 2-group D of order "
                f"{pars['d_order']}",
                "the centralizer of C in D is a maximal subgroup",
                f"|C| = {pars['c_order']} is odd and divides p-1 or p+1"]
            return TheoremCase(
                "3.1.2.4",
                {"p": p, "c_order": pars["c_order"],
                 "d_order": pars["d_order"]}, evidence)
        return None
    return None


def _classify_extraspecial_fstar(parent: Group, p: int,
                                 fstar: SubgroupSet) -> Optional[TheoremCase]:
    Ng = as_group(parent, fstar)
    zN = center(Ng)
    dN = derived_subgroup(Ng)
    if zN.order != p or dN.members != zN.members:
        return None
    if p == 2:
        fp = fingerprint(parent)
        if fp == _ref_print("SL2_3"):
            return TheoremCase(
                "3.2.1", {"form": "SL2(3)"},
                ["F* extraspecial of order 8 (quaternion)",
                 "fingerprint matches SL2(3)"])
        if fp == _ref_print("SL2_3_dot2"):
            return TheoremCase(
                "3.2.1", {"form": "SL2(3).2"},
                ["F* extraspecial of order 8 (quaternion)",
                 "fingerprint matches SL2(3).2",
                 "quaternion Sylow 2-subgroups of order 16"])
        return None
    if int(Ng.element_orders.max()) != p:
        return None
    try:
        Q = quotient(parent, fstar)
    except (NotNormal, CapExceeded):
        return None
    k = Q.order
    if k < 2 or k % 2 == 0 or (p + 1) % k != 0:
        return None
    if int(Q.element_orders.max()) != k:
        return None
    zn_members = frozenset(fstar.sorted_members[j] for j in zN.sorted_members)
    zg = center(parent)
    if not zn_members <= zg.members:
        return None
    try:
        gz = quotient(parent, SubgroupSet(parent, zn_members))
    except (NotNormal, CapExceeded):
        return None
    if xcheck.frobenius_structure(gz) is None:
        return None
    return TheoremCase(
        "3.2.2", {"p": p, "k": k},
        [f"F* extraspecial of order {p}^3 and exponent {p}",
         f"acting group cyclic of odd order {k} dividing p+1 = {p + 1}",
         "the acting group centralizes the center of F*",
         "G modulo the center of F* is a Frobenius group"])


def _classify_simple_fstar(parent: Group, K: SubgroupSet) -> Optional[TheoremCase]:
    if K.order == parent.order:
        n = parent.order
        matches = []
        for q in range(4, 32):
            if not _is_prime_power(q):
                continue
            if q * (q * q - 1) // math.gcd(2, q - 1) != n:
                continue
            matches.append(q)
        if not matches:
            return None
        fp = fingerprint(parent)
        for q in matches:
            try:
                ref = _ref_print(f"psl2_{q}")
            except (CapExceeded, InvalidParameter):
                continue
            if fp != ref:
                continue
            gate, gate_reason = _psl2_gate(q)
            if gate:
                return TheoremCase(
                    "4.2", {"form": f"PSL2({q})", "q": q,
                            "aliases": matches},
                    [f"simple of order {n}",
                     f"fingerprint matches PSL2({q})", gate_reason])
            return None
        return None
    if parent.order == 2 * K.order and K.order == 360:
        if fingerprint(parent) == _ref_print("m10"):
            return TheoremCase(
                "4.2", {"form": "Mat(10)"},
                ["F* simple of order 360 with index 2",
                 "fingerprint matches the Mathieu group of degree 10"])
    return None


def _psl2_gate(q: int) -> tuple[bool, str]:
    if q in (4, 5):
        return True, "PSL2(4) = PSL2(5), and 5 is a Fermat prime"
    if q == 9:
        return True, "PSL2(9) is listed explicitly"
    if is_prime(q) and _is_fermat(q):
        return True, f"{q} is a Fermat prime"
    if is_prime(q) and _is_mersenne(q):
        return True, f"{q} is a Mersenne prime"
    return False, f"{q} is neither a Fermat nor a Mersenne prime"


def _is_prime_power(n: int) -> bool:
    return len(prime_factors(n)) == 1


def _classify_quasisimple_fstar(parent: Group, K: SubgroupSet,
                                z_order: int) -> Optional[TheoremCase]:
    if z_order != 2:
        return None
    if parent.order not in (K.order, 2 * K.order):
        return None
    p = None
    for cand in range(3, 60):
        if is_prime(cand) and cand * (cand * cand - 1) == K.order:
            p = cand
            break
    if p is None or not _is_fermat(p):
        return None
    if derived_subgroup(parent, K).members != K.members:
        return None
    syl2 = sylow(parent, 2)
    ref = _ref_print(f"quaternion_{syl2.order}")
    if fingerprint(as_group(parent, syl2)) != ref:
        return None
    extended = parent.order == 2 * K.order
    evidence = [
        f"F* quasisimple of order {K.order} = p(p^2-1) with p = {p}",
        "F* is perfect with center of order 2",
        f"{p} is a Fermat prime",
        f"quaternion Sylow 2-subgroups of order {syl2.order}",
        f"index of F* is {parent.order // K.order}"]
    return TheoremCase(
        "4.1", {"p": p, "extended": extended}, evidence)


# ---------------------------------------------------------------------------


def cross_validate(entries: list, brute_cap: int = xcheck.BRUTE_CAP_DEFAULT,
                   workers: int = 1) -> dict:
    """Classify every (name, record) entry and check the label against the
    brute and recursive verdicts (or mark structural-only above the cap)."""
    from concurrent.futures import ThreadPoolExecutor

    def run_one(item):
        name, record = item
        g = record.group
        cap = record.parameters.get("brute_cap_override", brute_cap)
        row = {"name": name, "order": g.order,
               "intended": record.intended_case}
        try:
            case = classify(g, brute_cap=cap)
            row["label"] = case.label
            row["parameters"] = case.parameters
            row["evidence"] = case.evidence
        except Unclassified as exc:
            row["label"] = "Unclassified"
            row["error"] = str(exc)
        if g.order <= cap:
            vb = xcheck.is_x_bruteforce(g, cap=cap)
            vr = xcheck.is_x_recursive(g, cap=cap)
            row["brute"] = vb.result
            row["recursive"] = vr.result
            row["oracle_agreement"] = vb.result == vr.result
            if vb.result == "NotX":
                row["witness_valid"] = xcheck.verify_witness(g, vb.witness)
                row["witness"] = vb.witness.words(g)
            match = (row["label"] != "NotX") == (vb.result == "IsX") \
                and row["label"] != "Unclassified"
            row["status"] = "match" if match else "MISMATCH"
            if not row["oracle_agreement"]:
                row["status"] = "MISMATCH"
            if row.get("witness_valid") is False:
                row["status"] = "MISMATCH"
        else:
            row["brute"] = "skipped"
            row["recursive"] = "skipped"
            row["status"] = ("WARN-structural-only"
                             if row["label"] != "Unclassified" else "MISMATCH")
        if record.intended_case != row["label"] and \
                not (record.intended_case == cons.NOT_X
                     and row["label"] == "NotX"):
            row["status"] = "MISMATCH"
        return row

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_one, entries))
    else:
        rows = [run_one(e) for e in entries]
    rows.sort(key=lambda r: r["name"])
    summary = {
        "entries": len(rows),
        "matches": sum(1 for r in rows if r["status"] == "match"),
        "warnings": sum(1 for r in rows if r["status"].startswith("WARN")),
        "mismatches": sum(1 for r in rows if r["status"] == "MISMATCH"),
        "rows": rows,
    }
    return summary
