"""Membership checks for the class of groups whose non-cyclic subgroups all
contain their centralizers, plus witness machinery and Frobenius detection.

Two independent deciders:

* a brute pair scan over (class representative, element) pairs, relying on the
  fact that any non-cyclic subgroup contains a non-cyclic 2-generated one whose
  centralizer contains the big subgroup's centralizer;
* a recursion through centralizers of prime-order elements, with direct
  handling of abelian groups and of elements whose prime-order powers are all
  central (where the centralizer recursion would not shrink).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .engine import (
    Group,
    SubgroupSet,
    _closure_indices,
    as_group,
    centralizer,
    centralizer_within,
    conjugacy_classes,
    fingerprint,
    find_generators,
    is_cyclic_set,
    normal_subgroups,
    quotient_with_map,
    subgroup_conjugacy_classes,
    subgroups_up_to_conjugacy,
)
from .errors import CapExceeded, InternalInvariantViolation

BRUTE_CAP_DEFAULT = 2500


@dataclass
class Witness:
    """A non-cyclic 2-generated subgroup plus an outside centralizing element."""
    a: int
    b: int
    x: int

    def words(self, parent: Group) -> dict:
        return {"a": parent.word_for(self.a),
                "b": parent.word_for(self.b),
                "x": parent.word_for(self.x)}

    def subgroup_members(self, parent: Group) -> frozenset:
        return _closure_indices(parent, [self.a, self.b])

    def certificate_members(self, parent: Group) -> frozenset:
        return _closure_indices(parent, [self.a, self.b, self.x])

    def subgroup_fingerprint(self, parent: Group):
        return fingerprint(as_group(
            parent, SubgroupSet(parent, self.subgroup_members(parent))))

    def certificate_fingerprint(self, parent: Group):
        return fingerprint(as_group(
            parent, SubgroupSet(parent, self.certificate_members(parent))))


@dataclass
class XVerdict:
    result: str  # "IsX" | "NotX"
    witness: Optional[Witness]
    method: str  # "brute" | "recursive" | "structural"
    stats: dict = field(default_factory=dict)

    @property
    def is_x(self) -> bool:
        return self.result == "IsX"


def _powers_of(parent: Group, a: int) -> frozenset:
    out = {0}
    x = a
    while x != 0:
        out.add(x)
        x = parent.mul(x, a)
    return frozenset(out)


def _closure_probe(parent: Group, gens: tuple,
                   probe: int) -> tuple[bool, Optional[frozenset]]:
    """BFS the closure of `gens`, stopping as soon as `probe` appears.

    Returns (True, None) if found, else (False, full member set)."""
    members = {0}
    queue = [0]
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        for g in gens:
            new = parent.mul(cur, g)
            if new not in members:
                if new == probe:
                    return True, None
                members.add(new)
                queue.append(new)
    return False, frozenset(members)


def _pair_scan(parent: Group, members: Optional[frozenset] = None,
               stats: Optional[dict] = None) -> Optional[Witness]:
    """First (class order, element order) pair (a, b) with <a,b> non-cyclic and
    C(a) n C(b) not inside <a,b>, restricted to `members` when given."""
    if stats is None:
        stats = {}
    stats.setdefault("pairs_scanned", 0)
    stats.setdefault("closures", 0)
    whole = members is None
    if whole:
        classes = conjugacy_classes(parent)
        scan = list(range(parent.order))
        member_set = None
    else:
        sub = SubgroupSet(parent, members)
        classes = subgroup_conjugacy_classes(parent, sub)
        scan = list(sub.sorted_members)
        member_set = sub.members
    powers_cache: dict[int, frozenset] = {}
    commute_cache: dict[frozenset, np.ndarray] = {}
    for cls in classes:
        a = cls[0]
        if a == 0:
            continue
        if whole:
            ca = centralizer(parent, a).members
        else:
            ca = centralizer_within(parent, member_set, [a])
        powers_a = powers_cache.setdefault(a, _powers_of(parent, a))
        if ca <= powers_a:
            continue
        ca_idx = np.fromiter(sorted(ca), dtype=np.int64)
        commute = commute_cache.get(ca)
        if commute is None:
            commute = _commute_matrix(parent, ca_idx, scan)
            commute_cache[ca] = commute
        for pos, b in enumerate(scan):
            stats["pairs_scanned"] += 1
            cab = ca_idx[commute[pos]]
            if cab.shape[0] <= 1:
                continue
            if b in powers_a:
                continue
            powers_b = powers_cache.setdefault(b, _powers_of(parent, b))
            if all(int(c) in powers_a or int(c) in powers_b for c in cab):
                continue
            stats["closures"] += 1
            H = _closure_indices(parent, [a, b])
            if is_cyclic_set(parent, H):
                continue
            bad = [int(c) for c in cab if int(c) not in H]
            if bad:
                return Witness(a, b, min(bad))
    return None


def _commute_matrix(parent: Group, ca_idx: np.ndarray,
                    scan: list[int]) -> np.ndarray:
    """commute[j, i] = scan[j] commutes with ca_idx[i]."""
    if parent.table is not None:
        scan_arr = np.fromiter(scan, dtype=np.int64)
        rows = np.asarray(parent.table)[np.ix_(ca_idx, scan_arr)]
        cols = np.asarray(parent.table)[np.ix_(scan_arr, ca_idx)]
        return rows.T == cols
    out = np.empty((len(scan), ca_idx.shape[0]), dtype=bool)
    for i, m in enumerate(ca_idx):
        mask = parent.commute_mask(int(m))
        out[:, i] = mask[scan]
    return out


def is_x_bruteforce(parent: Group, cap: int = BRUTE_CAP_DEFAULT) -> XVerdict:
    if parent.order > cap:
        raise CapExceeded(f"order {parent.order} exceeds brute cap {cap}")
    if "verdict_brute" in parent._cache:
        return parent._cache["verdict_brute"]
    t0 = time.perf_counter()
    stats: dict = {}
    witness = _pair_scan(parent, None, stats)
    stats["elapsed"] = time.perf_counter() - t0
    if witness is None:
        verdict = XVerdict("IsX", None, "brute", stats)
    else:
        verdict = XVerdict("NotX", witness, "brute", stats)
    parent._cache["verdict_brute"] = verdict
    return verdict


# ---------------------------------------------------------------------------
# recursive checker

def _is_elementary_abelian_p2(parent: Group, members: frozenset) -> bool:
    n = len(members)
    root = int(round(n ** 0.5))
    if root * root != n or not _is_prime(root):
        return False
    return all(parent.element_order(x) == root for x in members if x != 0)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _abelian_witness(parent: Group, sub: SubgroupSet) -> Witness:
    """Witness inside a non-cyclic abelian subgroup that is not elementary
    abelian of order p^2: a rank-2 elementary piece plus any outside element."""
    members = sub.sorted_members
    for p in _primes_of(len(members)):
        order_p = [x for x in members if parent.element_order(x) == p]
        for a in order_p:
            pa = _powers_of(parent, a)
            for b in order_p:
                if b in pa:
                    continue
                E = _closure_indices(parent, [a, b])
                x = next(m for m in members if m not in E)
                return Witness(a, b, x)
    raise InternalInvariantViolation("abelian witness search failed")


def _primes_of(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_x_recursive(parent: Group, cap: int = BRUTE_CAP_DEFAULT) -> XVerdict:
    if parent.order > cap:
        raise CapExceeded(f"order {parent.order} exceeds brute cap {cap}")
    if "verdict_recursive" in parent._cache:
        return parent._cache["verdict_recursive"]
    t0 = time.perf_counter()
    stats = {"nodes": 0, "memo_hits": 0}
    memo: dict[tuple, list[tuple[frozenset, Optional[Witness]]]] = {}

    def order_profile(members: frozenset) -> tuple:
        counts: dict[int, int] = {}
        for m in members:
            o = parent.element_order(m)
            counts[o] = counts.get(o, 0) + 1
        return tuple(sorted(counts.items()))

    def rec(members: frozenset) -> Optional[Witness]:
        """None when the subgroup is in the class; else a witness."""
        stats["nodes"] += 1
        key = (len(members), order_profile(members))
        bucket = memo.get(key)
        if bucket is not None:
            for cached_members, verdict in bucket:
                if cached_members == members:
                    stats["memo_hits"] += 1
                    return verdict
        result = _rec_uncached(members)
        memo.setdefault(key, []).append((members, result))
        return result

    def _rec_uncached(members: frozenset) -> Optional[Witness]:
        if is_cyclic_set(parent, members):
            return None
        sub = SubgroupSet(parent, members)
        gens = sub.generators
        abelian = all(parent.mul(a, b) == parent.mul(b, a)
                      for i, a in enumerate(gens) for b in gens[i + 1:])
        if abelian:
            if _is_elementary_abelian_p2(parent, members):
                return None
            return _abelian_witness(parent, sub)
        zh = centralizer_within(parent, members, gens)
        classes = subgroup_conjugacy_classes(parent, sub)
        for cls in classes:
            x = cls[0]
            if x == 0 or x in zh:
                continue
            if not _is_prime(parent.element_order(x)):
                continue
            cx = centralizer_within(parent, members, [x])
            w = rec(cx)
            if w is not None:
                return w
        # elements whose prime-order powers are all central: the centralizer
        # recursion cannot shrink through them, so scan for an avoiding
        # non-cyclic 2-generated subgroup directly
        for cls in classes:
            c = cls[0]
            if c == 0:
                continue
            oc = parent.element_order(c)
            if not all(parent.power(c, oc // r) in zh for r in _primes_of(oc)):
                continue
            K = centralizer_within(parent, members, [c])
            w = _avoidance_scan(K, c)
            if w is not None:
                return w
        return None

    powers_cache: dict[int, frozenset] = {}
    avoidance_memo: dict[tuple, Optional[Witness]] = {}

    def _avoidance_scan(K: frozenset, c: int) -> Optional[Witness]:
        # the answer only depends on (K, <c>): H contains c iff it contains <c>
        pc = powers_cache.setdefault(c, _powers_of(parent, c))
        key = (K, pc)
        if key in avoidance_memo:
            cached = avoidance_memo[key]
            return None if cached is None else Witness(cached.a, cached.b, c)
        result = _avoidance_scan_uncached(K, c)
        avoidance_memo[key] = result
        return result

    def _avoidance_scan_uncached(K: frozenset, c: int) -> Optional[Witness]:
        sub = SubgroupSet(parent, K)
        classes = subgroup_conjugacy_classes(parent, sub)
        for cls in classes:
            a = cls[0]
            if a == 0:
                continue
            pa = powers_cache.setdefault(a, _powers_of(parent, a))
            if c in pa:
                continue
            for b in sub.sorted_members:
                if b == 0 or b in pa:
                    continue
                pb = powers_cache.setdefault(b, _powers_of(parent, b))
                if c in pb:
                    continue
                comm = parent.commutator(a, b)
                if comm != 0:
                    pcm = powers_cache.setdefault(
                        comm, _powers_of(parent, comm))
                    if c in pcm:
                        continue
                found, H = _closure_probe(parent, (a, b), c)
                if found:
                    continue
                if is_cyclic_set(parent, H):
                    continue
                return Witness(a, b, c)
        return None

    w = rec(frozenset(range(parent.order)))
    stats["elapsed"] = time.perf_counter() - t0
    if w is None:
        verdict = XVerdict("IsX", None, "recursive", stats)
    else:
        verdict = XVerdict("NotX", w, "recursive", stats)
    parent._cache["verdict_recursive"] = verdict
    return verdict


def verify_witness(parent: Group, w: Witness) -> bool:
    """Independent recheck: <a,b> non-cyclic, x commutes with a and b, x outside."""
    for idx in (w.a, w.b, w.x):
        if not 0 <= idx < parent.order:
            return False
    if parent.mul(w.x, w.a) != parent.mul(w.a, w.x):
        return False
    if parent.mul(w.x, w.b) != parent.mul(w.b, w.x):
        return False
    H = _closure_indices(parent, [w.a, w.b])
    if w.x in H:
        return False
    return not is_cyclic_set(parent, H)


# ---------------------------------------------------------------------------
# Frobenius structure

def frobenius_structure(parent: Group) -> Optional[dict]:
    """Kernel and complement when the group is Frobenius, else None.

    A proper nontrivial normal subgroup N qualifies when its order is coprime
    to its index and every nontrivial element of N has its centralizer inside
    N; the complement comes from a Schur-Zassenhaus construction.
    """
    n = parent.order
    if n == 1:
        return None
    classes = conjugacy_classes(parent)
    for N in normal_subgroups(parent):
        if len(N) in (1, n):
            continue
        idx = n // len(N)
        if math.gcd(len(N), idx) != 1:
            continue
        ok = True
        for cls in classes:
            rep = cls[0]
            if rep == 0 or rep not in N:
                continue
            if not centralizer(parent, rep).members <= N:
                ok = False
                break
        if ok:
            Nsub = SubgroupSet(parent, N)
            comp = _schur_zassenhaus(parent, Nsub)
            return {"kernel": Nsub, "complement": comp}
    return None


def _schur_zassenhaus(parent: Group, N: SubgroupSet,
                      ambient: Optional[frozenset] = None) -> SubgroupSet:
    """A complement to N (normal, coprime index) inside `ambient` (default: G)."""
    gens = N.generators
    abelian = all(parent.mul(a, b) == parent.mul(b, a)
                  for i, a in enumerate(gens) for b in gens[i + 1:])
    if abelian:
        return _sz_abelian(parent, N, ambient)
    if ambient is not None:
        raise InternalInvariantViolation(
            "nested non-abelian Schur-Zassenhaus is not needed here")
    Z = SubgroupSet(parent, centralizer_within(parent, N.members, gens))
    Q, coset_id, reps = quotient_with_map(parent, Z)
    nq_members = frozenset(int(coset_id[x]) for x in N.members)
    comp_q = _schur_zassenhaus(Q, SubgroupSet(Q, nq_members))
    preimage = frozenset(x for x in range(parent.order)
                         if int(coset_id[x]) in comp_q.members)
    return _sz_abelian(parent, Z, preimage)


def _sz_abelian(parent: Group, N: SubgroupSet,
                ambient: Optional[frozenset] = None) -> SubgroupSet:
    """Cocycle-averaging complement for abelian N inside `ambient`."""
    members = sorted(ambient) if ambient is not None else list(range(parent.order))
    m = len(members) // N.order
    coset_of: dict[int, int] = {}
    reps: list[int] = []
    nmem = sorted(N.members)
    for x in members:
        if x in coset_of:
            continue
        cid = len(reps)
        reps.append(x)
        for nm in nmem:
            coset_of[parent.mul(x, nm)] = cid
    exponent = 1
    for x in N.members:
        exponent = math.lcm(exponent, parent.element_order(x))
    m_inv = pow(m, -1, exponent)

    def cocycle(i: int, j: int) -> int:
        prod = parent.mul(reps[i], reps[j])
        k = coset_of[prod]
        return parent.mul(prod, int(parent.inv[reps[k]]))

    complement = set()
    for i in range(m):
        e = 0
        for j in range(m):
            e = parent.mul(e, cocycle(i, j))
        f = parent.power(e, m_inv)
        s = parent.mul(int(parent.inv[f]), reps[i])
        complement.add(s)
    if len(complement) != m:
        raise InternalInvariantViolation("complement has wrong size")
    comp = SubgroupSet(parent, complement)
    if _closure_indices(parent, comp.generators) != comp.members:
        raise InternalInvariantViolation("complement is not closed")
    return comp


# ---------------------------------------------------------------------------
# subgroup-closedness audit

def is_x_members(parent: Group, members: frozenset) -> bool:
    """Whether a subgroup, as a group in its own right, is in the class."""
    return _pair_scan(parent, members) is None


def subgroup_closure_audit(parent: Group, enum_cap: int = 2048) -> dict:
    key = ("audit", enum_cap)
    if key in parent._cache:
        return parent._cache[key]
    result = _subgroup_closure_audit(parent, enum_cap)
    parent._cache[key] = result
    return result


def _subgroup_closure_audit(parent: Group, enum_cap: int) -> dict:
    classes = subgroups_up_to_conjugacy(parent, cap=enum_cap)
    whole_is_x = is_x_members(parent, frozenset(range(parent.order)))
    rows = []
    violations = 0
    for sc in classes:
        sub_is_x = is_x_members(parent, sc.representative.members)
        if whole_is_x and not sub_is_x:
            violations += 1
        rows.append({"order": sc.representative.order,
                     "class_size": sc.class_size,
                     "is_x": sub_is_x})
    return {"group_is_x": whole_is_x,
            "class_count": len(classes),
            "subgroup_count": sum(sc.class_size for sc in classes),
            "x_class_count": sum(1 for r in rows if r["is_x"]),
            "violations": violations,
            "rows": rows}
