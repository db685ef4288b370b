"""Finite group engine: dense-table / permutation-hashed groups and structure algorithms.

Groups are materialized as faithful permutation groups with a deterministic
element order (breadth-first from the identity, generators in input order).
Orders up to TABLE_CAP get a dense multiplication table; larger groups (up to
ORDER_CAP) multiply by composing permutations and hashing the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    CapExceeded,
    InternalInvariantViolation,
    InvalidPermutation,
    NotNormal,
)

TABLE_CAP = 2048
ORDER_CAP = 20000
ENUM_CAP_DEFAULT = 2048

_ASSOC_FULL_LIMIT = 256
_ASSOC_SAMPLES = 100_000


# ---------------------------------------------------------------------------
# permutation helpers (tuples of 0-based images)

def perm_identity(degree: int) -> tuple:
    return tuple(range(degree))


def perm_mul(a: Sequence[int], b: Sequence[int]) -> tuple:
    """Compose: apply b first, then a."""
    return tuple(a[x] for x in b)


def perm_inv(a: Sequence[int]) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_order(a: Sequence[int]) -> int:
    n = len(a)
    seen = [False] * n
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = a[x]
            length += 1
        order = order * length // math.gcd(order, length)
    return order


def check_permutation(images: Sequence[int], degree: int) -> tuple:
    images = tuple(int(x) for x in images)
    if len(images) != degree or sorted(images) != list(range(degree)):
        raise InvalidPermutation(
            f"images {images!r} are not a bijection on 0..{degree - 1}"
        )
    return images


def cycles_from_images(images: Sequence[int]) -> list[tuple]:
    """Nontrivial cycles, each rotated to start at its smallest point."""
    seen = [False] * len(images)
    cycles = []
    for start in range(len(images)):
        if seen[start] or images[start] == start:
            seen[start] = True
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = images[x]
        cycles.append(tuple(cyc))
    return cycles


# ---------------------------------------------------------------------------


class Group:
    """A finite group on elements 0..order-1 with element 0 the identity.

    Elements are permutations of a fixed degree, stored row-wise in `perms`.
    `mul` composes right-to-left: mul(a, b) applies b first.
    """

    def __init__(self, perms: np.ndarray, generator_indices: list[int],
                 bfs_parent: Optional[np.ndarray] = None,
                 bfs_gen: Optional[np.ndarray] = None,
                 table: Optional[np.ndarray] = None,
                 source_doc: Optional[dict] = None):
        self.perms = perms
        self.order = int(perms.shape[0])
        self.degree = int(perms.shape[1])
        self.generator_indices = list(generator_indices)
        self.bfs_parent = bfs_parent
        self.bfs_gen = bfs_gen
        self.source_doc = source_doc
        self._index = {perms[i].tobytes(): i for i in range(self.order)}
        if len(self._index) != self.order:
            raise InternalInvariantViolation("duplicate elements in group")
        inv_images = np.argsort(perms, axis=1).astype(perms.dtype)
        self.inv = np.array(
            [self._index[inv_images[i].tobytes()] for i in range(self.order)],
            dtype=np.int64)
        self.table = table
        if table is None and self.order <= TABLE_CAP:
            self.table = self._build_table()
        self.representation_kind = (
            "dense-table" if self.table is not None else "permutation-hashed"
        )
        self._element_orders: Optional[np.ndarray] = None
        self._cache: dict = {}

    # -- construction -------------------------------------------------------

    @classmethod
    def from_generators(cls, degree: int, generators: Iterable[Sequence[int]],
                        cap: int = ORDER_CAP,
                        source_doc: Optional[dict] = None) -> "Group":
        if cap < 1:
            raise CapExceeded("cap must be at least 1")
        gens = [check_permutation(g, degree) for g in generators]
        ident = perm_identity(degree)
        elements = [ident]
        index = {ident: 0}
        parent = [0]
        via = [-1]
        head = 0
        while head < len(elements):
            cur = elements[head]
            for gi, g in enumerate(gens):
                new = perm_mul(cur, g)
                if new not in index:
                    if len(elements) >= cap:
                        raise CapExceeded(
                            f"closure exceeds cap {cap} (degree {degree})"
                        )
                    index[new] = len(elements)
                    elements.append(new)
                    parent.append(head)
                    via.append(gi)
            head += 1
        dtype = np.int16 if degree <= 32767 else np.int32
        perms = np.array(elements, dtype=dtype)
        gen_idx = [index[g] for g in gens]
        return cls(perms, gen_idx,
                   bfs_parent=np.array(parent, dtype=np.int64),
                   bfs_gen=np.array(via, dtype=np.int64),
                   source_doc=source_doc)

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]],
                   source_doc: Optional[dict] = None) -> "Group":
        """Group from a multiplication table; rows become the left-regular perms."""
        n = len(table)
        arr = np.asarray(table, dtype=np.int16 if n <= 32767 else np.int32)
        if arr.shape != (n, n):
            raise InvalidPermutation("table is not square")
        if not np.array_equal(arr[0], np.arange(n)):
            raise InvalidPermutation("element 0 is not the identity")
        for i in range(n):
            if sorted(arr[i].tolist()) != list(range(n)):
                raise InvalidPermutation(f"table row {i} is not a bijection")
            if sorted(arr[:, i].tolist()) != list(range(n)):
                raise InvalidPermutation(f"table column {i} is not a bijection")
        group = cls(arr.copy(), list(range(1, n)), table=arr.copy(),
                    source_doc=source_doc)
        if n > 1:
            group.generator_indices = find_generators(group, tuple(range(n)))
        return group

    def _build_table(self) -> np.ndarray:
        n, perms = self.order, self.perms
        dtype = np.int16 if n <= 32767 else np.int32
        table = np.empty((n, n), dtype=dtype)
        table[:, 0] = np.arange(n)
        if self.bfs_parent is not None:
            gen_cols = {}
            for g in self.generator_indices:
                col = np.empty(n, dtype=dtype)
                for i in range(n):
                    col[i] = self._index[perms[i][perms[g]].tobytes()]
                gen_cols[g] = col
            for j in range(1, n):
                p, gi = int(self.bfs_parent[j]), int(self.bfs_gen[j])
                g = self.generator_indices[gi]
                table[:, j] = gen_cols[g][table[:, p]]
        else:
            for j in range(1, n):
                col = np.empty(n, dtype=dtype)
                pj = perms[j]
                for i in range(n):
                    col[i] = self._index[perms[i][pj].tobytes()]
                table[:, j] = col
        return table

    # -- basic operations ----------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if self.table is not None:
            return int(self.table[a, b])
        return self._index[self.perms[a][self.perms[b]].tobytes()]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), int(self.inv[g]))

    def commutator(self, a: int, b: int) -> int:
        """a^-1 b^-1 a b."""
        return self.mul(self.mul(int(self.inv[a]), int(self.inv[b])),
                        self.mul(a, b))

    def power(self, a: int, k: int) -> int:
        k %= self.element_order(a)
        result, base = 0, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    @property
    def element_orders(self) -> np.ndarray:
        if self._element_orders is None:
            self._element_orders = np.array(
                [perm_order(self.perms[i].tolist()) for i in range(self.order)],
                dtype=np.int64)
        return self._element_orders

    def index_of(self, images: Sequence[int]) -> Optional[int]:
        arr = np.asarray(images, dtype=self.perms.dtype)
        return self._index.get(arr.tobytes())

    def word_for(self, x: int) -> list[int]:
        """x as a word in the generators (list of generator positions)."""
        if self.bfs_parent is None:
            return [x] if x != 0 else []
        word: list[int] = []
        while x != 0:
            word.append(int(self.bfs_gen[x]))
            x = int(self.bfs_parent[x])
        word.reverse()
        return word

    def evaluate_word(self, word: Sequence[int]) -> int:
        x = 0
        for gi in word:
            if self.bfs_parent is None:
                g = gi  # table groups: the alphabet is every element
            else:
                g = self.generator_indices[gi]
            x = self.mul(x, g)
        return x

    # -- bulk helpers --------------------------------------------------------

    def mul_many(self, a: int, bs: np.ndarray) -> np.ndarray:
        """Indices of a*b for each b in bs."""
        if self.table is not None:
            return self.table[a, bs].astype(np.int64)
        rows = self.perms[a][self.perms[bs]]
        return np.array([self._index[r.tobytes()] for r in rows], dtype=np.int64)

    def conj_by_all(self, x: int) -> np.ndarray:
        """Index of g x g^-1 for every g, as an array over g."""
        if self.table is not None:
            t1 = self.table[:, x].astype(np.int64)
            return self.table[t1, self.inv].astype(np.int64)
        gathered = self.perms[x][self.perms[self.inv]]
        rows = np.take_along_axis(self.perms, gathered.astype(np.int64), axis=1)
        return np.array([self._index[r.tobytes()] for r in rows], dtype=np.int64)

    def commute_mask(self, g: int) -> np.ndarray:
        """Boolean mask over all elements x of x*g == g*x."""
        if self.table is not None:
            return np.asarray(self.table[:, g]) == np.asarray(self.table[g, :])
        pg = self.perms[g].astype(np.int64)
        lhs = self.perms[:, pg]
        rhs = self.perms[g][self.perms]
        return (lhs == rhs).all(axis=1)

    # -- consistency checks --------------------------------------------------

    def validate(self, rng_seed: int = 0) -> None:
        n = self.order
        for i in range(n):
            if self.mul(0, i) != i or self.mul(i, 0) != i:
                raise InternalInvariantViolation("identity law fails")
            if self.mul(i, int(self.inv[i])) != 0:
                raise InternalInvariantViolation("inverse law fails")
        if n <= _ASSOC_FULL_LIMIT and self.table is not None:
            t = self.table.astype(np.int64)
            ab_c = t[t.reshape(-1), :].reshape(n, n, n)
            a_bc = t[:, t.reshape(-1)].reshape(n, n, n)
            if not np.array_equal(ab_c, a_bc):
                raise InternalInvariantViolation("associativity fails")
        else:
            rng = np.random.default_rng(rng_seed)
            triples = rng.integers(0, n, size=(min(_ASSOC_SAMPLES, 4 * n * n), 3))
            for a, b, c in triples:
                if self.mul(self.mul(int(a), int(b)), int(c)) != \
                        self.mul(int(a), self.mul(int(b), int(c))):
                    raise InternalInvariantViolation("associativity fails (sampled)")


# ---------------------------------------------------------------------------


class SubgroupSet:
    """A subgroup of a parent group, held as a set of element indices."""

    def __init__(self, parent: Group, members: Iterable[int]):
        self.parent = parent
        self.members = frozenset(int(m) for m in members)
        self._sorted: Optional[tuple] = None
        self._gens: Optional[list[int]] = None

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def sorted_members(self) -> tuple:
        if self._sorted is None:
            self._sorted = tuple(sorted(self.members))
        return self._sorted

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def __eq__(self, other) -> bool:
        return (isinstance(other, SubgroupSet)
                and self.parent is other.parent
                and self.members == other.members)

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"SubgroupSet(order={self.order})"

    @property
    def generators(self) -> list[int]:
        if self._gens is None:
            self._gens = find_generators(self.parent, self.sorted_members)
        return self._gens


Target = Union[int, SubgroupSet]


def _closure_indices(parent: Group, seed: Iterable[int]) -> frozenset:
    """Members of <seed>. Seeds already generated by earlier ones are skipped,
    so closing a union of subgroups costs |result| * (few generators)."""
    seeds = sorted(set(int(s) for s in seed) - {0})
    if not seeds:
        return frozenset({0})
    if parent.table is not None:
        table = parent.table
        mask = np.zeros(parent.order, dtype=bool)
        mask[0] = True
        gens: list[int] = []
        for s in seeds:
            if mask[s]:
                continue
            gens.append(s)
            garr = np.fromiter(gens, dtype=np.int64)
            current = np.flatnonzero(mask)
            prods = np.unique(np.asarray(table[current, s]))
            frontier = prods[~mask[prods]].astype(np.int64)
            mask[frontier] = True
            while frontier.size:
                prods = np.unique(
                    np.asarray(table[np.ix_(frontier, garr)]).ravel())
                new = prods[~mask[prods]]
                mask[new] = True
                frontier = new.astype(np.int64)
        return frozenset(int(i) for i in np.flatnonzero(mask))
    members = {0}
    elements = [0]
    gens = []
    for s in seeds:
        if s in members:
            continue
        gens.append(s)
        frontier = []
        for m in list(elements):
            x = parent.mul(m, s)
            if x not in members:
                members.add(x)
                elements.append(x)
                frontier.append(x)
        head = 0
        while head < len(frontier):
            cur = frontier[head]
            head += 1
            for g in gens:
                x = parent.mul(cur, g)
                if x not in members:
                    members.add(x)
                    elements.append(x)
                    frontier.append(x)
    return frozenset(members)


def closure(parent: Group, seed: Iterable[int]) -> SubgroupSet:
    """Smallest subgroup of `parent` containing `seed`."""
    return SubgroupSet(parent, _closure_indices(parent, seed))


def closure_contains(parent: Group, seed: Iterable[int], probe: set) -> bool:
    """Whether every index in `probe` lies in <seed>; stops early when found."""
    missing = set(probe)
    missing.discard(0)
    if not missing:
        return True
    members = {0}
    queue = [0]
    gens = sorted(set(int(s) for s in seed) - {0})
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        for g in gens:
            new = parent.mul(cur, g)
            if new not in members:
                members.add(new)
                queue.append(new)
                missing.discard(new)
                if not missing:
                    return True
    return False


def find_generators(parent: Group, members: Sequence[int]) -> list[int]:
    """Small deterministic generating set for a subgroup given as sorted indices."""
    target = frozenset(members)
    gens: list[int] = []
    have: frozenset = frozenset({0})
    for x in members:
        if x in have:
            continue
        gens.append(x)
        have = _closure_indices(parent, gens)
        if have == target:
            break
    return gens


def centralizer(parent: Group, target: Target) -> SubgroupSet:
    if isinstance(target, SubgroupSet):
        gens = target.generators if target.order > 1 else []
    else:
        gens = [int(target)]
    mask = np.ones(parent.order, dtype=bool)
    for g in gens:
        mask &= parent.commute_mask(g)
    return SubgroupSet(parent, np.flatnonzero(mask))


def centralizer_within(parent: Group, members: Iterable[int],
                       target_gens: Sequence[int]) -> frozenset:
    """Members of `members` commuting with every listed generator."""
    idx = np.fromiter((int(m) for m in members), dtype=np.int64)
    idx.sort()
    keep = np.ones(idx.shape[0], dtype=bool)
    for g in target_gens:
        if parent.table is not None:
            keep &= (np.asarray(parent.table[idx, g])
                     == np.asarray(parent.table[g, :])[idx])
        else:
            pg = parent.perms[g].astype(np.int64)
            lhs = parent.perms[idx][:, pg]
            rhs = parent.perms[g][parent.perms[idx]]
            keep &= (lhs == rhs).all(axis=1)
    return frozenset(int(i) for i in idx[keep])


def center(parent: Group) -> SubgroupSet:
    if "center" not in parent._cache:
        gens = parent.generator_indices or list(range(1, parent.order))
        mask = np.ones(parent.order, dtype=bool)
        for g in gens:
            mask &= parent.commute_mask(g)
        parent._cache["center"] = SubgroupSet(parent, np.flatnonzero(mask))
    return parent._cache["center"]


def conjugacy_classes(parent: Group) -> list[list[int]]:
    """Orbit partition under conjugation, ordered by
    (element order, class size, smallest member)."""
    if "classes" in parent._cache:
        return parent._cache["classes"]
    n = parent.order
    gens = parent.generator_indices or list(range(1, n))
    seen = np.zeros(n, dtype=bool)
    classes = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = [start]
        seen[start] = True
        head = 0
        while head < len(orbit):
            x = orbit[head]
            head += 1
            for g in gens:
                y = parent.conj(g, x)
                if not seen[y]:
                    seen[y] = True
                    orbit.append(y)
        classes.append(sorted(orbit))
    classes.sort(key=lambda c: (parent.element_order(c[0]), len(c), c[0]))
    parent._cache["classes"] = classes
    return classes


def class_representatives(parent: Group) -> list[int]:
    return [c[0] for c in conjugacy_classes(parent)]


def subgroup_conjugacy_classes(parent: Group, H: SubgroupSet) -> list[list[int]]:
    """Conjugacy classes of H as a group in its own right (indices in parent)."""
    gens = H.generators
    seen = set()
    classes = []
    for start in H.sorted_members:
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        head = 0
        while head < len(orbit):
            x = orbit[head]
            head += 1
            for g in gens:
                y = parent.conj(g, x)
                if y not in seen:
                    seen.add(y)
                    orbit.append(y)
        classes.append(sorted(orbit))
    classes.sort(key=lambda c: (parent.element_order(c[0]), len(c), c[0]))
    return classes


def subgroup_predicates(parent: Group, H: SubgroupSet) -> dict:
    members = H.sorted_members
    orders = [parent.element_order(x) for x in members]
    is_cyclic = max(orders) == H.order
    gens = H.generators
    is_abelian = all(
        parent.mul(a, b) == parent.mul(b, a)
        for i, a in enumerate(gens) for b in gens[i + 1:]
    )
    pgens = parent.generator_indices or [x for x in range(1, parent.order)]
    is_normal = all(parent.conj(g, h) in H.members for g in pgens for h in gens)
    is_perfect = derived_subgroup(parent, H).members == H.members
    return {"is_cyclic": is_cyclic, "is_abelian": is_abelian,
            "is_normal": is_normal, "is_perfect": is_perfect}


def is_cyclic_set(parent: Group, members: Iterable[int]) -> bool:
    ms = list(members)
    return max(parent.element_order(x) for x in ms) == len(ms)


def conj_set(parent: Group, members: Iterable[int], g: int) -> frozenset:
    idx = np.fromiter((int(m) for m in members), dtype=np.int64)
    if parent.table is not None:
        t1 = np.asarray(parent.table[g, idx], dtype=np.int64)
        out = np.asarray(parent.table[t1, int(parent.inv[g])])
        return frozenset(int(i) for i in out)
    return frozenset(parent.conj(g, int(x)) for x in idx)


def normal_closure(parent: Group, seed: Iterable[int],
                   under_gens: Sequence[int]) -> frozenset:
    """Closure of `seed` under multiplication and conjugation by `under_gens`."""
    current = _closure_indices(parent, seed)
    while True:
        extra: set = set()
        for g in under_gens:
            extra |= conj_set(parent, current, g) - current
        if not extra:
            return current
        current = _closure_indices(parent, set(current) | extra)


def derived_subgroup(parent: Group, H: Optional[SubgroupSet] = None) -> SubgroupSet:
    if H is None:
        H = SubgroupSet(parent, range(parent.order))
    gens = H.generators
    comms = {parent.commutator(a, b) for a in gens for b in gens}
    return SubgroupSet(parent, normal_closure(parent, comms, gens))


def perfect_residual(parent: Group, H: Optional[SubgroupSet] = None) -> SubgroupSet:
    if H is None:
        H = SubgroupSet(parent, range(parent.order))
    current = H
    while True:
        nxt = derived_subgroup(parent, current)
        if nxt.members == current.members:
            return current
        current = nxt


def normalizer(parent: Group, H: SubgroupSet) -> SubgroupSet:
    gens = H.generators
    if not gens:
        return SubgroupSet(parent, range(parent.order))
    mask = np.ones(parent.order, dtype=bool)
    for h in gens:
        conj_idx = parent.conj_by_all(h)
        member_mask = np.zeros(parent.order, dtype=bool)
        member_mask[list(H.members)] = True
        mask &= member_mask[conj_idx]
    return SubgroupSet(parent, np.flatnonzero(mask))


def quotient_with_map(parent: Group, N: SubgroupSet) -> tuple:
    """Quotient group plus the element -> coset-id map and coset reps."""
    preds_normal = all(
        parent.conj(g, h) in N.members
        for g in (parent.generator_indices or range(1, parent.order))
        for h in N.generators
    )
    if not preds_normal:
        raise NotNormal(f"subgroup of order {N.order} is not normal")
    n = parent.order
    nq = n // N.order
    if nq > TABLE_CAP:
        raise CapExceeded(f"quotient of order {nq} exceeds table cap {TABLE_CAP}")
    coset_id = np.full(n, -1, dtype=np.int64)
    reps = []
    nmem = np.fromiter(sorted(N.members), dtype=np.int64)
    for i in range(n):
        if coset_id[i] >= 0:
            continue
        cid = len(reps)
        reps.append(i)
        coset_id[parent.mul_many(i, nmem)] = cid
    dtype = np.int16 if nq <= 32767 else np.int32
    table = np.empty((nq, nq), dtype=dtype)
    reps_arr = np.fromiter(reps, dtype=np.int64)
    for i in range(nq):
        table[i, :] = coset_id[parent.mul_many(reps[i], reps_arr)]
    gen_images = sorted({int(coset_id[g]) for g in parent.generator_indices
                         if coset_id[g] != 0})
    q = Group(table.copy(), gen_images or list(range(1, nq)), table=table)
    return q, coset_id, reps


def quotient(parent: Group, N: SubgroupSet) -> Group:
    """Group on the cosets of N, ordered by smallest member index."""
    return quotient_with_map(parent, N)[0]


def as_group(parent: Group, H: SubgroupSet) -> Group:
    """Materialize a subgroup as a Group (elements sorted by parent index)."""
    members = H.sorted_members
    m = len(members)
    pos = {x: i for i, x in enumerate(members)}
    dtype = np.int16 if m <= 32767 else np.int32
    if parent.table is not None or m <= TABLE_CAP:
        midx = np.fromiter(members, dtype=np.int64)
        table = np.empty((m, m), dtype=dtype)
        for i, x in enumerate(members):
            row = parent.mul_many(x, midx)
            table[i, :] = [pos[int(y)] for y in row]
        gens = [pos[g] for g in H.generators]
        return Group(table.copy(), gens or list(range(1, m)), table=table)
    perms = parent.perms[np.fromiter(members, dtype=np.int64)]
    gens = [pos[g] for g in H.generators]
    return Group(perms.copy(), gens or list(range(1, m)))


# ---------------------------------------------------------------------------
# Sylow machinery


def prime_factors(n: int) -> list[int]:
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


def p_part(n: int, p: int) -> int:
    pa = 1
    while n % (pa * p) == 0:
        pa *= p
    return pa


def sylow(parent: Group, p: int) -> SubgroupSet:
    """A Sylow p-subgroup, grown by normalizer ascent. Deterministic."""
    key = ("sylow", p)
    if key in parent._cache:
        return parent._cache[key]
    pa = p_part(parent.order, p)
    if pa == 1:
        result = SubgroupSet(parent, [0])
        parent._cache[key] = result
        return result
    orders = parent.element_orders
    seeds = [i for i in range(parent.order) if orders[i] % p == 0]
    for seed in seeds:
        x = parent.power(seed, parent.element_order(seed) // p)
        P = closure(parent, [x])
        stalled = False
        while P.order < pa:
            N = normalizer(parent, P)
            grown = False
            for y in N.sorted_members:
                oy = parent.element_order(y)
                if y not in P.members and oy == p_part(oy, p):
                    P = closure(parent, list(P.generators) + [y])
                    grown = True
                    break
            if not grown:
                stalled = True
                break
        if not stalled and P.order == pa:
            parent._cache[key] = P
            return P
    raise InternalInvariantViolation(f"Sylow {p}-subgroup construction stalled")


def p_core(parent: Group, p: int) -> SubgroupSet:
    """Largest normal p-subgroup: intersection of all conjugates of a Sylow p."""
    S = sylow(parent, p)
    if S.order == 1:
        return S
    gens = parent.generator_indices or list(range(1, parent.order))
    start = S.sorted_members
    seen = {start}
    queue = [start]
    core = set(start)
    head = 0
    while head < len(queue):
        T = queue[head]
        head += 1
        for g in gens:
            Tg = tuple(sorted(parent.conj(g, x) for x in T))
            if Tg not in seen:
                seen.add(Tg)
                queue.append(Tg)
                core &= set(Tg)
        if core == {0}:
            break
    return SubgroupSet(parent, core if core != {0} else [0])


def fitting(parent: Group) -> SubgroupSet:
    if "fitting" in parent._cache:
        return parent._cache["fitting"]
    pieces: set = {0}
    for p in prime_factors(parent.order):
        pieces |= p_core(parent, p).members
    result = closure(parent, pieces)
    parent._cache["fitting"] = result
    return result


# ---------------------------------------------------------------------------
# normal-subgroup lattice pieces


def class_closures(parent: Group, H: Optional[SubgroupSet] = None) -> list[frozenset]:
    """Normal closures <x^H> for one x per conjugacy class of H (H = whole group
    by default), deduplicated, sorted by (order, members)."""
    if H is None and "class_closures" in parent._cache:
        return parent._cache["class_closures"]
    if H is None:
        classes = conjugacy_classes(parent)
    else:
        classes = subgroup_conjugacy_classes(parent, H)
    out = {}
    for cls in classes:
        if cls == [0]:
            continue
        nc = _closure_indices(parent, cls)
        out[nc] = True
    result = sorted(out, key=lambda s: (len(s), tuple(sorted(s))))
    if H is None:
        parent._cache["class_closures"] = result
    return result


def minimal_normal_overgroups(parent: Group, T: frozenset,
                              closures: list[frozenset]) -> list[frozenset]:
    candidates = []
    for C in closures:
        if C <= T:
            continue
        join = _closure_indices(parent, T | C)
        candidates.append(join)
    if not candidates:
        return []
    m = min(len(c) for c in candidates)
    minimal = sorted({c for c in candidates if len(c) == m},
                     key=lambda s: tuple(sorted(s)))
    return minimal


def chief_factor_orders(parent: Group) -> list[int]:
    """Factor orders along one chief series (greedy smallest step)."""
    closures = class_closures(parent)
    T: frozenset = frozenset({0})
    factors = []
    while len(T) < parent.order:
        step = minimal_normal_overgroups(parent, T, closures)
        if not step:
            raise InternalInvariantViolation("chief series construction stalled")
        nxt = step[0]
        factors.append(len(nxt) // len(T))
        T = nxt
    return factors


def normal_subgroups(parent: Group, H: Optional[SubgroupSet] = None,
                     limit: int = 512) -> list[frozenset]:
    """All normal subgroups of H (default: the whole group), as joins of
    class closures. Guarded by `limit` against pathological lattices."""
    closures = class_closures(parent, H)
    total = parent.order if H is None else H.order
    known = {frozenset({0})} | set(closures)
    frontier = list(known)
    while frontier:
        new = []
        for A in frontier:
            for B in closures:
                if B <= A:
                    continue
                join = _closure_indices(parent, A | B)
                if join not in known:
                    known.add(join)
                    new.append(join)
                    if len(known) > limit:
                        raise CapExceeded("normal subgroup lattice too large")
        frontier = new
    return sorted(known, key=lambda s: (len(s), tuple(sorted(s))))


def is_simple_group(parent: Group) -> bool:
    if parent.order == 1:
        return False
    return all(len(c) == parent.order for c in class_closures(parent))


def _is_quasisimple_set(parent: Group, H: SubgroupSet) -> bool:
    if H.order == 1:
        return False
    if derived_subgroup(parent, H).members != H.members:
        return False
    Z = centralizer_within(parent, H.members, H.generators)
    if len(Z) == H.order:
        return False
    closures = class_closures(parent, H)
    for C in closures:
        if C <= Z:
            continue
        if _closure_indices(parent, C | Z) != H.members:
            return False
    return True


def generalized_fitting(parent: Group) -> dict:
    """Fitting subgroup, components, and F* = <F, components>.

    Components are the subnormal quasisimple subgroups; they are found inside
    the perfect residual, recursing through proper normal subgroups.
    Postcondition: the centralizer of F* lies inside F*.
    """
    if "fstar" in parent._cache:
        return parent._cache["fstar"]
    F = fitting(parent)
    memo: dict = {}

    def components_in(R: frozenset) -> list[frozenset]:
        if R in memo:
            return memo[R]
        result: list[frozenset] = []
        if len(R) > 1:
            Rsub = SubgroupSet(parent, R)
            if _is_quasisimple_set(parent, Rsub):
                result = [R]
            else:
                found = {}
                for M in normal_subgroups(parent, Rsub):
                    if len(M) in (1, len(R)):
                        continue
                    res = perfect_residual(parent, SubgroupSet(parent, M)).members
                    for K in components_in(res):
                        found[K] = True
                result = sorted(found, key=lambda s: (len(s), tuple(sorted(s))))
        memo[R] = result
        return result

    R0 = perfect_residual(parent).members
    comps = components_in(R0)
    pieces = set(F.members)
    for K in comps:
        pieces |= K
    fstar = closure(parent, pieces)
    cent = centralizer(parent, fstar if fstar.order > 1 else 0)
    if fstar.order > 1 and not cent.members <= fstar.members:
        raise InternalInvariantViolation("C(F*) is not contained in F*")
    result = {"fitting": F,
              "components": [SubgroupSet(parent, K) for K in comps],
              "fstar": fstar}
    parent._cache["fstar"] = result
    return result


def structure_tests(parent: Group) -> dict:
    if "structure" in parent._cache:
        return parent._cache["structure"]
    primes = prime_factors(parent.order)
    nilpotent = all(
        subgroup_predicates(parent, sylow(parent, p))["is_normal"]
        for p in primes
    )
    if nilpotent:
        supersoluble = True
    else:
        supersoluble = all(_is_prime(f) for f in chief_factor_orders(parent))
    simple = is_simple_group(parent)
    whole = SubgroupSet(parent, range(parent.order))
    quasisimple = _is_quasisimple_set(parent, whole)
    result = {"is_nilpotent": nilpotent, "is_supersoluble": supersoluble,
              "is_simple": simple, "is_quasisimple": quasisimple}
    parent._cache["structure"] = result
    return result


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# subgroup enumeration up to conjugacy


@dataclass
class SubgroupClass:
    representative: SubgroupSet
    class_size: int


def subgroups_up_to_conjugacy(parent: Group,
                              cap: int = ENUM_CAP_DEFAULT) -> list[SubgroupClass]:
    """One representative per conjugacy class of subgroups, with class sizes.

    Soluble subgroups arise by repeated prime-order cyclic extension; the
    remaining subgroups are towers over nontrivial perfect subgroups, which are
    joins of perfect residuals of 2-generated subgroups. Extension steps happen
    inside the normalizer of the current subgroup, so every subgroup is reached.
    """
    if parent.order > cap:
        raise CapExceeded(
            f"order {parent.order} exceeds enumeration cap {cap}")
    gens = parent.generator_indices or list(range(1, parent.order))
    seen: dict[frozenset, int] = {}
    classes: list[tuple[frozenset, int]] = []
    worklist: list[frozenset] = []

    def register(members: frozenset) -> None:
        if members in seen:
            return
        orbit = {members}
        queue = [members]
        head = 0
        while head < len(queue):
            T = queue[head]
            head += 1
            for g in gens:
                Tg = conj_set(parent, T, g)
                if Tg not in orbit:
                    orbit.add(Tg)
                    queue.append(Tg)
        rep = min(orbit, key=lambda s: tuple(sorted(s)))
        cid = len(classes)
        classes.append((rep, len(orbit)))
        for T in orbit:
            seen[T] = cid
        worklist.append(rep)

    register(frozenset({0}))
    for rep in class_representatives(parent):
        if rep != 0 and _is_prime(parent.element_order(rep)):
            register(_closure_indices(parent, [rep]))

    # nontrivial perfect subgroups: joins of residuals of 2-generated subgroups
    # (skipped when the whole group is soluble: subgroups are then soluble too)
    atoms: dict[frozenset, bool] = {}
    if perfect_residual(parent).order > 1:
        residual_of: dict[frozenset, frozenset] = {}
        for a in class_representatives(parent):
            if a == 0:
                continue
            for b in range(1, parent.order):
                H = _closure_indices(parent, [a, b])
                R = residual_of.get(H)
                if R is None:
                    R = perfect_residual(parent, SubgroupSet(parent, H)).members
                    residual_of[H] = R
                if len(R) > 1:
                    atoms[R] = True
    perfect_sets = dict(atoms)
    frontier = list(atoms)
    while frontier:
        new = []
        for A in frontier:
            for B in atoms:
                join = _closure_indices(parent, A | B)
                if join not in perfect_sets:
                    perfect_sets[join] = True
                    new.append(join)
        frontier = new
    for P in sorted(perfect_sets, key=lambda s: (len(s), tuple(sorted(s)))):
        register(P)

    head = 0
    while head < len(worklist):
        U = worklist[head]
        head += 1
        Usub = SubgroupSet(parent, U)
        N = normalizer(parent, Usub)
        for x in N.sorted_members:
            if x in U:
                continue
            k = 1
            power = x
            while power not in U:
                power = parent.mul(power, x)
                k += 1
            if _is_prime(k):
                register(_closure_indices(parent, set(U) | {x}))

    out = [SubgroupClass(SubgroupSet(parent, rep), size)
           for rep, size in classes]
    out.sort(key=lambda sc: (sc.representative.order,
                             sc.representative.sorted_members))
    return out


def all_subgroups_bruteforce(parent: Group) -> list[frozenset]:
    """Independent oracle: every subgroup, by saturating one-element extensions."""
    known = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        new = []
        for H in frontier:
            for x in range(1, parent.order):
                if x in H:
                    continue
                bigger = _closure_indices(parent, set(H) | {x})
                if bigger not in known:
                    known.add(bigger)
                    new.append(bigger)
        frontier = new
    return sorted(known, key=lambda s: (len(s), tuple(sorted(s))))


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class Fingerprint:
    order: int
    center_order: int
    derived_order: int
    abelianization_invariants: tuple
    element_order_multiset: tuple
    conjugacy_class_size_multiset: tuple
    is_perfect: bool
    is_simple_quotient_by_center: bool


def _abelian_invariant_factors(parent: Group) -> tuple:
    """Invariant factors of an abelian group from its element-order census.

    For each prime p, #{x : x^(p^j) = 1} = p^(sum min(lam_i, j)) determines the
    partition lam of the p-part; factors pair off largest-with-largest.
    """
    n = parent.order
    if n == 1:
        return ()
    orders = parent.element_orders.tolist()
    partitions: dict[int, list[int]] = {}
    for p in prime_factors(n):
        s_prev = 0
        col_counts = []
        j = 1
        while True:
            cnt = sum(1 for o in orders if (p ** j) % o == 0)
            s_j = round(math.log(cnt, p))
            col = s_j - s_prev
            if col == 0:
                break
            col_counts.append(col)
            s_prev = s_j
            j += 1
        partitions[p] = _conjugate_partition(col_counts)
    k = max(len(v) for v in partitions.values())
    factors = []
    for i in range(k):
        f = 1
        for p, lam in partitions.items():
            if i < len(lam):
                f *= p ** lam[i]
        factors.append(f)
    return tuple(sorted(factors))


def _conjugate_partition(cols: list[int]) -> list[int]:
    if not cols:
        return []
    lam = []
    for i in range(max(cols)):
        lam.append(sum(1 for c in cols if c > i))
    return sorted(lam, reverse=True)


def fingerprint(parent: Group) -> Fingerprint:
    if "fingerprint" in parent._cache:
        return parent._cache["fingerprint"]
    Z = center(parent)
    D = derived_subgroup(parent)
    orders = parent.element_orders
    order_counts: dict[int, int] = {}
    for o in orders.tolist():
        order_counts[o] = order_counts.get(o, 0) + 1
    classes = conjugacy_classes(parent)
    size_counts: dict[int, int] = {}
    for c in classes:
        size_counts[len(c)] = size_counts.get(len(c), 0) + 1
    ab = quotient(parent, D) if D.order > 1 else parent
    ab_invs = _abelian_invariant_factors(ab) if ab.order > 1 else ()
    is_perfect = D.order == parent.order
    if Z.order == 1:
        simple_mod_z = is_simple_group(parent)
    else:
        whole = SubgroupSet(parent, range(parent.order))
        closures = class_closures(parent)
        simple_mod_z = True
        for C in closures:
            if C <= Z.members:
                continue
            if _closure_indices(parent, C | Z.members) != whole.members:
                simple_mod_z = False
                break
    fp = Fingerprint(
        order=parent.order,
        center_order=Z.order,
        derived_order=D.order,
        abelianization_invariants=ab_invs,
        element_order_multiset=tuple(sorted(order_counts.items())),
        conjugacy_class_size_multiset=tuple(sorted(size_counts.items())),
        is_perfect=is_perfect,
        is_simple_quotient_by_center=simple_mod_z,
    )
    parent._cache["fingerprint"] = fp
    return fp
