"""Finite truncation towers approximating the infinite locally finite groups.

Three kinds are materialized as chains of finite groups with explicit
embeddings: cyclic p-power towers, 2-power towers extended by an inverting
element of order 2 (dihedral levels) or 4 (quaternion levels), and p-power
towers extended by a fixed-order unit action lifted coherently through the
levels. Per-level verification reruns the membership checkers and classifier
and confirms that centralizers taken in deeper levels stay inside subgroups
from earlier levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .engine import (
    Group,
    SubgroupSet,
    _closure_indices,
    centralizer_within,
    class_representatives,
    is_cyclic_set,
)
from .errors import CapExceeded, InternalInvariantViolation, InvalidParameter
from .gf import is_prime, smallest_primitive_root
from . import constructors as cons
from . import xcheck
from .classifier import classify

TOWER_KINDS = ("prufer", "prufer2_ext", "prufer_metacyclic")

EXPECTED_LABELS = {
    "prufer": "1.1",
    "prufer2_ext": "1.4",
    "prufer_metacyclic": "2.1.1",
}


@dataclass
class TowerSpec:
    kind: str
    depth: int
    p: int = 0
    d: int = 0
    y_order: int = 0

    def describe(self) -> str:
        if self.kind == "prufer":
            return f"prufer(p={self.p}) depth {self.depth}"
        if self.kind == "prufer2_ext":
            return f"prufer2_ext(y_order={self.y_order}) depth {self.depth}"
        return f"prufer_metacyclic(p={self.p}, d={self.d}) depth {self.depth}"


@dataclass
class TowerLevel:
    group: Group
    embedding: Optional[list] = None  # element index map into the next level


@dataclass
class TowerReport:
    spec: TowerSpec
    levels: list = field(default_factory=list)  # per-level dicts
    stabilization_ok: bool = True
    labels_constant: bool = True
    embeddings_ok: bool = True

    @property
    def all_is_x(self) -> bool:
        return all(lv["x_verdict"] == "IsX" for lv in self.levels)


def padic_unit(p: int, k: int, d: int) -> int:
    """Unit of multiplicative order exactly d modulo p^k, coherent under
    reduction between levels (successive levels agree mod p^(k-1))."""
    if not is_prime(p) or p == 2:
        raise InvalidParameter("p must be an odd prime")
    if k < 1 or d < 1 or (p - 1) % d != 0:
        raise InvalidParameter("d must divide p-1")
    if d == 1:
        return 1
    if k == 1:
        t = smallest_primitive_root(p)
        return pow(t, (p - 1) // d, p)
    t = smallest_primitive_root(p * p)
    mod = p ** k
    return pow(t, (p - 1) * p ** (k - 1) // d, mod)


def build_tower(spec: TowerSpec, cap: int = xcheck.BRUTE_CAP_DEFAULT) -> list[TowerLevel]:
    if spec.kind not in TOWER_KINDS:
        raise InvalidParameter(f"unknown tower kind {spec.kind!r}")
    if spec.depth < 1:
        raise InvalidParameter("depth must be at least 1")
    groups: list[Group] = []
    if spec.kind == "prufer":
        if not is_prime(spec.p):
            raise InvalidParameter("p must be prime")
        orders = [spec.p ** k for k in range(1, spec.depth + 1)]
        if orders[-1] > cap:
            raise CapExceeded(f"top level order {orders[-1]} exceeds cap {cap}")
        groups = [cons.basic_abelian([n]).group for n in orders]
        maps = [_cyclic_embedding(groups[i], groups[i + 1], spec.p)
                for i in range(len(groups) - 1)]
    elif spec.kind == "prufer2_ext":
        if spec.y_order not in (2, 4):
            raise InvalidParameter("y_order must be 2 or 4")
        if spec.y_order == 2:
            orders = [2 ** (k + 2) for k in range(1, spec.depth + 1)]
            if orders[-1] > cap:
                raise CapExceeded(f"top level order {orders[-1]} exceeds cap {cap}")
            groups = [cons.two_group("dihedral", n).group for n in orders]
        else:
            orders = [2 ** (k + 3) for k in range(1, spec.depth + 1)]
            if orders[-1] > cap:
                raise CapExceeded(f"top level order {orders[-1]} exceeds cap {cap}")
            groups = [cons.two_group("quaternion", n).group for n in orders]
        maps = [_two_ext_embedding(groups[i], groups[i + 1])
                for i in range(len(groups) - 1)]
    else:
        if not is_prime(spec.p) or spec.p == 2:
            raise InvalidParameter("p must be an odd prime")
        if spec.d < 2 or (spec.p - 1) % spec.d != 0:
            raise InvalidParameter("d must divide p-1 and exceed 1")
        orders = [spec.d * spec.p ** k for k in range(1, spec.depth + 1)]
        if orders[-1] > cap:
            raise CapExceeded(f"top level order {orders[-1]} exceeds cap {cap}")
        groups = [
            cons.metacyclic(spec.p ** k, spec.d,
                            padic_unit(spec.p, k, spec.d)).group
            for k in range(1, spec.depth + 1)]
        maps = [_metacyclic_embedding(groups[i], groups[i + 1], spec.p)
                for i in range(len(groups) - 1)]
    levels = [TowerLevel(groups[i], maps[i] if i < len(maps) else None)
              for i in range(len(groups))]
    for i in range(len(levels) - 1):
        _verify_embedding(groups[i], groups[i + 1], levels[i].embedding)
    return levels


def _embedding_from_generator_images(src: Group, dst: Group,
                                     gen_images: list[int]) -> list[int]:
    """Element map src -> dst determined by generator images, following the
    BFS words of the source group."""
    if len(gen_images) != len(src.generator_indices):
        raise InternalInvariantViolation("generator image count mismatch")
    out = [0] * src.order
    for x in range(1, src.order):
        p, gi = int(src.bfs_parent[x]), int(src.bfs_gen[x])
        out[x] = dst.mul(out[p], gen_images[gi])
    return out


def _cyclic_embedding(src: Group, dst: Group, p: int) -> list[int]:
    a_dst = dst.generator_indices[0]
    image = dst.power(a_dst, p)
    return _embedding_from_generator_images(src, dst, [image])


def _two_ext_embedding(src: Group, dst: Group) -> list[int]:
    # generators (a, y): a embeds as the square of the next level's rotation
    a_dst, y_dst = dst.generator_indices[0], dst.generator_indices[1]
    return _embedding_from_generator_images(
        src, dst, [dst.power(a_dst, 2), y_dst])


def _metacyclic_embedding(src: Group, dst: Group, p: int) -> list[int]:
    a_dst, y_dst = dst.generator_indices[0], dst.generator_indices[1]
    return _embedding_from_generator_images(
        src, dst, [dst.power(a_dst, p), y_dst])


def _verify_embedding(src: Group, dst: Group, emb: list[int]) -> None:
    if emb is None:
        return
    if len(set(emb)) != src.order:
        raise InternalInvariantViolation("embedding is not injective")
    for a in range(src.order):
        for b in range(src.order):
            if emb[src.mul(a, b)] != dst.mul(emb[a], emb[b]):
                raise InternalInvariantViolation("embedding is not a homomorphism")


def compose_embeddings(levels: list[TowerLevel], i: int, j: int) -> list[int]:
    """Composite element map from level i into level j (i < j)."""
    current = list(range(levels[i].group.order))
    for k in range(i, j):
        emb = levels[k].embedding
        current = [emb[x] for x in current]
    return current


def verify_tower(levels: list[TowerLevel], spec: TowerSpec,
                 cap: int = xcheck.BRUTE_CAP_DEFAULT) -> TowerReport:
    report = TowerReport(spec=spec)
    labels = []
    for i, lv in enumerate(levels):
        g = lv.group
        verdict = xcheck.is_x_bruteforce(g, cap=cap)
        case = classify(g, brute_cap=cap)
        labels.append(case.label)
        report.levels.append({
            "level": i + 1,
            "order": g.order,
            "x_verdict": verdict.result,
            "theorem_case": case.label,
            "embedding_ok": lv.embedding is not None or i == len(levels) - 1,
        })
    if len(labels) > 1 and len(set(labels[1:])) > 1:
        report.labels_constant = False
    expected = EXPECTED_LABELS[spec.kind]
    if labels and labels[-1] != expected:
        report.labels_constant = False
    # functoriality: pairwise compositions match direct stepping
    for i in range(len(levels) - 2):
        direct = compose_embeddings(levels, i, i + 2)
        step1 = levels[i].embedding
        step2 = levels[i + 1].embedding
        composed = [step2[x] for x in step1]
        if direct != composed:
            report.embeddings_ok = False
    # stabilization: centralizers taken in deeper levels stay inside the
    # image of every non-cyclic 2-generated subgroup from earlier levels
    report.stabilization_ok = _stabilization_check(levels)
    return report


def _stabilization_check(levels: list[TowerLevel]) -> bool:
    for i in range(len(levels) - 1):
        g = levels[i].group
        subgroups = _noncyclic_two_generated(g)
        for j in range(i + 1, len(levels)):
            emb = compose_embeddings(levels, i, j)
            deep = levels[j].group
            for H in subgroups:
                image = frozenset(emb[x] for x in H)
                img_sub = SubgroupSet(deep, image)
                cent = centralizer_within(
                    deep, range(deep.order), img_sub.generators)
                if not cent <= image:
                    return False
    return True


def _noncyclic_two_generated(g: Group) -> list[frozenset]:
    out = {}
    for a in class_representatives(g):
        if a == 0:
            continue
        for b in range(1, g.order):
            H = _closure_indices(g, [a, b])
            if H not in out and not is_cyclic_set(g, H):
                out[H] = True
    return sorted(out, key=lambda s: (len(s), tuple(sorted(s))))


def negative_control_levels(depth: int) -> list[Group]:
    """Dihedral groups of order 2 * 6^k: a quotient-style chain, not a
    subgroup tower. Level one is Dih(12), which fails the membership check."""
    return [cons.dihedral_group(2 * 6 ** k) for k in range(1, depth + 1)]
