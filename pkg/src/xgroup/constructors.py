"""Constructors for every group family the classifier knows about.

Each constructor returns a ConstructionRecord carrying the built Group (always
BFS-canonical: built through Group.from_generators), the family parameters, and
the case label the construction is expected to land in ("NotX-expected" for
deliberate negatives). Structural postconditions are asserted at build time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .engine import (
    ORDER_CAP,
    Group,
    SubgroupSet,
    as_group,
    center,
    centralizer,
    closure,
    fingerprint,
    find_generators,
    quotient,
    subgroup_predicates,
    sylow,
)
from .errors import (
    CapExceeded,
    ConstraintViolation,
    InternalInvariantViolation,
    InvalidParameter,
    SearchFailed,
)
from .gf import GF, is_prime, smallest_primitive_root

NOT_X = "NotX-expected"


@dataclass
class ConstructionRecord:
    family: str
    parameters: dict
    intended_case: str
    group: Group
    notes: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# small arithmetic helpers

def _require_prime(p: int, what: str = "p") -> None:
    if not is_prime(p):
        raise InvalidParameter(f"{what} = {p} is not prime")


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _mult_order(u: int, m: int) -> int:
    u %= m
    if math.gcd(u, m) != 1:
        raise InvalidParameter(f"{u} is not a unit mod {m}")
    x, k = u, 1
    while x != 1:
        x = (x * u) % m
        k += 1
    return k


# ---------------------------------------------------------------------------
# permutation building blocks

def _direct_sum_cycles(factors: list[int]) -> list[list[int]]:
    degree = sum(factors)
    gens = []
    offset = 0
    for n in factors:
        images = list(range(degree))
        for i in range(n):
            images[offset + i] = offset + (i + 1) % n
        gens.append(images)
        offset += n
    return gens


def metacyclic_perms(m: int, n: int, u: int) -> tuple[int, list[list[int]]]:
    """Faithful generators for C_m x| C_n, the C_n generator acting by x -> u*x.

    Points: 0..m-1 carry the cyclic kernel with the unit action; m..m+n-1 carry
    the acting factor regularly.
    """
    degree = m + n
    a = list(range(degree))
    for x in range(m):
        a[x] = (x + 1) % m
    y = list(range(degree))
    for x in range(m):
        y[x] = (u * x) % m
    for z in range(n):
        y[m + z] = m + (z + 1) % n
    return degree, [a, y]


def _regular_perms_from_model(elements: list, mul, gens: list) -> tuple[int, list[list[int]]]:
    """Left-regular permutations of abstract elements (hashable model tuples)."""
    pos = {e: i for i, e in enumerate(elements)}
    out = []
    for g in gens:
        out.append([pos[mul(g, e)] for e in elements])
    return len(elements), out


# ---------------------------------------------------------------------------
# basic families

def basic_abelian(invariant_factors: list[int]) -> ConstructionRecord:
    factors = [int(f) for f in invariant_factors]
    if not factors:
        group = Group.from_generators(1, [])
        return ConstructionRecord("basic_abelian", {"factors": []}, "1.1", group)
    if any(f < 2 for f in factors):
        raise InvalidParameter("factors must all be >= 2")
    order = math.prod(factors)
    if order > ORDER_CAP:
        raise CapExceeded(f"abelian order {order} exceeds cap {ORDER_CAP}")
    gens = _direct_sum_cycles(factors)
    group = Group.from_generators(sum(factors), gens)
    if group.order != order:
        raise InternalInvariantViolation("abelian direct product order mismatch")
    lcm = math.lcm(*factors)
    if lcm == order:
        intended = "1.1"
    elif len(factors) == 2 and factors[0] == factors[1] and is_prime(factors[0]):
        intended = "1.2"
    else:
        intended = NOT_X
    return ConstructionRecord("basic_abelian", {"factors": factors}, intended, group)


def two_group(kind: str, order: int) -> ConstructionRecord:
    if not _is_power_of_two(order):
        raise InvalidParameter(f"order {order} is not a power of 2")
    if kind == "dihedral":
        if order < 4:
            raise InvalidParameter("dihedral needs order >= 4")
        m = order // 2
        degree, gens = metacyclic_perms(m, 2, (m - 1) % m if m > 1 else 0)
        group = Group.from_generators(degree, gens)
    elif kind == "semidihedral":
        if order < 16:
            raise InvalidParameter("semidihedral needs order >= 16")
        m = order // 2
        degree, gens = metacyclic_perms(m, 2, m // 2 - 1)
        group = Group.from_generators(degree, gens)
    elif kind == "quaternion":
        if order < 8:
            raise InvalidParameter("quaternion needs order >= 8")
        m = order // 2
        elements = [(i, j) for j in range(2) for i in range(m)]

        def qmul(g, e):
            i, j = g
            k, l = e
            if j == 0:
                return ((i + k) % m, l)
            if l == 0:
                return ((i - k) % m, 1)
            return ((i - k + m // 2) % m, 0)

        degree, gens = _regular_perms_from_model(
            elements, qmul, [(1, 0), (0, 1)])
        group = Group.from_generators(degree, gens)
    else:
        raise InvalidParameter(f"unknown 2-group kind {kind!r}")
    if group.order != order:
        raise InternalInvariantViolation(f"{kind} construction order mismatch")
    return ConstructionRecord("two_group", {"kind": kind, "order": order},
                              "1.4", group)


def dihedral_group(order: int) -> Group:
    """Dihedral group of any even order >= 4 (reference object for fingerprints)."""
    if order % 2 or order < 4:
        raise InvalidParameter("dihedral order must be even and >= 4")
    m = order // 2
    degree, gens = metacyclic_perms(m, 2, (m - 1) % m if m > 1 else 0)
    return Group.from_generators(degree, gens)


def _heisenberg_elements(p: int) -> list:
    return [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]


def _heis_mul(p: int):
    def mul(g, e):
        a, b, c = g
        x, y, z = e
        return ((a + x) % p, (b + y) % p, (c + z + a * y) % p)
    return mul


def extraspecial(p: int, exponent_kind: str) -> ConstructionRecord:
    _require_prime(p)
    if p == 2:
        raise InvalidParameter("p = 2 is covered by two_group")
    if p ** 3 > ORDER_CAP:
        raise CapExceeded(f"{p}^3 exceeds cap {ORDER_CAP}")
    if exponent_kind == "p":
        elements = _heisenberg_elements(p)
        degree, gens = _regular_perms_from_model(
            elements, _heis_mul(p), [(1, 0, 0), (0, 1, 0)])
        group = Group.from_generators(degree, gens)
    elif exponent_kind == "p_squared":
        degree, gens = metacyclic_perms(p * p, p, 1 + p)
        group = Group.from_generators(degree, gens)
    else:
        raise InvalidParameter(f"unknown exponent kind {exponent_kind!r}")
    if group.order != p ** 3:
        raise InternalInvariantViolation("extraspecial order mismatch")
    z = center(group)
    d = closure(group, [group.commutator(a, b)
                        for a in group.generator_indices
                        for b in group.generator_indices])
    if z.order != p or not d.members <= z.members:
        raise InternalInvariantViolation("extraspecial center/derived mismatch")
    return ConstructionRecord(
        "extraspecial", {"p": p, "exponent_kind": exponent_kind}, "1.3", group)


def sym_alt(n: int, alternating: bool) -> ConstructionRecord:
    if not 2 <= n <= 7:
        raise InvalidParameter("degree must be between 2 and 7")
    if alternating:
        if n == 2:
            group = Group.from_generators(2, [])
        elif n == 3:
            group = Group.from_generators(3, [[1, 2, 0]])
        else:
            three_cycle = [1, 2, 0] + list(range(3, n))
            if n % 2 == 1:
                cycle = list(range(1, n)) + [0]
            else:
                cycle = [0] + list(range(2, n)) + [1]
            group = Group.from_generators(n, [three_cycle, cycle])
        expected = math.factorial(n) // 2 if n > 2 else 1
    else:
        if n == 2:
            group = Group.from_generators(2, [[1, 0]])
        else:
            transposition = [1, 0] + list(range(2, n))
            cycle = list(range(1, n)) + [0]
            group = Group.from_generators(n, [transposition, cycle])
        expected = math.factorial(n)
    if group.order != expected:
        raise InternalInvariantViolation("sym/alt order mismatch")
    if (n, alternating) in ((4, False), (4, True)):
        intended = "3.1.1"
    elif alternating and n in (2, 3):
        intended = "1.1"
    elif (n, alternating) == (2, False):
        intended = "1.1"
    elif (n, alternating) == (3, False):
        intended = "2.1.1"
    elif alternating and n in (5, 6):
        intended = "4.2"
    else:
        intended = NOT_X
    return ConstructionRecord(
        "sym_alt", {"n": n, "alternating": alternating}, intended, group)


# ---------------------------------------------------------------------------
# matrix machinery over GF(q)

Mat = tuple  # (a, b, c, d) row-major for [[a, b], [c, d]]

MAT_Q_ALLOWED = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 25, 49)


def mat_identity() -> Mat:
    return (1, 0, 0, 1)


def mat_mul(F: GF, M: Mat, N: Mat) -> Mat:
    a, b, c, d = M
    e, f_, g, h = N
    return (
        F.add(F.mul(a, e), F.mul(b, g)),
        F.add(F.mul(a, f_), F.mul(b, h)),
        F.add(F.mul(c, e), F.mul(d, g)),
        F.add(F.mul(c, f_), F.mul(d, h)),
    )


def mat_det(F: GF, M: Mat) -> int:
    a, b, c, d = M
    return F.sub(F.mul(a, d), F.mul(b, c))


def mat_scale(F: GF, s: int, M: Mat) -> Mat:
    return tuple(F.mul(s, x) for x in M)


def mat_add(F: GF, M: Mat, N: Mat) -> Mat:
    return tuple(F.add(x, y) for x, y in zip(M, N))


def mat_neg(F: GF, M: Mat) -> Mat:
    return tuple(F.neg(x) for x in M)


def mat_pow(F: GF, M: Mat, n: int) -> Mat:
    result = mat_identity()
    base = M
    while n:
        if n & 1:
            result = mat_mul(F, result, base)
        base = mat_mul(F, base, base)
        n >>= 1
    return result


def mat_order(F: GF, M: Mat, limit: int = 10 ** 6) -> int:
    x, k = M, 1
    while x != mat_identity():
        x = mat_mul(F, x, M)
        k += 1
        if k > limit:
            raise InternalInvariantViolation("matrix order runaway")
    return k


def mat_close(F: GF, gens: list[Mat], cap: int = ORDER_CAP) -> list[Mat]:
    ident = mat_identity()
    elements = [ident]
    seen = {ident}
    head = 0
    while head < len(elements):
        cur = elements[head]
        head += 1
        for g in gens:
            new = mat_mul(F, cur, g)
            if new not in seen:
                if len(elements) >= cap:
                    raise CapExceeded("matrix closure exceeds cap")
                seen.add(new)
                elements.append(new)
    return elements


def _vector_perm(F: GF, M: Mat) -> list[int]:
    """Permutation of the q^2-1 nonzero column vectors under v -> M v."""
    q = F.q
    images = []
    idx = {}
    vecs = []
    for u in range(q):
        for v in range(q):
            if u == 0 and v == 0:
                continue
            idx[(u, v)] = len(vecs)
            vecs.append((u, v))
    a, b, c, d = M
    for (u, v) in vecs:
        w = (F.add(F.mul(a, u), F.mul(b, v)), F.add(F.mul(c, u), F.mul(d, v)))
        images.append(idx[w])
    return images


def _projective_perm(F: GF, M: Mat) -> list[int]:
    """Permutation of the q+1 projective points [x:1] (id x) and [1:0] (id q)."""
    q = F.q
    a, b, c, d = M
    images = []
    for x in range(q):
        num = F.add(F.mul(a, x), b)
        den = F.add(F.mul(c, x), d)
        images.append(F.mul(num, F.inv(den)) if den != 0 else q)
    num, den = a, c
    images.append(F.mul(num, F.inv(den)) if den != 0 else q)
    return images


def _sl2_generator_mats(F: GF) -> list[Mat]:
    # unipotent [[1, w^k], [0, 1]] per basis monomial (w^k encodes as p^k),
    # plus the rotation [[0, -1], [1, 0]]
    mats = [(1, F.p ** k, 0, 1) for k in range(F.degree)]
    mats.append((0, F.neg(1), 1, 0))
    return mats


def matrix_group(kind: str, q: int) -> ConstructionRecord:
    if q not in MAT_Q_ALLOWED:
        raise InvalidParameter(f"q = {q} not supported")
    F = GF(q)
    sl_order = q * (q * q - 1)
    gl_order = sl_order * (q - 1)
    psl_order = sl_order // math.gcd(2, q - 1)
    if kind == "SL2":
        if sl_order > ORDER_CAP:
            raise CapExceeded(f"|SL2({q})| = {sl_order} exceeds cap")
        gens = [_vector_perm(F, M) for M in _sl2_generator_mats(F)]
        group = Group.from_generators(q * q - 1, gens)
        expected = sl_order
    elif kind == "GL2":
        if gl_order > ORDER_CAP:
            raise CapExceeded(f"|GL2({q})| = {gl_order} exceeds cap")
        mats = _sl2_generator_mats(F) + [(F.generator(), 0, 0, 1)]
        gens = [_vector_perm(F, M) for M in mats]
        group = Group.from_generators(q * q - 1, gens)
        expected = gl_order
    elif kind == "PSL2":
        if psl_order > ORDER_CAP:
            raise CapExceeded(f"|PSL2({q})| = {psl_order} exceeds cap")
        gens = [_projective_perm(F, M) for M in _sl2_generator_mats(F)]
        group = Group.from_generators(q + 1, gens)
        expected = psl_order
    else:
        raise InvalidParameter(f"unknown matrix group kind {kind!r}")
    if group.order != expected:
        raise InternalInvariantViolation(f"{kind}({q}) order mismatch")
    if kind == "PSL2":
        p = q
        if is_prime(p) and (_is_fermat_prime(p) or _is_mersenne_prime(p)):
            intended = "4.2"
        elif q in (4, 5, 9):
            intended = "4.2"
        elif q in (2, 3):
            intended = "3.1.1" if q == 3 else "2.1.1"
        else:
            intended = NOT_X
    elif kind == "SL2":
        if q == 3:
            intended = "3.2.1"
        elif q in (2,):
            intended = "2.1.1"
        elif q in (4,):
            intended = "4.2"
        elif is_prime(q) and _is_fermat_prime(q):
            intended = "4.1"
        else:
            intended = NOT_X
    else:
        intended = NOT_X
    return ConstructionRecord("matrix_group", {"kind": kind, "q": q},
                              intended, group)


def pgl2(q: int) -> ConstructionRecord:
    """PGL2(q) on the projective line. A deliberate negative for odd q."""
    if q not in MAT_Q_ALLOWED:
        raise InvalidParameter(f"q = {q} not supported")
    F = GF(q)
    expected = q * (q * q - 1)
    if expected > ORDER_CAP:
        raise CapExceeded(f"|PGL2({q})| = {expected} exceeds cap")
    mats = _sl2_generator_mats(F) + [(F.generator(), 0, 0, 1)]
    gens = [_projective_perm(F, M) for M in mats]
    group = Group.from_generators(q + 1, gens)
    if group.order != expected:
        raise InternalInvariantViolation("PGL2 order mismatch")
    intended = NOT_X if q % 2 else ("4.2" if q in (4,) else NOT_X)
    return ConstructionRecord("pgl2", {"q": q}, intended, group)


def _is_fermat_prime(p: int) -> bool:
    if not is_prime(p):
        return False
    m = p - 1
    return m >= 1 and (m & (m - 1)) == 0


def _is_mersenne_prime(p: int) -> bool:
    if not is_prime(p):
        return False
    m = p + 1
    return (m & (m - 1)) == 0


# ---------------------------------------------------------------------------
# SL2(p).2 (nonsplit extension by the diagonal outer automorphism)

def sl2p_dot2(p: int) -> ConstructionRecord:
    if p not in (3, 5, 17):
        raise InvalidParameter("p must be one of 3, 5, 17")
    expected = 2 * p * (p * p - 1)
    if expected > ORDER_CAP:
        raise CapExceeded(f"order {expected} exceeds cap")
    F = GF(p)
    u = next(x for x in range(2, p) if all(
        (y * y) % p != x for y in range(1, p)))
    nv = p * p - 1  # nonzero vectors of GF(p)^2

    vec_idx = {}
    vecs = []
    for a in range(p):
        for b in range(p):
            if (a, b) != (0, 0):
                vec_idx[(a, b)] = len(vecs)
                vecs.append((a, b))

    def act(M: Mat, v):
        a, b, c, d = M
        return ((a * v[0] + b * v[1]) % p, (c * v[0] + d * v[1]) % p)

    u_inv = pow(u, -1, p)

    def mat_perm(M: Mat) -> list[int]:
        # block 0..nv-1 is X; block nv..2nv-1 is theta*X, where conjugation
        # by theta twists the matrix entries by u
        images = [0] * (2 * nv)
        Msigma = (M[0], (M[1] * u_inv) % p, (M[2] * u) % p, M[3])
        for i, v in enumerate(vecs):
            images[i] = vec_idx[act(M, v)]
            images[nv + i] = nv + vec_idx[act(Msigma, v)]
        return images

    def theta_perm() -> list[int]:
        images = [0] * (2 * nv)
        W = (u, 0, 0, u_inv)
        for i, v in enumerate(vecs):
            images[i] = nv + i
            images[nv + i] = vec_idx[act(W, v)]
        return images

    T = (1, 1, 0, 1)
    S = (0, (p - 1) % p, 1, 0)
    gens = [mat_perm(T), mat_perm(S), theta_perm()]
    group = Group.from_generators(2 * nv, gens)
    if group.order != expected:
        raise InternalInvariantViolation("sl2p_dot2 order mismatch")

    inner = closure(group, [group.generator_indices[0],
                            group.generator_indices[1]])
    if inner.order != p * (p * p - 1):
        raise InternalInvariantViolation("inner SL2 subgroup has wrong order")
    outer_orders = {group.element_order(i)
                    for i in range(group.order) if i not in inner.members}
    if 2 in outer_orders:
        raise InternalInvariantViolation("outer coset contains an involution")

    syl2 = sylow(group, 2)
    ref = two_group("quaternion", syl2.order).group
    if fingerprint(as_group(group, syl2)) != fingerprint(ref):
        raise InternalInvariantViolation("Sylow 2-subgroup is not quaternion")

    intended = "3.2.1" if p == 3 else "4.1"
    return ConstructionRecord("sl2p_dot2", {"p": p}, intended, group)


# ---------------------------------------------------------------------------
# the degree-10 sharply 3-transitive group of order 720

def m10() -> ConstructionRecord:
    F = GF(9)
    sl_mats = _sl2_generator_mats(F)
    psl_gens = [_projective_perm(F, M) for M in sl_mats]
    delta = _projective_perm(F, (F.generator(), 0, 0, 1))
    q = F.q
    frob = [F.frobenius(x) for x in range(q)] + [q]
    pgamma = Group.from_generators(10, psl_gens + [delta, frob])
    if pgamma.order != 1440:
        raise InternalInvariantViolation("semilinear projective group order mismatch")
    psl_idx = [pgamma.index_of(tuple(g)) for g in psl_gens]
    psl = closure(pgamma, psl_idx)
    if psl.order != 360:
        raise InternalInvariantViolation("PSL2(9) subgroup order mismatch")

    reps = []
    for x in range(pgamma.order):
        if x in psl.members:
            continue
        if all(pgamma.mul(int(pgamma.inv[r]), x) not in psl.members
               for r in reps):
            reps.append(x)
        if len(reps) == 3:
            break
    candidates = []
    for r in reps:
        members = set(psl.members)
        members.update(pgamma.mul(r, m) for m in psl.members)
        orders = {pgamma.element_order(i) for i in members}
        candidates.append((members, orders))
    chosen = [m for m, orders in candidates
              if 8 in orders and 10 not in orders
              and orders != {1, 2, 3, 4, 5, 6}]
    if len(chosen) != 1:
        raise InternalInvariantViolation(
            f"index-2 overgroup selection matched {len(chosen)} candidates")
    members = sorted(chosen[0])
    gens = find_generators(pgamma, tuple(members))
    group = Group.from_generators(
        10, [tuple(int(t) for t in pgamma.perms[g]) for g in gens])
    if group.order != 720:
        raise InternalInvariantViolation("order-720 subgroup mismatch")
    return ConstructionRecord("m10", {}, "4.2", group)


# ---------------------------------------------------------------------------
# metacyclic families

def metacyclic(m: int, n: int, u: int) -> ConstructionRecord:
    if m < 1 or n < 1:
        raise InvalidParameter("m, n must be positive")
    u %= m if m > 1 else 1
    if m > 1 and math.gcd(u, m) != 1:
        raise InvalidParameter(f"gcd(u, m) = {math.gcd(u, m)} != 1")
    if m > 1 and pow(u, n, m) != 1:
        raise InvalidParameter(f"u^n = {pow(u, n, m)} != 1 (mod m)")
    if m * n > ORDER_CAP:
        raise CapExceeded(f"order {m * n} exceeds cap {ORDER_CAP}")
    degree, gens = metacyclic_perms(m, n, u if m > 1 else 0)
    group = Group.from_generators(degree, gens)
    if group.order != m * n:
        raise InternalInvariantViolation("metacyclic order mismatch")
    intended = _metacyclic_intended_case(group, m, n, u)
    return ConstructionRecord(
        "metacyclic", {"m": m, "n": n, "u": u}, intended, group)


def _metacyclic_intended_case(group: Group, m: int, n: int, u: int) -> str:
    if m == 1 or u == 1:
        # abelian: C_m x C_n
        if math.gcd(m, n) == 1:
            return "1.1"
        if m == n and is_prime(m):
            return "1.2"
        return NOT_X
    from .engine import structure_tests
    if structure_tests(group)["is_nilpotent"]:
        return _nilpotent_intended(group)
    if all(math.gcd(pow(u, k, m) - 1, m) == 1 for k in range(1, n)):
        return "2.1.1"
    ord_u = _mult_order(u, m)
    from . import xcheck  # cycle-free: xcheck only uses the engine
    if 1 < ord_u < n and math.gcd(u - 1, m) == 1:
        primes_m = [p for p in range(2, m + 1) if is_prime(p) and m % p == 0]
        primes_n = [p for p in range(2, n + 1) if is_prime(p) and n % p == 0]
        q = min(primes_m + primes_n)
        n_is_q_power = len(primes_n) == 1 and primes_n[0] == q
        if n_is_q_power and math.gcd(m, q) == 1:
            z = center(group)
            if 1 < z.order < n:
                gq = quotient(group, z)
                if xcheck.frobenius_structure(gq) is not None:
                    return "2.1.3"
    return NOT_X


def _nilpotent_intended(group: Group) -> str:
    """Intended case for a nilpotent construction: cyclic, elementary abelian
    of rank 2, odd extraspecial of order p^3, or a 2-group of the listed
    shapes; anything else is a deliberate negative."""
    n = group.order
    from .engine import prime_factors
    if int(group.element_orders.max()) == n:
        return "1.1"
    primes = prime_factors(n)
    if len(primes) != 1:
        return NOT_X
    p = primes[0]
    if n == p * p and all(int(o) in (1, p) for o in group.element_orders):
        return "1.2"
    if p % 2 == 1 and n == p ** 3:
        z = center(group)
        if z.order == p:
            return "1.3"
        return NOT_X
    if p == 2 and n >= 8:
        fp = fingerprint(group)
        for kind, min_order in (("dihedral", 8), ("semidihedral", 16),
                                ("quaternion", 8)):
            if n >= min_order and fp == fingerprint(two_group(kind, n).group):
                return "1.4"
    return NOT_X


def quaternion_metacyclic(m: int, quaternion_order: int) -> ConstructionRecord:
    if m < 3 or m % 2 == 0:
        raise InvalidParameter("m must be odd and >= 3")
    if quaternion_order < 8 or not _is_power_of_two(quaternion_order):
        raise InvalidParameter("quaternion order must be a 2-power >= 8")
    if m * quaternion_order > ORDER_CAP:
        raise CapExceeded("order exceeds cap")
    half = quaternion_order // 2

    def qmul(a, b):
        i, j = a
        k, l = b
        if j == 0:
            return ((i + k) % half, l)
        if l == 0:
            return ((i - k) % half, 1)
        return ((i - k + half // 2) % half, 0)

    q_elements = [(i, j) for j in range(2) for i in range(half)]
    q_pos = {e: i for i, e in enumerate(q_elements)}
    degree = m + quaternion_order

    def embed(translate: int, q_elt) -> list[int]:
        images = list(range(degree))
        sign = 1 if q_elt[1] == 0 else -1
        for x in range(m):
            images[x] = (translate + sign * x) % m
        for i, e in enumerate(q_elements):
            images[m + i] = m + q_pos[qmul(q_elt, e)]
        return images

    t = embed(1, (0, 0))
    alpha = embed(0, (1, 0))
    beta = embed(0, (0, 1))
    group = Group.from_generators(degree, [t, alpha, beta])
    if group.order != m * quaternion_order:
        raise InternalInvariantViolation("quaternion metacyclic order mismatch")

    c_sub = closure(group, [group.generator_indices[0]])
    cent = centralizer(group, c_sub)
    if cent.order != m * half:
        raise InternalInvariantViolation("centralizer of C has wrong order")
    preds = subgroup_predicates(group, cent)
    if not preds["is_cyclic"]:
        raise InternalInvariantViolation("C x D0 is not cyclic")
    d0 = closure(group, [group.generator_indices[1]])
    qgrp = quotient(group, d0)
    if fingerprint(qgrp) != fingerprint(dihedral_group(2 * m)):
        raise InternalInvariantViolation("G/D0 is not dihedral")
    return ConstructionRecord(
        "quaternion_metacyclic",
        {"m": m, "quaternion_order": quaternion_order}, "2.1.2", group)


# ---------------------------------------------------------------------------
# affine Frobenius groups GF(p)^2 x| G0

def _affine_group(p: int, linear_mats: list[Mat], F: GF) -> Group:
    degree = p * p

    def translation(dx: int, dy: int) -> list[int]:
        return [((x + dx) % p) * p + ((y + dy) % p)
                for x in range(p) for y in range(p)]

    def linear(M: Mat) -> list[int]:
        a, b, c, d = M
        return [((a * x + b * y) % p) * p + ((c * x + d * y) % p)
                for x in range(p) for y in range(p)]

    gens = [translation(1, 0), translation(0, 1)] + [linear(M) for M in linear_mats]
    return Group.from_generators(degree, gens)


def _check_fixed_point_free(p: int, mats: list[Mat]) -> None:
    for M in mats:
        if M == mat_identity():
            continue
        a, b, c, d = M
        for x in range(p):
            for y in range(p):
                if (x, y) == (0, 0):
                    continue
                if (a * x + b * y) % p == x and (c * x + d * y) % p == y:
                    raise InternalInvariantViolation(
                        "complement element fixes a nonzero vector")


def _find_anticommuting_pair(p: int) -> tuple[Mat, Mat]:
    """Deterministic X, Y with X^2 = Y^2 = -I and XY = -YX in GL2(p)."""
    F = GF(p)
    neg_i = (F.neg(1), 0, 0, F.neg(1))
    X = None
    for a in range(p):
        for b in range(p):
            for c in range(p):
                M = (a, b, c, F.neg(a))
                if mat_mul(F, M, M) == neg_i:
                    X = M
                    break
            if X:
                break
        if X:
            break
    if X is None:
        raise SearchFailed("no square root of -I found")
    for a in range(p):
        for b in range(p):
            for c in range(p):
                Y = (a, b, c, F.neg(a))
                if mat_mul(F, Y, Y) != neg_i:
                    continue
                if mat_mul(F, X, Y) == mat_neg(F, mat_mul(F, Y, X)) \
                        and mat_mul(F, X, Y) != mat_mul(F, Y, X):
                    return X, Y
    raise SearchFailed("no anticommuting partner found")


def _sl23_mats(p: int) -> list[Mat]:
    F = GF(p)
    X, Y = _find_anticommuting_pair(p)
    inv2 = F.inv(2)
    rho = mat_scale(F, inv2, mat_add(
        F, mat_add(F, mat_neg(F, mat_identity()), X),
        mat_add(F, Y, mat_mul(F, X, Y))))
    if mat_pow(F, rho, 3) != mat_identity() or rho == mat_identity():
        raise SearchFailed("order-3 unit search failed")
    return [X, rho]


def _torus_generator(F2: GF, p: int) -> Mat:
    """Multiplication by a generator of GF(p^2)* as a GF(p)-matrix
    in the basis (1, w)."""
    g = F2.generator()
    w = p  # encoding of the degree-1 basis monomial
    gw = F2.mul(g, w)
    return (g % p, gw % p, g // p, gw // p)


def _mult_matrix(F2: GF, p: int, z: int) -> Mat:
    w = p
    zw = F2.mul(z, w)
    return (z % p, zw % p, z // p, zw // p)


def _frobenius_matrix(F2: GF, p: int) -> Mat:
    wp = F2.frobenius(p)
    return (1, wp % p, 0, wp // p)


def _quaternion_mats(p: int, two_n: int) -> list[Mat]:
    """Generalized quaternion subgroup of GL2(p) of order 2^n."""
    F = GF(p)
    half = two_n // 2
    if (p - 1) % half == 0:
        g = smallest_primitive_root(p)
        lam = pow(g, (p - 1) // half, p)
        A = (lam, 0, 0, pow(lam, -1, p))
        B = (0, 1, F.neg(1), 0)
        return [A, B]
    if (p + 1) % half == 0:
        F2 = GF(p * p)
        C = _torus_generator(F2, p)
        A = mat_pow(F, C, (p * p - 1) // half)
        g2 = F2.generator()
        u = F2.pow(g2, (p - 1) // 2)
        B = mat_mul(F, _mult_matrix(F2, p, u), _frobenius_matrix(F2, p))
        return [A, B]
    raise ConstraintViolation(
        f"2^n = {two_n} does not divide p^2 - 1 = {p * p - 1} compatibly",
        condition="2^n divides p^2-1")


def affine_frobenius(p: int, complement_kind: tuple) -> ConstructionRecord:
    _require_prime(p)
    if p == 2:
        raise InvalidParameter("p must be odd")
    F = GF(p)
    kind = complement_kind[0]
    params: dict = {"p": p, "complement": kind}

    if kind == "cyclic":
        m = complement_kind[1]
        params["m"] = m
        if m < 2 or (p * p - 1) % m != 0:
            raise ConstraintViolation(
                f"m = {m} does not divide p^2-1 = {p * p - 1}",
                condition="|G0| divides p^2-1")
        if (p - 1) % m == 0:
            raise ConstraintViolation(
                f"m = {m} divides p-1 = {p - 1}",
                condition="|G0| does not divide p-1")
        F2 = GF(p * p)
        C = _torus_generator(F2, p)
        mats = [mat_pow(F, C, (p * p - 1) // m)]
        expected_g0 = m
        intended = "3.1.2.1"
    elif kind == "quaternion":
        two_n = complement_kind[1]
        params["quaternion_order"] = two_n
        if two_n < 8 or not _is_power_of_two(two_n):
            raise InvalidParameter("quaternion order must be a 2-power >= 8")
        if (p * p - 1) % two_n != 0:
            raise ConstraintViolation(
                f"2^n = {two_n} does not divide p^2-1 = {p * p - 1}",
                condition="2^n divides p^2-1")
        mats = _quaternion_mats(p, two_n)
        expected_g0 = two_n
        intended = "3.1.2.2"
    elif kind == "case_2_1_2":
        m, two_n = complement_kind[1], complement_kind[2]
        params["m"], params["quaternion_order"] = m, two_n
        eps = 1 if p % 4 == 1 else -1
        params["eps"] = eps
        if m < 3 or m % 2 == 0:
            raise InvalidParameter("m must be odd >= 3")
        if two_n < 8 or not _is_power_of_two(two_n):
            raise InvalidParameter("quaternion order must be a 2-power >= 8")
        if (p - eps) % m != 0:
            raise ConstraintViolation(
                f"m = {m} does not divide p - ({eps}) = {p - eps}",
                condition="|C| divides p-eps where p = eps (mod 4)")
        half = two_n // 2
        if (p - eps) % half != 0:
            raise ConstraintViolation(
                f"2^(n-1) = {half} does not divide p - ({eps})",
                condition="D0 embeds in the same torus as C")
        if eps == 1:
            g = smallest_primitive_root(p)
            zeta = pow(g, (p - 1) // m, p)
            cgen = (zeta, 0, 0, pow(zeta, -1, p))
            lam = pow(g, (p - 1) // half, p)
            A = (lam, 0, 0, pow(lam, -1, p))
            B = (0, 1, F.neg(1), 0)
        else:
            F2 = GF(p * p)
            C = _torus_generator(F2, p)
            cgen = mat_pow(F, C, (p * p - 1) // m)
            A = mat_pow(F, C, (p * p - 1) // half)
            g2 = F2.generator()
            u = F2.pow(g2, (p - 1) // 2)
            B = mat_mul(F, _mult_matrix(F2, p, u), _frobenius_matrix(F2, p))
        mats = [cgen, A, B]
        expected_g0 = m * two_n
        intended = "3.1.2.3"
    elif kind == "case_2_1_3":
        m, two_n = complement_kind[1], complement_kind[2]
        params["m"], params["d_order"] = m, two_n
        if m < 3 or m % 2 == 0:
            raise ConstraintViolation(
                f"m = {m} must be odd > 1",
                condition="|C| odd dividing p-1 or p+1")
        if (p - 1) % m != 0 and (p + 1) % m != 0:
            raise ConstraintViolation(
                f"m = {m} divides neither p-1 nor p+1",
                condition="|C| odd dividing p-1 or p+1")
        if two_n < 4 or not _is_power_of_two(two_n):
            raise InvalidParameter("acting 2-group must have order >= 4")
        half = two_n // 2
        if (p - 1) % half != 0:
            raise ConstraintViolation(
                f"2^(n-1) = {half} does not divide p-1 = {p - 1}",
                condition="the central 2-part embeds as scalars")
        g = smallest_primitive_root(p)
        v = pow(g, (p - 1) // half, p)
        if (p - 1) % m == 0:
            zeta = pow(g, (p - 1) // m, p)
            cgen = (zeta, 0, 0, pow(zeta, -1, p))
            d = (0, 1, v, 0)
        else:
            F2 = GF(p * p)
            C = _torus_generator(F2, p)
            cgen = mat_pow(F, C, (p * p - 1) // m)
            g2 = F2.generator()
            # u with norm v: N(g2^k) = g2^(k(p+1))
            k = next(k for k in range(p * p - 1)
                     if F2.pow(g2, k * (p + 1)) == v % p)
            u = F2.pow(g2, k)
            d = mat_mul(F, _mult_matrix(F2, p, u), _frobenius_matrix(F2, p))
        mats = [cgen, d]
        expected_g0 = m * two_n
        intended = "3.1.2.4"
    elif kind == "sl2_3":
        if p < 5:
            raise ConstraintViolation("p must be at least 5", condition="p >= 5")
        mats = _sl23_mats(p)
        expected_g0 = 24
        intended = "3.1.2.5"
    elif kind == "sl2_3_dot2":
        if p % 8 not in (1, 7):
            raise ConstraintViolation(
                f"p = {p} is not +-1 mod 8", condition="p ≡ ±1 (mod 8)")
        X, rho = _sl23_mats(p)
        s = next(s for s in range(1, p) if (s * s) % p == 2)
        sigma = mat_scale(F, F.inv(s), mat_add(F, mat_identity(), X))
        mats = [X, rho, sigma]
        expected_g0 = 48
        intended = "3.1.2.6"
    elif kind == "sl2_5":
        if (p * p - 1) % 60 != 0:
            raise ConstraintViolation(
                f"60 does not divide p^2-1 = {p * p - 1}",
                condition="60 divides p^2-1")
        mats = _binary_icosahedral_mats(p)
        expected_g0 = 120
        intended = "3.1.2.7"
    else:
        raise InvalidParameter(f"unknown complement kind {kind!r}")

    g0_elements = mat_close(F, mats, cap=ORDER_CAP)
    if len(g0_elements) != expected_g0:
        raise InternalInvariantViolation(
            f"complement closed to {len(g0_elements)}, expected {expected_g0}")
    _check_fixed_point_free(p, g0_elements)
    order = p * p * expected_g0
    if order > ORDER_CAP:
        raise CapExceeded(f"order {order} exceeds cap {ORDER_CAP}")
    group = _affine_group(p, mats, F)
    if group.order != order:
        raise InternalInvariantViolation("affine group order mismatch")
    return ConstructionRecord("affine_frobenius", params, intended, group)


def _binary_icosahedral_mats(p: int) -> list[Mat]:
    """An order-120 fixed-point-free subgroup of SL2(p): close a torus element
    of order dividing 10 against an order-4 element of an anticommuting pair.

    Candidates are golden-ratio unit combinations of I and the anticommuting
    pair; the first one whose closure with X has exactly 120 elements wins.
    """
    F = GF(p)
    X, Y = _find_anticommuting_pair(p)
    s5 = next((s for s in range(1, p) if (s * s) % p == 5), None)
    if s5 is None:
        raise SearchFailed("sqrt(5) does not exist; 60 | p^2-1 should prevent this")
    inv2 = F.inv(2)
    phi = F.mul(F.add(1, s5), inv2)
    phi_inv = F.inv(phi)
    XY = mat_mul(F, X, Y)
    basis = (X, Y, XY)
    values = (phi_inv, phi, 1)
    for w_pos in range(3):
        w = values[w_pos]
        rest = [values[i] for i in range(3) if i != w_pos]
        for zero_pos in range(3):
            imag = [b for i, b in enumerate(basis) if i != zero_pos]
            for flip in (False, True):
                v1, v2 = (rest[1], rest[0]) if flip else (rest[0], rest[1])
                for s1 in (1, F.neg(1)):
                    for s2 in (1, F.neg(1)):
                        sigma = mat_scale(F, inv2, mat_add(
                            F, mat_scale(F, w, mat_identity()),
                            mat_add(F,
                                    mat_scale(F, F.mul(s1, v1), imag[0]),
                                    mat_scale(F, F.mul(s2, v2), imag[1]))))
                        if mat_det(F, sigma) != 1:
                            continue
                        try:
                            if mat_order(F, sigma, limit=40) not in (5, 10):
                                continue
                            closed = mat_close(F, [sigma, X], cap=2000)
                        except (CapExceeded, InternalInvariantViolation):
                            continue
                        if len(closed) == 120:
                            return [sigma, X]
    raise SearchFailed("no order-120 complement found")


# ---------------------------------------------------------------------------
# extraspecial kernel Frobenius groups and their odd-torus cousins

def extraspecial_frobenius(p: int, d: int, s: int) -> ConstructionRecord:
    _require_prime(p)
    if p == 2:
        raise InvalidParameter("p must be odd")
    if d < 2 or d % 2 == 0 or (p - 1) % d != 0:
        raise InvalidParameter("d must be odd > 1 dividing p-1")
    t = smallest_primitive_root(p)
    zeta = pow(t, (p - 1) // d, p)
    for k in range(1, d):
        for exponent in (k, k * s, k * (s + 1)):
            if pow(zeta, exponent, p) == 1:
                raise ConstraintViolation(
                    f"zeta^{exponent} = 1 (mod {p}); the diagonal action "
                    f"with s = {s} has fixed points",
                    condition="fixed-point-free diagonal action for (d, s)")
    order = p ** 3 * d
    if order > ORDER_CAP:
        raise CapExceeded(f"order {order} exceeds cap {ORDER_CAP}")
    elements = _heisenberg_elements(p)
    pos = {e: i for i, e in enumerate(elements)}
    hmul = _heis_mul(p)
    zs = pow(zeta, s, p)
    zs1 = pow(zeta, s + 1, p)

    def translate(g) -> list[int]:
        return [pos[hmul(g, e)] for e in elements]

    psi = [pos[((zeta * a) % p, (zs * b) % p, (zs1 * c) % p)]
           for (a, b, c) in elements]
    group = Group.from_generators(
        p ** 3, [translate((1, 0, 0)), translate((0, 1, 0)), psi])
    if group.order != order:
        raise InternalInvariantViolation("extraspecial Frobenius order mismatch")
    return ConstructionRecord(
        "extraspecial_frobenius", {"p": p, "d": d, "s": s, "zeta": zeta},
        "2.2", group)


def heisenberg_extension(p: int, k: int) -> ConstructionRecord:
    _require_prime(p)
    if p == 2:
        raise InvalidParameter("p must be odd")
    if k < 2 or k % 2 == 0 or (p + 1) % k != 0:
        raise ConstraintViolation(
            f"k = {k} is not an odd divisor > 1 of p+1 = {p + 1}",
            condition="k odd dividing p+1, k > 1")
    order = p ** 3 * k
    if order > ORDER_CAP:
        raise CapExceeded(f"order {order} exceeds cap {ORDER_CAP}")
    F = GF(p)
    M = _order_k_companion(F, p, k)
    alpha, beta, gamma, delta = M
    inv2 = F.inv(2)
    q_ab = {}
    for a in range(p):
        for b in range(p):
            val = F.mul(inv2, F.add(
                F.add(F.mul(F.mul(a, a) % p, F.mul(alpha, beta)),
                      F.mul(F.mul(b, b) % p, F.mul(gamma, delta))),
                F.mul(F.mul(2 * a * b % p, beta) % p, gamma)))
            q_ab[(a, b)] = val
    elements = _heisenberg_elements(p)
    pos = {e: i for i, e in enumerate(elements)}
    hmul = _heis_mul(p)

    def translate(g) -> list[int]:
        return [pos[hmul(g, e)] for e in elements]

    phi = [pos[((a * alpha + b * gamma) % p, (a * beta + b * delta) % p,
                (c + q_ab[(a, b)]) % p)]
           for (a, b, c) in elements]
    group = Group.from_generators(
        p ** 3, [translate((1, 0, 0)), translate((0, 1, 0)), phi])
    if group.order != order:
        raise InternalInvariantViolation("heisenberg extension order mismatch")
    for j in range(1, k):
        Mj = mat_pow(F, M, j)
        if mat_det(F, mat_add(F, Mj, mat_neg(F, mat_identity()))) == 0:
            raise InternalInvariantViolation(
                "acting matrix power fixes a vector mod scalars")
    return ConstructionRecord(
        "heisenberg_extension",
        {"p": p, "k": k, "matrix": list(M)}, "3.2.2", group)


def _order_k_companion(F: GF, p: int, k: int) -> Mat:
    """Order-k power of the companion matrix of the first irreducible monic
    quadratic whose root order is divisible by k."""
    for a in range(p):
        for b in range(p):
            # x^2 + a x + b, companion [[0, -b], [1, -a]]
            if any((x * x + a * x + b) % p == 0 for x in range(p)):
                continue
            M0 = (0, F.neg(b), 1, F.neg(a))
            o = mat_order(F, M0, limit=p * p)
            if o % k == 0:
                return mat_pow(F, M0, o // k)
    raise SearchFailed(f"no irreducible quadratic with root order divisible by {k}")
