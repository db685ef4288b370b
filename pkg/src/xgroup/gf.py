"""Small finite fields GF(p^k) with integer-encoded elements.

Elements are encoded as integers 0..q-1 via base-p digits (coefficients of the
residue polynomial, lowest degree first). Addition and multiplication run off
precomputed tables, so the fields stay tiny and fast.
"""

from __future__ import annotations

from .errors import InvalidParameter


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factor_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise InvalidParameter(f"{q} is not a prime power")
            return p, k
    raise InvalidParameter(f"{q} is not a prime power")


def _poly_mul_mod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(k):
                prod[i - k + j] = (prod[i - k + j] - c * modulus[j]) % p
    out = prod[:k]
    out += [0] * (k - len(out))
    return out


def _find_irreducible(p: int, k: int) -> list[int]:
    """Smallest monic irreducible polynomial of degree k over GF(p),
    as coefficient list c0..ck with ck = 1, ordered lexicographically."""

    def has_root_free_factor(coeffs: list[int]) -> bool:
        # irreducibility for degree <= 3 reduces to having no root;
        # degree 4 additionally excludes products of two irreducible quadratics
        def evaluate(x: int) -> int:
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * x + c) % p
            return acc

        if any(evaluate(x) == 0 for x in range(p)):
            return False
        if k < 4:
            return True
        quads = [q for q in _monic_quadratics(p) if not any(
            (q[2] * x * x + q[1] * x + q[0]) % p == 0 for x in range(p))]
        for i, q1 in enumerate(quads):
            for q2 in quads[i:]:
                prod = [0] * 5
                for a in range(3):
                    for b in range(3):
                        prod[a + b] = (prod[a + b] + q1[a] * q2[b]) % p
                if prod == coeffs:
                    return False
        return True

    for tail in range(p ** k):
        coeffs = []
        t = tail
        for _ in range(k):
            coeffs.append(t % p)
            t //= p
        coeffs.append(1)
        if has_root_free_factor(coeffs):
            return coeffs
    raise InvalidParameter(f"no irreducible polynomial of degree {k} mod {p}")


class GF:
    """GF(p^k) for k in 1..4; elements are integers 0..q-1."""

    def __init__(self, q: int):
        p, k = factor_prime_power(q)
        if k > 4:
            raise InvalidParameter(f"field degree {k} unsupported")
        self.q = q
        self.p = p
        self.degree = k
        self.modulus = _find_irreducible(p, k) if k > 1 else None
        self._build_tables()

    def _decode(self, x: int) -> list[int]:
        digits = []
        for _ in range(self.degree):
            digits.append(x % self.p)
            x //= self.p
        return digits

    def _encode(self, digits: list[int]) -> int:
        x = 0
        for d in reversed(digits):
            x = x * self.p + d
        return x

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        self.add_table = [[0] * q for _ in range(q)]
        self.mul_table = [[0] * q for _ in range(q)]
        polys = [self._decode(x) for x in range(q)]
        for a in range(q):
            for b in range(q):
                s = [(x + y) % p for x, y in zip(polys[a], polys[b])]
                self.add_table[a][b] = self._encode(s)
                if self.degree == 1:
                    self.mul_table[a][b] = (a * b) % p
                else:
                    m = _poly_mul_mod(polys[a], polys[b], self.modulus, p)
                    self.mul_table[a][b] = self._encode(m)
        self.neg_table = [0] * q
        for x in range(q):
            for y in range(q):
                if self.add_table[x][y] == 0:
                    self.neg_table[x] = y
                    break
        self.inv_table = [0] * q
        for x in range(1, q):
            for y in range(1, q):
                if self.mul_table[x][y] == 1:
                    self.inv_table[x] = y
                    break

    # element ops -----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("field inverse of 0")
        return self.inv_table[a]

    def pow(self, a: int, n: int) -> int:
        result = 1
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("order of 0")
        x, n = a, 1
        while x != 1:
            x = self.mul(x, a)
            n += 1
        return n

    def generator(self) -> int:
        """Smallest multiplicative generator."""
        for a in range(1, self.q):
            if a != 0 and self.element_order(a) == self.q - 1:
                return a
        raise InvalidParameter("no field generator found")

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)


def _monic_quadratics(p: int):
    return [[c0, c1, 1] for c1 in range(p) for c0 in range(p)]


def smallest_primitive_root(m: int) -> int:
    """Smallest primitive root modulo m (m = p or p^2, p an odd prime)."""
    phi = m - 1 if is_prime(m) else None
    if phi is None:
        p = int(round(m ** 0.5))
        if p * p != m or not is_prime(p):
            raise InvalidParameter(f"{m} is not p or p^2")
        phi = p * (p - 1)
    factors = set()
    n = phi
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.add(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.add(n)
    for t in range(2, m):
        if pow(t, phi, m) != 1:
            continue
        if all(pow(t, phi // f, m) != 1 for f in factors):
            return t
    raise InvalidParameter(f"no primitive root mod {m}")
