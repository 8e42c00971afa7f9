"""Finite fields ``F_q`` with table-driven arithmetic on integer-coded elements.

An element of ``F_{p^k}`` is the integer whose base-``p`` digits are its
coefficients in ``F_p[x]/(f)``, lowest degree first.  So ``0`` and ``1`` are
the field's zero and one, and for ``k = 1`` the codes are the residues.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from tririgid.errors import NotPrimePower

MAX_TABLE_ORDER = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """``(p, k)`` with ``q = p^k``; raises NotPrimePower otherwise."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, k


def prime_powers(lo: int, hi: int) -> list[int]:
    out = []
    for q in range(max(lo, 2), hi + 1):
        try:
            prime_power(q)
        except NotPrimePower:
            continue
        out.append(q)
    return out


# polynomials over F_p: coefficient lists, lowest degree first, no trailing zeros


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, v in enumerate(m):
            a[shift + i] = (a[shift + i] - c * v) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int):
    for tail in product(range(p), repeat=degree):
        yield list(tail) + [1]


def is_irreducible(f: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree ``1 .. deg f // 2``."""
    n = len(f) - 1
    if n <= 0:
        return False
    for d in range(1, n // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_mod(list(f), g, p):
                return False
    return True


@lru_cache(maxsize=None)
def conway_free_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree ``k`` over ``F_p``."""
    if k == 1:
        return (0, 1)
    for f in _monic_polys(p, k):
        if f[0] and is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


class FiniteField:
    """``F_q`` for ``q = p^k`` with addition, multiplication and inverse tables."""

    def __init__(self, p: int, k: int = 1) -> None:
        if not is_prime(p) or k < 1:
            raise NotPrimePower(f"{p}^{k} is not a prime power")
        self.p, self.k, self.q = p, k, p ** k
        if self.q > MAX_TABLE_ORDER:
            raise ValueError(f"F_{self.q} is beyond the table cap {MAX_TABLE_ORDER}")
        self.modulus = conway_free_modulus(p, k)
        if not is_irreducible(list(self.modulus), p):
            raise AssertionError("modulus is reducible")
        q = self.q
        digits = np.array([[(x // p ** i) % p for i in range(k)] for x in range(q)], dtype=np.int64)
        weights = p ** np.arange(k, dtype=np.int64)
        self.add_table = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        self.mul_table = np.zeros((q, q), dtype=np.int64)
        mod = list(self.modulus)
        for x in range(q):
            for y in range(x, q):
                conv = [0] * (2 * k - 1)
                for i in range(k):
                    if digits[x, i]:
                        for j in range(k):
                            conv[i + j] += int(digits[x, i]) * int(digits[y, j])
                red = _poly_mod(conv, mod, p) if k > 1 else [conv[0] % p]
                code = sum(c * p ** i for i, c in enumerate(red))
                self.mul_table[x, y] = self.mul_table[y, x] = code
        self.inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            self.inv[x] = int(np.nonzero(self.mul_table[x] == 1)[0][0])
        # plain-list mirrors for scalar code paths
        self.add_rows = self.add_table.tolist()
        self.mul_rows = self.mul_table.tolist()
        self.neg_list = self.neg.tolist()
        self.inv_list = self.inv.tolist()

    @classmethod
    def of_order(cls, q: int) -> FiniteField:
        return _field(q)

    # scalar operations -------------------------------------------------
    def add(self, x: int, y: int) -> int:
        return self.add_rows[x][y]

    def sub(self, x: int, y: int) -> int:
        return self.add_rows[x][self.neg_list[y]]

    def mul(self, x: int, y: int) -> int:
        return self.mul_rows[x][y]

    def inverse(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.inv_list[x]

    def power(self, x: int, n: int) -> int:
        if n < 0:
            x, n = self.inverse(x), -n
        out = 1
        while n:
            if n & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            n >>= 1
        return out

    def element(self, n: int) -> int:
        """Image of the integer ``n`` in the prime field."""
        return n % self.p

    def multiplicative_order(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        k, y = 1, x
        while y != 1:
            y = self.mul(y, x)
            k += 1
        return k

    @property
    def primitive_element(self) -> int:
        return next(x for x in range(1, self.q) if self.multiplicative_order(x) == self.q - 1)

    def root_of_unity(self, n: int) -> int:
        """A primitive ``n``-th root of unity; needs ``n | q - 1``."""
        if (self.q - 1) % n:
            raise ValueError(f"F_{self.q} has no primitive {n}-th root of unity")
        return self.power(self.primitive_element, (self.q - 1) // n)

    def basis(self) -> list[int]:
        """``1, x, .., x^(k-1)`` as codes; an F_p-basis."""
        return [self.p ** i for i in range(self.k)]

    def format(self, x: int) -> str:
        if self.k == 1:
            return str(x)
        digits = [(x // self.p ** i) % self.p for i in range(self.k)]
        terms = []
        for i, c in enumerate(digits):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(str(c) if not mono else (mono if c == 1 else f"{c}{mono}"))
        return "+".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"FiniteField({self.p}, {self.k})"


@lru_cache(maxsize=None)
def _field(q: int) -> FiniteField:
    p, k = prime_power(q)
    return FiniteField(p, k)


def embedding(small: FiniteField, big: FiniteField) -> list[int]:
    """Codes in ``big`` of the elements of ``small``, via a root of ``small``'s modulus."""
    if small.p != big.p or big.k % small.k:
        raise ValueError(f"F_{small.q} is not a subfield of F_{big.q}")
    f = small.modulus
    theta = next(
        t for t in range(big.q)
        if _evaluate(big, f, t) == 0
    ) if small.k > 1 else 0
    powers = [big.power(theta, i) for i in range(small.k)]
    out = []
    for x in range(small.q):
        acc = 0
        for i in range(small.k):
            c = (x // small.p ** i) % small.p
            acc = big.add(acc, big.mul(c, powers[i]))
        out.append(acc)
    return out


def _evaluate(F: FiniteField, coeffs: tuple[int, ...], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), c % F.p)
    return acc
