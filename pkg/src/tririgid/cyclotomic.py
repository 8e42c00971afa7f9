"""Exact arithmetic in cyclotomic fields ``Q(zeta_N)``.

Elements are stored in the power basis ``1, zeta, .., zeta^(phi(N)-1)``
modulo the cyclotomic polynomial, with rational coefficients.  Mixed
conductors are lifted to their lcm before any operation.  There is no
floating point anywhere in this module.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

from tririgid.errors import BadGaloisIndex, DivisionByZero

Scalar = Union[int, Fraction]


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials (coefficients low to high, monic divisor)."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dd]
        out[k] = c
        if c:
            for i, a in enumerate(den):
                num[k + i] -= c * a
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """``Phi_n`` by dividing ``x^n - 1`` by ``Phi_d`` for every proper divisor ``d``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coordinates of ``zeta_n^k`` for ``0 <= k < n``."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows: list[tuple[int, ...]] = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce by the monic Phi_n
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * a for c, a in zip(cur, phi[:-1])]
    return tuple(rows)


def _reduce(exps: dict[int, Fraction], n: int) -> tuple[Fraction, ...]:
    table = _power_table(n)
    out = [Fraction(0)] * euler_phi(n)
    for k, c in exps.items():
        if not c:
            continue
        for i, a in enumerate(table[k % n]):
            if a:
                out[i] += c * a
    return tuple(out)


class CycNumber:
    """An element of ``Q(zeta_N)``; immutable and hashable."""

    __slots__ = ("conductor", "coeffs", "_key")

    def __init__(self, conductor: int, coeffs: Iterable[Scalar]) -> None:
        coeffs = tuple(Fraction(c) for c in coeffs)
        if conductor < 1:
            raise ValueError("conductor must be >= 1")
        if len(coeffs) != euler_phi(conductor):
            raise ValueError(f"conductor {conductor} needs {euler_phi(conductor)} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("CycNumber is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, q: Scalar) -> CycNumber:
        return cls(1, (q,))

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> CycNumber:
        return cls(n, _reduce({k % n: Fraction(1)}, n))

    @classmethod
    def from_exponents(cls, n: int, exps: dict[int, Scalar]) -> CycNumber:
        """``sum c_k zeta_n^k`` for ``{k: c_k}``."""
        return cls(n, _reduce({k % n: Fraction(c) for k, c in exps.items()}, n))

    # -- conductor handling ----------------------------------------------
    def lift(self, m: int) -> CycNumber:
        n = self.conductor
        if m % n:
            raise ValueError(f"cannot lift conductor {n} to {m}")
        if m == n:
            return self
        step = m // n
        return CycNumber(m, _reduce({i * step: c for i, c in enumerate(self.coeffs) if c}, m))

    def minimal(self) -> CycNumber:
        """The same number at the smallest conductor containing it."""
        n = self.conductor
        for d in _divisors(n)[:-1]:
            # x lies in Q(zeta_d) iff every sigma_t with t = 1 mod d fixes it
            if all(self.galois(t) == self for t in range(1, n, d) if gcd(t, n) == 1):
                # find the coordinates at conductor d by solving via lifting the basis
                return _descend(self, d)
        return self

    def _common(self, other: CycNumber) -> tuple[CycNumber, CycNumber]:
        if self.conductor == other.conductor:
            return self, other
        m = lcm(self.conductor, other.conductor)
        return self.lift(m), other.lift(m)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(x: CycNumber | Scalar) -> CycNumber:
        return x if isinstance(x, CycNumber) else CycNumber.rational(x)

    def __add__(self, other: CycNumber | Scalar) -> CycNumber:
        a, b = self._common(self._coerce(other))
        return CycNumber(a.conductor, (x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycNumber:
        return CycNumber(self.conductor, (-x for x in self.coeffs))

    def __sub__(self, other: CycNumber | Scalar) -> CycNumber:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> CycNumber:
        return self._coerce(other) - self

    def __mul__(self, other: CycNumber | Scalar) -> CycNumber:
        if not isinstance(other, CycNumber):
            c = Fraction(other)
            return CycNumber(self.conductor, (x * c for x in self.coeffs))
        a, b = self._common(other)
        n = a.conductor
        exps: dict[int, Fraction] = {}
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    k = (i + j) % n
                    exps[k] = exps.get(k, Fraction(0)) + x * y
        return CycNumber(n, _reduce(exps, n))

    __rmul__ = __mul__

    def inverse(self) -> CycNumber:
        if self.is_zero():
            raise DivisionByZero("inverse of zero in a cyclotomic field")
        n = self.conductor
        d = euler_phi(n)
        # columns: coordinates of self * zeta^j; solve M y = e_0
        cols = [(self * CycNumber.zeta(n, j)).coeffs for j in range(d)]
        mat = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        return CycNumber(n, _solve(mat))

    def __truediv__(self, other: CycNumber | Scalar) -> CycNumber:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Scalar) -> CycNumber:
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> CycNumber:
        base = self if k >= 0 else self.inverse()
        out = CycNumber.rational(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    # -- Galois action ----------------------------------------------------
    def galois(self, t: int) -> CycNumber:
        """``sigma_t``: ``zeta_N -> zeta_N^t``; needs ``gcd(t, N) = 1``."""
        n = self.conductor
        if gcd(t, n) != 1:
            raise BadGaloisIndex(f"gcd({t}, {n}) != 1")
        return CycNumber(n, _reduce({(i * t) % n: c for i, c in enumerate(self.coeffs) if c}, n))

    # -- comparisons ------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:]) and (self.conductor <= 2 or self.minimal().conductor <= 2)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycNumber.rational(other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        if self._key is None:
            m = self.minimal()
            object.__setattr__(self, "_key", (m.conductor, m.coeffs))
        return hash(self._key)

    def __repr__(self) -> str:
        return format_cyc(self)

    __str__ = __repr__


def _solve(mat: list[list[Fraction]]) -> list[Fraction]:
    """Gauss-Jordan on an augmented square system with a unique solution."""
    n = len(mat)
    for col in range(n):
        piv = next(r for r in range(col, n) if mat[r][col])
        mat[col], mat[piv] = mat[piv], mat[col]
        pv = mat[col][col]
        mat[col] = [v / pv for v in mat[col]]
        for r in range(n):
            if r != col and mat[r][col]:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    return [mat[r][n] for r in range(n)]


def _descend(x: CycNumber, d: int) -> CycNumber:
    """Coordinates at conductor ``d`` of an ``x`` known to lie in ``Q(zeta_d)``."""
    n = x.conductor
    k = euler_phi(d)
    basis = [CycNumber.zeta(d, j).lift(n).coeffs for j in range(k)]
    rows = len(x.coeffs)
    # least-squares-free: pick k independent rows of the (rows x k) system
    mat = [[basis[j][i] for j in range(k)] + [x.coeffs[i]] for i in range(rows)]
    chosen: list[list[Fraction]] = []
    for row in mat:
        trial = chosen + [row]
        if _rank([r[:k] for r in trial]) == len(trial):
            chosen = trial
        if len(chosen) == k:
            break
    return CycNumber(d, _solve(chosen))


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rank + 1, len(m)):
            if m[r][col]:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def two_cos(j: int, m: int) -> CycNumber:
    """``2 cos(pi j / m) = zeta_{2m}^j + zeta_{2m}^{-j}`` exactly."""
    if m < 1 or not 0 <= j <= m:
        raise ValueError(f"two_cos needs m >= 1 and 0 <= j <= m, got j={j}, m={m}")
    return CycNumber.from_exponents(2 * m, {j: 1, -j: 1}) if j % m else CycNumber.rational(2 if j == 0 else -2)


def galois_apply(t: int, x: CycNumber) -> CycNumber:
    """Apply ``sigma_t`` (``zeta_N -> zeta_N^t``) to ``x``; ``t`` is read modulo ``N``."""
    return x.galois(t)


def common_conductor(xs: Iterable[CycNumber]) -> int:
    n = 1
    for x in xs:
        n = lcm(n, x.conductor)
    return n


def galois_stabilizer(xs: Sequence[CycNumber]) -> tuple[int, list[int]]:
    """``(N, [t in (Z/N)^* fixing every x])`` at the common conductor ``N``."""
    n = common_conductor(xs)
    lifted = [x.lift(n) for x in xs]
    return n, [t for t in range(1, n + 1) if gcd(t, n) == 1 and all(x.galois(t) == x for x in lifted)]


def subfield_degree(xs: Sequence[CycNumber]) -> int:
    """Degree over Q of the field generated by ``xs``: index of their joint stabilizer."""
    if not xs:
        raise ValueError("subfield_degree needs at least one element")
    n, stab = galois_stabilizer(xs)
    return euler_phi(n) // len(stab)


def galois_orbit(x: CycNumber) -> list[CycNumber]:
    n = x.conductor
    orbit: list[CycNumber] = []
    for t in range(1, n + 1):
        if gcd(t, n) == 1:
            y = x.galois(t)
            if y not in orbit:
                orbit.append(y)
    return orbit


# ---------------------------------------------------------------------------
# serialization: cyc(N; c0, c1, ...)

_CYC_RE = re.compile(r"\s*cyc\(\s*(\d+)\s*;(.*)\)\s*\Z")


def format_cyc(x: CycNumber) -> str:
    return f"cyc({x.conductor}; {', '.join(str(c) for c in x.coeffs)})"


def parse_cyc(text: str) -> CycNumber:
    m = _CYC_RE.match(text)
    if not m:
        raise ValueError(f"not a cyc(...) literal: {text!r}")
    parts = [p.strip() for p in m.group(2).split(",")] if m.group(2).strip() else []
    return CycNumber(int(m.group(1)), (Fraction(p) for p in parts))
