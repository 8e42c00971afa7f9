"""PSL(2,C) characters of triangle groups: census, classification, Galois rigidity.

A character is a trace triple ``(tr A, tr B, tr AB)`` of an SL(2) lift, taken
modulo the even sign flips that come from changing lifts.  Every trace is
``2cos(pi j/m)`` for a generator of order ``m``; triples are indexed by ``j``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterator, Sequence

from tririgid.cyclotomic import CycNumber, euler_phi, galois_apply, lcm, subfield_degree, two_cos, _power_table
from tririgid.presentation import TriangleSignature

Matrix = tuple[tuple[CycNumber, CycNumber], tuple[CycNumber, CycNumber]]

REDUCIBLE, FINITE, DENSE = "reducible", "finite", "dense"
GALOIS_RIGID, NOT_GALOIS_RIGID = "GaloisRigid", "NotGaloisRigid"


def _signature(sig: TriangleSignature | Sequence[int]) -> TriangleSignature:
    s = sig if isinstance(sig, TriangleSignature) else TriangleSignature.of(sig)
    s.require_hyperbolic()
    return s


def working_conductor(sig: Sequence[int]) -> int:
    """Conductor holding every ``zeta_{2m}`` for the three orders."""
    p, q, r = sig
    return lcm(lcm(2 * p, 2 * q), 2 * r)


@dataclass(frozen=True, order=True)
class TraceTriple:
    """``(2cos(pi ja/p), 2cos(pi jb/q), 2cos(pi jc/r))`` stored by its indices."""

    signature: TriangleSignature
    indices: tuple[int, int, int]

    def __post_init__(self) -> None:
        for j, m in zip(self.indices, self.signature):
            if not 1 <= j <= m - 1:
                raise ValueError(f"index {j} outside 1..{m - 1}")

    @property
    def values(self) -> tuple[CycNumber, CycNumber, CycNumber]:
        return _values(self.signature, self.indices)

    @property
    def alpha(self) -> CycNumber:
        return self.values[0]

    @property
    def beta(self) -> CycNumber:
        return self.values[1]

    @property
    def gamma(self) -> CycNumber:
        return self.values[2]

    def flipped(self, a: bool, b: bool, c: bool) -> TraceTriple:
        """Negate the chosen coordinates (``2cos(pi j/m) -> 2cos(pi (m-j)/m)``)."""
        flips = (a, b, c)
        return TraceTriple(
            self.signature,
            tuple(m - j if f else j for j, m, f in zip(self.indices, self.signature, flips)),
        )

    def even_flip_orbit(self) -> tuple[TraceTriple, ...]:
        pats = ((False, False, False), (True, True, False), (True, False, True), (False, True, True))
        return tuple(sorted({self.flipped(*f) for f in pats}))

    def canonical(self) -> TraceTriple:
        return self.even_flip_orbit()[0]


@lru_cache(maxsize=4096)
def _values(sig: TriangleSignature, idx: tuple[int, int, int]) -> tuple[CycNumber, CycNumber, CycNumber]:
    return tuple(two_cos(j, m) for j, m in zip(idx, sig))  # type: ignore[return-value]


def enumerate_triples(sig: TriangleSignature | Sequence[int]) -> list[TraceTriple]:
    s = _signature(sig)
    p, q, r = s
    return [
        TraceTriple(s, (a, b, c))
        for a in range(1, p)
        for b in range(1, q)
        for c in range(1, r)
    ]


def kappa(t: TraceTriple) -> CycNumber:
    """``alpha^2 + beta^2 + gamma^2 - alpha beta gamma - 4``; zero exactly on reducible characters."""
    a, b, c = t.values
    return a * a + b * b + c * c - a * b * c - 4


def _diagonal_roots(t: TraceTriple) -> tuple[CycNumber, CycNumber]:
    p, q, _ = t.signature
    ja, jb, _ = t.indices
    return CycNumber.zeta(2 * p, ja), CycNumber.zeta(2 * q, jb)


def realize_matrices(t: TraceTriple) -> tuple[Matrix, Matrix]:
    """``A = [[z1, 1], [0, 1/z1]]`` and ``B = [[z2, 0], [w, 1/z2]]`` with ``tr AB = gamma``.

    ``z1``, ``z2`` are the roots of unity ``zeta_{2p}^ja``, ``zeta_{2q}^jb``
    and ``w = gamma - (z1 z2 + 1/(z1 z2))``.
    """
    z1, z2 = _diagonal_roots(t)
    p, q, _ = t.signature
    z1i, z2i = CycNumber.zeta(2 * p, -t.indices[0]), CycNumber.zeta(2 * q, -t.indices[1])
    w = t.gamma - (z1 * z2 + z1i * z2i)
    zero, one = CycNumber.rational(0), CycNumber.rational(1)
    return ((z1, one), (zero, z1i)), ((z2, zero), (w, z2i))


def lower_left_entry(t: TraceTriple) -> CycNumber:
    return realize_matrices(t)[1][1][0]


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def trace(x: Matrix) -> CycNumber:
    return x[0][0] + x[1][1]


# ---------------------------------------------------------------------------
# closure over Z[zeta_N]: integer coordinate vectors for speed


class _IntegerCyclotomicRing:
    """``Z[zeta_N]`` with elements as integer coordinate tuples in the power basis."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.dim = euler_phi(n)
        table = _power_table(n)
        self.reduce_rows = [table[k % n] for k in range(2 * self.dim - 1)]

    def embed(self, x: CycNumber) -> tuple[int, ...]:
        lifted = x.lift(self.n)
        if any(c.denominator != 1 for c in lifted.coeffs):
            raise ValueError(f"{x} is not integral in the power basis")
        return tuple(int(c) for c in lifted.coeffs)

    def add(self, u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(u, v))

    def mul(self, u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
        prod = [0] * (2 * self.dim - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        prod[i + j] += a * b
        out = list(prod[: self.dim])
        for k in range(self.dim, len(prod)):
            c = prod[k]
            if c:
                for i, a in enumerate(self.reduce_rows[k]):
                    if a:
                        out[i] += c * a
        return tuple(out)


_IntMat = tuple[tuple[int, ...], ...]


def _canonical_sign(m: _IntMat) -> _IntMat:
    for entry in m:
        for c in entry:
            if c:
                return m if c > 0 else tuple(tuple(-v for v in e) for e in m)
    return m


def _int_matmul(ring: _IntegerCyclotomicRing, x: _IntMat, y: _IntMat) -> _IntMat:
    a, b, c, d = x
    e, f, g, h = y
    mul, add = ring.mul, ring.add
    return (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h)), add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h)))


@dataclass(frozen=True)
class Classification:
    kind: str
    order: int | None = None
    type_tag: str | None = None

    def __str__(self) -> str:
        if self.kind == FINITE:
            return f"finite({self.order}, {self.type_tag})"
        return self.kind


def closure_cap(sig: Sequence[int]) -> int:
    p, q, r = sig
    return max(60, 4 * lcm(lcm(p, q), r))


def _image_closure(t: TraceTriple, cap: int) -> list[_IntMat] | None:
    """Elements of ``<A, B>`` modulo ``+-I``, or ``None`` once more than ``cap`` appear."""
    ring = _IntegerCyclotomicRing(working_conductor(t.signature))
    gens = []
    for m in realize_matrices(t):
        gens.append(_canonical_sign(tuple(ring.embed(x) for row in m for x in row)))
    one = tuple(1 if i == 0 else 0 for i in range(ring.dim))
    zero = tuple(0 for _ in range(ring.dim))
    identity = (one, zero, zero, one)
    seen = {identity: 0}
    elements = [identity]
    frontier = 0
    while frontier < len(elements):
        x = elements[frontier]
        frontier += 1
        for g in gens:
            y = _canonical_sign(_int_matmul(ring, x, g))
            if y not in seen:
                seen[y] = len(elements)
                elements.append(y)
                if len(elements) > cap:
                    return None
    return elements


def _element_orders(elements: list[_IntMat], ring: _IntegerCyclotomicRing) -> list[int]:
    identity = elements[0]
    orders = []
    for x in elements:
        k, y = 1, x
        while y != identity:
            y = _canonical_sign(_int_matmul(ring, y, x))
            k += 1
        orders.append(k)
    return orders


def _type_tag(order: int, max_element_order: int) -> str:
    if max_element_order == order:
        return f"C{order}"
    if order >= 4 and max_element_order == order // 2 and order % 2 == 0:
        return f"D{order // 2}"
    return {12: "A4", 24: "S4", 60: "A5"}.get(order, f"order{order}")


def classify(t: TraceTriple, sig: Sequence[int] | None = None) -> Classification:
    if sig is not None and tuple(sig) != tuple(t.signature):
        raise ValueError("triple belongs to a different signature")
    if kappa(t).is_zero():
        return Classification(REDUCIBLE)
    elements = _image_closure(t, closure_cap(t.signature))
    if elements is None:
        return Classification(DENSE)
    ring = _IntegerCyclotomicRing(working_conductor(t.signature))
    n = len(elements)
    return Classification(FINITE, n, _type_tag(n, max(_element_orders(elements, ring))))


@dataclass(frozen=True)
class CharacterClass:
    representative: TraceTriple
    orbit: tuple[TraceTriple, ...]
    classification: Classification
    kappa: CycNumber

    @property
    def kind(self) -> str:
        return self.classification.kind


def _class_of(rep: TraceTriple) -> CharacterClass:
    return CharacterClass(rep, rep.even_flip_orbit(), classify(rep), kappa(rep))


def character_census(sig: TriangleSignature | Sequence[int], threads: int = 1) -> list[CharacterClass]:
    """One entry per even-flip class of triples, in order of representative indices."""
    s = _signature(sig)
    reps = sorted({t.canonical() for t in enumerate_triples(s)})
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_class_of, reps))
    return [_class_of(t) for t in reps]


def reducible_endpoint_count(sig: Sequence[int]) -> int:
    """Index triples with some trace equal to ``+-2``; these are reducible and only counted."""
    p, q, r = sig
    return (p + 1) * (q + 1) * (r + 1) - (p - 1) * (q - 1) * (r - 1)


# ---------------------------------------------------------------------------
# Galois action and rigidity


def galois_image(t: TraceTriple, s: int) -> TraceTriple:
    """Apply ``sigma_s`` coordinatewise and read the indices back off the values."""
    n = working_conductor(t.signature)
    lookup = _value_index(t.signature)
    out = []
    for k, x in enumerate(t.values):
        y = galois_apply(s, x.lift(n))
        out.append(lookup[k][y.lift(n).coeffs])
    return TraceTriple(t.signature, tuple(out))


@lru_cache(maxsize=None)
def _value_index(sig: TriangleSignature) -> tuple[dict[tuple, int], ...]:
    n = working_conductor(sig)
    return tuple({two_cos(j, m).lift(n).coeffs: j for j in range(1, m)} for m in sig)


def galois_units(sig: Sequence[int]) -> list[int]:
    n = working_conductor(sig)
    return [s for s in range(1, n) if gcd(s, n) == 1]


def galois_orbits(classes: Sequence[CharacterClass]) -> list[tuple[TraceTriple, ...]]:
    """Partition class representatives into orbits of the Galois group."""
    if not classes:
        return []
    sig = classes[0].representative.signature
    units = galois_units(sig)
    reps = {c.representative for c in classes}
    remaining = sorted(reps)
    orbits: list[tuple[TraceTriple, ...]] = []
    while remaining:
        seed = remaining[0]
        orbit = sorted({galois_image(seed, s).canonical() for s in units})
        orbits.append(tuple(orbit))
        remaining = [r for r in remaining if r not in orbit]
    return orbits


def geometric_triple(sig: TriangleSignature | Sequence[int]) -> TraceTriple:
    """``(2cos(pi/p), 2cos(pi/q), -2cos(pi/r))``: the lift of the Fuchsian embedding."""
    s = _signature(sig)
    return TraceTriple(s, (1, 1, s.r - 1)).canonical()


def trace_field_degree(sig: TriangleSignature | Sequence[int]) -> int:
    """Degree over Q of the field generated by ``2cos(pi/p), 2cos(pi/q), 2cos(pi/r)``."""
    return subfield_degree(list(geometric_triple(sig).values))


@dataclass(frozen=True)
class RigidityReport:
    signature: TriangleSignature
    n_k: int
    dense_count: int
    dense_orbits: tuple[tuple[TraceTriple, ...], ...]
    census: tuple[CharacterClass, ...] = field(repr=False, compare=False)

    @property
    def verdict(self) -> str:
        return GALOIS_RIGID if self.dense_count == self.n_k else NOT_GALOIS_RIGID

    @property
    def is_rigid(self) -> bool:
        return self.verdict == GALOIS_RIGID


def rigidity_report(sig: TriangleSignature | Sequence[int], threads: int = 1) -> RigidityReport:
    s = _signature(sig)
    census = character_census(s, threads=threads)
    dense = [c for c in census if c.kind == DENSE]
    return RigidityReport(s, trace_field_degree(s), len(dense), tuple(galois_orbits(dense)), tuple(census))


def iter_kappa_factorizations(sig: Sequence[int]) -> Iterator[tuple[TraceTriple, CycNumber, CycNumber]]:
    """``(t, kappa(t), product of the two diagonal-pairing factors)`` for every triple."""
    for t in enumerate_triples(sig):
        z1, z2 = _diagonal_roots(t)
        u, v = z1 * z2, z1 * z2.inverse()
        gamma = t.gamma
        yield t, kappa(t), (gamma - (u + u.inverse())) * (gamma - (v + v.inverse()))
