"""Orbifold Euler characteristics, Betti-number bounds and reference tables."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd
from typing import NamedTuple, Sequence

from tririgid.errors import NonHyperbolicSignature


class FuchsianSignature(NamedTuple):
    genus: int
    cone_orders: tuple[int, ...] = ()
    cusps: int = 0

    @classmethod
    def triangle(cls, p: int, q: int, r: int) -> FuchsianSignature:
        return cls(0, (p, q, r), 0)

    @classmethod
    def free_product(cls, orders: Sequence[int], infinite_factors: int = 0) -> FuchsianSignature:
        """``C_n1 * ... * C_nm * Z^k`` as a genus-0 orbifold with ``k+1`` cusps."""
        return cls(0, tuple(orders), infinite_factors + 1)

    @property
    def cocompact(self) -> bool:
        return self.cusps == 0

    def __str__(self) -> str:
        return f"({self.genus}; {','.join(map(str, self.cone_orders))}; {self.cusps})"


def _coerce(sig: FuchsianSignature | Sequence[int]) -> FuchsianSignature:
    if isinstance(sig, FuchsianSignature):
        return sig
    return FuchsianSignature.triangle(*sig)


def euler_characteristic(sig: FuchsianSignature | Sequence[int]) -> Fraction:
    """``2 - 2g - s - sum(1 - 1/m_i)``; a bare ``(p, q, r)`` means a triangle group."""
    s = _coerce(sig)
    if s.genus < 0 or s.cusps < 0 or any(m < 2 for m in s.cone_orders):
        raise ValueError(f"invalid signature {s!r}")
    return 2 - 2 * s.genus - s.cusps - sum((1 - Fraction(1, m) for m in s.cone_orders), Fraction(0))


def require_hyperbolic(sig: FuchsianSignature | Sequence[int]) -> FuchsianSignature:
    s = _coerce(sig)
    if euler_characteristic(s) >= 0:
        raise NonHyperbolicSignature(f"signature {s} has non-negative Euler characteristic")
    return s


def b1_upper_bound(sig: FuchsianSignature | Sequence[int]) -> int:
    """``floor(2 - chi)`` when cocompact, ``floor(1 - chi)`` otherwise.

    Both are equalities for torsion-free groups.
    """
    s = _coerce(sig)
    chi = euler_characteristic(s)
    return floor(2 - chi) if s.cocompact else floor(1 - chi)


def free_product_chi(orders: Sequence[int]) -> Fraction:
    return euler_characteristic(FuchsianSignature.free_product(orders))


def admissible_free_products(chi_bound: Fraction, max_order: int = 100) -> list[tuple[int, ...]]:
    """Sorted tuples ``n_1 <= .. <= n_m`` (``m >= 2``) with ``sum 1/n_i + 1 - m >= chi_bound``.

    Families with an unbounded entry (such as ``(2, n)`` at ``-1/2``) are
    truncated at ``max_order``.
    """
    bound = Fraction(chi_bound)
    if bound >= 0:
        raise ValueError("chi_bound must be negative")
    # each 1/n_i <= 1/2, so m/2 + 1 - m >= bound caps m
    max_m = floor(2 * (1 - bound))
    found: list[tuple[int, ...]] = []

    def extend(prefix: list[int], total: Fraction, m: int) -> None:
        if len(prefix) == m:
            if total + 1 - m >= bound:
                found.append(tuple(prefix))
            return
        left = m - len(prefix)
        for n in range(prefix[-1] if prefix else 2, max_order + 1):
            # later entries are >= n, so this is the best the rest can do
            if total + Fraction(left, n) + 1 - m < bound:
                break
            prefix.append(n)
            extend(prefix, total + Fraction(1, n), m)
            prefix.pop()

    for m in range(2, max_m + 1):
        extend([], Fraction(0), m)
    return sorted(found, key=lambda t: (len(t), t))


# ---------------------------------------------------------------------------
# abelianizations of the index-2 extensions


@lru_cache(maxsize=None)
def derive_parity_rule(max_entry: int = 8) -> dict[tuple[int, int], tuple[int, tuple[tuple[int, int], ...]]]:
    """Rank of the elementary 2-group abelianizing ``Delta^-(p,q,q)``, by parity.

    Computed over every hyperbolic ``(p, q)`` with entries up to
    ``max_entry``.  Returns ``{(p % 2, q % 2): (rank, evidence)}``; raises if
    two pairs of the same parity disagree.
    """
    from tririgid.presentation import coxeter_presentation
    from tririgid.smith import abelian_invariants

    rule: dict[tuple[int, int], tuple[int, list[tuple[int, int]]]] = {}
    for p in range(2, max_entry + 1):
        for q in range(2, max_entry + 1):
            if Fraction(1, p) + Fraction(2, q) >= 1:
                continue
            inv = abelian_invariants(coxeter_presentation((p, q, q)))
            if inv.free_rank or any(d != 2 for d in inv.torsion):
                raise AssertionError(f"Delta^-({p},{q},{q}) abelianization {inv} is not elementary 2")
            key = (p % 2, q % 2)
            rank = len(inv.torsion)
            if key in rule and rule[key][0] != rank:
                raise AssertionError(f"parity class {key} is not determined by parity")
            rule.setdefault(key, (rank, []))[1].append((p, q))
    return {k: (v[0], tuple(v[1])) for k, v in sorted(rule.items())}


def elementary_rank(p: int, q: int) -> int:
    return derive_parity_rule()[(p % 2, q % 2)][0]


def expected_extension_abelianizations(p: int, q: int):
    """Formula values for the four extensions of ``Delta(p,q,q)``.

    In order: ``Delta x Z/2 -> Z/q x Z/h x Z/2``, ``Delta^- -> (Z/2)^i``,
    ``Delta(2p,q,2) -> Z/h' x Z/2``, ``Lambda_rho -> Z/q x Z/2`` with
    ``h = gcd(p,q)``, ``h' = gcd(2p,q)``.
    """
    from tririgid.smith import AbelianInvariants

    if Fraction(1, p) + Fraction(2, q) >= 1:
        raise NonHyperbolicSignature(f"Delta({p},{q},{q}) is not hyperbolic")
    h, h2 = gcd(p, q), gcd(2 * p, q)
    i = elementary_rank(p, q)
    return (
        AbelianInvariants.from_cyclic_orders([q, h, 2]),
        AbelianInvariants.from_cyclic_orders([2] * i),
        AbelianInvariants.from_cyclic_orders([h2, 2]),
        AbelianInvariants.from_cyclic_orders([q, 2]),
    )


# ---------------------------------------------------------------------------
# static reference data

REFERENCE_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CommensurabilityEdge:
    larger: tuple[int, int, int]
    smaller: tuple[int, int, int]
    index: int


@dataclass(frozen=True)
class RefEntry:
    """An arithmetic triangle group with real quadratic invariant trace field ``Q(sqrt d)``.

    ``ramified_prime`` labels the finite place where the quaternion algebra
    ramifies.  ``edges`` is the commensurability diagram containing it.
    """

    signature: tuple[int, int, int]
    d: int
    ramified_prime: int
    edges: tuple[CommensurabilityEdge, ...]


def _edges(*items: tuple[tuple[int, int, int], tuple[int, int, int], int]) -> tuple[CommensurabilityEdge, ...]:
    return tuple(CommensurabilityEdge(a, b, k) for a, b, k in items)


_REFERENCE = (
    RefEntry((3, 3, 4), 2, 2, _edges(
        ((2, 3, 8), (3, 3, 4), 2), ((2, 3, 8), (2, 4, 8), 3),
        ((3, 3, 4), (4, 4, 4), 3), ((2, 4, 8), (4, 4, 4), 2),
    )),
    RefEntry((3, 3, 6), 3, 2, _edges(((2, 3, 12), (3, 3, 6), 2))),
    RefEntry((2, 5, 5), 5, 2, _edges(((2, 4, 5), (2, 5, 5), 2))),
    RefEntry((3, 5, 5), 5, 3, _edges(((2, 5, 6), (3, 5, 5), 2))),
    RefEntry((3, 3, 5), 5, 5, _edges(
        ((2, 3, 10), (3, 3, 5), 2), ((2, 3, 10), (2, 5, 10), 3),
        ((3, 3, 5), (5, 5, 5), 3), ((2, 5, 10), (5, 5, 5), 2),
    )),
)

# The one case where the discrete faithful member of a Galois orbit is pinned:
# Delta(3,3,6) with z = 1 + sqrt(3) in the normal form of realize_matrices.
FAITHFUL_CHARACTERS = {(3, 3, 6): {"trace_ab": "sqrt(3)", "z": "1+sqrt(3)"}}


def reference_data() -> list[RefEntry]:
    return list(_REFERENCE)


def commensurability_edges() -> list[CommensurabilityEdge]:
    return [e for entry in _REFERENCE for e in entry.edges]


def reference_json() -> str:
    payload = {
        "schema_version": REFERENCE_SCHEMA_VERSION,
        "entries": [asdict(e) for e in _REFERENCE],
        "faithful": [{"signature": list(k), **v} for k, v in FAITHFUL_CHARACTERS.items()],
    }
    return json.dumps(payload, sort_keys=True)
