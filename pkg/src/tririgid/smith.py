"""Integer matrices, Smith normal form and abelianization of presentations."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Sequence

from tririgid.presentation import Presentation


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        rows = [list(map(int, r)) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(v for r in rows for v in r))

    def to_rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]


def relation_matrix(P: Presentation) -> IntegerMatrix:
    """One row per relator, one column per generator, entries are exponent sums."""
    return IntegerMatrix.from_rows([r.exponent_sums(P.ngens) for r in P.relators], cols=P.ngens)


def _diagonalize(rows: list[dict[int, int]]) -> list[int]:
    """Reduce sparse rows to a diagonal by unimodular row/column moves.

    Always pivots on the entry of least absolute value, so entries never grow
    past the current pivot bound while a row/column is being cleared.
    """
    rows = [dict(r) for r in rows if r]
    diagonal: list[int] = []
    while rows:
        # pivot: least |entry| overall
        bi, bj, bv = -1, -1, 0
        for i, row in enumerate(rows):
            for j, v in row.items():
                if bv == 0 or abs(v) < abs(bv):
                    bi, bj, bv = i, j, v
                    if abs(v) == 1:
                        break
            if abs(bv) == 1:
                break
        if bv == 0:
            break
        while True:
            pivot_row = rows[bi]
            bv = pivot_row[bj]
            # clear column bj with row operations
            smaller: tuple[int, int] | None = None
            for i, row in enumerate(rows):
                if i == bi or bj not in row:
                    continue
                k = row[bj] // bv
                for j, v in pivot_row.items():
                    nv = row.get(j, 0) - k * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
                if bj in row and (smaller is None or abs(row[bj]) < abs(rows[smaller[0]][bj])):
                    smaller = (i, bj)
            if smaller is not None:
                bi = smaller[0]
                continue
            # column bj is now zero off the pivot row; column moves only touch that row
            rem: tuple[int, int] | None = None
            for j in list(pivot_row):
                if j == bj:
                    continue
                r = pivot_row[j] % bv
                if r:
                    pivot_row[j] = r
                    if rem is None or abs(r) < abs(pivot_row[rem[1]]):
                        rem = (bi, j)
                else:
                    del pivot_row[j]
            if rem is not None:
                bj = rem[1]
                continue
            diagonal.append(abs(bv))
            rows.pop(bi)
            rows = [r for r in rows if r]
            break
    return diagonal


def _divisor_chain(diagonal: Iterable[int]) -> list[int]:
    d = sorted(diagonal)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return d


def smith_normal_form(M: IntegerMatrix) -> tuple[list[int], int]:
    """Nonzero Smith invariants ``d_1 | d_2 | ...`` (ones included) and the rank."""
    sparse = [{j: v for j, v in enumerate(row) if v} for row in M.to_rows()]
    chain = _divisor_chain(_diagonalize(sparse))
    return chain, len(chain)


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^free_rank x Z/d_1 x ... x Z/d_k`` with ``d_1 | d_2 | ...`` and every ``d_i >= 2``."""

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self) -> None:
        t = tuple(self.torsion)
        object.__setattr__(self, "torsion", t)
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisor chain of entries >= 2")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int], free_rank: int = 0) -> AbelianInvariants:
        """Canonical form of ``Z/n_1 x Z/n_2 x ...`` (orders of 1 ignored, 0 means Z)."""
        orders = list(orders)
        free = free_rank + sum(1 for n in orders if n == 0)
        return cls(tuple(d for d in _divisor_chain(abs(n) for n in orders if n) if d > 1), free)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        return prod(self.torsion) if self.is_finite else None

    def is_elementary_2group(self) -> bool:
        return self.is_finite and all(d == 2 for d in self.torsion)

    def hom_count(self, n: int) -> int:
        """Number of homomorphisms to ``Z/n``."""
        return n ** self.free_rank * prod(gcd(d, n) for d in self.torsion)

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "1"


def abelian_invariants(P: Presentation) -> AbelianInvariants:
    invariants, rank = smith_normal_form(relation_matrix(P))
    return AbelianInvariants(tuple(d for d in invariants if d > 1), P.ngens - rank)


def b1(P: Presentation) -> int:
    """First Betti number: the free rank of the abelianization."""
    return abelian_invariants(P).free_rank
