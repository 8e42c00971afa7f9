"""Finite groups on indexed elements: PSL(2,q) and a small catalog.

Elements are the integers ``0 .. order-1``.  Each group carries a sorted list
of hashable labels (matrices, permutations, ...) so every index is
reproducible across runs.  Small groups get a full multiplication table.
"""

from __future__ import annotations

from array import array
from collections import Counter, deque
from functools import cached_property
from itertools import permutations
from math import gcd
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from tririgid.errors import CapExceeded
from tririgid.fields import FiniteField, prime_power

TABLE_LIMIT = 3500
PSL_MAX_Q = 64


class FiniteGroup:
    """A finite group with ``mul``, ``inv`` and conjugation machinery on indices."""

    def __init__(
        self,
        name: str,
        labels: Sequence[Hashable],
        mul: Callable[[int, int], int],
        generators: Sequence[int],
        identity: int,
        table: array | None = None,
    ) -> None:
        self.name = name
        self.labels = list(labels)
        self.order = len(self.labels)
        self.identity = identity
        self.generators = tuple(generators)
        self._table = table
        if table is not None:
            n = self.order
            self.mul = lambda i, j, _t=table, _n=n: _t[i * _n + j]
        else:
            self.mul = mul

    # -- basic structure -------------------------------------------------
    @classmethod
    def from_table_function(
        cls, name: str, labels: Sequence[Hashable], mul: Callable[[int, int], int], generators: Sequence[int], identity: int
    ) -> FiniteGroup:
        """Tabulate ``mul`` up front when the group is small enough."""
        n = len(labels)
        if n <= TABLE_LIMIT:
            table = array("i", (mul(i, j) for i in range(n) for j in range(n)))
            return cls(name, labels, mul, generators, identity, table)
        return cls(name, labels, mul, generators, identity)

    @property
    def has_table(self) -> bool:
        return self._table is not None

    @cached_property
    def _inverses(self) -> list[int]:
        inv = [-1] * self.order
        for x in range(self.order):
            if inv[x] >= 0:
                continue
            k, y, prev = 1, x, self.identity
            while y != self.identity:
                prev, y = y, self.mul(y, x)
                k += 1
            # prev = x^(k-1) = x^-1
            inv[x], inv[prev] = prev, x
        return inv

    def inv(self, x: int) -> int:
        return self._inverses[x]

    def power(self, x: int, n: int) -> int:
        if n < 0:
            x, n = self.inv(x), -n
        out = self.identity
        base = x
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    @cached_property
    def element_orders(self) -> list[int]:
        orders = [0] * self.order
        for x in range(self.order):
            if orders[x]:
                continue
            k, y = 1, x
            while y != self.identity:
                y = self.mul(y, x)
                k += 1
            orders[x] = k
            # powers x^j have order k / gcd(j, k)
            y = x
            for j in range(1, k):
                if not orders[y]:
                    orders[y] = k // gcd(j, k)
                y = self.mul(y, x)
        return orders

    def conj(self, x: int, g: int) -> int:
        """``g^-1 x g``."""
        return self.mul(self.mul(self.inv(g), x), g)

    def is_abelian_subset(self, xs: Iterable[int]) -> bool:
        xs = list(xs)
        return all(self.mul(a, b) == self.mul(b, a) for i, a in enumerate(xs) for b in xs[i + 1:])

    # -- conjugacy classes -----------------------------------------------
    @cached_property
    def _classes(self) -> tuple[list[int], list[int], list[int]]:
        """``(class_of, conj_to_rep, reps)``; ``conj(x, conj_to_rep[x]) == rep``, rep = least index."""
        n = self.order
        class_of = [-1] * n
        to_rep = [self.identity] * n
        reps: list[int] = []
        gens = self.generators or tuple(range(n))
        inv_gens = [self.inv(s) for s in gens]
        for x in range(n):
            if class_of[x] >= 0:
                continue
            cid = len(reps)
            reps.append(x)
            class_of[x] = cid
            to_rep[x] = self.identity
            queue = deque([x])
            while queue:
                y = queue.popleft()
                for s, si in zip(gens, inv_gens):
                    z = self.mul(self.mul(si, y), s)
                    if class_of[z] < 0:
                        class_of[z] = cid
                        # z = s^-1 y s, so conj(z, s^-1 t_y) = rep
                        to_rep[z] = self.mul(si, to_rep[y])
                        queue.append(z)
        return class_of, to_rep, reps

    @property
    def class_reps(self) -> list[int]:
        return self._classes[2]

    def class_of(self, x: int) -> int:
        return self._classes[0][x]

    def conjugator_to_rep(self, x: int) -> int:
        return self._classes[1][x]

    @cached_property
    def class_sizes(self) -> list[int]:
        return [c for _, c in sorted(Counter(self._classes[0]).items())]

    def centralizer(self, x: int) -> list[int]:
        return self._centralizers(x)

    @cached_property
    def _centralizer_cache(self) -> dict[int, list[int]]:
        return {}

    def _centralizers(self, x: int) -> list[int]:
        cache = self._centralizer_cache
        if x not in cache:
            cache[x] = [g for g in range(self.order) if self.mul(g, x) == self.mul(x, g)]
        return cache[x]

    def canonical_conjugate(self, xs: Sequence[int]) -> tuple[int, ...]:
        """Lexicographically least tuple in the simultaneous conjugation orbit of ``xs``."""
        if not xs:
            return ()
        c = self.conjugator_to_rep(xs[0])
        cur = [self.conj(x, c) for x in xs]
        candidates = self.centralizer(cur[0])
        for pos in range(1, len(cur)):
            if len(candidates) == 1:
                break
            best = None
            keep: list[int] = []
            for g in candidates:
                y = self.conj(cur[pos], g)
                if best is None or y < best:
                    best, keep = y, [g]
                elif y == best:
                    keep.append(g)
            # all g in keep agree on positions <= pos; apply one, then re-express the rest
            g0 = keep[0]
            g0i = self.inv(g0)
            cur = [self.conj(x, g0) for x in cur]
            candidates = [self.mul(g0i, g) for g in keep]
        return tuple(cur)

    def class_profile(self) -> tuple[tuple[int, int], ...]:
        """Sorted ``(element order, class size)`` pairs; an isomorphism invariant."""
        orders = self.element_orders
        return tuple(sorted((orders[r], s) for r, s in zip(self.class_reps, self.class_sizes)))

    # -- subgroups ---------------------------------------------------------
    def subgroup_closure(self, gens: Iterable[int], stop_above_half: bool = False) -> list[int]:
        """Sorted elements of ``<gens>``; with ``stop_above_half`` returns everything once past ``|G|/2``."""
        gens = sorted({g for g in gens if g != self.identity})
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
                    if stop_above_half and 2 * len(seen) > self.order:
                        return list(range(self.order))
        if self.order % len(seen):
            raise AssertionError(f"closure of size {len(seen)} does not divide {self.order}")
        return sorted(seen)

    def subgroup(self, elements: Sequence[int], name: str | None = None) -> FiniteGroup:
        """The subgroup on ``elements`` as a group in its own right (indices renumbered)."""
        elements = sorted(elements)
        index = {x: i for i, x in enumerate(elements)}
        labels = [self.labels[x] for x in elements]
        mul = lambda i, j: index[self.mul(elements[i], elements[j])]
        gens = _small_generating_set(self, elements, index)
        sub = FiniteGroup.from_table_function(name or f"subgroup of {self.name}", labels, mul, gens, index[self.identity])
        sub.parent_elements = elements  # type: ignore[attr-defined]
        return sub

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.name} of order {self.order}>"


def _small_generating_set(G: FiniteGroup, elements: list[int], index: dict[int, int]) -> list[int]:
    gens: list[int] = []
    span = {G.identity}
    for x in elements:
        if x not in span:
            gens.append(x)
            span = set(G.subgroup_closure(gens))
            if len(span) == len(elements):
                break
    return [index[g] for g in gens]


def group_from_labels(name: str, labels: Iterable[Hashable], op: Callable[[Hashable, Hashable], Hashable],
                      generator_labels: Sequence[Hashable], identity_label: Hashable) -> FiniteGroup:
    labels = sorted(labels)
    index = {x: i for i, x in enumerate(labels)}
    mul = lambda i, j: index[op(labels[i], labels[j])]
    return FiniteGroup.from_table_function(name, labels, mul, [index[g] for g in generator_labels], index[identity_label])


# ---------------------------------------------------------------------------
# catalog


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Apply ``a`` then ``b`` (right action, so products read left to right)."""
    return tuple(b[i] for i in a)


def _parity(perm: tuple[int, ...]) -> int:
    seen, sign = set(), 0
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        sign += length - 1
    return sign % 2


def symmetric_group(n: int) -> FiniteGroup:
    ident = tuple(range(n))
    gens = [ident]
    if n >= 2:
        gens = [(1, 0) + ident[2:], ident[1:] + (0,)]
    return group_from_labels(f"S_{n}", permutations(range(n)), _compose, gens, ident)


def alternating_group(n: int) -> FiniteGroup:
    ident = tuple(range(n))
    gens = [ident]
    for k in range(2, n):
        # 3-cycle (0 1 k)
        p = list(ident)
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    return group_from_labels(f"A_{n}", (p for p in permutations(range(n)) if not _parity(p)), _compose, gens, ident)


def dihedral_group(n: int) -> FiniteGroup:
    """Order ``2n``: labels ``(s, k)`` mean ``rotation^k`` then ``reflection^s``."""
    def op(x, y):
        (s1, k1), (s2, k2) = x, y
        return ((s1 + s2) % 2, (k2 + (-k1 if s2 else k1)) % n)

    labels = [(s, k) for s in range(2) for k in range(n)]
    return group_from_labels(f"D_{n}", labels, op, [(0, 1 % n), (1, 0)], (0, 0))


def cyclic_group(n: int) -> FiniteGroup:
    return group_from_labels(f"C_{n}", range(n), lambda a, b: (a + b) % n, [1 % n], 0)


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


# ---------------------------------------------------------------------------
# PSL(2, q)


class ProjectiveMatrixGroup(FiniteGroup):
    """``PSL(2,q)`` or ``PGL(2,q)`` on 2x2 matrices ``(a, b, c, d)`` modulo scalars.

    The stored representative is the least code over the scalar class; for
    PSL that is the choice between ``M`` and ``-M``, for PGL the scalar
    multiple whose first nonzero entry is 1.
    """

    def __init__(self, q: int, kind: str = "PSL") -> None:
        prime_power(q)
        if kind not in ("PSL", "PGL"):
            raise ValueError(f"unknown matrix group kind {kind!r}")
        if q > PSL_MAX_Q:
            raise CapExceeded(f"{kind}(2,{q}) exceeds the cap q <= {PSL_MAX_Q}")
        F = FiniteField.of_order(q)
        self.field = F
        self.q = q
        self.kind = kind
        b, c, d = (v.ravel() for v in np.meshgrid(*(np.arange(q),) * 3, indexing="ij"))
        chunks = []
        for a in range(q):
            av = np.full_like(b, a)
            det = F.add_table[F.mul_table[av, d], F.neg[F.mul_table[b, c]]]
            keep = det == 1 if kind == "PSL" else det != 0
            chunks.append(self._canon_vec(av[keep], b[keep], c[keep], d[keep]))
        self.codes = np.unique(np.concatenate(chunks))
        n = len(self.codes)
        expected = q * (q * q - 1) // (gcd(2, q - 1) if kind == "PSL" else 1)
        if n != expected:
            raise AssertionError(f"{kind}(2,{q}) has {n} elements, expected {expected}")
        ents = np.stack([(self.codes // q ** (3 - i)) % q for i in range(4)], axis=1)
        labels = [tuple(int(v) for v in row) for row in ents.tolist()]
        self._code_index = {int(c): i for i, c in enumerate(self.codes.tolist())}
        identity = self.element(1, 0, 0, 1)
        gens = []
        for x in F.basis():
            gens += [self.element(1, x, 0, 1), self.element(1, 0, x, 1)]
        if kind == "PGL":
            gens.append(self.element(F.primitive_element, 0, 0, 1))

        table = None
        if n <= TABLE_LIMIT:
            table = array("i")
            cols = np.arange(n)
            block = max(1, 200_000 // n)
            for start in range(0, n, block):
                rows = np.arange(start, min(n, start + block))
                ri = np.repeat(rows, n)
                ci = np.tile(cols, len(rows))
                table.frombytes(self._vector_mul(ents[ri], ents[ci]).astype(np.int32).tobytes())
        super().__init__(f"{kind}(2,{q})", labels, self._scalar_mul, gens, identity, table)

    def _canon_vec(self, a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> np.ndarray:
        F, q = self.field, self.q
        code = ((a * q + b) * q + c) * q + d
        if self.kind == "PSL":
            neg = F.neg
            return np.minimum(code, ((neg[a] * q + neg[b]) * q + neg[c]) * q + neg[d])
        M = F.mul_table
        s = F.inv[np.where(a != 0, a, b)]
        return ((M[a, s] * q + M[b, s]) * q + M[c, s]) * q + M[d, s]

    def _vector_mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        F = self.field
        M, A = F.mul_table, F.add_table
        a = A[M[x[:, 0], y[:, 0]], M[x[:, 1], y[:, 2]]]
        b = A[M[x[:, 0], y[:, 1]], M[x[:, 1], y[:, 3]]]
        c = A[M[x[:, 2], y[:, 0]], M[x[:, 3], y[:, 2]]]
        d = A[M[x[:, 2], y[:, 1]], M[x[:, 3], y[:, 3]]]
        return np.searchsorted(self.codes, self._canon_vec(a, b, c, d))

    def _canon(self, a: int, b: int, c: int, d: int) -> int:
        q, F = self.q, self.field
        if self.kind == "PSL":
            n = F.neg_list
            return min(((a * q + b) * q + c) * q + d, ((n[a] * q + n[b]) * q + n[c]) * q + n[d])
        s = F.inv_list[a if a else b]
        m = F.mul_rows
        return ((m[a][s] * q + m[b][s]) * q + m[c][s]) * q + m[d][s]

    def _scalar_mul(self, i: int, j: int) -> int:
        return self._code_index[self._canon(*self.matmul(self.labels[i], self.labels[j]))]

    def matmul(self, x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, int, int, int]:
        """Product of matrix representatives over ``F_q`` (no rescaling)."""
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        m, ad = self.field.mul_rows, self.field.add_rows
        return (
            ad[m[a1][a2]][m[b1][c2]], ad[m[a1][b2]][m[b1][d2]],
            ad[m[c1][a2]][m[d1][c2]], ad[m[c1][b2]][m[d1][d2]],
        )

    def element(self, a: int, b: int, c: int, d: int) -> int:
        """Index of the class of ``[[a, b], [c, d]]``."""
        F = self.field
        det = F.sub(F.mul(a, d), F.mul(b, c))
        if det == 0 or (self.kind == "PSL" and det != 1):
            raise ValueError(f"matrix is not in {self.kind}(2,{self.q})")
        return self._code_index[self._canon(a, b, c, d)]

    def matrix(self, x: int) -> tuple[int, int, int, int]:
        return self.labels[x]

    def det(self, x: int) -> int:
        a, b, c, d = self.labels[x]
        F = self.field
        return F.sub(F.mul(a, d), F.mul(b, c))

    def trace(self, x: int) -> int:
        """Trace of the stored representative (for PSL the class trace up to sign)."""
        a, _, _, d = self.labels[x]
        return self.field.add(a, d)

    def neg(self, t: int) -> int:
        return self.field.neg_list[t]


PSL2Group = ProjectiveMatrixGroup

_MATRIX_CACHE: dict[tuple[str, int], ProjectiveMatrixGroup] = {}


def psl2_group(q: int) -> ProjectiveMatrixGroup:
    return _matrix_group("PSL", q)


def pgl2_group(q: int) -> ProjectiveMatrixGroup:
    return _matrix_group("PGL", q)


def _matrix_group(kind: str, q: int) -> ProjectiveMatrixGroup:
    if (kind, q) not in _MATRIX_CACHE:
        _MATRIX_CACHE[(kind, q)] = ProjectiveMatrixGroup(q, kind)
    return _MATRIX_CACHE[(kind, q)]


def catalog_group(target_id: str) -> FiniteGroup:
    """Resolve ids like ``PSL(2,7)``, ``PGL(2,5)``, ``D_5``, ``S_4``, ``A_5``, ``C_3``."""
    tid = target_id.replace(" ", "")
    for kind in ("PSL", "PGL"):
        if tid.startswith(f"{kind}(2,") and tid.endswith(")"):
            return _matrix_group(kind, int(tid[6:-1]))
    kind, _, n = tid.partition("_")
    builders = {"D": dihedral_group, "S": symmetric_group, "A": alternating_group, "C": cyclic_group}
    if kind in builders and n.isdigit():
        return builders[kind](int(n))
    raise ValueError(f"unknown target group {target_id!r}")
