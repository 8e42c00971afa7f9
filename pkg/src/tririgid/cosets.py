"""Todd-Coxeter coset enumeration and Reidemeister-Schreier rewriting.

Coset tables have two columns per generator: column ``2g`` is the action of
generator ``g`` and column ``2g+1`` the action of its inverse.  Cosets are
numbered from 0; coset 0 is the subgroup itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from tririgid.errors import CosetOverflow, NoMatch
from tririgid.presentation import Presentation, Word

DEFAULT_MAX_COSETS = 100_000


def _col(letter: tuple[int, int]) -> int:
    g, s = letter
    return 2 * g if s == 1 else 2 * g + 1


@dataclass(frozen=True)
class CosetTable:
    presentation: Presentation
    subgroup_generators: tuple[Word, ...]
    table: tuple[tuple[int, ...], ...]

    @property
    def index(self) -> int:
        return len(self.table)

    def act(self, coset: int, w: Word) -> int:
        for letter in w:
            coset = self.table[coset][_col(letter)]
        return coset

    def check(self) -> None:
        """Raise ``AssertionError`` unless the table is closed and consistent."""
        n = self.index
        for c, row in enumerate(self.table):
            for col, d in enumerate(row):
                assert 0 <= d < n, f"coset {c} column {col} undefined"
                assert self.table[d][col ^ 1] == c, f"coset {c} column {col} inconsistent"
            for r in self.presentation.relators:
                assert self.act(c, r) == c, f"relator fails at coset {c}"
        for w in self.subgroup_generators:
            assert self.act(0, w) == 0, "subgroup generator moves coset 0"

    def permutations(self) -> list[tuple[int, ...]]:
        """The action of each generator on cosets."""
        return [tuple(row[2 * g] for row in self.table) for g in range(self.presentation.ngens)]


class _Enumerator:
    def __init__(self, P: Presentation, subgens: Sequence[Word], max_cosets: int) -> None:
        self.P = P
        self.ncols = 2 * P.ngens
        self.rels = [[_col(x) for x in r] for r in P.relators]
        self.subgens = [[_col(x) for x in w] for w in subgens]
        self.max_cosets = max_cosets
        self.table: list[list[int]] = []
        self.parent: list[int] = []
        self.new_coset()

    # -- bookkeeping ---------------------------------------------------------
    def new_coset(self) -> int:
        if len(self.table) >= self.max_cosets:
            raise CosetOverflow(self.max_cosets)
        self.table.append([-1] * self.ncols)
        self.parent.append(len(self.parent))
        return len(self.table) - 1

    def live(self, c: int) -> bool:
        return self.parent[c] == c

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def define(self, c: int, x: int) -> int:
        d = self.new_coset()
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        return d

    def _merge(self, a: int, b: int, queue: list[int]) -> None:
        a, b = self.rep(a), self.rep(b)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = self.table[e]
            for x in range(self.ncols):
                f = row[x]
                if f < 0:
                    continue
                self.table[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if self.table[e1][x] >= 0:
                    self._merge(f1, self.table[e1][x], queue)
                elif self.table[f1][x ^ 1] >= 0:
                    self._merge(e1, self.table[f1][x ^ 1], queue)
                else:
                    self.table[e1][x] = f1
                    self.table[f1][x ^ 1] = e1

    # -- scanning ------------------------------------------------------------
    def scan(self, c: int, word: list[int], fill: bool) -> bool:
        """Scan ``word`` from coset ``c``; define cosets if ``fill``.

        Returns True if anything in the table changed.
        """
        if not word:
            return False
        f, b = c, c
        i, j = 0, len(word) - 1
        table = self.table
        while True:
            while i <= j and table[f][word[i]] >= 0:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                    return True
                return False
            while j >= i and table[b][word[j] ^ 1] >= 0:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return True
            if not fill:
                return False
            self.define(f, word[i])

    # -- strategies ----------------------------------------------------------
    def run_hlt(self) -> None:
        for w in self.subgens:
            self.scan(0, w, fill=True)
        c = 0
        while c < len(self.table):
            for r in self.rels:
                if not self.live(c):
                    break
                self.scan(c, r, fill=True)
            if self.live(c):
                for x in range(self.ncols):
                    if self.table[c][x] < 0:
                        self.define(c, x)
            c += 1

    def _rescan_all(self) -> None:
        changed = True
        while changed:
            changed = False
            for w in self.subgens:
                changed |= self.scan(self.rep(0), w, fill=False)
            for c in range(len(self.table)):
                for r in self.rels:
                    if not self.live(c):
                        break
                    changed |= self.scan(c, r, fill=False)

    def run_felsch(self) -> None:
        # rotations of each relator indexed by leading column
        starts: dict[int, list[list[int]]] = {x: [] for x in range(self.ncols)}
        for r in self.rels:
            for k in range(len(r)):
                rot = r[k:] + r[:k]
                starts[rot[0]].append(rot)
        for w in self.subgens:
            self.scan(0, w, fill=True)
        self._rescan_all()
        while True:
            hole = None
            for c in range(len(self.table)):
                if not self.live(c):
                    continue
                for x in range(self.ncols):
                    if self.table[c][x] < 0:
                        hole = (c, x)
                        break
                if hole:
                    break
            if hole is None:
                break
            c, x = hole
            d = self.define(c, x)
            stack = [(c, x), (d, x ^ 1)]
            before = len(self.parent)
            dead_before = sum(1 for k in range(before) if not self.live(k))
            while stack:
                e, y = stack.pop()
                if not self.live(e):
                    continue
                for rot in starts[y]:
                    if not self.live(e):
                        break
                    self._deduce(e, rot, stack)
            dead_after = sum(1 for k in range(len(self.parent)) if not self.live(k))
            if dead_after != dead_before:
                self._rescan_all()
        self._rescan_all()

    def _deduce(self, c: int, word: list[int], stack: list[tuple[int, int]]) -> None:
        f, b = c, c
        i, j = 0, len(word) - 1
        table = self.table
        while i <= j and table[f][word[i]] >= 0:
            f = table[f][word[i]]
            i += 1
        if i > j:
            if f != b:
                self.coincidence(f, b)
            return
        while j >= i and table[b][word[j] ^ 1] >= 0:
            b = table[b][word[j] ^ 1]
            j -= 1
        if j < i:
            self.coincidence(f, b)
        elif i == j:
            table[f][word[i]] = b
            table[b][word[i] ^ 1] = f
            stack.append((f, word[i]))
            stack.append((b, word[i] ^ 1))

    # -- output --------------------------------------------------------------
    def standardize(self) -> tuple[tuple[int, ...], ...]:
        """Renumber live cosets in BFS order from coset 0 (a canonical numbering)."""
        start = self.rep(0)
        order = [start]
        seen = {start: 0}
        k = 0
        while k < len(order):
            c = order[k]
            k += 1
            for x in range(self.ncols):
                d = self.rep(self.table[c][x])
                if d not in seen:
                    seen[d] = len(order)
                    order.append(d)
        return tuple(tuple(seen[self.rep(self.table[c][x])] for x in range(self.ncols)) for c in order)


def todd_coxeter(
    P: Presentation,
    subgens: Iterable[Word] = (),
    max_cosets: int = DEFAULT_MAX_COSETS,
    strategy: str = "hlt",
) -> CosetTable:
    """Enumerate the cosets of ``<subgens>`` in ``P``.

    ``strategy`` is ``"hlt"`` (default) or ``"felsch"``.  Both return the
    same standardized table.  Raises :class:`CosetOverflow` when more than
    ``max_cosets`` cosets get defined; that means "not determined", not
    "infinite".
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    subgens = tuple(subgens)
    en = _Enumerator(P, subgens, max_cosets)
    if strategy == "hlt":
        en.run_hlt()
    elif strategy == "felsch":
        en.run_felsch()
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    table = CosetTable(P, subgens, en.standardize())
    table.check()
    return table


def coset_table_from_action(P: Presentation, images: Sequence[int], group: Any) -> CosetTable:
    """Coset table of the kernel of an epimorphism ``P -> group``.

    Cosets are group elements (right regular action); ``images`` are element
    indices in ``group`` (a :class:`~tririgid.groups.FiniteGroup`).  The
    homomorphism must be surjective.
    """
    elems = [group.identity]
    seen = {group.identity: 0}
    k = 0
    while k < len(elems):
        x = elems[k]
        k += 1
        for g in images:
            y = group.mul(x, g)
            if y not in seen:
                seen[y] = len(elems)
                elems.append(y)
    if len(elems) != group.order:
        raise ValueError("images do not generate the group")
    inv_images = [group.inv(g) for g in images]
    rows = []
    for x in elems:
        row: list[int] = []
        for g, gi in zip(images, inv_images):
            row += [seen[group.mul(x, g)], seen[group.mul(x, gi)]]
        rows.append(tuple(row))
    table = CosetTable(P, (), tuple(rows))
    for c in range(table.index):
        for r in P.relators:
            if table.act(c, r) != c:
                raise ValueError("images do not satisfy the relators")
    return table


def schreier_transversal(T: CosetTable) -> tuple[list[Word], set[tuple[int, int]]]:
    """BFS spanning tree: coset representatives and the set of tree edges ``(coset, column)``."""
    reps: list[Word | None] = [None] * T.index
    reps[0] = Word()
    tree: set[tuple[int, int]] = set()
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(2 * T.presentation.ngens):
            d = T.table[c][x]
            if reps[d] is None:
                g = x // 2
                reps[d] = reps[c] * Word.gen(g, 1 if x % 2 == 0 else -1)  # type: ignore[operator]
                tree.add((c, x))
                tree.add((d, x ^ 1))
                queue.append(d)
    return reps, tree  # type: ignore[return-value]


def reidemeister_schreier(T: CosetTable) -> Presentation:
    """Presentation of the subgroup on Schreier generators.

    Generator ``"{g}_{c}"`` stands for ``rep(c) * g * rep(c*g)^-1``.  There
    are ``index * (ngens - 1) + 1`` of them.  Relators are the rewritten
    ``rep(c) R rep(c)^-1``, freely reduced, with empty and exactly repeated
    words dropped.
    """
    T.check()
    P = T.presentation
    _, tree = schreier_transversal(T)
    gen_index: dict[tuple[int, int], int] = {}
    names: list[str] = []
    for c in range(T.index):
        for g in range(P.ngens):
            if (c, 2 * g) not in tree:
                gen_index[(c, g)] = len(names)
                names.append(f"{P.generators[g]}_{c}")

    def rewrite(c: int, w: Word) -> Word:
        letters: list[tuple[int, int]] = []
        for g, s in w:
            if s == 1:
                if (c, 2 * g) not in tree:
                    letters.append((gen_index[(c, g)], 1))
                c = T.table[c][2 * g]
            else:
                d = T.table[c][2 * g + 1]
                if (d, 2 * g) not in tree:
                    letters.append((gen_index[(d, g)], -1))
                c = d
        return Word(tuple(letters))

    relators: list[Word] = []
    seen: set[Word] = set()
    for c in range(T.index):
        for r in P.relators:
            w = rewrite(c, r)
            if w and w not in seen:
                seen.add(w)
                relators.append(w)
    return Presentation(tuple(names), tuple(relators), name=f"RS[{P.name}:{T.index}]")


# ---------------------------------------------------------------------------
# index-2 subgroups


def z2_kernel_generators(P: Presentation, signs: Sequence[int]) -> list[Word]:
    """Schreier generators of the kernel of ``P -> Z/2`` sending generator ``i`` to ``signs[i]``."""
    t = next(i for i, s in enumerate(signs) if s % 2)
    tw, tinv = Word.gen(t), Word.gen(t, -1)
    gens: list[Word] = []
    for i, s in enumerate(signs):
        x = Word.gen(i)
        cand = [x, tw * x * tinv] if s % 2 == 0 else [x * tinv, tw * x]
        gens += [w for w in cand if w]
    return gens


def z2_characters(P: Presentation) -> list[tuple[int, ...]]:
    """All nontrivial homomorphisms ``P -> Z/2``, as generator images."""
    from itertools import product

    out = []
    for signs in product((0, 1), repeat=P.ngens):
        if any(signs) and all(sum(r.exponent_sums(P.ngens)[i] * signs[i] for i in range(P.ngens)) % 2 == 0 for r in P.relators):
            out.append(signs)
    return out


@dataclass(frozen=True)
class KernelReport:
    signs: tuple[int, ...]
    index: int
    presentation: Presentation
    abelian: Any
    matches: bool


@dataclass(frozen=True)
class Index2Embedding:
    parent: tuple[int, int, int]
    subgroup: tuple[int, int, int]
    kernels: tuple[KernelReport, ...]
    matched: KernelReport

    @property
    def unique(self) -> bool:
        return sum(k.matches for k in self.kernels) == 1


def verify_index2_embedding(p: int, q: int, budget: Any = None) -> Index2Embedding:
    """Locate ``Delta(p,p,q)`` as an index-2 subgroup of ``Delta(2,p,2q)``.

    Every Z/2-kernel of the larger group is enumerated, rewritten by
    Reidemeister-Schreier and compared with ``Delta(p,p,q)`` by abelian
    invariants and a quotient fingerprint.  Raises :class:`NoMatch` if none
    agrees.
    """
    from tririgid.presentation import TriangleSignature, triangle_presentation
    from tririgid.quotients import Budget, fingerprint
    from tririgid.smith import abelian_invariants

    budget = budget or Budget(q=7, d=8, s=4)
    sub_sig = TriangleSignature.of((p, p, q)).require_hyperbolic()
    parent_sig = TriangleSignature.of((2, p, 2 * q)).require_hyperbolic()
    parent = triangle_presentation(parent_sig)
    target = triangle_presentation(sub_sig)
    target_ab = abelian_invariants(target)
    target_fp = None

    reports: list[KernelReport] = []
    for signs in z2_characters(parent):
        T = todd_coxeter(parent, z2_kernel_generators(parent, signs))
        H = reidemeister_schreier(T)
        ab = abelian_invariants(H)
        match = T.index == 2 and ab == target_ab
        if match:
            if target_fp is None:
                target_fp = fingerprint(target, budget)
            match = fingerprint(H, budget).entries == target_fp.entries
        reports.append(KernelReport(tuple(signs), T.index, H, ab, match))
    matched = [r for r in reports if r.matches]
    if not matched:
        raise NoMatch(f"no index-2 kernel of Delta{tuple(parent_sig)} matches Delta{tuple(sub_sig)}")
    return Index2Embedding(tuple(parent_sig), tuple(sub_sig), tuple(reports), matched[0])
