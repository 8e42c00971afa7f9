"""Homomorphisms to finite groups: enumeration, characters over F_q, fingerprints, witnesses."""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from tririgid.errors import BudgetExhausted, CapExceeded
from tririgid.fields import FiniteField, embedding, prime_power, prime_powers
from tririgid.groups import FiniteGroup, ProjectiveMatrixGroup, catalog_group, pgl2_group, psl2_group
from tririgid.presentation import Presentation, TriangleSignature, Word, triangle_presentation
from tririgid.smith import AbelianInvariants, abelian_invariants

MAX_GENERATORS = 4
MAX_TARGET_ORDER = 20_000


# ---------------------------------------------------------------------------
# search plan


@dataclass(frozen=True)
class _Plan:
    free: tuple[int, ...]
    # (generator, word evaluated over already-known images, exponent sign)
    solved: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]
    power_bounds: dict[int, int]
    # relators to check once step i is complete (free step i, then its solved gens)
    checks: tuple[tuple[Word, ...], ...]
    solved_at: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> tuple[int, ...]:
        return self.free + tuple(g for g, _ in self.solved)


def _pure_power(w: Word) -> tuple[int, int] | None:
    gens = {g for g, _ in w}
    if len(gens) != 1:
        return None
    return next(iter(gens)), len(w)


def _make_plan(P: Presentation) -> _Plan:
    from math import gcd

    bounds: dict[int, int] = {}
    for r in P.relators:
        pp = _pure_power(r)
        if pp:
            g, m = pp
            bounds[g] = gcd(bounds.get(g, 0), m)

    solved: dict[int, tuple[tuple[int, int], ...]] = {}
    deps: dict[int, set[int]] = {}
    for r in P.relators:
        if _pure_power(r):
            continue
        counts: dict[int, int] = {}
        for g, _ in r:
            counts[g] = counts.get(g, 0) + 1
        used = set().union(*deps.values()) if deps else set()
        for g in sorted((g for g, c in counts.items() if c == 1), reverse=True):
            others = set(counts) - {g}
            if g in solved or g in used or others & set(solved):
                continue
            # r = u g^e v  =>  g = (u^-1 v^-1)^e
            pos = next(i for i, (h, _) in enumerate(r.letters) if h == g)
            e = r.letters[pos][1]
            u, v = Word(r.letters[:pos]), Word(r.letters[pos + 1:])
            expr = u.inverse() * v.inverse()
            if e == -1:
                expr = expr.inverse()
            solved[g] = expr.letters
            deps[g] = others
            break
    free = tuple(g for g in range(P.ngens) if g not in solved)
    if not free and P.ngens:
        # keep one generator free so the search has a first step
        g0 = min(solved)
        del solved[g0]
        free = (g0,)

    steps = len(free) if free else 1
    solved_at: list[list[int]] = [[] for _ in range(steps)]
    for g, d in deps.items():
        if g in solved:
            k = max((free.index(h) for h in d), default=0)
            solved_at[k].append(g)
    order = list(free)
    for k in range(steps):
        order += sorted(solved_at[k])
    known_after = []
    seen: set[int] = set()
    for k in range(steps):
        if free:
            seen.add(free[k])
        seen.update(solved_at[k])
        known_after.append(set(seen))
    checks: list[list[Word]] = [[] for _ in range(steps)]
    for r in P.relators:
        gens = {g for g, _ in r}
        k = next(k for k in range(steps) if gens <= known_after[k])
        checks[k].append(r)
    return _Plan(
        free,
        tuple((g, solved[g]) for k in range(steps) for g in sorted(solved_at[k])),
        bounds,
        tuple(tuple(c) for c in checks),
        tuple(tuple(sorted(s)) for s in solved_at),
    )


def _eval(G: FiniteGroup, letters: Sequence[tuple[int, int]], images: list[int], inverses: list[int]) -> int:
    mul = G.mul
    acc = G.identity
    for g, s in letters:
        acc = mul(acc, images[g] if s == 1 else inverses[g])
    return acc


# ---------------------------------------------------------------------------
# homomorphism classes


@dataclass(frozen=True)
class HomClass:
    presentation: str
    target: str
    images: tuple[int, ...]
    image_order: int
    surjective: bool
    character: tuple[int, ...] | None = None
    irreducible: bool | None = None

    def sort_key(self) -> tuple:
        return (self.image_order, self.character or (), self.images)


def _candidates(G: FiniteGroup, bound: int | None) -> list[int]:
    if bound is None:
        return list(range(G.order))
    orders = G.element_orders
    return [x for x in range(G.order) if bound % orders[x] == 0]


def _search_from(P: Presentation, G: FiniteGroup, plan: _Plan, first: int) -> set[tuple[int, ...]]:
    """Canonical hom tuples (in plan order) whose first free image is ``first``."""
    n = P.ngens
    images = [G.identity] * n
    inverses = [G.identity] * n
    found: set[tuple[int, ...]] = set()
    cands = [_candidates(G, plan.power_bounds.get(g)) for g in plan.free]
    solved = dict(plan.solved)
    order = plan.order
    identity = G.identity

    def assign(g: int, x: int) -> None:
        images[g] = x
        inverses[g] = G.inv(x)

    def step(k: int) -> None:
        for g in plan.solved_at[k]:
            assign(g, _eval(G, solved[g], images, inverses))
        for r in plan.checks[k]:
            if _eval(G, r.letters, images, inverses) != identity:
                return
        if k + 1 == len(plan.checks):
            found.add(G.canonical_conjugate([images[g] for g in order]))
            return
        g = plan.free[k + 1]
        for x in cands[k + 1]:
            assign(g, x)
            step(k + 1)

    if plan.free:
        assign(plan.free[0], first)
    step(0)
    return found


def enumerate_homs(P: Presentation, G: FiniteGroup, threads: int = 1) -> list[HomClass]:
    """All homomorphisms ``P -> G`` up to conjugation in ``G``, canonically ordered."""
    if P.ngens > MAX_GENERATORS:
        raise CapExceeded(f"{P.ngens} generators exceeds the cap of {MAX_GENERATORS}")
    if G.order > MAX_TARGET_ORDER:
        raise CapExceeded(f"|G| = {G.order} exceeds the cap of {MAX_TARGET_ORDER}")
    if P.ngens == 0:
        return [HomClass(P.name, G.name, (), 1, G.order == 1)]
    plan = _make_plan(P)
    bound = plan.power_bounds.get(plan.free[0])
    orders = G.element_orders
    firsts = [x for x in G.class_reps if bound is None or bound % orders[x] == 0]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda x: _search_from(P, G, plan, x), firsts))
    else:
        parts = [_search_from(P, G, plan, x) for x in firsts]
    order = plan.order
    back = [order.index(g) for g in range(P.ngens)]
    classes = []
    for t in sorted(set().union(*parts)):
        imgs = tuple(t[i] for i in back)
        classes.append(_make_class(P, G, imgs))
    classes.sort(key=HomClass.sort_key)
    return classes


def _make_class(P: Presentation, G: FiniteGroup, imgs: tuple[int, ...]) -> HomClass:
    size = len(G.subgroup_closure(imgs, stop_above_half=True))
    char = irr = None
    if isinstance(G, ProjectiveMatrixGroup):
        char = character_key(G, imgs)
        irr = is_irreducible(G, imgs)
    return HomClass(P.name, G.name, imgs, size, size == G.order, char, irr)


def count_epimorphism_classes(P: Presentation, G: FiniteGroup) -> int:
    return sum(h.surjective for h in enumerate_homs(P, G))


# ---------------------------------------------------------------------------
# characters over F_q


class _LiftData:
    """Arithmetic for lifting projective matrices to SL(2) over ``F_q`` or ``F_{q^2}``.

    PSL representatives already have determinant 1.  A PGL representative
    ``M`` lifts to ``M / sqrt(det M)``, which needs ``F_{q^2}``.
    """

    def __init__(self, G: ProjectiveMatrixGroup) -> None:
        self.G = G
        if G.kind == "PSL":
            self.F = G.field
            self.embed = list(range(G.q))
        else:
            self.F = FiniteField(G.field.p, 2 * G.field.k)
            self.embed = embedding(G.field, self.F)
        F = self.F
        self.sqrt: dict[int, int] = {}
        for x in range(F.q - 1, -1, -1):
            self.sqrt[F.mul(x, x)] = x

    def matrix(self, x: int) -> tuple[int, int, int, int]:
        e = self.embed
        return tuple(e[v] for v in self.G.matrix(x))  # type: ignore[return-value]

    def matmul(self, x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, int, int, int]:
        F = self.F
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        return (
            F.add(F.mul(a1, a2), F.mul(b1, c2)), F.add(F.mul(a1, b2), F.mul(b1, d2)),
            F.add(F.mul(c1, a2), F.mul(d1, c2)), F.add(F.mul(c1, b2), F.mul(d1, d2)),
        )

    def det(self, m: tuple[int, ...]) -> int:
        F = self.F
        return F.sub(F.mul(m[0], m[3]), F.mul(m[1], m[2]))

    def adjugate(self, m: tuple[int, ...]) -> tuple[int, int, int, int]:
        n = self.F.neg_list
        return (m[3], n[m[1]], n[m[2]], m[0])

    def trace(self, m: tuple[int, ...]) -> int:
        return self.F.add(m[0], m[3])

    def commutator_trace(self, x: int, y: int) -> int:
        """``tr(A^-1 B^-1 A B)``: well defined on projective classes."""
        A, B = self.matrix(x), self.matrix(y)
        F = self.F
        m = self.matmul(self.matmul(self.adjugate(A), self.adjugate(B)), self.matmul(A, B))
        return F.mul(self.trace(m), F.inverse(F.mul(self.det(A), self.det(B))))


_LIFTS: dict[str, _LiftData] = {}


def _lift_data(G: ProjectiveMatrixGroup) -> _LiftData:
    if G.name not in _LIFTS:
        _LIFTS[G.name] = _LiftData(G)
    return _LIFTS[G.name]


def character_key(G: ProjectiveMatrixGroup, imgs: Sequence[int]) -> tuple[int, ...]:
    """Traces of SL(2) lifts of ordered subset products, minimized over the ``2^n`` lift signs."""
    L = _lift_data(G)
    F = L.F
    mats = [L.matrix(x) for x in imgs]
    roots = [L.sqrt[L.det(m)] for m in mats]
    base = []
    for k in range(1, len(imgs) + 1):
        for S in combinations(range(len(imgs)), k):
            m, scale = (1, 0, 0, 1), 1
            for i in S:
                m = L.matmul(m, mats[i])
                scale = F.mul(scale, roots[i])
            base.append((S, F.mul(L.trace(m), F.inverse(scale))))
    best = None
    for signs in product((0, 1), repeat=len(imgs)):
        key = tuple(F.neg_list[t] if sum(signs[i] for i in S) % 2 else t for S, t in base)
        if best is None or key < best:
            best = key
    return best  # type: ignore[return-value]


def is_irreducible(G: ProjectiveMatrixGroup, imgs: Sequence[int]) -> bool:
    """Absolute irreducibility of the lifted image.

    With ``A`` the first nontrivial image, the image is reducible exactly
    when ``tr [A, h] = 2`` for every image ``h`` and every product of two
    images.
    """
    L = _lift_data(G)
    two = L.F.add(1, 1)
    nontrivial = [x for x in imgs if x != G.identity]
    if not nontrivial:
        return False
    A = nontrivial[0]
    pool = list(imgs) + [G.mul(x, y) for x in imgs for y in imgs]
    return any(L.commutator_trace(A, h) != two for h in pool)


def character_count(P: Presentation, q: int, ambient: str = "PGL", threads: int = 1) -> int:
    """Distinct absolutely irreducible characters of ``P`` with values in ``F_q``.

    ``ambient="PGL"`` counts every such character (each is realized in
    PGL(2,q), i.e. inside PSL(2,q^2)); ``ambient="PSL"`` keeps only those
    realized by homomorphisms into PSL(2,q).
    """
    G = pgl2_group(q) if ambient == "PGL" else psl2_group(q)
    return len({h.character for h in enumerate_homs(P, G, threads) if h.irreducible})


def triple_reduction_count(sig: Sequence[int], q: int) -> int:
    """Irreducible characters of ``Delta(sig)`` over ``F_q`` from reducing the complex census.

    Traces ``2cos(pi j/m)`` become ``z^j + z^-j`` for a primitive ``2m``-th root
    ``z`` in an extension of ``F_q``; triples with every entry in ``F_q`` and
    nonzero discriminant are kept, then counted up to even sign flips.  Only
    meaningful when ``q`` is prime to ``2 lcm(p, q, r)``.
    """
    from math import lcm

    p_char, e = prime_power(q)
    s = TriangleSignature.of(sig)
    n = 2 * lcm(*s)
    if n % p_char == 0:
        raise ValueError(f"q = {q} divides 2*lcm{tuple(s)}; reduction is ramified")
    k = 1
    while (q ** k - 1) % n:
        k += 1
    F = FiniteField(p_char, e * k)
    zeta = F.root_of_unity(n)
    in_base = lambda x: F.power(x, q) == x

    def trace(j: int, m: int) -> int:
        z = F.power(zeta, j * (n // (2 * m)))
        return F.add(z, F.inverse(z))

    four = F.element(4)
    keys = set()
    for ja in range(1, s.p):
        for jb in range(1, s.q):
            for jc in range(1, s.r):
                a, b, c = trace(ja, s.p), trace(jb, s.q), trace(jc, s.r)
                if not all(in_base(x) for x in (a, b, c)):
                    continue
                sq = F.add(F.add(F.mul(a, a), F.mul(b, b)), F.mul(c, c))
                kap = F.sub(F.sub(sq, F.mul(F.mul(a, b), c)), four)
                if kap == 0:
                    continue
                ng = F.neg_list
                orbit = [(a, b, c), (ng[a], ng[b], c), (ng[a], b, ng[c]), (a, ng[b], ng[c])]
                keys.add(min(orbit))
    return len(keys)


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class Budget:
    """Catalog bounds: PSL(2,q') for ``q' <= q``, ``D_n`` for ``n <= d``, ``S_n``/``A_n`` for ``n <= s``."""

    q: int = 13
    d: int = 16
    s: int = 6

    def catalog(self) -> list[str]:
        ids = [f"PSL(2,{x})" for x in prime_powers(2, self.q)]
        ids += [f"D_{n}" for n in range(2, self.d + 1)]
        ids += [f"S_{n}" for n in range(3, self.s + 1)]
        ids += [f"A_{n}" for n in range(4, self.s + 1)]
        return ids


@dataclass(frozen=True)
class Fingerprint:
    abelian: AbelianInvariants
    entries: tuple[tuple[str, int, int], ...]

    def counts(self) -> dict[str, tuple[int, int]]:
        return {t: (h, e) for t, h, e in self.entries}


def fingerprint(P: Presentation, budget: Budget | None = None, threads: int = 1) -> Fingerprint:
    budget = budget or Budget()
    entries = []
    for tid in budget.catalog():
        homs = enumerate_homs(P, catalog_group(tid), threads)
        entries.append((tid, len(homs), sum(h.surjective for h in homs)))
    return Fingerprint(abelian_invariants(P), tuple(entries))


@dataclass(frozen=True)
class Separation:
    separator: str | None
    left: object = None
    right: object = None

    @property
    def separated(self) -> bool:
        return self.separator is not None


def distinguish(P1: Presentation, P2: Presentation, budget: Budget | None = None, threads: int = 1) -> Separation:
    """First invariant that differs: ``"abelianization"``, a catalog id, or ``None``."""
    a1, a2 = abelian_invariants(P1), abelian_invariants(P2)
    if a1 != a2:
        return Separation("abelianization", a1, a2)
    if a1.is_elementary_2group() != a2.is_elementary_2group():
        return Separation("abelianization", a1, a2)
    budget = budget or Budget()
    for tid in budget.catalog():
        G = catalog_group(tid)
        h1, h2 = enumerate_homs(P1, G, threads), enumerate_homs(P2, G, threads)
        c1 = (len(h1), sum(h.surjective for h in h1))
        c2 = (len(h2), sum(h.surjective for h in h2))
        if c1 != c2:
            return Separation(tid, c1, c2)
    return Separation(None)


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class Witness:
    h_presentation: Presentation
    gamma_presentation: Presentation
    q: int
    hom: HomClass
    image_order: int
    image_profile: tuple[tuple[int, int], ...]
    transcript: tuple[dict, ...] = field(repr=False)
    transcript_hash: str = ""


def _hash_transcript(transcript: Sequence[dict]) -> str:
    return hashlib.sha256(json.dumps(list(transcript), sort_keys=True).encode()).hexdigest()


def _epi_search(gamma: Presentation, image: FiniteGroup) -> dict:
    homs = enumerate_homs(gamma, image)
    return {"image_order": image.order, "hom_classes": len(homs), "epi_classes": sum(h.surjective for h in homs)}


def quotient_witness(
    H: Presentation,
    gamma: Presentation,
    q_max: int = 31,
    q_min: int = 2,
    nonabelian: bool = False,
    threads: int = 1,
) -> Witness:
    """First irreducible image of ``H`` in some PSL(2,q) that ``gamma`` cannot map onto.

    Images are tested once per ``(order, class profile)`` key.  Raises
    :class:`BudgetExhausted` when every candidate up to ``q_max`` is a
    quotient of ``gamma``.
    """
    tested: dict[tuple, dict] = {}
    transcript: list[dict] = []
    searched: list[int] = []
    for q in prime_powers(q_min, q_max):
        G = psl2_group(q)
        searched.append(q)
        for hom in enumerate_homs(H, G, threads):
            if not hom.irreducible:
                continue
            elements = G.subgroup_closure(hom.images)
            if nonabelian and G.is_abelian_subset(_generators_of(G, hom.images)):
                continue
            image = G.subgroup(elements, name=f"image in {G.name}")
            key = (image.order, image.class_profile())
            if key in tested:
                continue
            result = _epi_search(gamma, image)
            entry = {"q": q, "images": list(hom.images), **result}
            transcript.append(entry)
            tested[key] = result
            if result["epi_classes"] == 0:
                return Witness(H, gamma, q, hom, image.order, image.class_profile(), tuple(transcript),
                               _hash_transcript(transcript))
    raise BudgetExhausted(f"no witness for q <= {q_max}", tuple(searched))


def _generators_of(G: FiniteGroup, imgs: Sequence[int]) -> list[int]:
    return [x for x in imgs if x != G.identity]


def verify_witness(w: Witness) -> bool:
    """Recompute the image from the stored homomorphism and rerun the epimorphism search."""
    from tririgid.presentation import is_homomorphism

    G = psl2_group(w.q)
    if not is_homomorphism(w.h_presentation, list(w.hom.images), G):
        return False
    if not is_irreducible(G, w.hom.images):
        return False
    elements = G.subgroup_closure(w.hom.images)
    image = G.subgroup(elements)
    if image.order != w.image_order or image.class_profile() != w.image_profile:
        return False
    if _epi_search(w.gamma_presentation, image)["epi_classes"] != 0:
        return False
    return _hash_transcript(w.transcript) == w.transcript_hash and w.transcript[-1]["epi_classes"] == 0


def quadrilateral_presentation(orders: Sequence[int] = (2, 2, 2, 3)) -> Presentation:
    from tririgid.presentation import signature_presentation

    return signature_presentation(0, orders, 0)


def triangle(sig: Sequence[int]) -> Presentation:
    return triangle_presentation(TriangleSignature.of(sig))
