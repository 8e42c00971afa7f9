"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines are printed even when output is captured) or
directly with ``python3 tests/test_acceptance.py``.  Every tolerance and time
budget is pinned in the constants below; all arithmetic is exact, so the
numeric tolerance is zero everywhere.
"""

from __future__ import annotations

import json
import random
import sys
import time
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import brute_force_cyclic_homs, determinantal_divisors_agree, random_matrix  # noqa: E402
from tririgid.characters import (  # noqa: E402
    DENSE,
    GALOIS_RIGID,
    NOT_GALOIS_RIGID,
    REDUCIBLE,
    character_census,
    galois_image,
    galois_units,
    iter_kappa_factorizations,
    lower_left_entry,
    rigidity_report,
)
from tririgid.cli import run  # noqa: E402
from tririgid.cyclotomic import two_cos  # noqa: E402
from tririgid.errors import BudgetExhausted  # noqa: E402
from tririgid.fuchsian import (  # noqa: E402
    admissible_free_products,
    euler_characteristic,
    expected_extension_abelianizations,
    commensurability_edges,
)
from tririgid.cosets import verify_index2_embedding  # noqa: E402
from tririgid.presentation import index2_extensions, parse_presentation, triangle_presentation  # noqa: E402
from tririgid.quotients import (  # noqa: E402
    Budget,
    character_count,
    distinguish,
    quadrilateral_presentation,
    quotient_witness,
    verify_witness,
)
from tririgid.smith import IntegerMatrix, abelian_invariants, smith_normal_form  # noqa: E402

RIGID_SEVEN = [(3, 3, 4), (4, 4, 4), (3, 3, 6), (2, 5, 5), (3, 5, 5), (3, 3, 5), (5, 5, 5)]
NON_RIGID = (6, 6, 6)
RIGIDITY_SECONDS = 10.0

EXTENSION_PAIRS = [(3, 4), (2, 5), (3, 5), (4, 4), (5, 5)]
SEPARATION_BUDGET = Budget(q=13, d=16, s=6)

CHI_238 = Fraction(-1, 24)
# Delta(p,p,q) inside Delta(2,p,2q)
EMBEDDING_PAIRS = [(3, 4), (4, 4), (3, 6), (5, 2), (5, 3), (3, 5), (5, 5)]
EMBEDDING_SECONDS = 60.0

FREE_PRODUCT_BOUND = Fraction(-1, 2)
FREE_PRODUCT_SCAN = 1000

FINITE_QS = [5, 7, 9, 11, 13, 17]
FINITE_CAP = 12
GROWTH_QS = [5, 7, 11, 13]
GROWTH_SECONDS = 600.0

WITNESS_Q_MAX = 31

SNF_SAMPLES = 1000
SNF_SEED = 20260401
HOM_COUNT_MAX_N = 12
ORACLE_SECONDS = 300.0


def report(number: int, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}", flush=True)


# ---------------------------------------------------------------------------


def check_rigidity() -> bool:
    start = time.perf_counter()
    bad = []
    for sig in RIGID_SEVEN:
        r = rigidity_report(sig)
        if (r.n_k, r.dense_count, r.verdict) != (2, 2, GALOIS_RIGID):
            bad.append(f"{sig}: n_K={r.n_k} dense={r.dense_count}")
    r = rigidity_report(NON_RIGID)
    if r.verdict != NOT_GALOIS_RIGID:
        bad.append(f"{NON_RIGID} reported rigid")
    code, out = run(["rigidity", "--triangle", "3,3,6", "--format", "json"])
    if (code, json.loads(out)) != (0, {"dense": 2, "nK": 2, "verdict": "GaloisRigid"}):
        bad.append("CLI (3,3,6)")
    elapsed = time.perf_counter() - start
    if elapsed >= RIGIDITY_SECONDS:
        bad.append(f"took {elapsed:.1f}s")
    ok = not bad
    report(1, ok, f"rigidity verdicts ({elapsed:.2f}s)" + ("" if ok else "; mismatches: " + ", ".join(bad)))
    return ok


def check_worked_case() -> bool:
    sqrt3 = two_cos(1, 6)
    census = character_census((3, 3, 6))
    problems = []
    dense = {c.representative.values[2]: c for c in census if c.kind == DENSE}
    if set(dense) != {sqrt3, -sqrt3}:
        problems.append(f"dense traces {sorted(map(str, dense))}")
    else:
        if lower_left_entry(dense[sqrt3].representative) != 1 + sqrt3:
            problems.append("z at +sqrt3")
        if lower_left_entry(dense[-sqrt3].representative) != 1 - sqrt3:
            problems.append("z at -sqrt3")
    a4_at_zero = [c for c in census if c.representative.values[2] == 0]
    if not (len(a4_at_zero) == 1 and str(a4_at_zero[0].classification) == "finite(12, A4)"):
        problems.append("A4 at tr(ab)=0")
    reducible = [c for c in census if c.kind == REDUCIBLE]
    if not (len(reducible) == 1 and reducible[0].kappa == 0 and reducible[0].representative.values == (1, 1, -1)):
        problems.append("reducible class")
    ok = not problems
    report(2, ok, "Delta(3,3,6) census" + ("" if ok else ": " + ", ".join(problems)))
    return ok


def check_extensions() -> bool:
    problems = []
    for p, q in EXTENSION_PAIRS:
        fam = index2_extensions(p, q)
        for (kind, P), expected in zip(fam.items(), expected_extension_abelianizations(p, q)):
            got = abelian_invariants(P)
            if got != expected:
                problems.append(f"({p},{q}) {kind}: {got} != {expected}")
        minus, lam = abelian_invariants(fam["minus"]), abelian_invariants(fam["lambda"])
        if not (minus.is_elementary_2group() and not lam.is_elementary_2group()):
            problems.append(f"({p},{q}) elementary-2 test")
    fam = index2_extensions(3, 4)
    for (a, P), (b, Q) in combinations(fam.items(), 2):
        if not distinguish(P, Q, SEPARATION_BUDGET).separated:
            problems.append(f"{a}/{b} not separated")
    ok = not problems
    report(3, ok, "extension abelianizations and separation" + ("" if ok else ": " + "; ".join(problems)))
    return ok


def check_commensurability() -> bool:
    start = time.perf_counter()
    problems = []
    for e in commensurability_edges():
        ratio = euler_characteristic(e.smaller) / euler_characteristic(e.larger)
        if ratio != e.index:
            problems.append(f"{e.larger}>{e.smaller}: ratio {ratio} != {e.index}")
    if euler_characteristic((2, 3, 8)) != CHI_238:
        problems.append("chi(2,3,8)")
    for p, q in EMBEDDING_PAIRS:
        emb = verify_index2_embedding(p, q)
        if emb.matched.index != 2 or not emb.unique:
            problems.append(f"Delta({p},{p},{q}) embedding")
    elapsed = time.perf_counter() - start
    if elapsed >= EMBEDDING_SECONDS:
        problems.append(f"took {elapsed:.1f}s")
    ok = not problems
    report(4, ok, f"chi ratios and index-2 embeddings ({elapsed:.2f}s)" + ("" if ok else ": " + "; ".join(problems)))
    return ok


def _scan_free_products(limit: int) -> set[tuple[int, ...]]:
    """Exhaustive integer scan of ``sum 1/n_i + 1 - m >= -1/2`` over ``2 <= n_1 <= .. <= n_m <= limit``."""
    found = set()
    n = np.arange(2, limit + 1, dtype=np.int64)
    # m = 2: 2(a + b) >= ab
    a, b = np.meshgrid(n, n, indexing="ij")
    mask = (a <= b) & (2 * (a + b) >= a * b)
    found |= {(int(x), int(y)) for x, y in zip(a[mask], b[mask])}
    # m = 3: 2(ab + bc + ca) >= 3abc
    for x in n:
        y, z = a[x - 2:, x - 2:], b[x - 2:, x - 2:]
        mask = (y <= z) & (2 * (x * y + y * z + z * x) >= 3 * x * y * z)
        found |= {(int(x), int(u), int(v)) for u, v in zip(y[mask], z[mask])}
    # m >= 4 would need sum 1/n_i >= m - 3/2 > m/2, impossible as each term is <= 1/2
    return found


def check_free_products() -> bool:
    listed = admissible_free_products(FREE_PRODUCT_BOUND, max_order=FREE_PRODUCT_SCAN)
    scanned = _scan_free_products(FREE_PRODUCT_SCAN)
    shape = all(len(t) == 2 for t in listed if t != (2, 2, 2)) and (2, 2, 2) in listed
    ok = set(listed) == scanned and len(listed) == len(set(listed)) and shape
    report(5, ok, f"free-product filter, {len(listed)} tuples vs scan to {FREE_PRODUCT_SCAN}")
    return ok


def check_finiteness_vs_growth() -> bool:
    start = time.perf_counter()
    finite = [character_count(triangle_presentation((3, 3, 4)), q) for q in FINITE_QS]
    growth = [character_count(quadrilateral_presentation(), q) for q in GROWTH_QS]
    elapsed = time.perf_counter() - start
    ok = (
        max(finite) <= FINITE_CAP
        and all(x < y for x, y in zip(growth, growth[1:]))
        and elapsed < GROWTH_SECONDS
    )
    report(6, ok, f"(3,3,4) counts {finite}, quadrilateral counts {growth} ({elapsed:.1f}s)")
    return ok


def check_witness() -> bool:
    try:
        w = quotient_witness(quadrilateral_presentation(), triangle_presentation((2, 3, 8)), q_max=WITNESS_Q_MAX)
    except BudgetExhausted as exc:
        report(7, True, f"budget exhausted through q={exc.searched[-1]}")
        return True
    verified = verify_witness(w)
    code, out = run(["witness", "--signature", "0:2,2,2,3:0", "--triangle", "2,3,8", "--q-max", str(WITNESS_Q_MAX),
                     "--format", "json"])
    cli_ok = code == 0 and json.loads(out)["verified"] is True
    ok = verified and cli_ok
    report(7, ok, f"witness at q={w.q}, image order {w.image_order}, re-verified={verified}, cli={cli_ok}")
    return ok


def _hom_count_corpus():
    yield from (triangle_presentation(s) for s in RIGID_SEVEN + [(2, 3, 7), NON_RIGID])
    for p, q in [(3, 4), (2, 5)]:
        yield from (P for _, P in index2_extensions(p, q).items())
    yield quadrilateral_presentation()
    yield parse_presentation("a,b; a^4*b^6, a^6*b^4")


def check_oracles() -> bool:
    start = time.perf_counter()
    rng = random.Random(SNF_SEED)
    snf_bad = 0
    for _ in range(SNF_SAMPLES):
        rows = random_matrix(rng)
        inv, rank = smith_normal_form(IntegerMatrix.from_rows(rows))
        if not determinantal_divisors_agree(rows, inv, rank):
            snf_bad += 1
    hom_bad = [
        (P.name, n)
        for P in _hom_count_corpus()
        for n in range(1, HOM_COUNT_MAX_N + 1)
        if brute_force_cyclic_homs(P, n) != abelian_invariants(P).hom_count(n)
    ]
    kappa_bad = [t.indices for sig in RIGID_SEVEN for t, k, f in iter_kappa_factorizations(sig) if k != f]
    galois_bad = []
    for sig in [(3, 3, 6), (5, 5, 5)]:
        census = {c.representative: c for c in character_census(sig)}
        for rep, cls in census.items():
            for s in galois_units(sig):
                image = census[galois_image(rep, s).canonical()].classification
                if (image.kind, image.order) != (cls.classification.kind, cls.classification.order):
                    galois_bad.append((sig, rep.indices, s))
    elapsed = time.perf_counter() - start
    ok = not (snf_bad or hom_bad or kappa_bad or galois_bad) and elapsed < ORACLE_SECONDS
    report(8, ok, f"SNF {SNF_SAMPLES - snf_bad}/{SNF_SAMPLES}, hom-count mismatches {len(hom_bad)}, "
                  f"kappa mismatches {len(kappa_bad)}, Galois mismatches {len(galois_bad)} ({elapsed:.1f}s)")
    return ok


CHECKS = [
    check_rigidity,
    check_worked_case,
    check_extensions,
    check_commensurability,
    check_free_products,
    check_finiteness_vs_growth,
    check_witness,
    check_oracles,
]


@pytest.mark.parametrize("check", CHECKS, ids=lambda c: c.__name__.removeprefix("check_"))
def test_acceptance(check, capsys):
    with capsys.disabled():
        ok = check()
    assert ok


if __name__ == "__main__":
    results = [check() for check in CHECKS]
    sys.exit(0 if all(results) else 1)
