"""Report payloads and their JSON/text renderings.

Every builder returns a :class:`Report`; JSON is canonical (sorted keys,
compact separators, exact numbers as strings) so equal inputs give equal bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from tririgid.characters import CharacterClass, RigidityReport
from tririgid.cosets import Index2Embedding
from tririgid.cyclotomic import CycNumber, format_cyc
from tririgid.fuchsian import FuchsianSignature
from tririgid.quotients import Fingerprint, HomClass, Separation, Witness
from tririgid.smith import AbelianInvariants

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Report:
    kind: str
    payload: dict
    text: str


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def render(report: Report, fmt: str = "text") -> bytes:
    if fmt == "json":
        return (canonical_json(report.payload) + "\n").encode()
    if fmt == "text":
        return (report.text.rstrip("\n") + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def cyc(x: CycNumber) -> str:
    return format_cyc(x.minimal())


def rational(x: Fraction) -> str:
    return str(Fraction(x))


def _table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def abelian_fields(inv: AbelianInvariants) -> dict:
    return {"abelian": str(inv), "torsion": list(inv.torsion), "free_rank": inv.free_rank}


# --------------------------------------------------------------------------
# builders


def abelianization_report(group: str, inv: AbelianInvariants) -> Report:
    return Report("abelianization", {"group": group, **abelian_fields(inv)}, str(inv))


def euler_report(group: str, chi: Fraction, sig: FuchsianSignature | None, b1_bound: int | None) -> Report:
    """``sig`` and ``b1_bound`` are ``None`` for groups with orientation-reversing elements."""
    payload: dict = {"group": group, "chi": rational(chi)}
    text = f"chi = {rational(chi)}"
    if sig is not None:
        payload["signature"] = {"genus": sig.genus, "cone_orders": list(sig.cone_orders), "cusps": sig.cusps}
        payload["b1_bound"] = b1_bound
        text += f"\nb1 <= {b1_bound}"
    return Report("euler", payload, text)


def rigidity_summary(report: RigidityReport) -> Report:
    sig = ",".join(map(str, report.signature))
    text = f"Delta({sig}): {report.verdict}\nn_K = {report.n_k}, dense classes = {report.dense_count}"
    payload = {"nK": report.n_k, "dense": report.dense_count, "verdict": report.verdict}
    return Report("rigidity", payload, text)


def _class_entry(c: CharacterClass) -> dict:
    entry = {
        "rep": list(c.representative.indices),
        "traces": [cyc(v) for v in c.representative.values],
        "orbit-size": len(c.orbit),
        "kappa": cyc(c.kappa),
        "class": c.kind,
    }
    if c.classification.order is not None:
        entry["finite-order"] = c.classification.order
        entry["finite-type"] = c.classification.type_tag
    return entry


def census_report(report: RigidityReport) -> Report:
    classes = [_class_entry(c) for c in report.census]
    payload = {
        "signature": list(report.signature),
        "classes": classes,
        "nK": report.n_k,
        "verdict": report.verdict,
    }
    rows = [
        (
            "(" + ",".join(map(str, e["rep"])) + ")",
            e["orbit-size"],
            str(report.census[i].classification),
            e["kappa"],
            ", ".join(e["traces"]),
        )
        for i, e in enumerate(classes)
    ]
    head = rigidity_summary(report).text
    return Report("census", payload, head + "\n\n" + _table(("rep", "orbit", "class", "kappa", "traces"), rows))


def extensions_report(p: int, q: int, rows: Sequence[tuple[str, str, AbelianInvariants, AbelianInvariants]],
                      minus_vs_lambda: str | None) -> Report:
    entries = [
        {"kind": kind, "group": name, "abelian": str(got), "expected": str(want), "matches": got == want}
        for kind, name, got, want in rows
    ]
    payload = {"p": p, "q": q, "extensions": entries, "minus-vs-lambda": minus_vs_lambda}
    table = _table(
        ("kind", "group", "abelian", "expected", "ok"),
        [(e["kind"], e["group"], e["abelian"], e["expected"], "yes" if e["matches"] else "NO") for e in entries],
    )
    tail = f"minus vs lambda separated by: {minus_vs_lambda or 'nothing'}"
    return Report("extensions", payload, table + "\n" + tail)


def fingerprint_report(group: str, fp: Fingerprint) -> Report:
    targets = [{"id": t, "homs": h, "epis": e} for t, h, e in fp.entries]
    payload = {"group": group, "abelian": str(fp.abelian), "targets": targets}
    text = f"{group}: abelianization {fp.abelian}\n" + _table(
        ("target", "homs", "epis"), [(t["id"], t["homs"], t["epis"]) for t in targets]
    )
    return Report("fingerprint", payload, text)


def _side(x: Any) -> Any:
    if isinstance(x, AbelianInvariants):
        return str(x)
    if isinstance(x, tuple):
        return {"homs": x[0], "epis": x[1]}
    return x


def separation_report(left: str, right: str, sep: Separation) -> Report:
    payload = {
        "left": left,
        "right": right,
        "separator": sep.separator,
        "left-value": _side(sep.left),
        "right-value": _side(sep.right),
    }
    if sep.separated:
        text = f"separated by {sep.separator}: {_side(sep.left)} vs {_side(sep.right)}"
    else:
        text = "not separated within budget"
    return Report("separation", payload, text)


def _hom_entry(h: HomClass) -> dict:
    entry: dict = {"images": list(h.images), "image-order": h.image_order, "surjective": h.surjective}
    if h.character is not None:
        entry["character"] = list(h.character)
    if h.irreducible is not None:
        entry["irreducible"] = h.irreducible
    return entry


def homs_report(group: str, target: str, homs: Sequence[HomClass]) -> Report:
    entries = [_hom_entry(h) for h in homs]
    payload = {
        "group": group,
        "target": target,
        "hom-classes": len(homs),
        "epi-classes": sum(h.surjective for h in homs),
        "classes": entries,
    }
    rows = [(i, " ".join(map(str, e["images"])), e["image-order"], "yes" if e["surjective"] else "no")
            for i, e in enumerate(entries)]
    text = f"{group} -> {target}: {payload['hom-classes']} classes, {payload['epi-classes']} onto\n"
    return Report("homs", payload, text + _table(("#", "images", "image", "onto"), rows))


def witness_report(w: Witness, verified: bool) -> Report:
    payload = {
        "q": w.q,
        "image-order": w.image_order,
        "H-images": list(w.hom.images),
        "transcript-hash": w.transcript_hash,
        "verified": verified,
    }
    text = (
        f"witness in PSL(2,{w.q}): image of order {w.image_order}, no epimorphism from {w.gamma_presentation.name}\n"
        f"images {list(w.hom.images)}, transcript {w.transcript_hash}, re-verified: {'yes' if verified else 'NO'}"
    )
    return Report("witness", payload, text)


def exhausted_report(searched: Sequence[int]) -> Report:
    payload = {"q": None, "searched": list(searched), "status": "budget-exhausted"}
    return Report("witness", payload, f"budget exhausted after q in {list(searched)}")


def embedding_report(e: Index2Embedding) -> Report:
    kernels = [
        {"signs": list(k.signs), "index": k.index, "abelian": str(k.abelian), "matches": k.matches}
        for k in e.kernels
    ]
    payload = {
        "parent": list(e.parent),
        "subgroup": list(e.subgroup),
        "kernels": kernels,
        "matched": list(e.matched.signs),
        "unique": e.unique,
    }
    par, sub = ",".join(map(str, e.parent)), ",".join(map(str, e.subgroup))
    head = f"Delta({sub}) is the kernel {list(e.matched.signs)} in Delta({par})" + (" (unique)" if e.unique else "")
    rows = [(" ".join(map(str, k["signs"])), k["index"], k["abelian"], "yes" if k["matches"] else "no") for k in kernels]
    return Report("index2", payload, head + "\n" + _table(("signs", "index", "abelian", "match"), rows))


def refdata_report(payload: dict) -> Report:
    lines = []
    for entry in payload["entries"]:
        sig = ",".join(map(str, entry["signature"]))
        lines.append(f"Delta({sig}): Q(sqrt {entry['d']}), ramified over {entry['ramified_prime']}")
        for edge in entry["edges"]:
            big, small = ",".join(map(str, edge["larger"])), ",".join(map(str, edge["smaller"]))
            lines.append(f"  Delta({small}) < Delta({big}) index {edge['index']}")
    return Report("refdata", payload, "\n".join(lines))
