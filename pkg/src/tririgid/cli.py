"""``tririgid`` command-line front end.

Exit codes: 0 success, 1 negative answer or budget exhausted, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from tririgid import render
from tririgid.errors import (
    BudgetExhausted,
    CapExceeded,
    NoMatch,
    NonHyperbolicSignature,
    NotPrimePower,
    TriRigidError,
)
from tririgid.presentation import ExtensionFamily, Presentation, TriangleSignature


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class GroupSpec:
    source: str
    value: str

    @property
    def label(self) -> str:
        return f"{self.source}:{self.value}"


class _AppendSpec(argparse.Action):
    """Collect every group-spec flag, in command-line order, into one list."""

    def __call__(self, parser, namespace, values, option_string=None):
        specs = list(getattr(namespace, "groups", None) or [])
        specs.append(GroupSpec(self.metavar_source, values))
        namespace.groups = specs


def _spec_action(source: str):
    return type(f"_Append_{source}", (_AppendSpec,), {"metavar_source": source})


# --------------------------------------------------------------------------
# group-spec parsing


def _ints(text: str, count: int | None = None) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None
    if count is not None and len(out) != count:
        raise UsageError(f"expected {count} integers, got {text!r}")
    return out


def _triangle_sig(text: str) -> TriangleSignature:
    return TriangleSignature.of(_ints(text, 3))


def _extension(text: str) -> tuple[str, int, int]:
    kind, sep, rest = text.partition(":")
    if not sep or kind not in ExtensionFamily.KINDS:
        raise UsageError(f"extension must be KIND:p,q with KIND in {', '.join(ExtensionFamily.KINDS)}")
    p, q = _ints(rest, 2)
    return kind, p, q


def _signature(text: str):
    from tririgid.fuchsian import FuchsianSignature

    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("signature must be GENUS:m1,m2,..:CUSPS")
    try:
        genus, cusps = int(parts[0]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad signature {text!r}") from None
    return FuchsianSignature(genus, _ints(parts[1]), cusps)


def build_group(spec: GroupSpec) -> Presentation:
    from tririgid.presentation import (
        coxeter_presentation,
        index2_extensions,
        parse_presentation,
        signature_presentation,
        triangle_presentation,
    )

    if spec.source == "triangle":
        return triangle_presentation(_triangle_sig(spec.value).require_hyperbolic())
    if spec.source == "coxeter":
        return coxeter_presentation(_triangle_sig(spec.value).require_hyperbolic())
    if spec.source == "extension":
        kind, p, q = _extension(spec.value)
        return index2_extensions(p, q)[kind]
    if spec.source == "signature":
        sig = _signature(spec.value)
        return signature_presentation(sig.genus, sig.cone_orders, sig.cusps)
    return parse_presentation(spec.value)


def _one(args: argparse.Namespace) -> GroupSpec:
    specs = args.groups or []
    if len(specs) != 1:
        raise UsageError(f"{args.verb} needs exactly one group spec, got {len(specs)}")
    return specs[0]


def _two(args: argparse.Namespace) -> tuple[GroupSpec, GroupSpec]:
    specs = args.groups or []
    if len(specs) != 2:
        raise UsageError(f"{args.verb} needs exactly two group specs, got {len(specs)}")
    return specs[0], specs[1]


def _only_triangle(args: argparse.Namespace) -> TriangleSignature:
    spec = _one(args)
    if spec.source != "triangle":
        raise UsageError(f"{args.verb} works on --triangle only")
    return _triangle_sig(spec.value).require_hyperbolic()


def _pair(text: str) -> tuple[int, int]:
    p, q = _ints(text, 2)
    return p, q


# --------------------------------------------------------------------------
# verbs


def _budget(args: argparse.Namespace):
    from tririgid.quotients import Budget

    return Budget(q=args.max_q, d=args.max_dihedral, s=args.max_symmetric)


def cmd_abelianize(args) -> tuple[render.Report, int]:
    from tririgid.smith import abelian_invariants

    spec = _one(args)
    return render.abelianization_report(spec.label, abelian_invariants(build_group(spec))), 0


def cmd_euler(args) -> tuple[render.Report, int]:
    from tririgid.fuchsian import FuchsianSignature, b1_upper_bound, euler_characteristic, require_hyperbolic

    spec = _one(args)
    if spec.source == "triangle":
        sig = require_hyperbolic(FuchsianSignature.triangle(*_triangle_sig(spec.value)))
    elif spec.source == "signature":
        sig = require_hyperbolic(_signature(spec.value))
    elif spec.source == "coxeter":
        base = require_hyperbolic(FuchsianSignature.triangle(*_triangle_sig(spec.value)))
        return render.euler_report(spec.label, euler_characteristic(base) / 2, None, None), 0
    elif spec.source == "extension":
        kind, p, q = _extension(spec.value)
        base = require_hyperbolic(FuchsianSignature.triangle(p, q, q))
        if kind == "rotation":
            sig = require_hyperbolic(FuchsianSignature.triangle(2 * p, q, 2))
        else:
            return render.euler_report(spec.label, euler_characteristic(base) / 2, None, None), 0
    else:
        raise UsageError("euler needs a Fuchsian group spec, not a raw presentation")
    return render.euler_report(spec.label, euler_characteristic(sig), sig, b1_upper_bound(sig)), 0


def cmd_characters(args) -> tuple[render.Report, int]:
    from tririgid.characters import rigidity_report

    return render.census_report(rigidity_report(_only_triangle(args), threads=args.threads)), 0


def cmd_rigidity(args) -> tuple[render.Report, int]:
    from tririgid.characters import rigidity_report

    report = rigidity_report(_only_triangle(args), threads=args.threads)
    return render.rigidity_summary(report), 0 if report.is_rigid else 1


def cmd_extensions(args) -> tuple[render.Report, int]:
    from tririgid.fuchsian import expected_extension_abelianizations
    from tririgid.presentation import index2_extensions
    from tririgid.quotients import distinguish
    from tririgid.smith import abelian_invariants

    p, q = _pair(args.pair)
    family = index2_extensions(p, q)
    expected = expected_extension_abelianizations(p, q)
    rows = [(kind, P.name, abelian_invariants(P), want) for (kind, P), want in zip(family.items(), expected)]
    sep = distinguish(family["minus"], family["lambda"], _budget(args), args.threads).separator
    ok = all(got == want for _, _, got, want in rows)
    return render.extensions_report(p, q, rows, sep), 0 if ok else 1


def cmd_fingerprint(args) -> tuple[render.Report, int]:
    from tririgid.quotients import fingerprint

    spec = _one(args)
    return render.fingerprint_report(spec.label, fingerprint(build_group(spec), _budget(args), args.threads)), 0


def cmd_distinguish(args) -> tuple[render.Report, int]:
    from tririgid.quotients import distinguish

    left, right = _two(args)
    sep = distinguish(build_group(left), build_group(right), _budget(args), args.threads)
    return render.separation_report(left.label, right.label, sep), 0 if sep.separated else 1


def cmd_homs(args) -> tuple[render.Report, int]:
    from tririgid.groups import catalog_group
    from tririgid.quotients import enumerate_homs

    spec = _one(args)
    try:
        target = catalog_group(args.target)
    except (KeyError, ValueError, NotPrimePower) as exc:
        raise UsageError(f"unknown target {args.target!r}: {exc}") from None
    homs = enumerate_homs(build_group(spec), target, args.threads)
    return render.homs_report(spec.label, target.name, homs), 0


def cmd_witness(args) -> tuple[render.Report, int]:
    from tririgid.quotients import quotient_witness, verify_witness

    h_spec, gamma_spec = _two(args)
    try:
        w = quotient_witness(build_group(h_spec), build_group(gamma_spec), q_max=args.q_max, q_min=args.q_min,
                             nonabelian=args.nonabelian, threads=args.threads)
    except BudgetExhausted as exc:
        return render.exhausted_report(exc.searched), 1
    verified = verify_witness(w)
    return render.witness_report(w, verified), 0 if verified else 1


def cmd_subgroup_index2(args) -> tuple[render.Report, int]:
    from tririgid.cosets import verify_index2_embedding

    p, q = _pair(args.pair)
    return render.embedding_report(verify_index2_embedding(p, q, _budget(args))), 0


def cmd_refdata(args) -> tuple[render.Report, int]:
    import json

    from tririgid.fuchsian import reference_json

    return render.refdata_report(json.loads(reference_json())), 0


# --------------------------------------------------------------------------
# parser

_VERBS = {
    "abelianize": (cmd_abelianize, "Abelianization via Smith normal form of the relation matrix (e.g. Z/3 for Delta(3,3,4))."),
    "euler": (cmd_euler, "Orbifold Euler characteristic of a Fuchsian signature or triangle-group extension, with the b1 bound 2 - chi."),
    "characters": (cmd_characters, "Census of PSL(2,C) character classes of the triangle group Delta(p,q,r): reducible, finite or Zariski dense."),
    "rigidity": (cmd_rigidity, "Galois rigidity verdict for Delta(p,q,r): Zariski-dense character count against the trace-field degree n_K."),
    "extensions": (cmd_extensions, "Abelianizations of the four index-2 extensions of Delta(p,q,q) (product, Coxeter, Delta(2p,q,2), Lambda_rho) against the closed formulas."),
    "fingerprint": (cmd_fingerprint, "Finite-quotient fingerprint: abelianization plus hom/epi class counts into PSL(2,q), dihedral, symmetric and alternating groups."),
    "distinguish": (cmd_distinguish, "Separate two groups by abelianization or by a finite quotient from the fingerprint catalog."),
    "homs": (cmd_homs, "Conjugacy classes of homomorphisms from a finitely presented group into a finite target such as PSL(2,7)."),
    "witness": (cmd_witness, "Witness search: a PSL(2,q) image of H (e.g. the (2,2,2,3) quadrilateral group) that is not a quotient of Gamma (e.g. Delta(2,3,8))."),
    "subgroup-index2": (cmd_subgroup_index2, "Verify Delta(p,p,q) as an index-2 subgroup of Delta(2,p,2q) by coset enumeration and Reidemeister-Schreier."),
    "refdata": (cmd_refdata, "Reference data: arithmetic triangle groups with real quadratic trace field and their commensurability diagrams."),
}

_SPEC_VERBS = {"abelianize", "euler", "characters", "rigidity", "fingerprint", "distinguish", "homs", "witness"}
_BUDGET_VERBS = {"extensions", "fingerprint", "distinguish", "subgroup-index2"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tririgid", description="Exact computations on hyperbolic triangle groups and their finite quotients.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    for verb, (_, help_text) in _VERBS.items():
        sp = sub.add_parser(verb, help=help_text, description=help_text)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--threads", type=int, default=None, help="worker threads (default: $FPR_THREADS or 1)")
        if verb in _SPEC_VERBS:
            g = sp.add_argument_group("group specs (repeatable; order matters for two-group verbs)")
            g.add_argument("--triangle", action=_spec_action("triangle"), metavar="P,Q,R", help="Delta(p,q,r) = <a,b | a^p, b^q, (ab)^r>")
            g.add_argument("--coxeter", action=_spec_action("coxeter"), metavar="P,Q,R", help="reflection group Delta^-(p,q,r)")
            g.add_argument("--extension", action=_spec_action("extension"), metavar="KIND:P,Q",
                           help="index-2 extension of Delta(p,q,q); KIND is product, minus, rotation or lambda")
            g.add_argument("--signature", action=_spec_action("signature"), metavar="G:M1,..:S", help="Fuchsian signature (genus; cone orders; cusps)")
            g.add_argument("--presentation", action=_spec_action("presentation"), metavar="TEXT", help="raw presentation 'a,b; a^2, b^3, (ab)^7'")
        if verb in ("extensions", "subgroup-index2"):
            sp.add_argument("pair", metavar="P,Q")
        if verb in _BUDGET_VERBS:
            sp.add_argument("--max-q", type=int, default=13, help="largest q for PSL(2,q) targets")
            sp.add_argument("--max-dihedral", type=int, default=16, help="largest n for D_n targets")
            sp.add_argument("--max-symmetric", type=int, default=6, help="largest n for S_n and A_n targets")
        if verb == "homs":
            sp.add_argument("--target", required=True, help="catalog id: PSL(2,q), PGL(2,q), D_n, S_n, A_n or C_n")
        if verb == "witness":
            sp.add_argument("--q-max", type=int, default=31)
            sp.add_argument("--q-min", type=int, default=2)
            sp.add_argument("--nonabelian", action="store_true", help="skip abelian images")
        sp.set_defaults(groups=[])
    return parser


def resolve_threads(flag: int | None, environ: dict | None = None) -> int:
    """The flag wins over ``FPR_THREADS``; both default to 1."""
    environ = os.environ if environ is None else environ
    if flag is not None:
        value = flag
    else:
        raw = environ.get("FPR_THREADS", "1")
        try:
            value = int(raw)
        except ValueError:
            raise UsageError(f"FPR_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("thread count must be >= 1")
    return value


def run(argv: Sequence[str]) -> tuple[int, bytes]:
    """Execute a command; returns ``(exit code, stdout bytes)``."""
    parser = build_parser()
    args = parser.parse_args(list(argv))
    try:
        args.threads = resolve_threads(args.threads)
        handler = _VERBS[args.verb][0]
        report, code = handler(args)
    except NoMatch as exc:
        return 1, f"no match: {exc}\n".encode()
    except CapExceeded as exc:
        return 1, f"budget exceeded: {exc}\n".encode()
    except (UsageError, NonHyperbolicSignature, NotPrimePower, TriRigidError, ValueError) as exc:
        sys.stderr.write(f"tririgid: error: {exc}\n")
        return 2, b""
    return code, render.render(report, args.format)


def main(argv: Sequence[str] | None = None) -> int:
    code, out = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
