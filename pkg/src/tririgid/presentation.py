"""Words, finitely presented groups, a presentation parser and the named constructors.

A :class:`Word` is a freely reduced sequence of letters ``(generator, sign)``.
A :class:`Presentation` pairs generator names with relator words.  The text
format accepted by :func:`parse_presentation` is::

    a,b; a^3, b^3, (a*b)^4

Juxtaposition or ``*`` multiplies, ``^n`` raises to an integer power and an
upper-case generator name (``A``) is the inverse of ``a``.  The printer always
emits ``^-1`` so its output never depends on case conventions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, NamedTuple, Sequence

from tririgid.errors import (
    ArityMismatch,
    EmptyRelatorError,
    NonHyperbolicSignature,
    PresentationError,
    PresentationSyntaxError,
    UnknownGeneratorError,
)

Letter = tuple[int, int]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for gen, sign in letters:
        if out and out[-1][0] == gen and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((gen, sign))
    return tuple(out)


@dataclass(frozen=True, order=True)
class Word:
    """A freely reduced word; build with ``Word(letters)``, reduction is automatic."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        letters = tuple((int(g), int(s)) for g, s in self.letters)
        for g, s in letters:
            if g < 0 or s not in (1, -1):
                raise ValueError(f"bad letter {(g, s)!r}")
        object.__setattr__(self, "letters", free_reduce(letters))

    @classmethod
    def gen(cls, index: int, power: int = 1) -> Word:
        sign = 1 if power >= 0 else -1
        return cls(((index, sign),) * abs(power))

    @classmethod
    def from_indices(cls, *indices: int) -> Word:
        """Letters given as signed 1-based indices: ``2`` is b, ``-1`` is a^-1."""
        return cls(tuple((abs(i) - 1, 1 if i > 0 else -1) for i in indices))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> Word:
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def inverse(self) -> Word:
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def exponent_sums(self, ngens: int) -> list[int]:
        sums = [0] * ngens
        for g, s in self.letters:
            sums[g] += s
        return sums

    def cyclic_conjugates(self) -> list[Word]:
        n = len(self.letters)
        return [Word(self.letters[i:] + self.letters[:i]) for i in range(n)]

    def cyclically_reduced(self) -> Word:
        letters = self.letters
        while len(letters) >= 2 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
            letters = letters[1:-1]
        return Word(letters)

    def as_power(self) -> tuple[Word, int]:
        """Return ``(u, k)`` with ``self == u**k`` and ``k`` maximal."""
        n = len(self.letters)
        for period in range(1, n // 2 + 1):
            if n % period == 0 and self.letters == self.letters[:period] * (n // period):
                return Word(self.letters[:period]), n // period
        return self, 1


class TriangleSignature(NamedTuple):
    p: int
    q: int
    r: int

    @classmethod
    def of(cls, sig: Sequence[int]) -> TriangleSignature:
        if len(sig) != 3:
            raise ValueError(f"triangle signature needs three entries, got {tuple(sig)!r}")
        p, q, r = (int(v) for v in sig)
        if min(p, q, r) < 2:
            raise ValueError(f"triangle signature entries must be >= 2, got {(p, q, r)!r}")
        return cls(p, q, r)

    @property
    def angle_sum(self) -> Fraction:
        return Fraction(1, self.p) + Fraction(1, self.q) + Fraction(1, self.r)

    @property
    def is_hyperbolic(self) -> bool:
        return self.angle_sum < 1

    def require_hyperbolic(self) -> TriangleSignature:
        if not self.is_hyperbolic:
            kind = "Euclidean" if self.angle_sum == 1 else "spherical"
            raise NonHyperbolicSignature(f"signature {tuple(self)} is {kind}, not hyperbolic")
        return self

    def sorted(self) -> TriangleSignature:
        return TriangleSignature(*sorted(self))


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        rels = tuple(r if isinstance(r, Word) else Word(r) for r in self.relators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)
        if len(set(gens)) != len(gens):
            raise PresentationError(f"duplicate generator names in {gens!r}")
        for g in gens:
            if not g or not _NAME_RE.match(g):
                raise PresentationError(f"invalid generator name {g!r}")
        for r in rels:
            if not r:
                raise EmptyRelatorError()
            if r.max_generator() >= len(gens):
                raise PresentationError(f"relator uses generator index {r.max_generator()} >= {len(gens)}")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def word(self, text: str) -> Word:
        """Parse a single word over this presentation's generators."""
        parser = _Parser(text, _lexicon(self.generators))
        w = parser.parse_word()
        parser.expect_end()
        return w

    def format_word(self, w: Word) -> str:
        return format_word(w, self.generators)

    def __str__(self) -> str:
        return format_presentation(self)

    def with_name(self, name: str) -> Presentation:
        return Presentation(self.generators, self.relators, name=name)


# ---------------------------------------------------------------------------
# printing


def _format_runs(letters: Sequence[Letter], names: Sequence[str]) -> list[str]:
    parts: list[str] = []
    i = 0
    while i < len(letters):
        g, s = letters[i]
        j = i
        while j < len(letters) and letters[j] == (g, s):
            j += 1
        k = (j - i) * s
        parts.append(names[g] if k == 1 else f"{names[g]}^{k}")
        i = j
    return parts


def format_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "1"
    base, k = w.as_power()
    if k > 1 and len(set(base.letters)) > 1:
        return f"({'*'.join(_format_runs(base.letters, names))})^{k}"
    return "*".join(_format_runs(w.letters, names))


def format_presentation(P: Presentation) -> str:
    rels = ", ".join(format_word(r, P.generators) for r in P.relators)
    return f"{','.join(P.generators)}; {rels}" if rels else f"{','.join(P.generators)};"


# ---------------------------------------------------------------------------
# parsing


def _lexicon(names: Sequence[str]) -> dict[str, Letter]:
    lex = {name: (i, 1) for i, name in enumerate(names)}
    for i, name in enumerate(names):
        upper = name.upper()
        if upper != name and upper not in lex:
            lex[upper] = (i, -1)
    return lex


class _Parser:
    def __init__(self, text: str, lexicon: dict[str, Letter], offset: int = 0) -> None:
        self.text = text
        self.pos = 0
        self.offset = offset
        self.lexicon = lexicon
        self.by_length = sorted(lexicon, key=len, reverse=True)

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _error(self, message: str) -> PresentationSyntaxError:
        return PresentationSyntaxError(message, self.offset + self.pos)

    def expect_end(self) -> None:
        if self._peek():
            raise self._error(f"unexpected {self._peek()!r}")

    def parse_word(self) -> Word:
        letters: list[Letter] = []
        factors = 0
        while True:
            ch = self._peek()
            if ch == "*":
                if not factors:
                    raise self._error("'*' without left operand")
                self.pos += 1
                ch = self._peek()
                if not (ch == "(" or ch.isalpha() or ch == "_"):
                    raise self._error("'*' without right operand")
            if ch == "(" or ch.isalpha() or ch == "_":
                letters.extend(self._parse_factor())
                factors += 1
            else:
                break
        if not factors:
            raise self._error("expected a word")
        return Word(tuple(letters))

    def _parse_factor(self) -> tuple[Letter, ...]:
        atom = self._parse_atom()
        if self._peek() == "^":
            self.pos += 1
            self._skip()
            m = re.compile(r"-?\s*\d+").match(self.text, self.pos)
            if not m:
                raise self._error("expected integer exponent")
            self.pos = m.end()
            k = int(m.group().replace(" ", ""))
            if k < 0:
                atom = tuple((g, -s) for g, s in reversed(atom))
            return atom * abs(k)
        return atom

    def _parse_atom(self) -> tuple[Letter, ...]:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            inner = self.parse_word()
            if self._peek() != ")":
                raise self._error("expected ')'")
            self.pos += 1
            return inner.letters
        for name in self.by_length:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                return (self.lexicon[name],)
        m = re.compile(r"[A-Za-z_][A-Za-z0-9_]*").match(self.text, self.pos)
        raise UnknownGeneratorError(m.group() if m else ch, self.offset + self.pos)


def parse_presentation(text: str, name: str = "") -> Presentation:
    """Parse ``"gens; relators"`` into a :class:`Presentation`.

    Raises :class:`PresentationSyntaxError` (with position),
    :class:`UnknownGeneratorError` or :class:`EmptyRelatorError`.
    """
    if ";" not in text:
        raise PresentationSyntaxError("expected ';' separating generators from relators", len(text))
    semi = text.index(";")
    names: list[str] = []
    pos = 0
    for chunk in text[:semi].split(","):
        stripped = chunk.strip()
        if not _NAME_RE.match(stripped):
            raise PresentationSyntaxError(f"invalid generator name {stripped!r}", pos + chunk.find(stripped[:1] or ","))
        names.append(stripped)
        pos += len(chunk) + 1
    if len(set(names)) != len(names):
        raise PresentationSyntaxError("duplicate generator name", 0)

    body = text[semi + 1:]
    relators: list[Word] = []
    if body.strip():
        parser = _Parser(body, _lexicon(names), offset=semi + 1)
        while True:
            start = parser.offset + parser.pos
            w = parser.parse_word()
            if not w:
                raise EmptyRelatorError(start)
            relators.append(w)
            ch = parser._peek()
            if ch == ",":
                parser.pos += 1
                continue
            parser.expect_end()
            break
    return Presentation(tuple(names), tuple(relators), name=name)


# ---------------------------------------------------------------------------
# constructors


def _power(index: int, k: int) -> Word:
    return Word.gen(index, k)


def _product(*indices: int) -> Word:
    return Word.from_indices(*indices)


def triangle_presentation(sig: Sequence[int]) -> Presentation:
    """``<a,b | a^p, b^q, (ab)^r>`` for a hyperbolic signature."""
    s = TriangleSignature.of(sig).require_hyperbolic()
    return Presentation(
        ("a", "b"),
        (_power(0, s.p), _power(1, s.q), _product(1, 2) ** s.r),
        name=f"Delta{tuple(s)}",
    )


def coxeter_presentation(sig: Sequence[int]) -> Presentation:
    """The reflection group ``<x,y,z | x^2,y^2,z^2,(xy)^p,(yz)^q,(xz)^r>``."""
    s = TriangleSignature.of(sig).require_hyperbolic()
    return Presentation(
        ("x", "y", "z"),
        (
            _power(0, 2), _power(1, 2), _power(2, 2),
            _product(1, 2) ** s.p, _product(2, 3) ** s.q, _product(1, 3) ** s.r,
        ),
        name=f"Delta-{tuple(s)}",
    )


def _commutator(i: int, j: int) -> Word:
    return _product(i + 1, j + 1, -(i + 1), -(j + 1))


@dataclass(frozen=True)
class ExtensionFamily:
    """The four index-2 overgroups of ``Delta(p,q,q)``.

    ``rotation_signature`` is ``(2p, q, 2)`` sorted ascending and
    ``rotation_permutation[i]`` is the position in ``(2p, q, 2)`` that ended
    up in slot ``i``.
    """

    p: int
    q: int
    product: Presentation
    minus: Presentation
    rotation: Presentation
    reflection: Presentation
    rotation_signature: TriangleSignature
    rotation_permutation: tuple[int, int, int]

    KINDS = ("product", "minus", "rotation", "lambda")

    def items(self) -> list[tuple[str, Presentation]]:
        return list(zip(self.KINDS, (self.product, self.minus, self.rotation, self.reflection)))

    def __getitem__(self, kind: str) -> Presentation:
        return dict(self.items())[kind]


def index2_extensions(p: int, q: int) -> ExtensionFamily:
    base = TriangleSignature.of((p, q, q)).require_hyperbolic()
    tri = triangle_presentation(base)

    # Delta x Z/2: central involution t
    product = Presentation(
        ("a", "b", "t"),
        tri.relators + (_power(2, 2), _commutator(2, 0), _commutator(2, 1)),
        name=f"Delta{tuple(base)}xZ2",
    )
    minus = coxeter_presentation(base)

    raw = (2 * p, q, 2)
    perm = tuple(sorted(range(3), key=lambda i: (raw[i], i)))
    rot_sig = TriangleSignature(*(raw[i] for i in perm))
    rotation = triangle_presentation(rot_sig)

    # r a r = a^-1, r b r = c^-1, r c r = b^-1 (orientation reversal); abc = 1
    reflection = Presentation(
        ("a", "b", "c", "r"),
        (
            _power(0, p), _power(1, q), _power(2, q), _power(3, 2),
            _product(1, 2, 3),
            _product(4, 1, 4, 1),
            _product(4, 2, 4, 3),
            _product(4, 3, 4, 2),
        ),
        name=f"Lambda_rho({p},{q})",
    )
    return ExtensionFamily(p, q, product, minus, rotation, reflection, rot_sig, perm)  # type: ignore[arg-type]


def signature_presentation(genus: int, cone_orders: Sequence[int], cusps: int = 0) -> Presentation:
    """Standard Fuchsian presentation for signature ``(g; m_1..m_k; s)``.

    Generators ``a1,b1,..,ag,bg`` (handles), ``x1..xk`` (elliptic) and
    ``y1..ys`` (parabolic), with one long relator
    ``[a1,b1]..[ag,bg] x1..xk y1..ys``.
    """
    from tririgid.fuchsian import FuchsianSignature, euler_characteristic

    sig = FuchsianSignature(genus, tuple(cone_orders), cusps)
    if euler_characteristic(sig) >= 0:
        raise NonHyperbolicSignature(f"signature {sig} has chi >= 0")
    names: list[str] = []
    for i in range(1, genus + 1):
        names += [f"a{i}", f"b{i}"]
    names += [f"x{i}" for i in range(1, len(cone_orders) + 1)]
    names += [f"y{i}" for i in range(1, cusps + 1)]

    relators = [_power(2 * genus + i, m) for i, m in enumerate(cone_orders)]
    long = Word()
    for i in range(genus):
        long = long * _commutator(2 * i, 2 * i + 1)
    long = long * Word(tuple((2 * genus + i, 1) for i in range(len(cone_orders) + cusps)))
    if long:
        relators.append(long)
    return Presentation(tuple(names), tuple(relators), name=f"Sig{sig}")


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class GroupOps:
    """Minimal group-operation context for :func:`evaluate_word`."""

    mul: Callable[[Any, Any], Any]
    inv: Callable[[Any], Any]
    identity: Any


def evaluate_word(w: Word, images: Sequence[Any], ops: Any) -> Any:
    """Multiply out ``w`` with generator ``i`` sent to ``images[i]``.

    ``ops`` needs ``mul``, ``inv`` and ``identity``; equality is ``==``.
    """
    if w.max_generator() >= len(images):
        raise ArityMismatch(f"word uses generator {w.max_generator()} but only {len(images)} images given")
    inverses: dict[int, Any] = {}
    acc = ops.identity
    for g, s in w:
        if s == 1:
            x = images[g]
        else:
            if g not in inverses:
                inverses[g] = ops.inv(images[g])
            x = inverses[g]
        acc = ops.mul(acc, x)
    return acc


def is_homomorphism(P: Presentation, images: Sequence[Any], ops: Any) -> bool:
    if len(images) != P.ngens:
        raise ArityMismatch(f"{P.ngens} generators but {len(images)} images")
    return all(evaluate_word(r, images, ops) == ops.identity for r in P.relators)
