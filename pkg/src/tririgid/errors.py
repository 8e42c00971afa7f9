"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class TriRigidError(Exception):
    """Base class for every error raised by the toolkit."""


class PresentationError(TriRigidError, ValueError):
    pass


class PresentationSyntaxError(PresentationError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownGeneratorError(PresentationError):
    def __init__(self, name: str, position: int) -> None:
        super().__init__(f"unknown generator {name!r} at position {position}")
        self.name = name
        self.position = position


class EmptyRelatorError(PresentationError):
    def __init__(self, position: int | None = None) -> None:
        where = "" if position is None else f" at position {position}"
        super().__init__(f"relator reduces to the empty word{where}")
        self.position = position


class NonHyperbolicSignature(TriRigidError, ValueError):
    pass


class ArityMismatch(TriRigidError, ValueError):
    pass


class CosetOverflow(TriRigidError):
    """Coset enumeration exceeded its budget; the index is *not determined*."""

    def __init__(self, max_cosets: int) -> None:
        super().__init__(f"coset enumeration exceeded {max_cosets} cosets (index not determined)")
        self.max_cosets = max_cosets


class NoMatch(TriRigidError):
    pass


class BadGaloisIndex(TriRigidError, ValueError):
    pass


class NotPrimePower(TriRigidError, ValueError):
    pass


class CapExceeded(TriRigidError):
    pass


class BudgetExhausted(TriRigidError):
    """No witness inside the search budget. Inconclusive, never a refutation."""

    def __init__(self, message: str, searched: tuple[int, ...] = ()) -> None:
        super().__init__(message)
        self.searched = searched


class DivisionByZero(TriRigidError, ZeroDivisionError):
    pass
