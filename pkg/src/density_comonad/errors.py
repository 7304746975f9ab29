"""Exception types shared across the package."""

from __future__ import annotations


class SignatureMismatch(ValueError):
    """Two structures (or a structure and a family) use different signatures."""


class InvalidHomomorphism(ValueError):
    """A map fails to preserve some relation tuple."""


class ParseError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """A computation would exceed a configured resource cap.

    ``cap`` is the configured bound and ``size`` the would-be size when it is
    known up front.
    """

    def __init__(self, what: str, cap: int, size: int | None = None):
        self.what = what
        self.cap = cap
        self.size = size
        msg = f"{what}: cap {cap} exceeded"
        if size is not None:
            msg += f" (would be {size})"
        super().__init__(msg)


class UnsupportedConfiguration(ValueError):
    pass


class LawViolation(ValueError):
    """A supplied coalgebra or morphism fails a commuting diagram.

    ``law`` names the failed diagram, ``witness`` is an element on which the
    two sides differ.
    """

    def __init__(self, law: str, witness=None, detail: str = ""):
        self.law = law
        self.witness = witness
        msg = f"law '{law}' violated"
        if witness is not None:
            msg += f" at {witness!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotASubfamily(ValueError):
    pass


class OutOfRange(ValueError):
    """Input lies outside the range a truncated computation can certify."""


class InvalidCover(ValueError):
    """A forest cover breaks one of its invariants; ``invariant`` names it."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"forest cover invariant '{invariant}' fails" + (f": {detail}" if detail else ""))
