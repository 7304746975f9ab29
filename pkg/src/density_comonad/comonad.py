"""Comonads on finite structures, evaluated element by element.

A comonad here is described by what it does to single elements:
``counit``, ``comult`` and ``lift`` act on elements of ``C(Y)`` for any
structure ``Y``, and ``holds``/``valid`` say when a tuple of such elements is
related.  Elements of iterated images ``C(C(B))``, ``C(C(C(B)))`` are nested
values built from elements of ``B``, so laws can be checked on ``C(B)``
without materialising the larger structures.  ``materialize`` builds
``C(B)`` itself as a :class:`FinStructure` with an element table.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Sequence

from .errors import LawViolation
from .structures import FinStructure, Homomorphism


class Space(ABC):
    """Something elements can live in: a structure or a comonad image of one."""

    @abstractmethod
    def valid(self, e) -> bool: ...

    @abstractmethod
    def holds(self, rel: int, elems: tuple) -> bool: ...


class BaseSpace(Space):
    def __init__(self, S: FinStructure):
        self.S = S

    def valid(self, e) -> bool:
        return isinstance(e, int) and 0 <= e < self.S.size

    def holds(self, rel, elems):
        return elems in self.S.tuple_sets[rel]


class OverSpace(Space):
    """The image ``C(Y)`` of an inner space ``Y``, never materialised."""

    def __init__(self, comonad: "Comonad", inner: Space):
        self.comonad = comonad
        self.inner = inner
        self._valid: dict = {}

    def valid(self, e) -> bool:
        try:
            return self._valid[e]
        except KeyError:
            ok = self.comonad.valid(self.inner, e)
            self._valid[e] = ok
            return ok

    def holds(self, rel, elems):
        return all(self.valid(e) for e in elems) and self.comonad.holds(self.inner, rel, elems)


class Materialized(ABC):
    """``C(B)`` as a concrete structure together with its element table."""

    structure: FinStructure
    elements: Sequence[Hashable]

    @abstractmethod
    def index(self, e) -> int: ...


class Comonad(ABC):
    @abstractmethod
    def materialize(self, B: FinStructure) -> Materialized: ...

    @abstractmethod
    def counit(self, e): ...

    @abstractmethod
    def comult(self, e): ...

    @abstractmethod
    def lift(self, h: Callable[[Any], Any], e): ...

    @abstractmethod
    def valid(self, inner: Space, e) -> bool: ...

    @abstractmethod
    def holds(self, inner: Space, rel: int, elems: tuple) -> bool: ...

    # materialised components

    def apply(self, B: FinStructure) -> FinStructure:
        return self.materialize(B).structure

    def counit_hom(self, B: FinStructure) -> Homomorphism:
        M = self.materialize(B)
        return Homomorphism(M.structure, B, tuple(self.counit(e) for e in M.elements))

    def comult_hom(self, B: FinStructure) -> Homomorphism:
        M = self.materialize(B)
        MM = self.materialize(M.structure)
        lower = M.index
        return Homomorphism(M.structure, MM.structure,
                            tuple(MM.index(self.lift(lower, self.comult(e))) for e in M.elements))

    def lift_hom(self, h: Homomorphism) -> Homomorphism:
        MB = self.materialize(h.source)
        MC = self.materialize(h.target)
        f = h.map.__getitem__
        return Homomorphism(MB.structure, MC.structure,
                            tuple(MC.index(self.lift(f, e)) for e in MB.elements))


# ---------------------------------------------------------------------------
# coalgebras


@dataclass(frozen=True)
class Coalgebra:
    """A structure ``carrier`` with ``alpha: carrier -> C(carrier)``.

    ``cells[x]`` is the symbolic value of alpha at x; :attr:`alpha` builds the
    homomorphism into the materialised ``C(carrier)`` on first use.
    ``witnesses`` optionally records, per component, which generator was used.
    """

    comonad: Comonad = field(repr=False)
    carrier: FinStructure
    cells: tuple = field(repr=False)
    witnesses: tuple = ()

    @property
    def alpha(self) -> Homomorphism:
        cached = self.__dict__.get("_alpha")
        if cached is None:
            cached = materialize_alpha(self.comonad, self.carrier, self.cells)
            object.__setattr__(self, "_alpha", cached)
        return cached

    def element(self, x: int):
        return self.cells[x]

    def law_failures(self) -> list[tuple[str, Any]]:
        return coalgebra_failures(self.comonad, self.carrier, self.cells)

    def verify(self) -> "Coalgebra":
        bad = self.law_failures()
        if bad:
            raise LawViolation(*bad[0])
        return self


def coalgebra_failures(C: Comonad, X: FinStructure, alpha: Sequence) -> list[tuple[str, Any]]:
    """Failed coalgebra laws for a symbolic ``alpha`` (one element of C(X) per x).

    Checks that alpha is a homomorphism into C(X), the counit triangle and the
    comultiplication square; each failure carries a witness.
    """
    out = []
    space = OverSpace(C, BaseSpace(X))
    for x, a in enumerate(alpha):
        if not space.valid(a):
            out.append(("homomorphism", x))
            break
    else:
        for ri, ts in enumerate(X.tuples):
            bad = next((t for t in ts if not space.holds(ri, tuple(alpha[z] for z in t))), None)
            if bad is not None:
                out.append(("homomorphism", bad))
                break
    f = alpha.__getitem__
    for x, a in enumerate(alpha):
        if C.counit(a) != x:
            out.append(("counit", x))
            break
    for x, a in enumerate(alpha):
        if C.comult(a) != C.lift(f, a):
            out.append(("square", x))
            break
    return out


def materialize_alpha(C: Comonad, X: FinStructure, alpha: Sequence) -> Homomorphism:
    M = C.materialize(X)
    return Homomorphism(X, M.structure, tuple(M.index(a) for a in alpha))


# ---------------------------------------------------------------------------
# law reports


@dataclass(frozen=True)
class LawResult:
    law: str
    structure: str
    status: str  # PASS, FAIL or CAP
    witness: Any = None
    note: str = ""


@dataclass
class LawReport:
    results: list[LawResult] = field(default_factory=list)

    def add(self, law, structure, failure, note=""):
        if failure is None:
            self.results.append(LawResult(law, structure, "PASS", note=note))
        else:
            self.results.append(LawResult(law, structure, "FAIL", failure, note))

    def capped(self, law, structure, note):
        self.results.append(LawResult(law, structure, "CAP", note=note))

    @property
    def passed(self) -> bool:
        return all(r.status != "FAIL" for r in self.results)

    @property
    def complete(self) -> bool:
        """Passed with no structure skipped for a cap."""
        return all(r.status == "PASS" for r in self.results)

    def failures(self) -> list[LawResult]:
        return [r for r in self.results if r.status == "FAIL"]

    def by_law(self) -> dict[str, str]:
        """Overall status per law: FAIL beats CAP beats PASS."""
        rank = {"PASS": 0, "CAP": 1, "FAIL": 2}
        out: dict[str, str] = {}
        for r in self.results:
            cur = out.get(r.law, "PASS")
            out[r.law] = r.status if rank[r.status] > rank[cur] else cur
        return out

    def merge(self, other: "LawReport") -> "LawReport":
        self.results.extend(other.results)
        return self


def _first(pred, items):
    for it in items:
        if not pred(it):
            return it
    return None


def comonad_law_report(C: Comonad, B: FinStructure, label: str = "", report: LawReport | None = None
                       ) -> LawReport:
    """Comonad diagrams evaluated on every element of C(B).

    counit-left:  ε_{C(B)} ∘ δ_B = id;  counit-right: C(ε_B) ∘ δ_B = id;
    coassociativity: δ_{C(B)} ∘ δ_B = C(δ_B) ∘ δ_B.  Also checks that ε_B
    and δ_B preserve relations and that C(id) = id.
    """
    report = report if report is not None else LawReport()
    M = C.materialize(B)
    elems = M.elements
    counit, comult, lift = C.counit, C.comult, C.lift
    deltas = [comult(e) for e in elems]
    report.add("counit-left", label,
               _first(lambda i: counit(deltas[i]) == elems[i], range(len(elems))))
    report.add("counit-right", label,
               _first(lambda i: lift(counit, deltas[i]) == elems[i], range(len(elems))))
    report.add("coassociativity", label,
               _first(lambda i: comult(deltas[i]) == lift(comult, deltas[i]), range(len(elems))))
    report.add("lift-identity", label, _first(lambda e: lift(lambda y: y, e) == e, elems))
    base = BaseSpace(B)
    level2 = OverSpace(C, OverSpace(C, base))
    S = M.structure
    eps_bad = None
    delta_bad = None
    for ri, ts in enumerate(S.tuples):
        for t in ts:
            if eps_bad is None and not base.holds(ri, tuple(counit(elems[x]) for x in t)):
                eps_bad = t
            if delta_bad is None and not level2.holds(ri, tuple(deltas[x] for x in t)):
                delta_bad = t
    report.add("counit-hom", label, eps_bad)
    report.add("comult-hom", label, delta_bad)
    return report


# ---------------------------------------------------------------------------
# comonad morphisms


class ComonadMorphism:
    """A natural transformation ``source ⇒ target`` given element-wise.

    ``at`` maps an element of ``source(Y)`` to an element of ``target(Y)``
    for any ``Y``.
    """

    def __init__(self, source: Comonad, target: Comonad, at: Callable[[Any], Any]):
        self.source = source
        self.target = target
        self.at = at

    def component(self, B: FinStructure) -> Homomorphism:
        MS = self.source.materialize(B)
        MT = self.target.materialize(B)
        return Homomorphism(MS.structure, MT.structure,
                            tuple(MT.index(self.at(e)) for e in MS.elements))

    def law_report(self, B: FinStructure, label: str = "", homs: Sequence[Homomorphism] = (),
                   report: LawReport | None = None) -> LawReport:
        """Both comonad-morphism diagrams on ``source(B)``, naturality along ``homs``.

        triangle: ε^T ∘ λ = ε^S;  oblong: δ^T ∘ λ = λ_{T(B)} ∘ S(λ_B) ∘ δ^S.
        """
        report = report if report is not None else LawReport()
        S, T, at = self.source, self.target, self.at
        elems = S.materialize(B).elements
        report.add("morphism-triangle", label,
                   _first(lambda e: T.counit(at(e)) == S.counit(e), elems))
        report.add("morphism-oblong", label,
                   _first(lambda e: T.comult(at(e)) == at(S.lift(at, S.comult(e))), elems))
        space = OverSpace(T, BaseSpace(B))
        bad = None
        Sst = S.materialize(B).structure
        for ri, ts in enumerate(Sst.tuples):
            bad = next((t for t in ts if not space.holds(ri, tuple(at(elems[x]) for x in t))), None)
            if bad is not None:
                break
        report.add("morphism-hom", label, bad)
        for h in homs:
            f = h.map.__getitem__
            src_elems = S.materialize(h.source).elements
            report.add("morphism-naturality", label,
                       _first(lambda e: T.lift(f, at(e)) == at(S.lift(f, e)), src_elems))
        return report
