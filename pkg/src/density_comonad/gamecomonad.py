"""The k-round Ehrenfeucht-Fraisse comonad E_k.

Elements of E_k(A) are nonempty sequences of elements of A of length at
most k.  A relation holds on a tuple of sequences when they are pairwise
prefix-comparable and the relation holds on their last elements.  The
counit takes the last element, comultiplication the sequence of nonempty
prefixes, and lifting applies a map elementwise.

Coalgebras of E_k on A are exactly forest covers of depth <= k: alpha(x)
is the root-to-x path.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .comonad import Coalgebra, Comonad, Materialized, Space
from .errors import CapExceeded, InvalidCover
from .params import elimination_forest
from .structures import FinStructure, Homomorphism

DEFAULT_EF_CAP = 50_000
FOREST_SEARCH_CAP = 16


def _comparable(s: tuple, t: tuple) -> bool:
    return s[:len(t)] == t[:len(s)]


class EFStructure(Materialized):
    """E_k(A) with sequences indexed by (length, mixed-radix value)."""

    def __init__(self, k: int, base: FinStructure):
        self.k = k
        self.base = base
        n = base.size
        # start[L] = number of sequences shorter than L
        self._start = [0, 0]
        for length in range(1, k + 1):
            self._start.append(self._start[-1] + n ** length)
        self.elements = tuple(s for length in range(1, k + 1)
                              for s in product(range(n), repeat=length))
        self.structure = self._build()

    def index(self, s) -> int:
        n = self.base.size
        v = 0
        for y in s:
            v = v * n + y
        return self._start[len(s)] + v

    def _build(self) -> FinStructure:
        A = self.base
        rels = []
        for (name, arity), tset in zip(A.sig.relations, A.tuple_sets):
            out = set()
            for t in self.elements:
                # tuples whose longest entry is t, drawn from the prefixes of t
                chain = [t[:i] for i in range(1, len(t) + 1)]
                for combo in product(chain, repeat=arity):
                    if t not in combo:
                        continue
                    if tuple(s[-1] for s in combo) in tset:
                        out.add(tuple(self.index(s) for s in combo))
            rels.append(sorted(out))
        return FinStructure.make(A.sig, len(self.elements), rels)


class EFComonad(Comonad):
    def __init__(self, k: int, cap: int = DEFAULT_EF_CAP):
        if k < 1:
            raise ValueError("E_k needs k >= 1")
        self.k = k
        self.cap = cap
        self._cache: dict = {}

    def __repr__(self):
        return f"EFComonad({self.k})"

    def materialize(self, B: FinStructure) -> EFStructure:
        got = self._cache.get(B)
        if got is None:
            size = sum(B.size ** i for i in range(1, self.k + 1))
            if size > self.cap:
                raise CapExceeded(f"E_{self.k} carrier", self.cap, size)
            got = self._cache[B] = EFStructure(self.k, B)
        return got

    def counit(self, s):
        return s[-1]

    def comult(self, s):
        return tuple(s[:i] for i in range(1, len(s) + 1))

    def lift(self, h, s):
        return tuple(h(y) for y in s)

    def valid(self, inner: Space, s) -> bool:
        return (isinstance(s, tuple) and 1 <= len(s) <= self.k
                and all(inner.valid(y) for y in s))

    def holds(self, inner: Space, rel: int, elems: tuple) -> bool:
        for i, s in enumerate(elems):
            for t in elems[i + 1:]:
                if not _comparable(s, t):
                    return False
        return inner.holds(rel, tuple(s[-1] for s in elems))


def ef_apply(k: int, A: FinStructure, cap: int = DEFAULT_EF_CAP) -> FinStructure:
    return EFComonad(k, cap).apply(A)


def ef_counit(k: int, A: FinStructure, cap: int = DEFAULT_EF_CAP) -> Homomorphism:
    return EFComonad(k, cap).counit_hom(A)


def ef_comult(k: int, A: FinStructure, cap: int = DEFAULT_EF_CAP) -> Homomorphism:
    return EFComonad(k, cap).comult_hom(A)


def ef_lift(k: int, h: Homomorphism, cap: int = DEFAULT_EF_CAP) -> Homomorphism:
    return EFComonad(k, cap).lift_hom(h)


# ---------------------------------------------------------------------------
# forest covers


@dataclass(frozen=True)
class ForestCover:
    """A rooted forest on the universe of ``structure`` with depth <= k.

    ``parent[x]`` is None for roots.  Every Gaifman edge must join an
    ancestor to a descendant.
    """

    structure: FinStructure
    parent: tuple
    k: int

    def __post_init__(self):
        S = self.structure
        if len(self.parent) != S.size:
            raise InvalidCover("parent-vector", f"length {len(self.parent)} != {S.size}")
        for x, p in enumerate(self.parent):
            if p is not None and not 0 <= p < S.size:
                raise InvalidCover("parent-vector", f"parent of {x} out of range")
        for x in range(S.size):
            if len(self.path(x)) > self.k:
                raise InvalidCover("depth", f"{x} sits at depth > {self.k}")
        for x in range(S.size):
            anc = set(self.path(x))
            for y in S.neighbors[x]:
                if y not in anc and x not in self.path(y):
                    raise InvalidCover("comparability", f"edge {x}-{y} joins incomparable nodes")

    def path(self, x: int) -> tuple:
        """Root-to-x path; raises on a cycle in the parent relation."""
        out = [x]
        seen = {x}
        p = self.parent[x]
        while p is not None:
            if p in seen:
                raise InvalidCover("acyclic", f"cycle through {p}")
            seen.add(p)
            out.append(p)
            p = self.parent[p]
        return tuple(reversed(out))


def ef_coalgebra_from_forest(k: int, cover: ForestCover, cap: int = DEFAULT_EF_CAP) -> Coalgebra:
    """The E_k coalgebra sending x to its root-to-x path."""
    if cover.k > k:
        raise InvalidCover("depth", f"cover allows depth {cover.k} > {k}")
    C = EFComonad(k, cap)
    co = Coalgebra(C, cover.structure, tuple(cover.path(x) for x in range(cover.structure.size)))
    return co.verify()


def find_forest_cover(k: int, A: FinStructure) -> ForestCover | None:
    """A forest cover of depth <= k found by elimination search, or None."""
    parent = elimination_forest(A, k, cap=FOREST_SEARCH_CAP)
    if parent is None:
        return None
    return ForestCover(A, tuple(parent), k)


def ef_admits_coalgebra(k: int, A: FinStructure) -> bool:
    return find_forest_cover(k, A) is not None
