"""Homomorphism-count vectors and the classical oracles they are compared with.

Each Lovász-type relation pairs hom counts from a class with an independent
combinatorial test: cycles with co-spectrality, trees with fractional
isomorphism (colour refinement), connected bipartite graphs with
isomorphism of bipartite double covers.  Hom vectors are truncated to a
size bound, so equal vectors never prove the relation; unequal ones refute it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .density import GeneratorFamily
from .homsearch import count_homs
from .iso import is_isomorphic, refine
from .structures import FinStructure, GRAPH, coproduct, cycle_graph, graph


@dataclass(frozen=True)
class HomVector:
    family: GeneratorFamily
    counts: tuple[int, ...]

    def __str__(self):
        return "(" + ", ".join(map(str, self.counts)) + ")"


def hom_vector(fam: GeneratorFamily, G: FinStructure) -> HomVector:
    return HomVector(fam, tuple(count_homs(g, G) for g in fam.generators))


def lovasz_equiv(fam: GeneratorFamily, A: FinStructure, B: FinStructure) -> bool:
    """Equal hom counts from every generator of ``fam``."""
    return hom_vector(fam, A).counts == hom_vector(fam, B).counts


def cycle_family(lo: int, hi: int) -> GeneratorFamily:
    """Cycles C_lo .. C_hi, without going through exhaustive enumeration."""
    gens = tuple(cycle_graph(n) for n in range(max(lo, 3), hi + 1))
    return GeneratorFamily(GRAPH, gens, True, tuple(f"C{g.size}" for g in gens))


# ---------------------------------------------------------------------------
# spectra


def adjacency_matrix(G: FinStructure) -> list[list[int]]:
    n = G.size
    A = [[0] * n for _ in range(n)]
    for ts in G.tuples:
        for t in ts:
            for u in t:
                for v in t:
                    if u != v:
                        A[u][v] = 1
    return A


def _matmul(X, Y):
    n = len(X)
    cols = list(zip(*Y)) if n else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in X]


def walk_trace(G: FinStructure, k: int) -> int:
    """tr(A^k): the number of closed walks of length k."""
    A = adjacency_matrix(G)
    n = len(A)
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        P = _matmul(P, A)
    return sum(P[i][i] for i in range(n))


@dataclass(frozen=True)
class CharPoly:
    """Coefficients of det(xI - A), highest degree first; the leading one is 1."""

    coefficients: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            p = self.degree - i
            mono = "" if p == 0 else ("x" if p == 1 else f"x^{p}")
            mag = abs(c)
            body = (str(mag) if (mag != 1 or not mono) else "") + mono
            if not terms:
                terms.append(("-" if c < 0 else "") + body)
            else:
                terms.append(("- " if c < 0 else "+ ") + body)
        return " ".join(terms) if terms else "0"

    def at_matrix(self, A: list[list[int]]) -> list[list[int]]:
        """p(A) by Horner's rule; the zero matrix by Cayley-Hamilton."""
        n = len(A)
        R = [[0] * n for _ in range(n)]
        for c in self.coefficients:
            R = _matmul(R, A) if n else R
            for i in range(n):
                R[i][i] += c
        return R


def char_poly(G: FinStructure) -> CharPoly:
    """Exact characteristic polynomial by the Faddeev-LeVerrier recurrence."""
    A = adjacency_matrix(G)
    n = len(A)
    coeffs = [1]
    M = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        M = _matmul(A, M)
        for i in range(n):
            M[i][i] += c
        AM = _matmul(A, M)
        tr = sum(AM[i][i] for i in range(n))
        assert tr % k == 0
        c = -tr // k
        coeffs.append(c)
    return CharPoly(tuple(coeffs))


def cospectral(A: FinStructure, B: FinStructure) -> bool:
    return char_poly(A) == char_poly(B)


# ---------------------------------------------------------------------------
# double covers


def bipartite_double_cover(G: FinStructure) -> FinStructure:
    """G x K2: vertex (v, i) is numbered v + i*n."""
    n = G.size
    adj = adjacency_matrix(G)
    edges = [(u, v + n) for u in range(n) for v in range(n) if adj[u][v]]
    return graph(2 * n, edges)


def double_cover_iso(A: FinStructure, B: FinStructure) -> bool:
    return is_isomorphic(bipartite_double_cover(A), bipartite_double_cover(B)) is not None


# ---------------------------------------------------------------------------
# colour refinement


def color_refinement(G: FinStructure) -> list[list[int]]:
    """All rounds of colour refinement from the uniform colouring."""
    return refine(G, history=True)


def refinement_histograms(A: FinStructure, B: FinStructure):
    """Per-round colour histograms of A and B under a joint refinement."""
    U, _ = coproduct([A, B], A.sig)
    rounds = refine(U, history=True)
    return ([sorted(Counter(r[: A.size]).items()) for r in rounds],
            [sorted(Counter(r[A.size:]).items()) for r in rounds])


def fractional_iso(A: FinStructure, B: FinStructure) -> bool:
    """Colour refinement cannot tell A and B apart."""
    if A.size != B.size:
        return False
    ha, hb = refinement_histograms(A, B)
    return ha == hb


# ---------------------------------------------------------------------------
# side-by-side report


@dataclass(frozen=True)
class RelationRow:
    name: str
    hom_equal: bool
    oracle: str
    oracle_value: bool | None
    verdict: str
    bound: int


def _verdict(hom_equal: bool, oracle: bool, bound: int) -> str:
    if hom_equal and oracle:
        return "agrees-true"
    if not hom_equal and not oracle:
        return "agrees-false"
    if hom_equal:
        return f"inconclusive at bound {bound}"
    return "contradiction"


def relation_report(A: FinStructure, B: FinStructure, max_size: int) -> list[RelationRow]:
    """Hom-vector verdicts next to oracle verdicts for the three graph rows.

    The cycles row compares only graphs of equal order, since isolated
    vertices change the spectrum but no cycle count.
    """
    from .classes import generators

    rows = []
    if A.size == B.size:
        eq = lovasz_equiv(cycle_family(3, max_size), A, B)
        orc = cospectral(A, B)
        rows.append(RelationRow("cycles", eq, "cospectral", orc, _verdict(eq, orc, max_size), max_size))
    else:
        rows.append(RelationRow("cycles", lovasz_equiv(cycle_family(3, max_size), A, B), "cospectral",
                                None, "not applicable (orders differ)", max_size))
    eq = lovasz_equiv(generators("trees", max_size), A, B)
    orc = fractional_iso(A, B)
    rows.append(RelationRow("trees", eq, "fractional", orc, _verdict(eq, orc, max_size), max_size))
    eq = lovasz_equiv(generators("connected-bipartite", max_size), A, B)
    orc = double_cover_iso(A, B)
    rows.append(RelationRow("bipartite", eq, "doublecover", orc, _verdict(eq, orc, max_size), max_size))
    return rows
