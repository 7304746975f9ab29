"""Standard graph parameters, graded generator families and the coalgebra number.

Parameter values live in the extended reals: Python ints together with
``-math.inf`` and ``math.inf``.  Every parameter is exact and exhaustive,
so each one has a size cap.  The empty graph takes the value ``-inf``
because it is the maximum over zero components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence, Union

from .errors import CapExceeded, OutOfRange
from .structures import FinStructure, components, coproduct

ExtReal = Union[int, float]
NEG_INF = -math.inf
POS_INF = math.inf

DEFAULT_PARAM_CAP = 10


def format_ext(v: ExtReal) -> str:
    if v == POS_INF:
        return "+inf"
    if v == NEG_INF:
        return "-inf"
    return str(int(v))


def _masks(G: FinStructure, cap: int) -> list[int]:
    if G.size > cap:
        raise CapExceeded("parameter evaluation", cap, G.size)
    return [sum(1 << y for y in G.neighbors[x]) for x in range(G.size)]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _split(adj: list[int], mask: int) -> list[int]:
    """Connected components of the subgraph induced on ``mask``, as masks."""
    out = []
    rest = mask
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            grow = 0
            for v in _bits(frontier):
                grow |= adj[v]
            frontier = grow & mask & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


# ---------------------------------------------------------------------------
# tree-depth


def tree_depth(G: FinStructure, cap: int = DEFAULT_PARAM_CAP) -> ExtReal:
    """Minimum depth of an elimination forest.

    Connected: 1 + min over v of td(G - v); disconnected: max over components.
    Memoised on vertex subsets of G.
    """
    adj = _masks(G, cap)
    if G.size == 0:
        return NEG_INF

    @lru_cache(maxsize=None)
    def td(mask: int) -> int:
        if not mask:
            return 0
        comps = _split(adj, mask)
        if len(comps) > 1:
            return max(td(c) for c in comps)
        if mask & (mask - 1) == 0:
            return 1
        return 1 + min(td(mask & ~(1 << v)) for v in _bits(mask))

    return td((1 << G.size) - 1)


def elimination_forest(G: FinStructure, depth: int, cap: int = DEFAULT_PARAM_CAP) -> list[int | None] | None:
    """Parent vector of an elimination forest of depth <= ``depth``, or None."""
    adj = _masks(G, cap)
    parent: list[int | None] = [None] * G.size

    @lru_cache(maxsize=None)
    def fits(mask: int, d: int) -> bool:
        if not mask:
            return True
        if d == 0:
            return False
        comps = _split(adj, mask)
        if len(comps) > 1:
            return all(fits(c, d) for c in comps)
        return any(fits(mask & ~(1 << v), d - 1) for v in _bits(mask))

    def build(mask: int, d: int, root_parent: int | None):
        for comp in _split(adj, mask):
            for v in _bits(comp):
                if fits(comp & ~(1 << v), d - 1):
                    parent[v] = root_parent
                    build(comp & ~(1 << v), d - 1, v)
                    break

    full = (1 << G.size) - 1
    if depth < 0 or not fits(full, depth):
        return None
    build(full, depth, None)
    return parent


# ---------------------------------------------------------------------------
# tree-width and path-width


def _q_size(adj: list[int], S: int, v: int) -> int:
    """Vertices outside S + v reachable from v through S."""
    seen = 1 << v
    frontier = 1 << v
    reach = 0
    while frontier:
        grow = 0
        for x in _bits(frontier):
            grow |= adj[x]
        grow &= ~seen
        seen |= grow
        reach |= grow & ~S
        frontier = grow & S
    return bin(reach).count("1")


def tree_width(G: FinStructure, cap: int = DEFAULT_PARAM_CAP) -> ExtReal:
    """Exact tree-width by dynamic programming over elimination prefixes."""
    adj = _masks(G, cap)
    n = G.size
    if n == 0:
        return NEG_INF
    full = (1 << n) - 1
    tw = {0: NEG_INF}
    for S in sorted(range(1, full + 1), key=lambda m: bin(m).count("1")):
        best = POS_INF
        for v in _bits(S):
            prev = S & ~(1 << v)
            cand = max(tw[prev], _q_size(adj, prev, v))
            if cand < best:
                best = cand
        tw[S] = best
    return int(tw[full])


def path_width(G: FinStructure, cap: int = DEFAULT_PARAM_CAP) -> ExtReal:
    """Exact path-width as vertex separation number over linear orderings."""
    adj = _masks(G, cap)
    n = G.size
    if n == 0:
        return NEG_INF
    full = (1 << n) - 1

    def boundary(S: int) -> int:
        return sum(1 for v in _bits(S) if adj[v] & ~S)

    vs = {0: NEG_INF}
    for S in sorted(range(1, full + 1), key=lambda m: bin(m).count("1")):
        b = boundary(S)
        vs[S] = max(b, min(vs[S & ~(1 << v)] for v in _bits(S)))
    # the separation of the full set counts vertices with neighbours outside, i.e. 0
    return int(max(0, vs[full]))


# ---------------------------------------------------------------------------
# simpler parameters


def max_degree(G: FinStructure) -> ExtReal:
    return max((len(G.neighbors[v]) for v in range(G.size)), default=NEG_INF)


def clique_number(G: FinStructure, cap: int = 64) -> ExtReal:
    adj = _masks(G, cap)
    if G.size == 0:
        return NEG_INF
    best = 0

    def grow(size: int, cand: int):
        nonlocal best
        if size > best:
            best = size
        if size + bin(cand).count("1") <= best:
            return
        for v in _bits(cand):
            grow(size + 1, cand & adj[v] & ~((1 << (v + 1)) - 1))

    grow(0, (1 << G.size) - 1)
    return best


def chromatic_number(G: FinStructure, cap: int = 64) -> ExtReal:
    adj = _masks(G, cap)
    n = G.size
    if n == 0:
        return NEG_INF
    order = sorted(range(n), key=lambda v: -len(G.neighbors[v]))

    def colorable(k: int) -> bool:
        color = [-1] * n

        def go(i: int, used: int) -> bool:
            if i == n:
                return True
            v = order[i]
            banned = {color[u] for u in _bits(adj[v]) if color[u] >= 0}
            # colours beyond the first unused one are symmetric
            for c in range(min(k, used + 1)):
                if c not in banned:
                    color[v] = c
                    if go(i + 1, max(used, c + 1)):
                        return True
            color[v] = -1
            return False

        return go(0, 0)

    k = 1
    while not colorable(k):
        k += 1
    return k


def girth(G: FinStructure) -> ExtReal:
    """Length of a shortest cycle; +inf for forests.  Not a standard parameter."""
    best = POS_INF
    for s in range(G.size):
        dist = {s: 0}
        par = {s: -1}
        queue = [s]
        for x in queue:
            for y in G.neighbors[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    par[y] = x
                    queue.append(y)
                elif par[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


PARAMETERS: dict[str, Callable[[FinStructure], ExtReal]] = {
    "td": tree_depth,
    "tw": tree_width,
    "tw+1": lambda G: tree_width(G) + 1,
    "pw": path_width,
    "pw+1": lambda G: path_width(G) + 1,
    "maxdeg": max_degree,
    "clique": clique_number,
    "chromatic": chromatic_number,
    "girth": girth,
}

ALIASES = {
    "tree-depth": "td",
    "tree-width": "tw",
    "path-width": "pw",
    "max-degree": "maxdeg",
    "clique-number": "clique",
    "chromatic-number": "chromatic",
}


def parameter(name: str) -> Callable[[FinStructure], ExtReal]:
    key = ALIASES.get(name, name)
    if key not in PARAMETERS:
        raise KeyError(f"unknown parameter {name!r}; valid: {', '.join(PARAMETERS)}")
    return PARAMETERS[key]


# ---------------------------------------------------------------------------
# standardness


@dataclass
class StandardReport:
    name: str
    pairs_checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def is_standard_on(param: str | Callable, corpus: Sequence[FinStructure], name: str = "") -> StandardReport:
    """Check mu(G1 + G2) = max(mu(G1), mu(G2)) on all pairs from ``corpus``.

    Violations are recorded as (i, j, mu(G1 + G2), mu(G1), mu(G2)).
    """
    fn = parameter(param) if isinstance(param, str) else param
    report = StandardReport(name or (param if isinstance(param, str) else getattr(fn, "__name__", "param")))
    values = [fn(G) for G in corpus]
    for i, A in enumerate(corpus):
        for j in range(i, len(corpus)):
            U, _ = coproduct([A, corpus[j]])
            got = fn(U)
            want = max(values[i], values[j])
            report.pairs_checked += 1
            if got != want:
                report.violations.append((i, j, got, values[i], values[j]))
    return report


# ---------------------------------------------------------------------------
# graded families


@dataclass(frozen=True)
class GradedFamily:
    """Generator families ``param <= k`` for each grade k, nested in k."""

    param: str
    max_size: int
    grades: dict = field(compare=False)

    @property
    def ks(self) -> list[ExtReal]:
        return sorted(self.grades)

    def __getitem__(self, k):
        return self.grades[k]


def graded_family(param: str, max_size: int, k_range: Sequence[ExtReal] | None = None) -> GradedFamily:
    """Grade k has the connected graphs with ``param <= k`` and at most max_size vertices."""
    from .classes import enumerate_graphs, graph_name
    from .density import GeneratorFamily
    from .structures import GRAPH

    fn = parameter(param)
    if k_range is None:
        k_range = [NEG_INF, *range(0, max_size + 1), POS_INF]
    pool = [(G, fn(G)) for G in enumerate_graphs(max_size, connected_only=True)]
    grades = {}
    for k in sorted(set(k_range)):
        gens = tuple(G for G, v in pool if v <= k)
        grades[k] = GeneratorFamily(GRAPH, gens, True, tuple(graph_name(G) for G in gens))
    return GradedFamily(param, max_size, grades)


def coalgebra_number_witness(gf: GradedFamily, G: FinStructure):
    """(kappa, coalgebra or None): least grade admitting a coalgebra on G."""
    from .density import coalgebra_by_decomposition

    big = [C.size for C in components(G).components if C.size > gf.max_size]
    if big:
        raise OutOfRange(f"component of size {max(big)} exceeds generator bound {gf.max_size}")
    for k in gf.ks:
        c = coalgebra_by_decomposition(gf[k], G)
        if c is not None:
            return k, c
    return POS_INF, None


def coalgebra_number(gf: GradedFamily, G: FinStructure) -> ExtReal:
    return coalgebra_number_witness(gf, G)[0]
