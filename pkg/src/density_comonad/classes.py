"""Component-based classes of graphs: predicates, generators and snapshots.

A class is given by a predicate on connected graphs; a graph belongs to the
class when each of its components does.  ``generators`` enumerates the
connected members up to isomorphism and a size bound, which is exactly the
generator family of the density comonad classifying the class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

from .errors import OutOfRange
from .homsearch import count_homs, count_monos
from .iso import canonical_labeling, is_isomorphic
from .structures import (GRAPH, FinStructure, components, coproduct, graph, serialize)

MAX_ENUMERATION = 7


# ---------------------------------------------------------------------------
# exhaustive enumeration


@lru_cache(maxsize=None)
def _graphs_on(n: int) -> tuple[FinStructure, ...]:
    """All graphs on exactly n vertices up to isomorphism, in canonical order."""
    if n == 0:
        return (graph(0, []),)
    seen: dict = {}
    for G in _graphs_on(n - 1):
        base_edges = G.edges
        for mask in range(1 << (n - 1)):
            edges = base_edges + [(v, n - 1) for v in range(n - 1) if mask >> v & 1]
            H = graph(n, edges)
            code, labels = canonical_labeling(H)
            if code not in seen:
                seen[code] = H.relabel(labels)
    return tuple(sorted(seen.values(), key=serialize))


def enumerate_graphs(max_size: int, connected_only: bool = False) -> list[FinStructure]:
    """All graphs with at most ``max_size`` vertices up to isomorphism.

    Ordered by (size, canonical serialization); the empty graph comes first
    unless ``connected_only``.
    """
    if max_size > MAX_ENUMERATION:
        raise OutOfRange(f"exhaustive enumeration is bounded by {MAX_ENUMERATION} vertices")
    out = []
    for n in range(0 if not connected_only else 1, max_size + 1):
        for G in _graphs_on(n):
            if not connected_only or G.is_connected():
                out.append(G)
    return out


# ---------------------------------------------------------------------------
# predicates on graphs


def degrees(G: FinStructure) -> list[int]:
    return [len(G.neighbors[v]) for v in range(G.size)]


def is_cycle(G):
    return G.size >= 3 and G.is_connected() and all(d == 2 for d in degrees(G))


def is_tree(G):
    return G.is_connected() and len(G.edges) == G.size - 1


def is_path(G):
    return is_tree(G) and all(d <= 2 for d in degrees(G))


def two_coloring(G: FinStructure) -> list[int] | None:
    color = [-1] * G.size
    for s in range(G.size):
        if color[s] != -1:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in G.neighbors[x]:
                if color[y] == -1:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return None
    return color


def is_bipartite(G):
    return two_coloring(G) is not None


def is_core(G: FinStructure) -> bool:
    """All endomorphisms are automorphisms (no non-injective endomorphism)."""
    return count_homs(G, G) == count_monos(G, G)


def _reduce_for_planarity(G: FinStructure) -> dict[int, set[int]]:
    """Drop vertices of degree <= 1 and smooth degree-2 vertices; planarity is unchanged."""
    adj = {v: set(G.neighbors[v]) for v in range(G.size)}
    changed = True
    while changed:
        changed = False
        for v in list(adj):
            d = len(adj[v])
            if d <= 1:
                for u in adj[v]:
                    adj[u].discard(v)
                del adj[v]
                changed = True
            elif d == 2:
                a, b = adj[v]
                adj[a].discard(v)
                adj[b].discard(v)
                del adj[v]
                # a parallel edge would not affect planarity, so just merge
                adj[a].add(b)
                adj[b].add(a)
                changed = True
    return adj


def _paths_exist(adj, branch: Sequence[int], pairs: Sequence[tuple[int, int]]) -> bool:
    """Internally disjoint paths joining every pair, avoiding the other branch vertices."""
    used = set(branch)

    def route(k):
        if k == len(pairs):
            return True
        a, b = pairs[k]

        def dfs(v):
            for w in adj[v]:
                if w == b:
                    if route(k + 1):
                        return True
                elif w not in used:
                    used.add(w)
                    if dfs(w):
                        return True
                    used.discard(w)
            return False

        return dfs(a)

    return route(0)


def kuratowski_subdivision(G: FinStructure):
    """A K5 or K3,3 subdivision's branch vertices in the reduced graph, or None."""
    adj = _reduce_for_planarity(G)
    deg4 = sorted(v for v in adj if len(adj[v]) >= 4)
    for five in combinations(deg4, 5):
        if _paths_exist(adj, five, list(combinations(five, 2))):
            return ("K5", five)
    deg3 = sorted(v for v in adj if len(adj[v]) >= 3)
    for six in combinations(deg3, 6):
        first = six[0]
        for rest in combinations(six[1:], 2):
            left = (first,) + rest
            right = tuple(v for v in six if v not in left)
            if _paths_exist(adj, six, [(a, b) for a in left for b in right]):
                return ("K3,3", left + right)
    return None


def is_planar(G: FinStructure) -> bool:
    """Planarity by Kuratowski: Euler's bound first, then a subdivision search."""
    adj = _reduce_for_planarity(G)
    n = len(adj)
    m = sum(len(s) for s in adj.values()) // 2
    if n <= 4:
        return True
    if m > 3 * n - 6:
        return False
    return kuratowski_subdivision(G) is None


def max_degree_at_most(k):
    return lambda G: max(degrees(G), default=0) <= k


def _param_at_most(param_name: str, k: int):
    from . import params

    fn = params.PARAMETERS[param_name]
    return lambda G: fn(G) <= k


# ---------------------------------------------------------------------------
# class specs


@dataclass(frozen=True)
class ClassSpec:
    name: str
    connected_predicate: Callable[[FinStructure], bool] = field(compare=False)
    monotone: bool = False

    def __call__(self, G: FinStructure) -> bool:
        return membership(self, G)


_FIXED = {
    "cycles": (is_cycle, False),
    "trees": (is_tree, False),
    "paths": (is_path, False),
    "bipartite": (is_bipartite, True),
    "connected-bipartite": (is_bipartite, True),
    "planar": (is_planar, True),
    "cores": (is_core, False),
    "all": (lambda G: True, True),
}

CLASS_NAMES = ("cycles", "trees", "paths", "bipartite", "connected-bipartite", "planar", "cores",
               "td<=K", "tw<K", "pw<K", "maxdeg<=K", "all")


def class_spec(name: str) -> ClassSpec:
    """Look up a built-in class by its CLI identifier."""
    if name in _FIXED:
        pred, mono = _FIXED[name]
        return ClassSpec(name, pred, mono)
    m = re.fullmatch(r"(td<=|tw<|pw<|maxdeg<=)(\d+)", name)
    if not m:
        raise KeyError(f"unknown class {name!r}; valid: {', '.join(CLASS_NAMES)}")
    kind, k = m.group(1), int(m.group(2))
    if kind == "td<=":
        return ClassSpec(name, _param_at_most("td", k), True)
    if kind == "tw<":
        return ClassSpec(name, _param_at_most("tw", k - 1), True)
    if kind == "pw<":
        return ClassSpec(name, _param_at_most("pw", k - 1), True)
    return ClassSpec(name, max_degree_at_most(k), True)


def membership(spec: ClassSpec, G: FinStructure) -> bool:
    return all(spec.connected_predicate(C) for C in components(G).components)


def generators(spec: ClassSpec | str, max_size: int):
    """Generator family of connected members with at most ``max_size`` vertices."""
    from .density import GeneratorFamily

    if isinstance(spec, str):
        spec = class_spec(spec)
    gens = [G for G in enumerate_graphs(max_size, connected_only=True) if spec.connected_predicate(G)]
    return GeneratorFamily(GRAPH, tuple(gens), True, tuple(graph_name(G) for G in gens))


# ---------------------------------------------------------------------------
# snapshots


@dataclass
class SnapshotReport:
    iso_closure: list = field(default_factory=list)
    summand_closure: list = field(default_factory=list)
    coproduct_closure: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.iso_closure or self.summand_closure or self.coproduct_closure)


def component_based_snapshot_check(family: Sequence[FinStructure]) -> SnapshotReport:
    """Check a finite class snapshot for closure under isomorphism, summands and coproducts.

    Membership in the snapshot is up to isomorphism; coproduct closure is
    checked only for pairs whose union fits the snapshot's size bound.
    """
    report = SnapshotReport()
    members = list(family)
    bound = max((G.size for G in members), default=0)

    def contains(S):
        return any(is_isomorphic(S, G) is not None for G in members if G.size == S.size)

    for i, G in enumerate(members):
        rev = G.relabel(list(reversed(range(G.size))))
        if not contains(rev):
            report.iso_closure.append(i)
        for C in components(G).components:
            if not contains(C):
                report.summand_closure.append((i, C))
    for i, A in enumerate(members):
        for j, B in enumerate(members[i:], start=i):
            if A.size + B.size <= bound and A.size and B.size:
                U, _ = coproduct([A, B])
                if not contains(U):
                    report.coproduct_closure.append((i, j))
    return report


# ---------------------------------------------------------------------------


def subdivided_clique(n: int, p: int) -> FinStructure:
    """K_n with every edge subdivided, repeated p times."""
    if n < 1 or p < 0:
        raise ValueError("need n >= 1 and p >= 0")
    size = n
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for _ in range(p):
        new = []
        for u, v in edges:
            w = size
            size += 1
            new.append((u, w))
            new.append((w, v))
        edges = new
    return graph(size, edges)


def graph_name(G: FinStructure) -> str:
    """Short display name for small graphs: K1, K2, Cn, Kn, Pn, K1,m, else a hash."""
    import hashlib

    n = G.size
    m = len(G.edges) if G.sig.graph_mode else -1
    if G.sig.graph_mode and G.is_connected():
        deg = degrees(G)
        if n <= 2:
            return f"K{n}"
        if is_cycle(G):
            return f"C{n}"
        if m == n * (n - 1) // 2:
            return f"K{n}"
        if is_path(G):
            return f"P{n}"
        if m == n - 1 and max(deg) == n - 1:
            return f"K1,{n - 1}"
    if G.sig.graph_mode and n == 0:
        return "empty"
    digest = hashlib.sha256(serialize(canonical_form_cached(G)).encode()).hexdigest()[:6]
    return f"G{n}m{m}-{digest}" if m >= 0 else f"S{n}-{digest}"


def canonical_form_cached(G: FinStructure) -> FinStructure:
    _, labels = canonical_labeling(G)
    return G.relabel(labels)
