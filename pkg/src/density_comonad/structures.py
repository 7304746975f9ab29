"""Finite relational structures, homomorphisms, coproducts and components.

A structure has universe ``0..size-1`` and one sorted, duplicate-free tuple
set per relation of its signature.  Graphs are the special signature with a
single symmetric irreflexive binary relation ``E``; both orientations of
every edge are stored, but files list each edge once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvalidHomomorphism, ParseError, SignatureMismatch


@dataclass(frozen=True)
class Signature:
    relations: tuple[tuple[str, int], ...]
    graph_mode: bool = False

    def __post_init__(self):
        names = [name for name, _ in self.relations]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate relation names in {names}")
        for name, arity in self.relations:
            if not name or not name.isidentifier():
                raise ValueError(f"bad relation name {name!r}")
            if arity < 1:
                raise ValueError(f"relation {name} has arity {arity} < 1")
        if self.graph_mode and (len(self.relations) != 1 or self.relations[0][1] != 2):
            raise ValueError("graph mode needs exactly one binary relation")

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.relations)

    def __str__(self):
        if self.graph_mode:
            return "graph"
        return "signature " + " ".join(f"{n}/{a}" for n, a in self.relations)


GRAPH = Signature((("E", 2),), graph_mode=True)


@dataclass(frozen=True)
class FinStructure:
    sig: Signature
    size: int
    tuples: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("negative size")
        if len(self.tuples) != len(self.sig.relations):
            raise ValueError("one tuple set per relation required")
        for (name, arity), ts in zip(self.sig.relations, self.tuples):
            prev = None
            for t in ts:
                if len(t) != arity:
                    raise ValueError(f"{name}: tuple {t} has wrong arity")
                if any(not 0 <= x < self.size for x in t):
                    raise ValueError(f"{name}: tuple {t} outside universe of size {self.size}")
                if prev is not None and t <= prev:
                    raise ValueError(f"{name}: tuples not sorted and duplicate-free")
                prev = t
        if self.sig.graph_mode:
            edges = self.tuples[0]
            es = set(edges)
            for u, v in edges:
                if u == v:
                    raise ValueError(f"graph has a loop at {u}")
                if (v, u) not in es:
                    raise ValueError(f"graph edge ({u}, {v}) lacks its reverse")

    def __hash__(self):
        # carriers can be large and are used as cache keys
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.sig, self.size, self.tuples))
            self.__dict__["_hash"] = h
            return h

    @classmethod
    def make(cls, sig: Signature, size: int, relations: Sequence[Iterable[Sequence[int]]]):
        """Build a structure from unsorted tuple collections (duplicates allowed)."""
        ts = tuple(tuple(sorted({tuple(t) for t in rel})) for rel in relations)
        return cls(sig, size, ts)

    # derived data, computed lazily; instances are immutable

    @cached_property
    def tuple_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(ts) for ts in self.tuples)

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int, tuple[int, ...]], ...], ...]:
        """For every element, the (relation, position, tuple) triples it occurs in."""
        inc: list[list] = [[] for _ in range(self.size)]
        for ri, ts in enumerate(self.tuples):
            for t in ts:
                for pos, x in enumerate(t):
                    inc[x].append((ri, pos, t))
        return tuple(tuple(lst) for lst in inc)

    @cached_property
    def neighbors(self) -> tuple[frozenset, ...]:
        """Gaifman neighbourhoods."""
        nb: list[set] = [set() for _ in range(self.size)]
        for ts in self.tuples:
            for t in ts:
                for x in t:
                    nb[x].update(t)
        for x in range(self.size):
            nb[x].discard(x)
        return tuple(frozenset(s) for s in nb)

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges ``u < v`` of a graph."""
        if not self.sig.graph_mode:
            raise TypeError("edges() is defined for graphs only")
        return [(u, v) for u, v in self.tuples[0] if u < v]

    @property
    def num_tuples(self) -> tuple[int, ...]:
        return tuple(len(ts) for ts in self.tuples)

    def holds(self, rel: int, t: tuple) -> bool:
        return t in self.tuple_sets[rel]

    def is_connected(self) -> bool:
        """Connected in the Gaifman sense; the empty structure is not connected."""
        if self.size == 0:
            return False
        seen = {0}
        stack = [0]
        nb = self.neighbors
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.size

    def relabel(self, perm: Sequence[int]) -> "FinStructure":
        """Image of the structure under the bijection ``x -> perm[x]``."""
        if sorted(perm) != list(range(self.size)):
            raise ValueError("relabel needs a permutation of the universe")
        return FinStructure.make(self.sig, self.size,
                                 [[tuple(perm[x] for x in t) for t in ts] for ts in self.tuples])

    def induced(self, elements: Sequence[int]) -> "FinStructure":
        """Induced substructure on ``elements``, renumbered in the given order."""
        pos = {x: i for i, x in enumerate(elements)}
        rels = []
        for ts in self.tuples:
            rels.append([tuple(pos[x] for x in t) for t in ts if all(x in pos for x in t)])
        return FinStructure.make(self.sig, len(elements), rels)

    def __repr__(self):
        if self.sig.graph_mode:
            return f"Graph(n={self.size}, edges={self.edges})"
        return f"FinStructure({self.sig}, size={self.size}, tuples={self.num_tuples})"


@dataclass(frozen=True)
class Homomorphism:
    """A total map between universes preserving every relation."""

    source: FinStructure = field(repr=False)
    target: FinStructure = field(repr=False)
    map: tuple[int, ...]

    def __post_init__(self):
        if self.source.sig != self.target.sig:
            raise SignatureMismatch("homomorphism between different signatures")
        if len(self.map) != self.source.size:
            raise InvalidHomomorphism(
                f"map has length {len(self.map)}, source has {self.source.size} elements")
        n = self.target.size
        if any(not 0 <= y < n for y in self.map):
            raise InvalidHomomorphism("map leaves the target universe")
        bad = first_violation(self.source, self.target, self.map)
        if bad is not None:
            raise InvalidHomomorphism(f"tuple {bad[1]} of relation {bad[0]} is not preserved")

    @classmethod
    def trusted(cls, source: FinStructure, target: FinStructure, mapping: Sequence[int]):
        """Construct without validation; for maps produced by verified searches."""
        h = object.__new__(cls)
        object.__setattr__(h, "source", source)
        object.__setattr__(h, "target", target)
        object.__setattr__(h, "map", tuple(mapping))
        return h

    def __call__(self, x: int) -> int:
        return self.map[x]

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_bijective(self) -> bool:
        return self.is_injective() and self.source.size == self.target.size

    def after(self, inner: "Homomorphism") -> "Homomorphism":
        """Composite ``self ∘ inner``."""
        return compose(self, inner)


def first_violation(source: FinStructure, target: FinStructure, mapping: Sequence[int]):
    """First (relation name, tuple) of ``source`` not preserved by ``mapping``, or None."""
    for (name, _), ts, tset in zip(source.sig.relations, source.tuples, target.tuple_sets):
        for t in ts:
            if tuple(mapping[x] for x in t) not in tset:
                return name, t
    return None


def is_homomorphism(source: FinStructure, target: FinStructure, mapping: Sequence[int]) -> bool:
    if len(mapping) != source.size or any(not 0 <= y < target.size for y in mapping):
        return False
    return first_violation(source, target, mapping) is None


def compose(outer: Homomorphism, inner: Homomorphism) -> Homomorphism:
    if inner.target != outer.source:
        raise ValueError("composition of non-composable homomorphisms")
    return Homomorphism.trusted(inner.source, outer.target,
                                tuple(outer.map[y] for y in inner.map))


def identity(S: FinStructure) -> Homomorphism:
    return Homomorphism.trusted(S, S, tuple(range(S.size)))


def inverse(iso: Homomorphism) -> Homomorphism:
    if not iso.is_bijective():
        raise ValueError("only bijections have inverses")
    inv = [0] * iso.source.size
    for x, y in enumerate(iso.map):
        inv[y] = x
    return Homomorphism(iso.target, iso.source, tuple(inv))


# ---------------------------------------------------------------------------
# coproducts and components


def coproduct(parts: Sequence[FinStructure], sig: Signature = GRAPH):
    """Disjoint union of ``parts`` with its injections.

    ``sig`` only matters for the empty coproduct.
    """
    if parts:
        sig = parts[0].sig
        for p in parts[1:]:
            if p.sig != sig:
                raise SignatureMismatch("coproduct of structures with different signatures")
    rels: list[list[tuple[int, ...]]] = [[] for _ in sig.relations]
    offsets = []
    off = 0
    for p in parts:
        offsets.append(off)
        for ri, ts in enumerate(p.tuples):
            rels[ri].extend(tuple(x + off for x in t) for t in ts)
        off += p.size
    total = FinStructure.make(sig, off, rels)
    injections = [
        Homomorphism.trusted(p, total, tuple(range(o, o + p.size)))
        for p, o in zip(parts, offsets)
    ]
    return total, injections


def disjoint_union(*parts: FinStructure) -> FinStructure:
    return coproduct(list(parts))[0]


def gaifman(S: FinStructure) -> FinStructure:
    edges = []
    for x in range(S.size):
        for y in S.neighbors[x]:
            edges.append((x, y))
    return FinStructure.make(GRAPH, S.size, [edges])


@dataclass(frozen=True)
class ComponentDecomposition:
    components: tuple[FinStructure, ...]
    inclusions: tuple[Homomorphism, ...]
    # witness[x] = (component index, local index)
    witness: tuple[tuple[int, int], ...]


def components(S: FinStructure) -> ComponentDecomposition:
    parent = list(range(S.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ts in S.tuples:
        for t in ts:
            r = find(t[0])
            for x in t[1:]:
                rx = find(x)
                if rx != r:
                    # keep the smaller id as root so roots are component minima
                    if rx < r:
                        parent[r] = rx
                        r = rx
                    else:
                        parent[rx] = r
    members: dict[int, list[int]] = {}
    for x in range(S.size):
        members.setdefault(find(x), []).append(x)
    order = sorted(members, key=lambda r: members[r][0])
    comp_of = {}
    witness = [None] * S.size
    for ci, r in enumerate(order):
        for li, x in enumerate(members[r]):
            witness[x] = (ci, li)
        comp_of[r] = ci
    rels = [[[] for _ in S.sig.relations] for _ in order]
    for ri, ts in enumerate(S.tuples):
        for t in ts:
            ci = witness[t[0]][0]
            rels[ci][ri].append(tuple(witness[x][1] for x in t))
    comps = []
    incls = []
    for ci, r in enumerate(order):
        c = FinStructure(S.sig, len(members[r]), tuple(tuple(sorted(rs)) for rs in rels[ci]))
        comps.append(c)
        incls.append(Homomorphism.trusted(c, S, tuple(members[r])))
    return ComponentDecomposition(tuple(comps), tuple(incls), tuple(witness))


# ---------------------------------------------------------------------------
# named graphs


def graph(n: int, edges: Iterable[tuple[int, int]]) -> FinStructure:
    both = []
    for u, v in edges:
        both.append((u, v))
        both.append((v, u))
    return FinStructure.make(GRAPH, n, [both])


def empty_graph(n: int = 0) -> FinStructure:
    return graph(n, [])


def complete_graph(n: int) -> FinStructure:
    return graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> FinStructure:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> FinStructure:
    """Path on ``n`` vertices."""
    return graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(m: int) -> FinStructure:
    """K_{1,m} with centre 0."""
    return graph(m + 1, [(0, i) for i in range(1, m + 1)])


def complete_bipartite(a: int, b: int) -> FinStructure:
    return graph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


# ---------------------------------------------------------------------------
# text format


def serialize(S: FinStructure) -> str:
    lines = [str(S.sig), f"universe {S.size}"]
    if S.sig.graph_mode:
        lines.extend(f"e {u} {v}" for u, v in S.edges)
    else:
        for (name, _), ts in zip(S.sig.relations, S.tuples):
            lines.extend(name + " " + " ".join(map(str, t)) for t in ts)
    return "\n".join(lines) + "\n"


def parse(text: str) -> FinStructure:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if len(lines) < 2:
        raise ParseError("need a signature line and a universe line")
    head = lines[0].split()
    if head == ["graph"]:
        sig = GRAPH
    elif head[0] == "signature":
        rels = []
        for item in head[1:]:
            name, _, ar = item.partition("/")
            if not ar.isdigit():
                raise ParseError(f"bad relation declaration {item!r}")
            rels.append((name, int(ar)))
        try:
            sig = Signature(tuple(rels))
        except ValueError as e:
            raise ParseError(str(e)) from None
    else:
        raise ParseError(f"unknown header {lines[0]!r}")
    uni = lines[1].split()
    if len(uni) != 2 or uni[0] != "universe" or not uni[1].isdigit():
        raise ParseError(f"bad universe line {lines[1]!r}")
    n = int(uni[1])
    names = {name: i for i, (name, _) in enumerate(sig.relations)}
    if sig.graph_mode:
        names = {"e": 0}
    rels = [[] for _ in sig.relations]
    for line in lines[2:]:
        parts = line.split()
        if parts[0] not in names:
            raise ParseError(f"unknown relation {parts[0]!r}")
        try:
            t = tuple(int(p) for p in parts[1:])
        except ValueError:
            raise ParseError(f"bad tuple line {line!r}") from None
        ri = names[parts[0]]
        if len(t) != sig.relations[ri][1]:
            raise ParseError(f"wrong arity in {line!r}")
        if any(not 0 <= x < n for x in t):
            raise ParseError(f"element out of range in {line!r}")
        rels[ri].append(t)
        if sig.graph_mode:
            if t[0] == t[1]:
                raise ParseError(f"loop in {line!r}")
            rels[ri].append((t[1], t[0]))
    return FinStructure.make(sig, n, rels)


def load(path) -> FinStructure:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(S: FinStructure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(S))
