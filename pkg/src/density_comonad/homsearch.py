"""Enumeration and counting of homomorphisms, monomorphisms and isomorphisms.

Search assigns source elements one at a time.  Binary relations drive
forward checking on the domains of unassigned neighbours (domains are
bitmasks over the target); tuples of other arities are checked once all of
their entries are assigned.  The enumerated list is sorted, so the search
order never shows in results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import CapExceeded, SignatureMismatch
from .structures import FinStructure, Homomorphism, components

MODES = ("hom", "mono", "iso")


@dataclass(frozen=True)
class HomQuery:
    source: FinStructure = field(repr=False)
    target: FinStructure = field(repr=False)
    mode: str = "hom"
    limit: int | None = None

    def __post_init__(self):
        if self.source.sig != self.target.sig:
            raise SignatureMismatch("hom query across signatures")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.limit is not None and self.limit < 1:
            raise ValueError("limit must be positive")


class _Plan:
    """Variable order, binary constraints and deferred tuple checks for a search."""

    def __init__(self, source: FinStructure, target: FinStructure):
        self.n = n = source.size
        self.m = target.size
        nb = source.neighbors
        deg = [len(nb[x]) for x in range(n)]
        # descending Gaifman degree, ties by id; stay adjacent to placed vertices
        order: list[int] = []
        placed: set[int] = set()
        while len(order) < n:
            frontier = [x for x in range(n) if x not in placed and nb[x] & placed]
            pool = frontier or [x for x in range(n) if x not in placed]
            x = min(pool, key=lambda v: (-deg[v], v))
            order.append(x)
            placed.add(x)
        self.order = order
        pos = {x: i for i, x in enumerate(order)}

        # target adjacency masks per binary relation: out[ri][a], inn[ri][a]
        full = (1 << self.m) - 1
        self.full = full
        out_masks = {}
        in_masks = {}
        self.unary = [full] * n
        self.forward: list[list[tuple[int, list[int]]]] = [[] for _ in range(n)]
        self.checks: list[list[tuple[frozenset, tuple[int, ...]]]] = [[] for _ in range(n)]
        for ri, ((_, arity), ts) in enumerate(zip(source.sig.relations, source.tuples)):
            tts = target.tuples[ri]
            tset = target.tuple_sets[ri]
            if arity == 1:
                mask = 0
                for (a,) in tts:
                    mask |= 1 << a
                for (x,) in ts:
                    self.unary[x] &= mask
                continue
            if arity == 2 and ri not in out_masks:
                o = [0] * self.m
                i_ = [0] * self.m
                for a, b in tts:
                    o[a] |= 1 << b
                    i_[b] |= 1 << a
                out_masks[ri] = o
                in_masks[ri] = i_
            for t in ts:
                if arity == 2:
                    u, v = t
                    if u == v:
                        self.unary[u] &= self._loops_of(target, ri)
                        continue
                    # constraint enforced when the earlier of u, v is assigned
                    if pos[u] < pos[v]:
                        self.forward[pos[u]].append((v, out_masks[ri]))
                    else:
                        self.forward[pos[v]].append((u, in_masks[ri]))
                else:
                    last = max(pos[x] for x in t)
                    self.checks[last].append((tset, t))

    @staticmethod
    def _loops_of(target, ri):
        mask = 0
        for a, b in target.tuples[ri]:
            if a == b:
                mask |= 1 << a
        return mask


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _search(source: FinStructure, target: FinStructure, injective: bool, count_only: bool,
            limit: int | None = None):
    """Core backtracking; returns a count or a list of map tuples."""
    plan = _Plan(source, target)
    n = plan.n
    if n == 0:
        return 1 if count_only else [()]
    if target.size == 0:
        return 0 if count_only else []
    order = plan.order
    mapping = [-1] * source.size
    domains = list(plan.unary)
    results: list[tuple[int, ...]] = []
    count = 0

    def go(i: int, used: int):
        nonlocal count
        x = order[i]
        dom = domains[x]
        if injective:
            dom &= ~used
        for a in _bits(dom):
            mapping[x] = a
            ok = True
            for tset, t in plan.checks[i]:
                if tuple(mapping[z] for z in t) not in tset:
                    ok = False
                    break
            if not ok:
                continue
            saved = []
            for y, masks in plan.forward[i]:
                nd = domains[y] & masks[a]
                saved.append((y, domains[y]))
                domains[y] = nd
                if not nd:
                    ok = False
                    break
            if ok:
                if i + 1 == n:
                    if count_only:
                        count += 1
                    else:
                        results.append(tuple(mapping))
                        if limit is not None and len(results) > limit:
                            raise CapExceeded("homomorphism enumeration", limit)
                else:
                    go(i + 1, used | (1 << a))
            for y, d in reversed(saved):
                domains[y] = d
        mapping[x] = -1

    go(0, 0)
    if count_only:
        return count
    results.sort()
    return results


def enumerate_homs(q: HomQuery) -> list[Homomorphism]:
    """All maps of the requested kind, sorted lexicographically by map vector.

    Exceeding ``q.limit`` raises :class:`CapExceeded`; there is no truncation.
    """
    S, T = q.source, q.target
    if q.mode == "iso":
        if S.size != T.size or S.num_tuples != T.num_tuples:
            return []
        maps = _search(S, T, True, False, q.limit)
    else:
        maps = _search(S, T, q.mode == "mono", False, q.limit)
    return [Homomorphism.trusted(S, T, m) for m in maps]


def hom_maps(source: FinStructure, target: FinStructure, mode: str = "hom",
             limit: int | None = None) -> list[tuple[int, ...]]:
    """Like :func:`enumerate_homs` but returns bare map tuples."""
    HomQuery(source, target, mode, limit)
    if mode == "iso" and (source.size != target.size or source.num_tuples != target.num_tuples):
        return []
    return _search(source, target, mode != "hom", False, limit)


def count_homs(source: FinStructure, target: FinStructure) -> int:
    """Number of homomorphisms ``source -> target``.

    Counts factor over the components of the source.  Python integers do not
    overflow, so no escalation step is needed.
    """
    if source.sig != target.sig:
        raise SignatureMismatch("hom count across signatures")
    if source.size == 0:
        return 1
    if target.size == 0:
        return 0
    dec = components(source)
    total = 1
    for C in dec.components:
        if C.size == 1 and not any(C.tuples):
            total *= target.size
        else:
            total *= _search(C, target, False, True)
        if total == 0:
            return 0
    return total


def count_monos(source: FinStructure, target: FinStructure) -> int:
    if source.sig != target.sig:
        raise SignatureMismatch("hom count across signatures")
    return _search(source, target, True, True)
