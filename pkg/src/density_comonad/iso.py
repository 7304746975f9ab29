"""Colour refinement, canonical forms and isomorphism witnesses.

Colours produced by :func:`refine` are canonical: they are ranks of
isomorphism-invariant signatures, so two isomorphic structures receive the
same colour multiset and corresponding elements receive equal colours.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from .errors import SignatureMismatch
from .structures import FinStructure, Homomorphism, components, serialize


def refine(S: FinStructure, initial: Sequence[int] | None = None, history: bool = False):
    """Iterate colour refinement until the partition is stable.

    Returns the stable colouring, or the list of all rounds when
    ``history`` is set (round 0 is the initial colouring).
    """
    n = S.size
    colors = list(initial) if initial is not None else [0] * n
    # normalise the initial colouring to ranks
    table = {c: i for i, c in enumerate(sorted(set(colors)))}
    colors = [table[c] for c in colors]
    rounds = [colors]
    inc = S.incidence
    num = len(table)
    while True:
        sigs = [
            (colors[v], tuple(sorted((ri, pos, tuple(colors[u] for u in t)) for ri, pos, t in inc[v])))
            for v in range(n)
        ]
        table = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(table) == num:
            return rounds if history else colors
        colors = new
        num = len(table)
        rounds.append(colors)


def _individualize(S, colors, v):
    return refine(S, [(c, 0 if u == v else 1) for u, c in enumerate(colors)])


def _swappable(S: FinStructure, u: int, v: int) -> bool:
    """Whether the transposition (u v) is an automorphism."""
    if S.sig.graph_mode:
        nb = S.neighbors
        return nb[u] - {v} == nb[v] - {u}

    def sw(x):
        return v if x == u else u if x == v else x

    for ts, tset in zip(S.tuples, S.tuple_sets):
        for t in ts:
            if (u in t or v in t) and tuple(sw(x) for x in t) not in tset:
                return False
    return True


def _code(S: FinStructure, labels: Sequence[int]):
    return tuple(tuple(sorted(tuple(labels[x] for x in t) for t in ts)) for ts in S.tuples)


def canonical_labeling(S: FinStructure) -> tuple[tuple, tuple[int, ...]]:
    """Return ``(code, labels)`` where ``labels`` relabels ``S`` canonically.

    Two structures are isomorphic iff their codes are equal.  Search is by
    individualisation-refinement; vertices related by a transposition
    automorphism are explored only once.
    """
    best: list = [None, None]

    def search(colors):
        counts = Counter(colors)
        cell = next((c for c in sorted(counts) if counts[c] > 1), None)
        if cell is None:
            code = _code(S, colors)
            if best[0] is None or code < best[0]:
                best[0] = code
                best[1] = tuple(colors)
            return
        reps: list[int] = []
        for v in (u for u, c in enumerate(colors) if c == cell):
            if any(_swappable(S, v, r) for r in reps):
                continue
            reps.append(v)
            search(_individualize(S, colors, v))

    search(refine(S))
    return (S.size, best[0]), best[1]


def canonical_form(S: FinStructure) -> FinStructure:
    _, labels = canonical_labeling(S)
    return S.relabel(labels)


def canonical_key(S: FinStructure) -> str:
    """Canonical serialization; equal strings iff isomorphic."""
    return serialize(canonical_form(S))


# ---------------------------------------------------------------------------


def _joint_colors(A: FinStructure, B: FinStructure):
    from .structures import coproduct

    U, _ = coproduct([A, B])
    cols = refine(U)
    return cols[: A.size], cols[A.size:]


def _iso_connected(A: FinStructure, B: FinStructure):
    """Backtracking isomorphism search between structures of equal size."""
    n = A.size
    if n == 0:
        return ()
    ca, cb = _joint_colors(A, B)
    if Counter(ca) != Counter(cb):
        return None
    by_color: dict[int, list[int]] = {}
    for y, c in enumerate(cb):
        by_color.setdefault(c, []).append(y)
    # order: smallest colour classes first, then stay adjacent to assigned vertices
    sizes = Counter(ca)
    order: list[int] = []
    placed = set()
    nb = A.neighbors
    while len(order) < n:
        frontier = [x for x in range(n) if x not in placed and any(y in placed for y in nb[x])]
        pool = frontier or [x for x in range(n) if x not in placed]
        x = min(pool, key=lambda v: (sizes[ca[v]], v))
        order.append(x)
        placed.add(x)
    pos = {x: i for i, x in enumerate(order)}
    # tuples of A checked at the step where their last element is assigned
    checks: list[list] = [[] for _ in range(n)]
    for ri, ts in enumerate(A.tuples):
        for t in ts:
            checks[max(pos[x] for x in t)].append((ri, t))
    bsets = B.tuple_sets
    mapping = [-1] * n
    used = [False] * B.size

    def go(i):
        if i == n:
            return True
        x = order[i]
        for y in by_color[ca[x]]:
            if used[y]:
                continue
            mapping[x] = y
            if all(tuple(mapping[z] for z in t) in bsets[ri] for ri, t in checks[i]):
                used[y] = True
                if go(i + 1):
                    return True
                used[y] = False
        mapping[x] = -1
        return False

    if go(0):
        return tuple(mapping)
    return None


def _quick_invariant(S: FinStructure):
    cols = refine(S)
    return (S.size, S.num_tuples, tuple(sorted(Counter(cols).items())))


def is_isomorphic(A: FinStructure, B: FinStructure) -> Homomorphism | None:
    """Isomorphism ``A -> B`` as a witness, or None."""
    if A.sig != B.sig:
        raise SignatureMismatch("isomorphism test across signatures")
    if A.size != B.size or A.num_tuples != B.num_tuples:
        return None
    da, db = components(A), components(B)
    if len(da.components) != len(db.components):
        return None
    if len(da.components) <= 1:
        m = _iso_connected(A, B)
        return None if m is None else Homomorphism(A, B, m)
    # match components class by class
    reps: list[FinStructure] = []
    rep_bucket: dict = {}

    def classify(C):
        key = _quick_invariant(C)
        for ri in rep_bucket.get(key, []):
            m = _iso_connected(C, reps[ri])
            if m is not None:
                return ri, m
        reps.append(C)
        rep_bucket.setdefault(key, []).append(len(reps) - 1)
        return len(reps) - 1, tuple(range(C.size))

    a_cls = [classify(C) for C in da.components]
    b_cls = [classify(C) for C in db.components]
    if Counter(c for c, _ in a_cls) != Counter(c for c, _ in b_cls):
        return None
    pool: dict[int, list[int]] = {}
    for j, (c, _) in enumerate(b_cls):
        pool.setdefault(c, []).append(j)
    mapping = [0] * A.size
    for i, (c, to_rep_a) in enumerate(a_cls):
        j = pool[c].pop(0)
        to_rep_b = b_cls[j][1]
        from_rep_b = {r: y for y, r in enumerate(to_rep_b)}
        inc_a = da.inclusions[i].map
        inc_b = db.inclusions[j].map
        for local, x in enumerate(inc_a):
            mapping[x] = inc_b[from_rep_b[to_rep_a[local]]]
    return Homomorphism(A, B, tuple(mapping))
