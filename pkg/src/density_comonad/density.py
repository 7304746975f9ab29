"""The discrete density comonad of a finite generator family.

For a family ``M_0, ..., M_{r-1}`` of structures,

    D(B) = ∐_i ∐_{f : M_i -> B} M_i,

so an element of ``D(B)`` is a cell ``(i, f, x)`` with ``f`` a homomorphism
``M_i -> B`` (stored as its map tuple) and ``x`` an element of ``M_i``.
Relations hold exactly inside one block ``(i, f)``, copied from ``M_i``.
Blocks are ordered by generator position, then by the lexicographic order of
the hom maps; hom indices are located by binary search in that order.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple, Sequence

from .comonad import (BaseSpace, Coalgebra, Comonad, ComonadMorphism, LawReport, Materialized,
                      OverSpace, Space, coalgebra_failures, comonad_law_report)
from .errors import (CapExceeded, LawViolation, NotASubfamily, SignatureMismatch,
                     UnsupportedConfiguration)
from .homsearch import count_homs, hom_maps
from .iso import is_isomorphic
from .structures import GRAPH, FinStructure, Homomorphism, Signature, components

DEFAULT_CARRIER_CAP = 50_000
DEFAULT_SQUARE_CAP = 500_000


class Cell(NamedTuple):
    gen: int
    hom: tuple
    elem: int


@dataclass(frozen=True)
class GeneratorFamily:
    sig: Signature
    generators: tuple[FinStructure, ...]
    requires_connected: bool = True
    names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.sig != self.sig:
                raise SignatureMismatch("generator with a foreign signature")
            if self.requires_connected and len(components(g).components) != 1:
                raise UnsupportedConfiguration(
                    "generator is not connected; pass requires_connected=False to allow it")
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1:]:
                if is_isomorphic(a, b) is not None:
                    raise ValueError("generators must be pairwise non-isomorphic")
        if not self.names:
            from .classes import graph_name

            object.__setattr__(self, "names", tuple(
                graph_name(g) if g.sig.graph_mode else f"M{i}" for i, g in enumerate(self.generators)))
        elif len(self.names) != len(self.generators):
            raise ValueError("one name per generator")

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i) -> FinStructure:
        return self.generators[i]

    @classmethod
    def of(cls, *generators: FinStructure, requires_connected: bool = True, names=()):
        sig = generators[0].sig if generators else GRAPH
        return cls(sig, tuple(generators), requires_connected, tuple(names))


@dataclass(frozen=True, eq=False)
class DensityStructure(Materialized):
    base: FinStructure = field(repr=False)
    family: GeneratorFamily = field(repr=False)
    homs: tuple[tuple[tuple[int, ...], ...], ...] = field(repr=False)  # sorted, per generator

    @cached_property
    def gen_start(self) -> tuple[int, ...]:
        """Element offset at which generator i's blocks begin (plus a final total)."""
        out = [0]
        for g, hs in zip(self.family.generators, self.homs):
            out.append(out[-1] + len(hs) * g.size)
        return tuple(out)

    @cached_property
    def block_start(self) -> tuple[int, ...]:
        out = [0]
        for hs in self.homs:
            out.append(out[-1] + len(hs))
        return tuple(out)

    @property
    def size(self) -> int:
        return self.gen_start[-1]

    @cached_property
    def blocks(self) -> tuple[tuple[int, Homomorphism], ...]:
        fam = self.family
        return tuple((i, Homomorphism.trusted(fam[i], self.base, f))
                     for i, hs in enumerate(self.homs) for f in hs)

    @cached_property
    def carrier(self) -> FinStructure:
        rels: list[list] = [[] for _ in self.family.sig.relations]
        for i, (g, hs) in enumerate(zip(self.family.generators, self.homs)):
            start = self.gen_start[i]
            for h in range(len(hs)):
                off = start + h * g.size
                for ri, ts in enumerate(g.tuples):
                    rels[ri].extend(tuple(off + x for x in t) for t in ts)
        return FinStructure(self.family.sig, self.size,
                            tuple(tuple(sorted(r)) for r in rels))

    @property
    def structure(self) -> FinStructure:
        return self.carrier

    def triple(self, e: int) -> tuple[int, int, int]:
        """(generator index, hom index, element of the generator) of carrier element e."""
        if not 0 <= e < self.size:
            raise IndexError(e)
        i = bisect_right(self.gen_start, e) - 1
        h, x = divmod(e - self.gen_start[i], self.family[i].size)
        return i, h, x

    def cell(self, e: int) -> Cell:
        i, h, x = self.triple(e)
        return Cell(i, self.homs[i][h], x)

    @cached_property
    def elements(self) -> tuple[Cell, ...]:
        return tuple(Cell(i, f, x)
                     for i, (g, hs) in enumerate(zip(self.family.generators, self.homs))
                     for f in hs for x in range(g.size))

    def hom_index(self, gen: int, f: Sequence[int]) -> int:
        hs = self.homs[gen]
        f = tuple(f)
        j = bisect_left(hs, f)
        if j == len(hs) or hs[j] != f:
            raise KeyError(f"{f} is not a homomorphism from generator {gen}")
        return j

    def offset(self, gen: int, hom_index: int) -> int:
        return self.gen_start[gen] + hom_index * self.family[gen].size

    def index(self, c) -> int:
        gen, f, x = c
        return self.offset(gen, self.hom_index(gen, f)) + x


def _estimate(fam: GeneratorFamily, B: FinStructure) -> int:
    return sum(count_homs(g, B) * g.size for g in fam.generators)


def _estimate_square(fam: GeneratorFamily, d: DensityStructure) -> int:
    """|D(D(B))| without enumerating: connected generators count block by block."""
    if not fam.requires_connected:
        return _estimate(fam, d.carrier)
    counts = [len(hs) for hs in d.homs]
    total = 0
    for g in fam.generators:
        homs_into = sum(n * count_homs(g, fam[j]) for j, n in enumerate(counts) if n)
        total += homs_into * g.size
    return total


@lru_cache(maxsize=64)
def _apply(fam: GeneratorFamily, B: FinStructure, cap: int) -> DensityStructure:
    if B.sig != fam.sig:
        raise SignatureMismatch("density structure over a foreign signature")
    size = _estimate(fam, B)
    if size > cap:
        raise CapExceeded("density carrier", cap, size)
    homs = tuple(tuple(hom_maps(g, B)) for g in fam.generators)
    return DensityStructure(B, fam, homs)


def apply(fam: GeneratorFamily, B: FinStructure, cap: int = DEFAULT_CARRIER_CAP) -> DensityStructure:
    return _apply(fam, B, cap)


class DensityComonad(Comonad):
    def __init__(self, family: GeneratorFamily, cap: int = DEFAULT_CARRIER_CAP,
                 square_cap: int = DEFAULT_SQUARE_CAP):
        self.family = family
        self.cap = cap
        self.square_cap = square_cap

    def __repr__(self):
        return f"DensityComonad({list(self.family.names)})"

    def materialize(self, B: FinStructure) -> DensityStructure:
        return _apply(self.family, B, self.cap)

    def counit(self, c: Cell):
        return c.hom[c.elem]

    def comult(self, c: Cell) -> Cell:
        g, f, x = c
        return Cell(g, tuple(Cell(g, f, z) for z in range(self.family[g].size)), x)

    def lift(self, h, c: Cell) -> Cell:
        return Cell(c.gen, tuple(h(y) for y in c.hom), c.elem)

    def valid(self, inner: Space, c) -> bool:
        if not isinstance(c, Cell) or not 0 <= c.gen < len(self.family):
            return False
        g = self.family[c.gen]
        if len(c.hom) != g.size or not 0 <= c.elem < g.size:
            return False
        if not all(inner.valid(y) for y in c.hom):
            return False
        return all(inner.holds(ri, tuple(c.hom[x] for x in t))
                   for ri, ts in enumerate(g.tuples) for t in ts)

    def holds(self, inner: Space, rel: int, elems: tuple) -> bool:
        c0 = elems[0]
        if any(c.gen != c0.gen or c.hom != c0.hom for c in elems[1:]):
            return False
        return tuple(c.elem for c in elems) in self.family[c0.gen].tuple_sets[rel]

    def comult_hom(self, B: FinStructure) -> Homomorphism:
        d = self.materialize(B)
        size = _estimate_square(self.family, d)
        if size > self.square_cap:
            raise CapExceeded("density square D(D(B))", self.square_cap, size)
        dd = _apply(self.family, d.carrier, self.square_cap)
        out = []
        for i, hs in enumerate(d.homs):
            n = self.family[i].size
            for h in range(len(hs)):
                off = d.offset(i, h)
                iota_f = tuple(range(off, off + n))
                base = dd.offset(i, dd.hom_index(i, iota_f))
                out.extend(base + x for x in range(n))
        return Homomorphism.trusted(d.carrier, dd.carrier, out)


# ---------------------------------------------------------------------------
# operations on a family


def iota(d: DensityStructure, gen_index: int, hom_index: int) -> Homomorphism:
    """Inclusion of block (gen_index, hom_index) into the carrier."""
    if not 0 <= gen_index < len(d.family) or not 0 <= hom_index < len(d.homs[gen_index]):
        raise IndexError((gen_index, hom_index))
    g = d.family[gen_index]
    off = d.offset(gen_index, hom_index)
    return Homomorphism.trusted(g, d.carrier, tuple(range(off, off + g.size)))


def counit(fam: GeneratorFamily, B: FinStructure, cap: int = DEFAULT_CARRIER_CAP) -> Homomorphism:
    d = apply(fam, B, cap)
    return Homomorphism(d.carrier, B, tuple(c.hom[c.elem] for c in d.elements))


def lift(fam: GeneratorFamily, h: Homomorphism, cap: int = DEFAULT_CARRIER_CAP) -> Homomorphism:
    """D(h): sends (A, f, x) to (A, h∘f, x)."""
    return DensityComonad(fam, cap).lift_hom(h)


def comult(fam: GeneratorFamily, B: FinStructure, cap: int = DEFAULT_CARRIER_CAP,
           square_cap: int = DEFAULT_SQUARE_CAP) -> Homomorphism:
    """δ_B: sends (A, f, x) to (A, ι_f, x) in the materialised D(D(B))."""
    return DensityComonad(fam, cap, square_cap).comult_hom(B)


def canonical_coalgebra(fam: GeneratorFamily, index: int, cap: int = DEFAULT_CARRIER_CAP) -> Coalgebra:
    """η_A: M(A) -> D(M(A)), the inclusion of the identity block."""
    g = fam[index]
    C = DensityComonad(fam, cap)
    ident = tuple(range(g.size))
    return Coalgebra(C, g, tuple(Cell(index, ident, y) for y in range(g.size)), (index,))


def find_generator(fam: GeneratorFamily, C: FinStructure):
    """(generator index, isomorphism C -> generator) or None."""
    for i, g in enumerate(fam.generators):
        z = is_isomorphic(C, g)
        if z is not None:
            return i, z
    return None


def coalgebra_by_decomposition(fam: GeneratorFamily, X: FinStructure,
                               cap: int = DEFAULT_CARRIER_CAP) -> Coalgebra | None:
    """Coalgebra assembled from components isomorphic to generators.

    A component ``c: C -> X`` with isomorphism ``z: C -> M(A)`` contributes
    ``alpha(c(y)) = (A, c ∘ z^{-1}, z(y))``.
    """
    if not fam.requires_connected:
        raise UnsupportedConfiguration("classification needs a family of connected generators")
    if X.sig != fam.sig:
        raise SignatureMismatch("structure and family signatures differ")
    dec = components(X)
    alpha: list = [None] * X.size
    used = []
    for C, inc in zip(dec.components, dec.inclusions):
        found = find_generator(fam, C)
        if found is None:
            return None
        i, z = found
        used.append(i)
        f = [0] * C.size
        for y, zy in enumerate(z.map):
            f[zy] = inc.map[y]
        f = tuple(f)
        for y, zy in enumerate(z.map):
            alpha[inc.map[y]] = Cell(i, f, zy)
    return Coalgebra(DensityComonad(fam, cap), X, tuple(alpha), tuple(used))


def coalgebra_by_search(fam: GeneratorFamily, X: FinStructure, max_size: int = 6,
                        cap: int = DEFAULT_CARRIER_CAP) -> Coalgebra | None:
    """Direct search for a coalgebra ``X -> D(X)``.

    Candidates for alpha(x) are cells (A, f, y) with f(y) = x.  The square law
    forces alpha(f(z)) = (A, f, z) for every z once alpha(x) = (A, f, y) is
    chosen, so f must be injective and the choice propagates along f.
    Partial assignments are checked against the relations of X; complete
    ones are checked against every law before being returned.
    """
    if X.sig != fam.sig:
        raise SignatureMismatch("structure and family signatures differ")
    if X.size > max_size:
        raise CapExceeded("coalgebra search universe", max_size, X.size)
    C = DensityComonad(fam, cap)
    d = C.materialize(X)
    n = X.size
    cands: list[list[Cell]] = [[] for _ in range(n)]
    for c in d.elements:
        if len(set(c.hom)) == len(c.hom):
            cands[c.hom[c.elem]].append(c)
    # tuples of X to check once all their entries are assigned
    inc = X.incidence
    alpha: list = [None] * n

    def consistent(changed):
        for x in changed:
            for ri, _, t in inc[x]:
                vals = [alpha[z] for z in t]
                if any(v is None for v in vals):
                    continue
                v0 = vals[0]
                if any(v.gen != v0.gen or v.hom != v0.hom for v in vals[1:]):
                    return False
                if tuple(v.elem for v in vals) not in fam[v0.gen].tuple_sets[ri]:
                    return False
        return True

    def go(x):
        while x < n and alpha[x] is not None:
            x += 1
        if x == n:
            return not coalgebra_failures(C, X, alpha)
        for c in cands[x]:
            changed = []
            ok = True
            for z, fz in enumerate(c.hom):
                want = Cell(c.gen, c.hom, z)
                if alpha[fz] is None:
                    alpha[fz] = want
                    changed.append(fz)
                elif alpha[fz] != want:
                    ok = False
                    break
            if ok and consistent(changed) and go(x + 1):
                return True
            for y in changed:
                alpha[y] = None
        return False

    if not go(0):
        return None
    return Coalgebra(C, X, tuple(alpha))


def cofree(fam: GeneratorFamily, B: FinStructure, cap: int = DEFAULT_CARRIER_CAP,
           square_cap: int = DEFAULT_SQUARE_CAP) -> Coalgebra:
    """The cofree coalgebra (D(B), δ_B)."""
    C = DensityComonad(fam, cap, square_cap)
    d = C.materialize(B)
    # D(D(B)) is materialised with the larger cap
    C2 = DensityComonad(fam, square_cap, square_cap)
    return Coalgebra(C2, d.carrier, tuple(C.lift(d.index, C.comult(e)) for e in d.elements))


def hom_counts(fam: GeneratorFamily, B: FinStructure) -> tuple[int, ...]:
    return tuple(count_homs(g, B) for g in fam.generators)


def cofree_iso(fam: GeneratorFamily, A: FinStructure, B: FinStructure) -> bool:
    """Whether the cofree coalgebras on A and B are isomorphic.

    With connected, pairwise non-isomorphic generators, D(A) is the coproduct
    of hom(M_i, A) copies of each M_i, so D(A) ≅ D(B) exactly when the hom
    count vectors agree; the block-permuting isomorphism matching blocks of
    equal generators then commutes with the comultiplications.
    """
    if not fam.requires_connected or any(not g.is_connected() for g in fam.generators):
        raise UnsupportedConfiguration("cofree_iso needs connected generators")
    return hom_counts(fam, A) == hom_counts(fam, B)


# ---------------------------------------------------------------------------
# morphisms


class ComonadHom(ComonadMorphism):
    """Re-indexing of blocks along an inclusion of generator families."""

    def __init__(self, from_family: GeneratorFamily, to_family: GeneratorFamily,
                 index_map: tuple[int, ...], cap: int = DEFAULT_CARRIER_CAP):
        self.from_family = from_family
        self.to_family = to_family
        self.index_map = index_map
        super().__init__(DensityComonad(from_family, cap), DensityComonad(to_family, cap),
                         lambda c: Cell(index_map[c.gen], c.hom, c.elem))

    def then(self, other: "ComonadHom") -> "ComonadHom":
        """``other ∘ self``."""
        if other.from_family != self.to_family:
            raise ValueError("non-composable comonad morphisms")
        return ComonadHom(self.from_family, other.to_family,
                          tuple(other.index_map[j] for j in self.index_map), self.source.cap)


def grade_morphism(sub: GeneratorFamily, sup: GeneratorFamily,
                   cap: int = DEFAULT_CARRIER_CAP) -> ComonadHom:
    """Morphism D_sub ⇒ D_sup induced by sub being a sub-list of sup."""
    if sub.sig != sup.sig:
        raise NotASubfamily("families over different signatures")
    index_map = []
    j = 0
    for g in sub.generators:
        while j < len(sup) and sup[j] != g:
            j += 1
        if j == len(sup):
            raise NotASubfamily("generators of sub do not appear in order in sup")
        index_map.append(j)
        j += 1
    return ComonadHom(sub, sup, tuple(index_map), cap)


def weak_initial_phi(fam: GeneratorFamily, target: Comonad, coalgebras: Sequence[Coalgebra]):
    """The element-wise map φ*: (A, f, x) ↦ target.lift(f)(φ_A(x))."""
    if len(coalgebras) != len(fam):
        raise ValueError("one coalgebra per generator required")
    phis = []
    for i, (g, co) in enumerate(zip(fam.generators, coalgebras)):
        if co.carrier != g:
            raise LawViolation("carrier", i, "coalgebra is not on the generator")
        bad = co.law_failures()
        if bad:
            raise LawViolation(bad[0][0], (i, bad[0][1]), f"coalgebra on generator {i}")
        phis.append(tuple(co.element(x) for x in range(g.size)))

    def at(c):
        return target.lift(c.hom.__getitem__, phis[c.gen][c.elem])

    return ComonadMorphism(DensityComonad(fam), target, at)


def weak_initial_morphism(fam: GeneratorFamily, target: Comonad, coalgebras: Sequence[Coalgebra],
                          B: FinStructure) -> Homomorphism:
    """Component at B of the comonad morphism D_fam ⇒ target fixed by the coalgebras."""
    return weak_initial_phi(fam, target, coalgebras).component(B)


# ---------------------------------------------------------------------------
# law checks


def _block_table(d: DensityStructure) -> dict:
    """(gen, map) -> element offset, built from the block list without bisection."""
    table = {}
    for b, (i, h) in enumerate(d.blocks):
        table[(i, h.map)] = d.offset(i, b - d.block_start[i])
    return table


def check_comonad_laws(fam: GeneratorFamily, corpus: Sequence[FinStructure],
                       labels: Sequence[str] | None = None, comonad: DensityComonad | None = None,
                       dc1: bool = True) -> LawReport:
    """Evaluate the comonad diagrams and DC1-DC3 on every corpus structure.

    DC1 quantifies over every homomorphism between corpus structures.  Cap
    violations are recorded as CAP entries for the affected structure.
    """
    C = comonad if comonad is not None else DensityComonad(fam)
    labels = list(labels) if labels is not None else [f"#{i}" for i in range(len(corpus))]
    report = LawReport()
    ok_structs = []
    for B, label in zip(corpus, labels):
        try:
            d = C.materialize(B)
        except CapExceeded as e:
            for law in ("counit-left", "counit-right", "coassociativity", "DC1", "DC2", "DC3"):
                report.capped(law, label, str(e))
            continue
        ok_structs.append((B, label, d))
        comonad_law_report(C, B, label, report)
        # DC2: ε_B ∘ ι_f = f
        eps = C.counit_hom(B)
        bad = None
        for b, (i, h) in enumerate(d.blocks):
            io = iota(d, i, b - d.block_start[i])
            if tuple(eps.map[y] for y in io.map) != h.map:
                bad = (i, h.map)
                break
        report.add("DC2", label, bad)
        # DC3: δ_B ∘ ι_f = ι_{ι_f}, symbolically; materialised when D(D(B)) fits
        bad = None
        for b, (i, h) in enumerate(d.blocks):
            io = iota(d, i, b - d.block_start[i])
            lowered = [C.lift(d.index, C.comult(d.elements[y])) for y in io.map]
            if lowered != [Cell(i, io.map, z) for z in range(len(io.map))]:
                bad = (i, h.map)
                break
        note = "symbolic"
        if bad is None:
            try:
                delta = C.comult_hom(B)
            except CapExceeded:
                pass
            else:
                note = "materialised"
                dd = _apply(C.family, d.carrier, C.square_cap)
                table = _block_table(dd)
                for b, (i, h) in enumerate(d.blocks):
                    io = iota(d, i, b - d.block_start[i])
                    start = table[(i, io.map)]
                    if tuple(delta.map[y] for y in io.map) != tuple(range(start, start + len(io.map))):
                        bad = (i, h.map)
                        break
        report.add("DC3", label, bad, note)
    if dc1:
        check_dc1(fam, [B for B, _, _ in ok_structs], [lb for _, lb, _ in ok_structs], C, report)
    return report


def check_dc1(fam: GeneratorFamily, corpus: Sequence[FinStructure], labels: Sequence[str] | None = None,
              comonad: DensityComonad | None = None, report: LawReport | None = None) -> LawReport:
    """DC1: D(h) ∘ ι_f = ι_{h∘f} for every hom h between corpus structures.

    Structures whose carrier exceeds the cap are recorded as CAP.
    """
    C = comonad if comonad is not None else DensityComonad(fam)
    labels = list(labels) if labels is not None else [f"#{i}" for i in range(len(corpus))]
    report = report if report is not None else LawReport()
    ok_structs = []
    for B, label in zip(corpus, labels):
        try:
            ok_structs.append((B, label, C.materialize(B)))
        except CapExceeded as e:
            report.capped("DC1", label, str(e))
    for B, label, d in ok_structs:
        bad = None
        for Ct, _, dc in ok_structs:
            table = _block_table(dc)
            for hmap in hom_maps(B, Ct):
                h = Homomorphism.trusted(B, Ct, hmap)
                lh = C.lift_hom(h)
                for b, (i, f) in enumerate(d.blocks):
                    io = iota(d, i, b - d.block_start[i])
                    hf = tuple(hmap[y] for y in f.map)
                    start = table.get((i, hf))
                    if start is None or tuple(lh.map[y] for y in io.map) != tuple(
                            range(start, start + len(io.map))):
                        bad = (i, f.map, hmap)
                        break
                if bad:
                    break
            if bad:
                break
        report.add("DC1", label, bad)
    return report
