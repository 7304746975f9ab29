import itertools
import math

import pytest
from hypothesis import given

from density_comonad.classes import enumerate_graphs
from density_comonad.errors import CapExceeded, OutOfRange
from density_comonad.params import (NEG_INF, POS_INF, chromatic_number, clique_number, coalgebra_number,
                                    elimination_forest, girth, graded_family, is_standard_on, max_degree,
                                    path_width, tree_depth, tree_width)
from density_comonad.structures import (complete_graph, cycle_graph, disjoint_union, empty_graph, graph,
                                        path_graph, star_graph)

from conftest import graphs


def td_oracle(vertices, adj):
    """Tree-depth straight from its recursive definition on vertex sets."""
    vs = set(vertices)
    if not vs:
        return 0
    comps, seen = [], set()
    for v in vs:
        if v in seen:
            continue
        comp, stack = {v}, [v]
        while stack:
            x = stack.pop()
            for y in adj[x] & vs:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(comp)
    if len(comps) > 1:
        return max(td_oracle(c, adj) for c in comps)
    return 1 + min(td_oracle(vs - {v}, adj) for v in vs)


def tw_oracle(G):
    """Minimum over elimination orderings of the largest neighbourhood at elimination."""
    if G.size == 0:
        return NEG_INF
    best = math.inf
    for order in itertools.permutations(range(G.size)):
        adj = {v: set(G.neighbors[v]) for v in range(G.size)}
        width = 0
        for v in order:
            nb = adj.pop(v)
            width = max(width, len(nb))
            for a in nb:
                adj[a] |= nb - {a}
                adj[a].discard(v)
        best = min(best, width)
    return best


def pw_oracle(G):
    """Vertex separation number minimised over all orderings."""
    if G.size == 0:
        return NEG_INF
    best = math.inf
    for order in itertools.permutations(range(G.size)):
        width = 0
        for i in range(G.size):
            prefix = set(order[: i + 1])
            width = max(width, sum(1 for v in prefix if G.neighbors[v] - prefix))
        best = min(best, width)
    return best


def chi_oracle(G):
    if G.size == 0:
        return NEG_INF
    for k in range(1, G.size + 1):
        for col in itertools.product(range(k), repeat=G.size):
            if all(col[u] != col[v] for u, v in G.edges):
                return k


def test_examples():
    assert tree_depth(complete_graph(1)) == 1
    assert tree_depth(path_graph(4)) == 3
    assert [tree_depth(complete_graph(n)) for n in range(1, 6)] == [1, 2, 3, 4, 5]
    assert tree_width(path_graph(5)) == 1
    assert tree_width(cycle_graph(5)) == 2 and path_width(cycle_graph(5)) == 2
    assert tree_width(complete_graph(4)) == 3
    assert max_degree(cycle_graph(7)) == 2
    assert chromatic_number(complete_graph(3)) == 3
    assert clique_number(star_graph(4)) == 2
    assert girth(cycle_graph(5)) == 5 and girth(path_graph(4)) == POS_INF


def test_empty_graph_values():
    E = empty_graph(0)
    for fn in (tree_depth, tree_width, path_width, max_degree, clique_number, chromatic_number):
        assert fn(E) == NEG_INF


def test_tree_depth_of_paths():
    for n in range(1, 8):
        assert tree_depth(path_graph(n)) == math.ceil(math.log2(n + 1))


def test_parameters_match_oracles():
    for G in enumerate_graphs(5):
        adj = {v: set(G.neighbors[v]) for v in range(G.size)}
        want_td = td_oracle(range(G.size), adj) if G.size else NEG_INF
        assert tree_depth(G) == want_td
        assert tree_width(G) == tw_oracle(G)
        assert path_width(G) == pw_oracle(G)
        assert chromatic_number(G) == chi_oracle(G)


@given(graphs(max_size=6))
def test_parameter_inequalities(G):
    if G.size == 0:
        return
    tw, pw, td = tree_width(G), path_width(G), tree_depth(G)
    assert tw <= pw <= td - 1
    assert clique_number(G) <= chromatic_number(G) <= max_degree(G) + 1
    assert clique_number(G) - 1 <= tw


def test_caps():
    with pytest.raises(CapExceeded):
        tree_depth(path_graph(11))
    assert tree_depth(path_graph(11), cap=12) == 4


def test_elimination_forest_depth():
    parent = elimination_forest(path_graph(7), 3)
    assert parent is not None
    assert elimination_forest(path_graph(7), 2) is None


def test_standardness(graphs4):
    for p in ("td", "tw", "pw", "maxdeg", "clique", "chromatic"):
        assert is_standard_on(p, graphs4).passed, p
    rep = is_standard_on("girth", [cycle_graph(3), cycle_graph(5)])
    assert not rep.passed
    assert (0, 1, 3, 3, 5) in rep.violations
    assert is_standard_on(lambda G: 7, graphs4).passed


def test_graded_family():
    gf = graded_family("td", 3)
    assert gf[1].names == ("K1",)
    assert {"K2", "P3"} <= set(gf[2].names)
    ks = gf.ks
    for a, b in zip(ks, ks[1:]):
        small, big = gf[a].generators, gf[b].generators
        assert len(small) <= len(big)
        it = iter(big)
        assert all(any(g == h for h in it) for g in small)
    assert len(gf[POS_INF]) == len(enumerate_graphs(3, connected_only=True))
    assert len(gf[NEG_INF]) == 0


def test_kappa():
    gf = graded_family("td", 5)
    assert coalgebra_number(gf, path_graph(4)) == 3
    assert coalgebra_number(gf, empty_graph(0)) == NEG_INF
    assert coalgebra_number(gf, disjoint_union(complete_graph(3), path_graph(4))) == 3
    with pytest.raises(OutOfRange):
        coalgebra_number(gf, path_graph(6))
    tw = graded_family("tw+1", 4)
    md = graded_family("maxdeg", 4)
    for G in enumerate_graphs(4):
        assert coalgebra_number(tw, G) == (tree_width(G) + 1 if G.size else NEG_INF)
        assert coalgebra_number(md, G) == max_degree(G)
    # a restricted range without the empty grade never returns -inf
    gf2 = graded_family("td", 3, k_range=[1, 2])
    assert coalgebra_number(gf2, complete_graph(3)) == POS_INF
