import networkx as nx
import pytest
from hypothesis import given, strategies as st

from density_comonad.classes import (CLASS_NAMES, class_spec, component_based_snapshot_check,
                                     enumerate_graphs, generators, graph_name, is_core, is_planar,
                                     membership, subdivided_clique)
from density_comonad.errors import OutOfRange
from density_comonad.params import girth
from density_comonad.structures import (complete_bipartite, complete_graph, cycle_graph, disjoint_union,
                                        path_graph)

from conftest import graphs, to_nx

# unlabelled graph counts on n vertices and connected ones
GRAPH_COUNTS = [1, 1, 2, 4, 11, 34, 156, 1044]
CONNECTED_COUNTS = [None, 1, 1, 2, 6, 21, 112, 853]


def test_enumeration_counts():
    allg = enumerate_graphs(7)
    for n in range(8):
        assert sum(1 for G in allg if G.size == n) == GRAPH_COUNTS[n]
    conn = enumerate_graphs(7, connected_only=True)
    for n in range(1, 8):
        assert sum(1 for G in conn if G.size == n) == CONNECTED_COUNTS[n]
    with pytest.raises(OutOfRange):
        enumerate_graphs(8)


def test_enumeration_matches_atlas():
    atlas = nx.graph_atlas_g()
    ours = enumerate_graphs(6)
    for n in range(7):
        theirs = [H for H in atlas if H.number_of_nodes() == n]
        mine = [to_nx(G) for G in ours if G.size == n]
        assert len(theirs) == len(mine)
        for H in theirs:
            assert sum(nx.is_isomorphic(H, M) for M in mine) == 1


def test_generator_examples():
    assert generators("cycles", 6).names == ("C3", "C4", "C5", "C6")
    trees = generators("trees", 4)
    assert sorted(trees.names) == sorted(["K1", "K2", "P3", "P4", "K1,3"])
    assert generators("td<=1", 5).names == ("K1",)
    sizes = [g.size for g in generators("all", 5).generators]
    assert sizes == sorted(sizes)


def test_membership_examples():
    assert membership(class_spec("cycles"), disjoint_union(complete_graph(3), cycle_graph(5)))
    assert not membership(class_spec("cycles"), path_graph(3))
    assert not membership(class_spec("planar"), disjoint_union(complete_graph(5), complete_graph(1)))
    with pytest.raises(KeyError):
        class_spec("planr")


@pytest.mark.parametrize("name", ["cycles", "trees", "paths", "bipartite", "planar", "cores",
                                  "td<=2", "tw<2", "pw<2", "maxdeg<=2", "all"])
def test_membership_is_component_based(name, graphs4):
    spec = class_spec(name)
    small = graphs4
    for A in small:
        for B in small[::2]:
            assert membership(spec, disjoint_union(A, B)) == (membership(spec, A) and membership(spec, B))


@pytest.mark.parametrize("name", ["bipartite", "planar", "td<=2", "tw<3", "pw<2", "maxdeg<=2"])
@given(G=graphs(max_size=6), data=st.data())
def test_monotone_classes_closed_under_deletion(name, G, data):
    spec = class_spec(name)
    if not membership(spec, G) or not G.edges:
        return
    drop = data.draw(st.sampled_from(G.edges))
    from density_comonad.structures import graph
    H = graph(G.size, [e for e in G.edges if e != drop])
    assert membership(spec, H)
    if G.size:
        v = data.draw(st.integers(0, G.size - 1))
        assert membership(spec, G.induced([x for x in range(G.size) if x != v]))


@given(graphs(max_size=6), st.data())
def test_predicates_isomorphism_invariant(G, data):
    perm = data.draw(st.permutations(list(range(G.size))))
    H = G.relabel(perm)
    for name in ["cycles", "trees", "paths", "bipartite", "planar", "cores", "td<=2", "maxdeg<=3"]:
        spec = class_spec(name)
        assert membership(spec, G) == membership(spec, H)


def test_planarity_matches_networkx():
    for G in enumerate_graphs(7):
        assert is_planar(G) == nx.check_planarity(to_nx(G))[0]


@given(graphs(min_size=7, max_size=10))
def test_planarity_matches_networkx_larger(G):
    assert is_planar(G) == nx.check_planarity(to_nx(G))[0]


def test_planarity_of_known_graphs():
    assert not is_planar(complete_graph(5))
    assert not is_planar(complete_bipartite(3, 3))
    assert not is_planar(to_structure(nx.petersen_graph()))
    assert is_planar(subdivided_clique(4, 2))
    assert not is_planar(subdivided_clique(5, 1))


def to_structure(H):
    from density_comonad.structures import graph
    idx = {v: i for i, v in enumerate(H.nodes)}
    return graph(len(idx), [(idx[u], idx[v]) for u, v in H.edges])


def test_is_core_examples():
    assert is_core(complete_graph(3))
    assert not is_core(path_graph(3))
    assert is_core(complete_graph(1))
    assert is_core(cycle_graph(5))
    assert not is_core(cycle_graph(6))


def test_snapshots():
    bip = [G for G in enumerate_graphs(5) if membership(class_spec("bipartite"), G)]
    assert component_based_snapshot_check(bip).passed
    rep = component_based_snapshot_check([disjoint_union(complete_graph(3), cycle_graph(5))])
    assert not rep.passed and rep.summand_closure
    assert rep.summand_closure[0][1] == complete_graph(3)
    assert component_based_snapshot_check([]).passed
    # all triangles-free graphs up to 4 minus one summand
    conn = [G for G in enumerate_graphs(4) if G.size == 2]
    assert not component_based_snapshot_check(conn).passed


def test_subdivided_clique():
    assert subdivided_clique(3, 0) == complete_graph(3)
    G = subdivided_clique(4, 1)
    assert (G.size, len(G.edges)) == (10, 12)
    for n in range(1, 7):
        assert membership(class_spec("bipartite"), subdivided_clique(n, 1))
    for n in (3, 4):
        for p in range(3):
            assert girth(subdivided_clique(n, p)) >= 3 * 2 ** p
    with pytest.raises(ValueError):
        subdivided_clique(0, 1)


def test_graph_names():
    assert [graph_name(g) for g in [complete_graph(1), complete_graph(2), cycle_graph(5),
                                     complete_graph(4), path_graph(4)]] == ["K1", "K2", "C5", "K4", "P4"]
    from density_comonad.structures import star_graph
    assert graph_name(star_graph(3)) == "K1,3"
    assert graph_name(disjoint_union(complete_graph(1), complete_graph(1))).startswith("G2m0-")


def test_class_names_listed():
    for name in CLASS_NAMES:
        if "K" not in name:
            class_spec(name)
