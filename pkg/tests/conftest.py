import itertools

import networkx as nx
import pytest
from hypothesis import settings, strategies as st

from density_comonad.structures import FinStructure, Signature, graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def to_nx(G: FinStructure) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from(range(G.size))
    H.add_edges_from(G.edges)
    return H


def brute_homs(A: FinStructure, B: FinStructure, injective=False):
    """Every map checked against every tuple; the slowest possible oracle."""
    out = []
    for m in itertools.product(range(B.size), repeat=A.size):
        if injective and len(set(m)) != len(m):
            continue
        if all(tuple(m[x] for x in t) in B.tuple_sets[ri] for ri, ts in enumerate(A.tuples) for t in ts):
            out.append(m)
    return out


@st.composite
def graphs(draw, min_size=0, max_size=6):
    n = draw(st.integers(min_size, max_size))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return graph(n, chosen)


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(list(range(n))))


TERNARY = Signature((("R", 3), ("P", 1)))


@st.composite
def ternary_structures(draw, max_size=4):
    n = draw(st.integers(1, max_size))
    elem = st.integers(0, n - 1)
    rs = draw(st.lists(st.tuples(elem, elem, elem), max_size=5))
    ps = draw(st.lists(st.tuples(elem), max_size=3))
    return FinStructure.make(TERNARY, n, [rs, ps])


@pytest.fixture(scope="session")
def graphs4():
    from density_comonad.classes import enumerate_graphs

    return enumerate_graphs(4)


@pytest.fixture(scope="session")
def graphs5():
    from density_comonad.classes import enumerate_graphs

    return enumerate_graphs(5)


# criterion number -> (passed, seconds, description); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, secs, desc = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {secs:7.2f}s  {desc}")
