import itertools

import networkx as nx
import pytest

from gaussbinom.blocks import (
    EQUAL_LENGTH,
    OFF_BY_ONE,
    NotBlockGraphError,
    biconnected_components,
    clique_index,
    find_block_violation,
    glue_paths,
    is_block_graph,
    path_lambda,
    shortest_path,
)
from gaussbinom.corpus import BINOMIAL
from gaussbinom.graphs import Multiset, Path, ecolor, make_graph, maximal_cliques, vcolor

from conftest import all_simple_paths, complete_graph, path_graph


def glued():
    vs = {str(i): "a" for i in range(1, 6)}
    es = {("1", "2"): "x", ("1", "3"): "x", ("2", "3"): "x", ("3", "4"): "x", ("3", "5"): "x", ("4", "5"): "x"}
    return make_graph(vs, es)


def from_edges(n, edges):
    return make_graph({str(i): "a" for i in range(n)}, {(str(a), str(b)): "x" for a, b in edges})


def reference_block(g):
    """Biconnected components that are all cliques, by networkx."""
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    for comp in nx.biconnected_components(h):
        k = len(comp)
        if h.subgraph(comp).number_of_edges() != k * (k - 1) // 2:
            return False
    return True


def connected_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        h = nx.Graph(edges)
        h.add_nodes_from(range(n))
        if nx.is_connected(h):
            yield from_edges(n, edges)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_complete_graphs_are_block(n):
    assert is_block_graph(complete_graph(n))


def test_c4_and_glued():
    c4 = make_graph({str(i): "a" for i in range(1, 5)}, {("1", "2"): "x", ("2", "3"): "x", ("3", "4"): "x", ("4", "1"): "x"})
    assert not is_block_graph(c4)
    assert is_block_graph(glued())
    assert sorted(map(sorted, biconnected_components(glued()))) == [["1", "2", "3"], ["3", "4", "5"]]


def test_c4_violation():
    c4 = make_graph({str(i): "a" for i in range(1, 5)}, {("1", "2"): "x", ("2", "3"): "x", ("3", "4"): "x", ("4", "1"): "x"})
    w = find_block_violation(c4)
    assert w.kind == EQUAL_LENGTH
    assert (w.u, w.v) == ("1", "3")
    assert {w.path_p, w.path_q} == {Path(("1", "2", "3")), Path(("1", "4", "3"))}


def test_c5_violation():
    c5 = make_graph({str(i): "a" for i in range(1, 6)}, {(str(i), str(i % 5 + 1)): "x" for i in range(1, 6)})
    w = find_block_violation(c5)
    assert w.kind in (EQUAL_LENGTH, OFF_BY_ONE)
    check_violation(c5, w)


def check_violation(g, w):
    d = g.distance(w.u, w.v)
    assert {w.path_p.ends, w.path_q.ends} <= {(w.u, w.v), (w.v, w.u)}
    inner_p = set(w.path_p.vertices[1:-1])
    inner_q = set(w.path_q.vertices[1:-1])
    assert not inner_p & inner_q
    for p in (w.path_p, w.path_q):
        vs = p.vertices
        assert all(g.has_edge(vs[i], vs[i + 1]) for i in range(len(vs) - 1))
    if w.kind == EQUAL_LENGTH:
        assert w.path_p.length == w.path_q.length == d and w.path_p != w.path_q
    else:
        assert w.path_p.length == d >= 2 and w.path_q.length == d + 1


def test_block_graph_has_no_violation(graphs):
    for name in BINOMIAL:
        assert find_block_violation(graphs[name]) is None


@pytest.mark.parametrize("n", [3, 4, 5])
def test_two_characterisations_agree(n):
    for g in connected_graphs(n):
        ref = reference_block(g)
        assert is_block_graph(g) == ref
        w = find_block_violation(g)
        assert (w is None) == ref
        if w is not None:
            check_violation(g, w)


def test_shortest_path_examples():
    g = glued()
    assert shortest_path(g, "2", "2") == Path(("2",))
    assert shortest_path(g, "2", "2").length == 0
    assert shortest_path(g, "1", "2").vertices in (("1", "2"), ("2", "1"))
    assert shortest_path(g, "1", "5") == Path(("1", "3", "5"))


def test_shortest_path_needs_block_graph():
    c4 = make_graph({str(i): "a" for i in range(1, 5)}, {("1", "2"): "x", ("2", "3"): "x", ("3", "4"): "x", ("4", "1"): "x"})
    with pytest.raises(NotBlockGraphError):
        shortest_path(c4, "1", "3")


def test_geodesics_unique_and_symmetric(graphs):
    for name in BINOMIAL:
        g = graphs[name]
        if len(g) > 10:
            continue
        for u, v in itertools.combinations(g.vertices, 2):
            d = g.distance(u, v)
            geos = [p for p in all_simple_paths(g, u, v, d) if len(p) == d + 1]
            assert len(geos) == 1, (name, u, v)
            assert shortest_path(g, u, v) == Path(geos[0])
            assert shortest_path(g, u, v).vertices[::-1] == shortest_path(g, v, u).vertices


def test_geodesic_meets_each_clique_once(graphs):
    for name in BINOMIAL:
        g = graphs[name]
        cliques = maximal_cliques(g)
        for u, v in itertools.combinations(g.vertices, 2):
            edges = set(shortest_path(g, u, v).edges)
            for c in cliques:
                assert sum(1 for e in edges if e <= c) <= 1


def test_path_lambda_examples():
    aba = path_graph("aba", "xx")
    assert path_lambda(aba, Path(("2",))) == Multiset([vcolor("b")])
    full = path_lambda(aba, Path(("1", "2", "3")))
    assert full == Multiset([vcolor("a")] * 2 + [vcolor("b")] + [ecolor("x")] * 2)
    ab = path_graph("ab", "x")
    assert path_lambda(ab, Path(("1", "2"))) == Multiset([vcolor("a"), vcolor("b"), ecolor("x")])


def test_glue_paths():
    g = glued()
    assert glue_paths(g, Path(("1", "3")), Path(("3", "5"))) == Path(("1", "3", "5"))
    assert glue_paths(g, Path(("1", "2")), Path(("2", "3"))) is None
    chain = path_graph("aaaa", "xxx")
    # sharing the middle edge
    assert glue_paths(chain, Path(("1", "2", "3")), Path(("2", "3", "4"))) == Path(("1", "2", "3", "4"))


def test_clique_index_covers_edges(graphs):
    g = graphs["layered"]
    idx = clique_index(g)
    assert set(idx) == {frozenset(e) for e in g.edges}
