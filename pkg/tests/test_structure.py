import itertools

import numpy as np
import pytest

from gaussbinom.blocks import shortest_path
from gaussbinom.corpus import BINOMIAL, random_tr_block_graph
from gaussbinom.graphs import Multiset, Path, make_graph, maximal_cliques
from gaussbinom.structure import (
    StructureError,
    check_up_down,
    depth_function,
    extend_quasi_automorphism,
    find_quasi_automorphism,
    is_palindromic,
    is_quasi_automorphism,
    lemma_checks,
    paths_isomorphic,
    peel_cliques,
)

from conftest import complete_graph, path_graph


def star():
    return make_graph({"1": "c", "2": "l", "3": "l", "4": "l"}, {("1", str(i)): "x" for i in (2, 3, 4)})


def glued():
    vs = {"1": "a", "2": "a", "3": "b", "4": "a", "5": "a"}
    es = {("1", "2"): "y", ("1", "3"): "x", ("2", "3"): "x", ("3", "4"): "x", ("3", "5"): "x", ("4", "5"): "y"}
    return make_graph(vs, es)


@pytest.mark.parametrize(
    "g, n_cliques, residual",
    [(star(), 3, ["1"]), (glued(), 2, ["3"]), (path_graph("aba", "xx"), 2, ["2"])],
    ids=["star", "glued", "aba"],
)
def test_single_peel(g, n_cliques, residual):
    step, rest = peel_cliques(g)
    assert len(step.cliques) == n_cliques
    assert list(rest.vertices) == residual
    assert set(step.attach_vertex.values()) == set(residual)


def test_peel_rejects_irregular(graphs):
    with pytest.raises(StructureError):
        peel_cliques(graphs["path-irregular"])
    with pytest.raises(StructureError):
        peel_cliques(graphs["c4"])


def assert_peel_items(g, step):
    cliques = step.cliques
    sigs = set()
    for c in cliques:
        vs = sorted(c)
        sigs.add(
            (
                Multiset(g.color(v) for v in vs),
                Multiset(g.edge_color(a, b) for a, b in itertools.combinations(vs, 2)),
            )
        )
    assert len(sigs) == 1
    all_cliques = maximal_cliques(g)
    attach_colors = {g.color(v) for v in step.attach_vertex.values()}
    assert len(attach_colors) == 1
    for c in cliques:
        vc = step.attach_vertex[c]
        shared = [v for v in c if sum(v in d for d in all_cliques) >= 2]
        assert shared == [vc]
        others = [v for v in g.vertices if v not in step.attach_vertex.values()]
        assert all(g.color(v) not in attach_colors for v in others)
        # the spoke color depends only on the far vertex color
        spoke = {}
        for v in c:
            if v != vc:
                assert spoke.setdefault(g.color(v), g.edge_color(v, vc)) == g.edge_color(v, vc)


def test_peel_items_hold_throughout(graphs):
    for name in BINOMIAL:
        g = graphs[name]
        while len(maximal_cliques(g)) >= 2:
            step, rest = peel_cliques(g)
            assert_peel_items(g, step)
            g = rest


def test_depth_examples(graphs):
    d = depth_function(complete_graph(4))
    assert set(d.kappa.values()) == {1}
    d = depth_function(path_graph("aba", "xx"))
    assert d("2") == 1 and d("1") == d("3") == 2
    assert d(("1", "2")) == d(("2", "3")) == 2
    g = graphs["layered"]
    d = depth_function(g)
    top = max(d.kappa.values())
    assert top >= 4
    leaves = [v for v in g.vertices if g.degree(v) == 1]
    assert all(d(v) == top or g.color(v).label == "6" for v in leaves)
    assert {d(v) for v in g.vertices if g.color(v).label == "7"} == {top}


def test_up_down():
    g = path_graph("aba", "xx")
    d = depth_function(g)
    assert check_up_down(g, d, Path(("2",))) == 0
    assert check_up_down(g, d, Path(("1", "2"))) in (0, 1)
    assert check_up_down(g, d, Path(("2", "1"))) == 0
    assert [d(v) for v in ("1", "2", "3")] == [2, 1, 2]
    assert check_up_down(g, d, Path(("1", "2", "3"))) == 1


def test_palindromes():
    aba = path_graph("aba", "xx")
    assert is_palindromic(aba, Path(("1",)))
    assert is_palindromic(aba, Path(("1", "2", "3")))
    assert is_palindromic(path_graph("aa", "x"), Path(("1", "2")))
    assert not is_palindromic(path_graph("abc", "xy"), Path(("1", "2", "3")))


def test_quasi_automorphisms():
    g = path_graph("aba", "xx")
    assert find_quasi_automorphism(g) == {"1": "1", "2": "2", "3": "3"}
    assert find_quasi_automorphism(g, {"1": "3"}) == {"1": "3", "2": "2", "3": "1"}


def test_isomorphic_geodesics_are_transported(graphs):
    for name in BINOMIAL:
        g = graphs[name]
        if len(g) > 10:
            continue
        geos = [shortest_path(g, u, v) for u, v in itertools.combinations(g.vertices, 2)]
        for p, q in itertools.combinations(geos, 2):
            if not paths_isomorphic(g, p, q):
                continue
            found = False
            for qs in (q.vertices, q.vertices[::-1]):
                cons = dict(zip(p.vertices, qs))
                if any(g.color(a) != g.color(b) for a, b in cons.items()):
                    continue
                alpha = find_quasi_automorphism(g, cons, p.edges)
                if alpha is not None:
                    assert is_quasi_automorphism(g, alpha)
                    found = True
                    break
            assert found, (name, p, q)


def test_lemma_suite_on_corpus(graphs):
    for name in BINOMIAL:
        assert all(lemma_checks(graphs[name]).values()), name


def test_lemma_suite_on_random_tr_graphs():
    rng = np.random.default_rng(5)
    for _ in range(25):
        g = random_tr_block_graph(rng, levels=3, max_vertices=22)
        if len(g) < 2:
            continue
        assert all(lemma_checks(g).values())


def test_quasi_automorphisms_extend_over_layers(graphs):
    for name in ["layered", "spider", "triangle-fan", "glued-triangles", "star"]:
        g = graphs[name]
        step, rest = peel_cliques(g)
        for v in rest.vertices:
            for w in rest.vertices:
                if rest.color(v) != rest.color(w):
                    continue
                alpha = find_quasi_automorphism(rest, {v: w})
                if alpha is None:
                    continue
                full = extend_quasi_automorphism(g, step, alpha)
                assert is_quasi_automorphism(g, full), (name, v, w)
