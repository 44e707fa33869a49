import numpy as np
import pytest

from gaussbinom.corpus import BINOMIAL, NON_BINOMIAL
from gaussbinom.flows import (
    DivergentWeightsError,
    WeightedDigraph,
    enumerate_flows,
    flow_ratio,
    lift,
    path_matrix_minor,
    random_digraph,
    spectral_radius,
    talaska_minor,
)
from gaussbinom.oracle import make_rng


def close(a, b, rel=1e-10):
    return abs(a - b) <= rel * max(1.0, abs(b))


def test_single_vertex():
    dg = WeightedDigraph(1, {})
    assert talaska_minor(dg, [0], [0]) == (1.0, 1.0)


def test_two_cycle():
    s, t = 0.3, -0.7
    dg = WeightedDigraph(2, {(0, 1): s, (1, 0): t})
    flow, minor = talaska_minor(dg, [0], [1])
    assert close(flow, s / (1 - s * t))
    assert close(minor, s / (1 - s * t))


def test_errors():
    dg = WeightedDigraph(2, {(0, 1): 1.0, (1, 0): 1.5})
    with pytest.raises(DivergentWeightsError):
        talaska_minor(dg, [0], [1])
    with pytest.raises(ValueError):
        talaska_minor(WeightedDigraph(2, {}), [0, 1], [1])


def test_flow_signs():
    dg = WeightedDigraph(3, {(0, 1): 0.2, (1, 2): 0.3, (2, 0): 0.4, (0, 2): 0.1})
    flows = list(enumerate_flows(dg, [0, 1], [1, 2]))
    assert flows
    for f in flows:
        assert f.sign in (1, -1)
        used = [v for p in f.paths for v in p] + [v for c in f.cycles for v in c]
        assert len(used) == len(set(used))


@pytest.mark.parametrize("method", ["enumerate", "subset"])
def test_random_digraphs(method):
    for k in range(40):
        rng = make_rng(99, k)
        n = int(rng.integers(1, 7))
        dg = random_digraph(rng, n, density=0.6, radius=0.5)
        assert spectral_radius(dg.matrix()) <= 0.5 + 1e-12
        size = int(rng.integers(1, n + 1))
        A = sorted(rng.choice(n, size, replace=False).tolist())
        B = sorted(rng.choice(n, size, replace=False).tolist())
        flow = flow_ratio(dg, A, B, method=method)
        assert close(flow, path_matrix_minor(dg, A, B)), (k, A, B)


def test_methods_agree_beyond_enumeration_limit():
    rng = make_rng(5, 0)
    dg = random_digraph(rng, 10, density=0.35, radius=0.6)
    A, B = [0, 3, 7], [2, 3, 9]
    sub = flow_ratio(dg, A, B, method="subset")
    assert close(sub, path_matrix_minor(dg, A, B))


def test_corpus_lifts(graphs):
    for name in BINOMIAL + NON_BINOMIAL:
        g = graphs[name]
        rng = make_rng(3, len(g))
        maxdeg = max(g.degree(v) for v in g.vertices)
        y = {c: float(rng.uniform(-0.4, 0.4)) / (maxdeg + 1) if c.namespace == "edge" else float(rng.uniform(-0.3, 0.3)) for c in g.colors}
        dg = lift(g, y)
        n = len(g)
        k = min(2, n)
        flow, minor = talaska_minor(dg, list(range(k)), list(range(n - k, n)))
        assert close(flow, minor), name
