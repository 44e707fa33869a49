"""Acceptance criteria, one function each.

Run under pytest (a PASS/FAIL line per criterion appears in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import itertools
import sys
import time
from collections import defaultdict
from itertools import combinations_with_replacement

import networkx as nx
import numpy as np
import pytest

from gaussbinom import corpus
from gaussbinom.blocks import find_block_violation, is_block_graph, oriented_path
from gaussbinom.cli import run
from gaussbinom.flows import lift, random_digraph, spectral_radius, talaska_minor
from gaussbinom.graphs import Multiset, ecolor, make_graph
from gaussbinom.ideal import (
    _color_totals,
    decide_binomial,
    linear_generators,
    psi_image,
    quadratic_generators,
    rewrite_paths,
)
from gaussbinom.oracle import (
    BLOCK_1,
    EDGE_CASE,
    VERTEX_CASE,
    edge_witness,
    jordan_closure,
    make_rng,
    model_dimension,
    vanish_report,
    witness_nonbinomial,
    witness_partners,
)
from gaussbinom.regularity import regularity_report
from gaussbinom.schemes import (
    is_jordan_scheme,
    j15,
    ordered_pair_signature,
    partition_of_graph,
    symmetrization_obstruction,
)
from gaussbinom.series import SigmaPolynomial, evaluate_sigma_poly
from gaussbinom.structure import lemma_checks

RESULTS: dict = {}


def record(number, title):
    def wrap(fn):
        def inner():
            t0 = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:  # a crash is a failure, reported as such
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            detail = f"{detail} [{time.perf_counter() - t0:.1f}s]"
            RESULTS[number] = (ok, title, detail)
            return ok, detail

        inner.number = number
        return inner

    return wrap


# -- 1 ---------------------------------------------------------------------


@record(1, "Shrikhande check")
def criterion_1():
    t0 = time.perf_counter()
    code, report = run(["check", "corpus/shrikhande.json", "--seed", "1"])
    elapsed = time.perf_counter() - t0
    r = report["result"]
    ok = (
        code == 0
        and r["triangle_regular"] is True
        and r["block_graph"] is True
        and r["binomial"] is True
        and r["rcop"] is False
        and elapsed < 10
    )
    return ok, f"tr={r['triangle_regular']} block={r['block_graph']} binomial={r['binomial']} rcop={r['rcop']} {elapsed:.2f}s"


# -- 2 ---------------------------------------------------------------------


def _signature(pairs):
    return Multiset((ecolor(a), ecolor(b)) for a, b in pairs)


@record(2, "J15 Jordan scheme and signatures")
def criterion_2():
    g = j15()
    jordan = is_jordan_scheme(partition_of_graph(g)) is not None
    first = _signature([(1, 1)] + [(2, 3)] * 4 + [(3, 4)] * 4 + [(4, 2)] * 4)
    second = _signature([(1, 1), (2, 3)] + [(2, 4)] * 3 + [(3, 2)] * 3 + [(3, 4), (4, 2)] + [(4, 3)] * 3)
    s12 = ordered_pair_signature(g, "1", "2")
    s45 = ordered_pair_signature(g, "4", "5")
    s54 = ordered_pair_signature(g, "5", "4")
    same_color = g.edge_color("1", "2") == g.edge_color("4", "5")
    # the two edges share a color yet no orientation matches
    certified = same_color and s12 == first and s45 == second and first not in (s45, s54)
    ok = jordan and certified and symmetrization_obstruction(g) is not None
    return ok, f"jordan={jordan} s12_match={s12 == first} s45_match={s45 == second} obstruction={certified}"


# -- 3 ---------------------------------------------------------------------


def _biconnected_cliques(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    for comp in nx.biconnected_components(h):
        k = len(comp)
        if h.subgraph(comp).number_of_edges() != k * (k - 1) // 2:
            return False
    return True


def _automorphism_orbits(h):
    vorb = {v: {v} for v in h}
    eorb = {frozenset(e): {frozenset(e)} for e in h.edges}
    for m in nx.algorithms.isomorphism.GraphMatcher(h, h).isomorphisms_iter():
        for v in h:
            vorb[v].add(m[v])
        for a, b in h.edges:
            eorb[frozenset((a, b))].add(frozenset((m[a], m[b])))
    vlab = {v: min(str(x) for x in o) for v, o in vorb.items()}
    elab = {e: min(str(sorted(x)) for x in o) for e, o in eorb.items()}
    return vlab, elab


def colored_family(per_graph=70, seed=2024):
    """Connected colored graphs on at most 6 vertices.

    Every connected shape from the graph atlas gets a monochrome coloring,
    its automorphism-orbit coloring when that needs at most three colors of
    each kind, and seeded random colorings with at most three colors each.
    """
    rng = np.random.default_rng(seed)
    for h in nx.graph_atlas_g()[1:]:
        n = h.number_of_nodes()
        if n > 6 or not nx.is_connected(h):
            continue
        vs = [str(v) for v in h.nodes]
        es = [(str(a), str(b)) for a, b in h.edges]
        yield make_graph({v: "a" for v in vs}, {e: "x" for e in es})
        vlab, elab = _automorphism_orbits(h)
        if len(set(vlab.values())) <= 3 and len(set(elab.values())) <= 3:
            yield make_graph(
                {str(v): "o" + vlab[v] for v in h.nodes},
                {(str(a), str(b)): "p" + elab[frozenset((a, b))] for a, b in h.edges},
            )
        for _ in range(per_graph):
            kv, ke = rng.integers(1, 4, size=2)
            yield make_graph(
                {v: "abc"[rng.integers(kv)] for v in vs},
                {e: "xyz"[rng.integers(ke)] for e in es},
            )


@record(3, "decision vs structure cross-check")
def criterion_3():
    count = binomial = mismatches = 0
    for g in colored_family():
        count += 1
        block = is_block_graph(g)
        expected = block and regularity_report(g).triangle_regular
        got = decide_binomial(g).binomial
        binomial += got
        if got != expected:
            mismatches += 1
        if (find_block_violation(g) is None) != _biconnected_cliques(g) or block != _biconnected_cliques(g):
            mismatches += 1
    return count >= 10_000 and mismatches == 0, f"{count} graphs, {binomial} binomial, {mismatches} mismatches"


# -- 4 ---------------------------------------------------------------------


@record(4, "generator soundness")
def criterion_4():
    t0 = time.perf_counter()
    total = bad = 0
    for name in corpus.BINOMIAL:
        g = corpus.load(name)
        gens = linear_generators(g) + quadratic_generators(g)
        polys = [SigmaPolynomial.from_binomial(b) for b in gens]
        total += len(gens)
        bad += sum(psi_image(g, b.lhs) != psi_image(g, b.rhs) for b in gens)
        reps = vanish_report(g, polys, trials=20, rational=True, seed=4)
        bad += sum(not (r.vanishes and all(x == 0 for x in r.residuals)) for r in reps)
        bad += sum(not evaluate_sigma_poly(g, p, 6).is_zero() for p in polys)
    elapsed = time.perf_counter() - t0
    return bad == 0 and elapsed < 60, f"{total} generators, {bad} failures, {elapsed:.1f}s"


# -- 5 ---------------------------------------------------------------------


def rewriting_groups(g, max_size=3):
    """Multisets of at most max_size geodesics, grouped by color totals."""
    vs = g.vertices
    paths = [oriented_path(g, vs[i], vs[j]) for i in range(len(vs)) for j in range(i, len(vs))]
    for k in range(1, max_size + 1):
        groups = defaultdict(list)
        for combo in combinations_with_replacement(paths, k):
            groups[_color_totals(g, combo)].append(list(combo))
        yield from groups.values()


def rewriting_pairs(g, max_size=3):
    for grp in rewriting_groups(g, max_size):
        yield from itertools.product(grp, repeat=2)


@record(5, "exhaustive rewriting")
def criterion_5():
    total = fails = searched = 0
    parts = []
    for name in corpus.BINOMIAL:
        g = corpus.load(name)
        if len(g) > 8:
            continue
        n = 0
        for A, B in rewriting_pairs(g):
            n += 1
            try:
                trace = rewrite_paths(g, A, B)  # replays and validates every move
            except Exception:
                fails += 1
                continue
            searched += trace.strategy == "search"
        total += n
        parts.append(f"{name}={n}")
    return fails == 0, f"{total} pairs, {fails} failures, {searched} by search; " + " ".join(parts)


# -- 6 ---------------------------------------------------------------------


@record(6, "non-binomial witnesses")
def criterion_6():
    out = []
    ok = True
    cases = [
        ("c4", witness_nonbinomial, BLOCK_1),
        ("c5", witness_nonbinomial, None),
        ("path-irregular", witness_nonbinomial, VERTEX_CASE),
        ("k4-irregular", lambda g: edge_witness(g, ("1", "2"), ("3", "4")), EDGE_CASE),
        ("k4-irregular", witness_nonbinomial, None),
    ]
    for name, build, case in cases:
        g = corpus.load(name)
        w = build(g)
        rep = vanish_report(g, [w.polynomial], trials=5, rational=True, seed=6)[0]
        vanish = rep.vanishes and all(x == 0 for x in rep.residuals)
        E = min(w.distance + 1, 3)
        partners = witness_partners(g, w, E)
        good = vanish and not partners and (case is None or w.case == case)
        ok &= good
        out.append(f"{name}:{w.case}:{'ok' if good else 'bad'}")
    return ok, " ".join(out)


# -- 7 ---------------------------------------------------------------------


def _close(a, b):
    return abs(a - b) <= 1e-10 * max(1.0, abs(b))


@record(7, "Talaska identity")
def criterion_7():
    t0 = time.perf_counter()
    rng = make_rng(7)
    bad = checked = 0
    for _ in range(100):
        n = int(rng.integers(1, 7))
        dg = random_digraph(rng, n, density=float(rng.uniform(0.3, 0.8)), radius=0.5)
        assert spectral_radius(dg.matrix()) <= 0.5 + 1e-12
        k = int(rng.integers(1, n + 1))
        A = sorted(rng.choice(n, k, replace=False).tolist())
        B = sorted(rng.choice(n, k, replace=False).tolist())
        flow, minor = talaska_minor(dg, A, B)
        checked += 1
        bad += not _close(flow, minor)
    for name in corpus.BINOMIAL + corpus.NON_BINOMIAL:
        g = corpus.load(name)
        r = make_rng(7, len(g))
        maxdeg = max(g.degree(v) for v in g.vertices)
        y = {
            c: float(r.uniform(-0.4, 0.4)) / (maxdeg + 1) if c.namespace == "edge" else float(r.uniform(-0.3, 0.3))
            for c in g.colors
        }
        dg = lift(g, y)
        n = len(g)
        for k in range(1, min(2, n) + 1):
            flow, minor = talaska_minor(dg, list(range(k)), list(range(n - k, n)))
            checked += 1
            bad += not _close(flow, minor)
    elapsed = time.perf_counter() - t0
    return bad == 0 and elapsed < 30, f"{checked} minors, {bad} mismatches, {elapsed:.1f}s"


# -- 8 ---------------------------------------------------------------------


COMPLETE_TR = ["shrikhande", "j15", "k3-mono", "k3-distinct", "k4-matchings"]


@record(8, "Jordan closure")
def criterion_8():
    got = {name: jordan_closure(corpus.load(name)) for name in COMPLETE_TR}
    irregular = jordan_closure(corpus.load("k4-irregular"))
    return all(got.values()) and not irregular, f"{sum(got.values())}/{len(got)} closed, irregular K4 closed={irregular}"


# -- 9 ---------------------------------------------------------------------


@record(9, "model dimension")
def criterion_9():
    wrong = []
    for name in corpus.names():
        g = corpus.load(name)
        if model_dimension(g, seed=9) != len(g.colors):
            wrong.append(name)
    shrikhande = model_dimension(corpus.load("shrikhande"), seed=9)
    return not wrong and shrikhande == 3, f"{len(corpus.names())} graphs, wrong={wrong}, shrikhande={shrikhande}"


# -- 10 --------------------------------------------------------------------


@record(10, "structural lemma suite")
def criterion_10():
    failed = []
    checked = 0
    for name in corpus.names():
        g = corpus.load(name)
        if not decide_binomial(g).binomial:
            continue
        checked += 1
        res = lemma_checks(g)
        failed += [f"{name}.{k}" for k, v in res.items() if not v]
    return checked > 0 and not failed, f"{checked} graphs, failed={failed}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"criterion_{c.number}")
def test_acceptance(criterion):
    ok, detail = criterion()
    assert ok, detail


def summary_line(n):
    ok, title, detail = RESULTS[n]
    return f"{'PASS' if ok else 'FAIL'} {n:>2} {title}: {detail}"


def summary_lines():
    return [summary_line(n) for n in sorted(RESULTS)]


if __name__ == "__main__":
    for c in CRITERIA:
        c()
        print(summary_line(c.number), flush=True)
    sys.exit(0 if all(ok for ok, _, _ in RESULTS.values()) else 1)
