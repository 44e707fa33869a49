import sys
import itertools

import pytest

from gaussbinom import corpus
from gaussbinom.graphs import make_graph


@pytest.fixture(scope="session")
def graphs():
    return {name: corpus.load(name) for name in corpus.names()}


def path_graph(vcolors, ecolors):
    vs = {str(i + 1): c for i, c in enumerate(vcolors)}
    es = {(str(i + 1), str(i + 2)): c for i, c in enumerate(ecolors)}
    return make_graph(vs, es)


def complete_graph(n, vcolor="a", ecolor="x"):
    vs = {str(i): vcolor for i in range(1, n + 1)}
    es = {(str(a), str(b)): ecolor for a, b in itertools.combinations(range(1, n + 1), 2)}
    return make_graph(vs, es)


def all_simple_paths(g, u, v, max_len):
    """Every simple path from u to v with at most max_len edges, by DFS."""
    out = []

    def go(seq):
        if seq[-1] == v:
            out.append(tuple(seq))
            return
        if len(seq) > max_len:
            return
        for w in sorted(g.neighbors(seq[-1])):
            if w not in seq:
                go(seq + [w])

    go([u])
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
