"""Named example graphs and random block-graph generators.

The named graphs are shipped as JSON under ``corpus/`` and can be
regenerated with ``write_corpus``.  ``layered`` is a reconstruction: a
four-level clique tree with seven vertex colors, built to exhibit the
level structure of a triangle-regular block graph.  It is not taken from
any published figure.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path as FsPath
from typing import Callable, Optional

import numpy as np

from .graphs import ColoredGraph, GraphError, graph_from_dict, make_graph, serialize_graph
from .schemes import j15, shrikhande_colored


def _path(colors: str, edge_colors: str) -> ColoredGraph:
    vs = {str(i + 1): c for i, c in enumerate(colors)}
    es = {(str(i + 1), str(i + 2)): c for i, c in enumerate(edge_colors)}
    return make_graph(vs, es)


def _cycle(n: int) -> ColoredGraph:
    vs = {str(i): "a" for i in range(1, n + 1)}
    es = {(str(i), str(i % n + 1)): "x" for i in range(1, n + 1)}
    return make_graph(vs, es)


def aba_path() -> ColoredGraph:
    return _path("aba", "xx")


def glued_triangles() -> ColoredGraph:
    vs = {"1": "a", "2": "a", "3": "b", "4": "a", "5": "a"}
    es = {("1", "2"): "y", ("1", "3"): "x", ("2", "3"): "x", ("3", "4"): "x", ("3", "5"): "x", ("4", "5"): "y"}
    return make_graph(vs, es)


def star() -> ColoredGraph:
    return make_graph({"1": "c", "2": "l", "3": "l", "4": "l"}, {("1", str(i)): "x" for i in (2, 3, 4)})


def spider() -> ColoredGraph:
    vs = {"1": "c"}
    es = {}
    for leg in range(3):
        m, leaf = str(2 + 2 * leg), str(3 + 2 * leg)
        vs[m], vs[leaf] = "m", "l"
        es[("1", m)] = "x"
        es[(m, leaf)] = "y"
    return make_graph(vs, es)


def triangle_fan() -> ColoredGraph:
    """A triangle hanging off each end of an edge."""
    vs = {"1": "r", "2": "r", "3": "s", "4": "s", "5": "s", "6": "s"}
    es = {("1", "2"): "e", ("1", "3"): "f", ("1", "4"): "f", ("3", "4"): "g", ("2", "5"): "f", ("2", "6"): "f", ("5", "6"): "g"}
    return make_graph(vs, es)


def layered() -> ColoredGraph:
    """Reconstructed multi-level example with vertex colors 1..7."""
    vs: dict = {}
    es: dict = {}
    vs["r1"] = vs["r2"] = "1"
    es[("r1", "r2")] = "A"
    for i in (1, 2):
        r, p, q, s, w = f"r{i}", f"p{i}", f"q{i}", f"s{i}", f"w{i}"
        vs[p], vs[q], vs[s], vs[w] = "2", "3", "4", "5"
        es[(r, p)], es[(r, q)], es[(p, q)] = "B", "C", "D"
        es[(p, s)] = "E"
        es[(q, w)] = "F"
        vs[f"y{i}"] = "6"
        es[(s, f"y{i}")] = "G"
        for k in (1, 2):
            z = f"z{i}{k}"
            vs[z] = "7"
            es[(w, z)] = "H"
    return make_graph(vs, es)


def k3_mono() -> ColoredGraph:
    return make_graph({"1": "a", "2": "a", "3": "a"}, {("1", "2"): "x", ("1", "3"): "x", ("2", "3"): "x"})


def k3_distinct() -> ColoredGraph:
    return make_graph({"1": "a", "2": "b", "3": "c"}, {("1", "2"): "x", ("1", "3"): "y", ("2", "3"): "z"})


def k4_matchings() -> ColoredGraph:
    vs = {str(i): "a" for i in range(1, 5)}
    es = {("1", "2"): "x", ("3", "4"): "x", ("1", "3"): "y", ("2", "4"): "y", ("1", "4"): "z", ("2", "3"): "z"}
    return make_graph(vs, es)


def path_irregular() -> ColoredGraph:
    return _path("aba", "xy")


def k4_irregular() -> ColoredGraph:
    """Edges 12 and 34 share a color but see different colored triangles."""
    vs = {str(i): "a" for i in range(1, 5)}
    es = {("1", "2"): "x", ("3", "4"): "x", ("1", "3"): "y", ("1", "4"): "y", ("2", "3"): "z", ("2", "4"): "z"}
    return make_graph(vs, es)


def diamond() -> ColoredGraph:
    vs = {str(i): "a" for i in range(1, 5)}
    es = {("1", "2"): "x", ("2", "3"): "x", ("3", "4"): "x", ("4", "1"): "x", ("2", "4"): "x"}
    return make_graph(vs, es)


def edge_irregular_path() -> ColoredGraph:
    """Vertex-regular, but the two x edges join different color pairs."""
    return _path("abc", "xx")


BUILDERS: dict[str, Callable[[], ColoredGraph]] = {
    "shrikhande": shrikhande_colored,
    "j15": j15,
    "aba-path": aba_path,
    "glued-triangles": glued_triangles,
    "star": star,
    "chain4": lambda: _path("abba", "xyx"),
    "path5": lambda: _path("abcba", "xyyx"),
    "spider": spider,
    "triangle-fan": triangle_fan,
    "layered": layered,
    "k3-mono": k3_mono,
    "k3-distinct": k3_distinct,
    "k4-matchings": k4_matchings,
    "c4": lambda: _cycle(4),
    "c5": lambda: _cycle(5),
    "diamond": diamond,
    "path-irregular": path_irregular,
    "edge-irregular-path": edge_irregular_path,
    "k4-irregular": k4_irregular,
}

BINOMIAL = [
    "shrikhande", "j15", "aba-path", "glued-triangles", "star", "chain4", "path5",
    "spider", "triangle-fan", "layered", "k3-mono", "k3-distinct", "k4-matchings",
]
NON_BINOMIAL = ["c4", "c5", "diamond", "path-irregular", "edge-irregular-path", "k4-irregular"]


def names() -> list[str]:
    return list(BUILDERS)


def load(name: str) -> ColoredGraph:
    """Load a bundled graph by name (with or without the .json suffix)."""
    stem = name[:-5] if name.endswith(".json") else name
    if stem not in BUILDERS:
        raise GraphError(f"no bundled graph named {name!r}")
    text = resources.files(__package__).joinpath("corpus").joinpath(stem + ".json").read_text()
    return graph_from_dict(json.loads(text))


def resolve(source: str) -> Optional[ColoredGraph]:
    """A bundled graph for 'corpus/<name>.json' style references, else None."""
    p = FsPath(source)
    if p.exists():
        return None
    if p.parent.name == "corpus" and p.stem in BUILDERS:
        return load(p.stem)
    return None


def write_corpus(directory) -> list[str]:
    d = FsPath(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = []
    for name, build in BUILDERS.items():
        (d / f"{name}.json").write_text(serialize_graph(build()) + "\n")
        out.append(name)
    return out


# -- random generators --------------------------------------------------------


def random_block_graph(rng: np.random.Generator, n: int, vcolors: int = 2, ecolors: int = 2, max_clique: int = 4) -> ColoredGraph:
    """A random connected block graph on n vertices with random colors."""
    verts = [str(i) for i in range(1, n + 1)]
    edges: dict = {}
    placed = [verts[0]]
    i = 1
    while i < n:
        anchor = placed[int(rng.integers(len(placed)))]
        size = int(rng.integers(1, max_clique))  # new vertices in this clique
        new = verts[i:i + size]
        clique = [anchor] + new
        for a in range(len(clique)):
            for b in range(a + 1, len(clique)):
                edges[(clique[a], clique[b])] = "xyzwuv"[int(rng.integers(ecolors))]
        placed.extend(new)
        i += len(new)
    vs = {v: "abcdef"[int(rng.integers(vcolors))] for v in verts}
    return make_graph(vs, edges)


def random_tr_block_graph(rng: np.random.Generator, levels: int = 3, max_vertices: int = 30) -> ColoredGraph:
    """A triangle-regular block graph built level by level.

    Every vertex of a color receives the same pendant cliques, each clique
    monochromatic apart from its attachment vertex, with fresh colors per
    level, so same-colored items see identical neighbourhoods.
    """
    counter = iter(range(1, 10**6))
    size0 = int(rng.integers(1, 4))
    vs = {str(next(counter)): "c0" for _ in range(size0)}
    es = {}
    root = list(vs)
    for a in range(size0):
        for b in range(a + 1, size0):
            es[(root[a], root[b])] = "e0"
    frontier = {"c0": root}
    for level in range(1, levels + 1):
        nxt: dict = {}
        for color, members in sorted(frontier.items()):
            copies = int(rng.integers(0, 3))
            for k in range(copies):
                size = int(rng.integers(1, 3))
                newc = f"c{level}_{color}_{k}"
                inner, spoke = f"i{level}_{color}_{k}", f"s{level}_{color}_{k}"
                if len(vs) + len(members) * size > max_vertices:
                    break
                for m in members:
                    new = [str(next(counter)) for _ in range(size)]
                    for v in new:
                        vs[v] = newc
                        es[(m, v)] = spoke
                    for a in range(size):
                        for b in range(a + 1, size):
                            es[(new[a], new[b])] = inner
                    nxt.setdefault(newc, []).extend(new)
        frontier = nxt
        if not frontier:
            break
    return make_graph(vs, es)
