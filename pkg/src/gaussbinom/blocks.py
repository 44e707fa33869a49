"""Block-graph recognition, geodesics and path color multisets."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .graphs import (
    ColoredGraph,
    DisconnectedGraphError,
    GraphError,
    Multiset,
    Path,
    maximal_cliques,
)

EQUAL_LENGTH = "equal_length"
OFF_BY_ONE = "off_by_one"


class NotBlockGraphError(GraphError):
    pass


@dataclass(frozen=True)
class BlockViolation:
    kind: str
    u: str
    v: str
    path_p: Path
    path_q: Path


def _require_connected(g: ColoredGraph):
    if not g.is_connected():
        raise DisconnectedGraphError("graph is not connected")


def biconnected_components(g: ColoredGraph) -> list[frozenset]:
    """Vertex sets of the biconnected components (lowpoint DFS).

    Isolated vertices form singleton components.
    """
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    comps: list[frozenset] = []
    stack: list[tuple[str, str]] = []
    counter = 0

    for root in g.vertices:
        if root in disc:
            continue
        if not g.neighbors(root):
            comps.append(frozenset([root]))
            disc[root] = low[root] = counter
            counter += 1
            continue
        disc[root] = low[root] = counter
        counter += 1
        # iterative DFS: frames of (vertex, parent, neighbor iterator)
        frames = [(root, None, iter(g.sort(g.neighbors(root))))]
        while frames:
            v, parent, it = frames[-1]
            advanced = False
            for w in it:
                if w not in disc:
                    stack.append((v, w))
                    disc[w] = low[w] = counter
                    counter += 1
                    frames.append((w, v, iter(g.sort(g.neighbors(w)))))
                    advanced = True
                    break
                if w != parent and disc[w] < disc[v]:
                    stack.append((v, w))
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            frames.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[v])
                if low[v] >= disc[parent]:
                    comp = set()
                    while True:
                        a, b = stack.pop()
                        comp.update((a, b))
                        if (a, b) == (parent, v):
                            break
                    comps.append(frozenset(comp))
    return comps


def is_block_graph(g: ColoredGraph) -> bool:
    """Connected graph whose biconnected components all induce cliques."""
    _require_connected(g)
    for comp in biconnected_components(g):
        k = len(comp)
        m = sum(1 for u, v in combinations(comp, 2) if g.has_edge(u, v))
        if m != k * (k - 1) // 2:
            return False
    return True


def _geodesics(g: ColoredGraph, u: str, v: str) -> list[tuple]:
    """All shortest u-v vertex sequences, in lexicographic vertex order."""
    dist_v = g.distances[v]
    out = []

    def walk(seq):
        x = seq[-1]
        if x == v:
            out.append(tuple(seq))
            return
        for y in g.sort(g.neighbors(x)):
            if dist_v.get(y, -1) == dist_v[x] - 1:
                walk(seq + [y])

    walk([u])
    return out


def _induced_paths(g: ColoredGraph, u: str, v: str, length: int) -> list[tuple]:
    """Induced simple u-v paths with exactly ``length`` edges."""
    out = []
    dist_v = g.distances[v]

    def walk(seq, used):
        x = seq[-1]
        if len(seq) - 1 == length:
            if x == v:
                out.append(tuple(seq))
            return
        remaining = length - (len(seq) - 1)
        for y in g.sort(g.neighbors(x)):
            if y in used or dist_v.get(y, remaining + 1) > remaining - 1:
                continue
            if y == v and remaining != 1:
                continue
            # induced: y may only touch its predecessor among used vertices
            if any(g.has_edge(y, z) for z in seq[:-1]):
                continue
            walk(seq + [y], used | {y})

    walk([u], {u})
    return out


def _disjoint_inside(p: tuple, q: tuple) -> bool:
    return not (set(p[1:-1]) & set(q[1:-1]))


def find_block_violation(g: ColoredGraph) -> Optional[BlockViolation]:
    """A witness that g is not a block graph, or None.

    Equal-length witnesses take precedence over off-by-one ones; within a
    kind the pair (u, v) minimises d(u, v), ties broken lexicographically
    in vertex order.
    """
    _require_connected(g)
    pairs = [(u, v) for u, v in combinations(g.vertices, 2)]
    pairs.sort(key=lambda p: (g.distance(*p), g.key(p[0]), g.key(p[1])))
    for u, v in pairs:
        d = g.distance(u, v)
        if d < 2:
            continue
        geos = _geodesics(g, u, v)
        for p, q in combinations(geos, 2):
            if _disjoint_inside(p, q):
                return BlockViolation(EQUAL_LENGTH, u, v, Path(p), Path(q))
    for u, v in pairs:
        d = g.distance(u, v)
        if d < 2:
            continue
        geos = _geodesics(g, u, v)
        longer = _induced_paths(g, u, v, d + 1)
        for p in geos:
            for q in longer:
                if _disjoint_inside(p, q):
                    return BlockViolation(OFF_BY_ONE, u, v, Path(p), Path(q))
    return None


def _block_flag(g: ColoredGraph) -> bool:
    flag = g.__dict__.get("_is_block")
    if flag is None:
        flag = is_block_graph(g)
        g.__dict__["_is_block"] = flag
    return flag


def shortest_path(g: ColoredGraph, u: str, v: str) -> Path:
    """The unique geodesic between u and v in a connected block graph."""
    if u not in g.index or v not in g.index:
        raise GraphError(f"unknown vertex in ({u!r}, {v!r})")
    if not _block_flag(g):
        raise NotBlockGraphError("shortest paths are unique only in block graphs")
    cache = g.__dict__.setdefault("_geodesic_cache", {})
    hit = cache.get((u, v))
    if hit is not None:
        return hit
    dist_v = g.distances[v]
    seq = [u]
    while seq[-1] != v:
        x = seq[-1]
        nxt = [y for y in g.neighbors(x) if dist_v[y] == dist_v[x] - 1]
        seq.append(min(nxt, key=g.key))
    p = Path(seq)
    cache[(u, v)] = p
    return p


def oriented_path(g: ColoredGraph, u: str, v: str) -> tuple:
    """Vertex sequence of u <-> v starting at u."""
    return _orient(shortest_path(g, u, v), u)


def _orient(p: Path, start) -> tuple:
    return p.vertices if p.vertices[0] == start else p.vertices[::-1]


def path_lambda(g: ColoredGraph, p: Path) -> Multiset:
    """Multiset of vertex and edge colors along p."""
    vs = p.vertices
    for i in range(len(vs) - 1):
        if vs[i] not in g.index or vs[i + 1] not in g.index or not g.has_edge(vs[i], vs[i + 1]):
            raise GraphError(f"{p!r} is not a path of the graph")
    if vs[-1] not in g.index:
        raise GraphError(f"{p!r} is not a path of the graph")
    cols = [g.color(v) for v in vs]
    cols += [g.edge_color(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]
    return Multiset(cols)


def edge_multiset(p: Path) -> Multiset:
    return Multiset(tuple(sorted(e)) for e in p.edges)


def is_shortest(g: ColoredGraph, seq) -> bool:
    seq = tuple(seq)
    return len(set(seq)) == len(seq) and g.distances[seq[0]].get(seq[-1]) == len(seq) - 1 and all(
        g.has_edge(seq[i], seq[i + 1]) for i in range(len(seq) - 1)
    )


def clique_index(g: ColoredGraph) -> dict[frozenset, frozenset]:
    """Map each edge to the maximal clique containing it (block graphs)."""
    cached = g.__dict__.get("_clique_of_edge")
    if cached is None:
        cached = {}
        for c in maximal_cliques(g):
            for a, b in combinations(c, 2):
                cached[frozenset((a, b))] = c
        g.__dict__["_clique_of_edge"] = cached
    return cached


def glue_paths(g: ColoredGraph, p: Path, q: Path) -> Optional[Path]:
    """Concatenate two geodesics at a shared endpoint if the result is geodesic.

    The result exists when the edges of p and q at the shared endpoint lie in
    different maximal cliques.
    """
    if p.length < 1 or q.length < 1:
        raise GraphError("glue_paths needs paths of length >= 1")
    # paths overlapping in one end edge glue to a geodesic unconditionally
    for ps in (p.vertices, p.vertices[::-1]):
        for qs in (q.vertices, q.vertices[::-1]):
            if ps[-2:] == qs[:2] and not set(ps[:-2]) & set(qs):
                return Path(ps + qs[2:])
    shared = set(p.ends) & set(q.ends)
    if not shared:
        raise GraphError("paths do not share an endpoint")
    v = min(shared, key=g.key)
    ps = _orient(p, v)[::-1]  # ends at v
    qs = _orient(q, v)  # starts at v
    e = frozenset((ps[-2], v))
    f = frozenset((v, qs[1]))
    cliques = clique_index(g)
    if cliques[e] == cliques[f]:
        return None
    return Path(ps + qs[1:])
