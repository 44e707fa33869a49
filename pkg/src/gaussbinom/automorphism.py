"""Backtracking search for structure-preserving vertex permutations.

One engine serves two uses: automorphisms of a colored graph (vertex and
edge colors preserved) and quasi-automorphisms (automorphisms of the
uncolored graph preserving vertex colors, plus optional edge-color
constraints on selected edges).
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator, Mapping, Optional

from .graphs import ColoredGraph, GraphError


def _refine(n: int, S: list[list]) -> list[int]:
    """Stable color refinement of the relation matrix S (1-WL)."""
    cls = [S[i][i] for i in range(n)]
    while True:
        sigs = [
            (cls[i], tuple(sorted(Counter((S[i][j], cls[j]) for j in range(n) if j != i).items(), key=repr)))
            for i in range(n)
        ]
        ids: dict = {}
        new = [ids.setdefault(s, len(ids)) for s in sigs]
        if len(set(new)) == len(set(cls)):
            return new
        cls = new


class MapSearch:
    """Find permutations p of range(n) with S[p i][p j] == S[i][j].

    ``T`` and ``extra`` add the constraint T[p i][p j] == T[i][j] for each
    index pair in ``extra``.
    """

    def __init__(self, S: list[list], T: Optional[list[list]] = None, extra: Iterable = ()):
        self.n = n = len(S)
        self.S = S
        self.T = T
        self.extra: dict[int, set[int]] = {}
        for i, j in extra:
            self.extra.setdefault(i, set()).add(j)
            self.extra.setdefault(j, set()).add(i)
        self.by_val = []
        for j in range(n):
            table: dict = {}
            for y in range(n):
                if y != j:
                    table.setdefault(S[j][y], set()).add(y)
            self.by_val.append(table)
        if T is not None:
            self.by_t = []
            for j in range(n):
                table = {}
                for y in range(n):
                    if y != j:
                        table.setdefault(T[j][y], set()).add(y)
                self.by_t.append(table)
        cls = _refine(n, S)
        self.initial = [frozenset(j for j in range(n) if cls[j] == cls[i]) for i in range(n)]

    def _assign(self, domains, assigned, i, j):
        S = self.S
        doms = list(domains)
        doms[i] = frozenset((j,))
        row = self.by_val[j]
        ext = self.extra.get(i, ())
        for k in range(self.n):
            if k in assigned or k == i:
                continue
            allowed = row.get(S[i][k], frozenset())
            d = (doms[k] & allowed) - {j}
            if k in ext:
                d &= self.by_t[j].get(self.T[i][k], frozenset())
            if not d:
                return None
            doms[k] = d
        return doms

    def search(self, fixed: Mapping[int, int] | None = None) -> Iterator[list[int]]:
        doms = list(self.initial)
        assigned: dict[int, int] = {}
        for i, j in (fixed or {}).items():
            if j not in doms[i]:
                return
            doms = self._assign(doms, assigned, i, j)
            if doms is None:
                return
            assigned[i] = j
        # the fixed part must itself be consistent
        for i, j in assigned.items():
            for k, l in assigned.items():
                if i < k and self.S[j][l] != self.S[i][k]:
                    return
                if k in self.extra.get(i, ()) and self.T[j][l] != self.T[i][k]:
                    return
        yield from self._extend(doms, assigned)

    def _extend(self, doms, assigned):
        if len(assigned) == self.n:
            yield [assigned[i] for i in range(self.n)]
            return
        i = min((k for k in range(self.n) if k not in assigned), key=lambda k: (len(doms[k]), k))
        for j in sorted(doms[i]):
            nd = self._assign(doms, assigned, i, j)
            if nd is None:
                continue
            assigned[i] = j
            yield from self._extend(nd, assigned)
            del assigned[i]

    def find(self, fixed: Mapping[int, int] | None = None) -> Optional[list[int]]:
        return next(self.search(fixed), None)


def colored_matrix(g: ColoredGraph) -> list[list]:
    n = len(g)
    vs = g.vertices
    S = [[None] * n for _ in range(n)]
    for i, v in enumerate(vs):
        S[i][i] = g.color(v)
    for u, v in g.edges:
        i, j = g.index[u], g.index[v]
        S[i][j] = S[j][i] = g.edge_color(u, v)
    return S


def uncolored_matrix(g: ColoredGraph) -> list[list]:
    n = len(g)
    S = [[False] * n for _ in range(n)]
    for i, v in enumerate(g.vertices):
        S[i][i] = g.color(v)
    for u, v in g.edges:
        i, j = g.index[u], g.index[v]
        S[i][j] = S[j][i] = True
    return S


def _searcher(g: ColoredGraph, key, build):
    cache = g.__dict__.setdefault("_map_search_cache", {})
    if key not in cache:
        cache[key] = build()
    return cache[key]


def find_automorphism(g: ColoredGraph, constraints: Mapping[str, str] | None = None) -> Optional[dict]:
    """A color-preserving automorphism extending ``constraints``."""
    search = _searcher(g, ("colored",), lambda: MapSearch(colored_matrix(g)))
    fixed = {g.index[a]: g.index[b] for a, b in (constraints or {}).items()}
    perm = search.find(fixed)
    if perm is None:
        return None
    return {g.vertices[i]: g.vertices[perm[i]] for i in range(len(g))}


def quasi_search(g: ColoredGraph, preserve_edges: Iterable = ()) -> MapSearch:
    pairs = tuple(sorted((g.index[a], g.index[b]) for a, b in (tuple(e) for e in preserve_edges)))
    return _searcher(
        g,
        ("quasi", pairs),
        lambda: MapSearch(uncolored_matrix(g), colored_matrix(g), pairs),
    )


def _closure(start, generators, act):
    orbit = {start}
    frontier = [start]
    while frontier:
        x = frontier.pop()
        for gen in generators:
            y = act(gen, x)
            if y not in orbit:
                orbit.add(y)
                frontier.append(y)
    return orbit


def transitivity(g: ColoredGraph) -> tuple[bool, bool, list[dict]]:
    """Whether the colored automorphism group is transitive on every vertex
    color class and on every edge color class.

    Returns (vertex_transitive, edge_transitive, generators found).  Orbits
    are grown from generators, so each search either enlarges a known
    orbit or proves a class splits.
    """
    gens: list[dict] = []
    act_v = lambda gen, v: gen[v]  # noqa: E731
    act_e = lambda gen, e: frozenset(gen[x] for x in e)  # noqa: E731

    classes: dict = {}
    for v in g.vertices:
        classes.setdefault(g.color(v), []).append(v)
    vertex_ok = True
    for members in classes.values():
        rep = members[0]
        orbit = _closure(rep, gens, act_v)
        for t in members:
            if t in orbit:
                continue
            aut = find_automorphism(g, {rep: t})
            if aut is None:
                vertex_ok = False
                break
            gens.append(aut)
            orbit = _closure(rep, gens, act_v)
        if not vertex_ok:
            break

    eclasses: dict = {}
    for u, v in g.edges:
        eclasses.setdefault(g.edge_color(u, v), []).append(frozenset((u, v)))
    edge_ok = True
    for members in eclasses.values():
        rep = members[0]
        a, b = g.sort(rep)
        orbit = _closure(rep, gens, act_e)
        for t in members:
            if t in orbit:
                continue
            c, d = g.sort(t)
            aut = find_automorphism(g, {a: c, b: d}) or find_automorphism(g, {a: d, b: c})
            if aut is None:
                edge_ok = False
                break
            gens.append(aut)
            orbit = _closure(rep, gens, act_e)
        if not edge_ok:
            break
    return vertex_ok, edge_ok, gens


def check_automorphism(g: ColoredGraph, perm: Mapping[str, str]) -> bool:
    if sorted(perm.values(), key=g.key) != list(g.vertices):
        raise GraphError("not a permutation of the vertex set")
    for v in g.vertices:
        if g.color(perm[v]) != g.color(v):
            return False
    for u, v in g.edges:
        if not g.has_edge(perm[u], perm[v]) or g.edge_color(perm[u], perm[v]) != g.edge_color(u, v):
            return False
    return len(g.edges) == len({frozenset((perm[u], perm[v])) for u, v in g.edges})
