"""Colored graphs, color multisets and paths.

Vertex ids are arbitrary strings; the order in which vertices are listed
is the canonical vertex order used for every deterministic tie-break in
the package.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

VERTEX = "vertex"
EDGE = "edge"


class GraphError(ValueError):
    """Raised for malformed graph documents or invalid graph data."""


class DisconnectedGraphError(GraphError):
    pass


@dataclass(frozen=True, order=True)
class Color:
    namespace: str
    label: str

    def __post_init__(self):
        if self.namespace not in (VERTEX, EDGE):
            raise GraphError(f"unknown color namespace {self.namespace!r}")

    def __str__(self):
        return self.label

    def __repr__(self):
        return f"{self.namespace[0]}:{self.label}"


def vcolor(label) -> Color:
    return Color(VERTEX, str(label))


def ecolor(label) -> Color:
    return Color(EDGE, str(label))


class Multiset:
    """Immutable multiset with exact multiplicities.

    Keys must be mutually orderable; iteration and ``items()`` are sorted.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, data: Iterable | Mapping = ()):
        counts = Counter(data) if not isinstance(data, Mapping) else Counter(dict(data))
        items = []
        for key, c in counts.items():
            if c < 0:
                raise ValueError("negative multiplicity")
            if c:
                items.append((key, c))
        items.sort()
        self._items = tuple(items)
        self._hash = hash(self._items)

    def items(self):
        return self._items

    def count(self, key) -> int:
        for k, c in self._items:
            if k == key:
                return c
        return 0

    def __getitem__(self, key) -> int:
        return self.count(key)

    def __contains__(self, key) -> bool:
        return self.count(key) > 0

    def __len__(self) -> int:
        return sum(c for _, c in self._items)

    def __iter__(self) -> Iterator:
        for k, c in self._items:
            for _ in range(c):
                yield k

    def keys(self):
        return [k for k, _ in self._items]

    def __add__(self, other: "Multiset") -> "Multiset":
        c = Counter(dict(self._items))
        c.update(dict(other._items))
        return Multiset(c)

    def __sub__(self, other: "Multiset") -> "Multiset":
        c = Counter(dict(self._items))
        for k, n in other._items:
            if c[k] < n:
                raise ValueError("multiset difference would be negative")
            c[k] -= n
        return Multiset(c)

    def __eq__(self, other):
        return isinstance(other, Multiset) and self._items == other._items

    def __lt__(self, other):
        return self._items < other._items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {c}" for k, c in self._items)
        return "{" + inner + "}"


class ColoredGraph:
    """Simple undirected graph with vertex and edge colors.

    Instances are treated as immutable; derived data is cached lazily.
    """

    def __init__(self, vertices, edges, vertex_color, edge_color):
        self.vertices: tuple[str, ...] = tuple(str(v) for v in vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        ecol: dict[frozenset, Color] = {}
        for e in edges:
            u, v = (str(x) for x in e)
            if u == v:
                raise GraphError(f"loop at vertex {u!r}")
            if u not in adj or v not in adj:
                raise GraphError(f"edge {{{u}, {v}}} uses an unknown vertex")
            key = frozenset((u, v))
            if key in ecol:
                raise GraphError(f"duplicate edge {{{u}, {v}}}")
            col = edge_color[key] if key in edge_color else edge_color.get((u, v), edge_color.get((v, u)))
            if col is None:
                raise GraphError(f"edge {{{u}, {v}}} has no color")
            if not isinstance(col, Color):
                col = ecolor(col)
            if col.namespace != EDGE:
                raise GraphError("edge colors must live in the edge namespace")
            ecol[key] = col
            adj[u].add(v)
            adj[v].add(u)
        vcol = {}
        for v in self.vertices:
            if v not in vertex_color:
                raise GraphError(f"vertex {v!r} has no color")
            col = vertex_color[v]
            if not isinstance(col, Color):
                col = vcolor(col)
            if col.namespace != VERTEX:
                raise GraphError("vertex colors must live in the vertex namespace")
            vcol[v] = col
        vlabels = {c.label for c in vcol.values()}
        elabels = {c.label for c in ecol.values()}
        clash = vlabels & elabels
        if clash:
            raise GraphError(f"color label(s) used for both vertices and edges: {sorted(clash)}")
        self._adj = {v: frozenset(n) for v, n in adj.items()}
        self._vcol = vcol
        self._ecol = ecol

    # -- basic access -------------------------------------------------

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"ColoredGraph(n={len(self.vertices)}, m={len(self._ecol)})"

    def __eq__(self, other):
        return (
            isinstance(other, ColoredGraph)
            and self.vertices == other.vertices
            and self._vcol == other._vcol
            and self._ecol == other._ecol
        )

    def __hash__(self):
        return hash((self.vertices, frozenset(self._ecol.items())))

    def neighbors(self, v: str) -> frozenset:
        return self._adj[v]

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._adj[u]

    def color(self, v: str) -> Color:
        return self._vcol[v]

    def edge_color(self, u: str, v: str) -> Color:
        return self._ecol[frozenset((u, v))]

    @property
    def vertex_colors(self) -> dict:
        return dict(self._vcol)

    @property
    def edge_colors(self) -> dict:
        return dict(self._ecol)

    def key(self, v: str) -> int:
        return self.index[v]

    def sort(self, vs: Iterable[str]) -> list[str]:
        return sorted(vs, key=self.index.__getitem__)

    @cached_property
    def edges(self) -> tuple[tuple[str, str], ...]:
        """Edges as ordered pairs (u, v) with u before v, sorted."""
        out = []
        for e in self._ecol:
            u, v = sorted(e, key=self.index.__getitem__)
            out.append((u, v))
        out.sort(key=lambda p: (self.index[p[0]], self.index[p[1]]))
        return tuple(out)

    @cached_property
    def colors(self) -> list[Color]:
        return sorted(set(self._vcol.values()) | set(self._ecol.values()))

    def is_complete(self) -> bool:
        n = len(self.vertices)
        return len(self._ecol) == n * (n - 1) // 2

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(self._bfs(self.vertices[0])) == len(self.vertices)

    def _bfs(self, s: str) -> dict[str, int]:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in self._adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    @cached_property
    def distances(self) -> dict[str, dict[str, int]]:
        """All-pairs BFS distances; unreachable pairs are absent."""
        return {v: self._bfs(v) for v in self.vertices}

    def distance(self, u: str, v: str) -> int:
        try:
            return self.distances[u][v]
        except KeyError:
            raise DisconnectedGraphError(f"{u!r} and {v!r} are not connected") from None

    def induced(self, vs: Iterable[str]) -> "ColoredGraph":
        keep = set(vs)
        verts = [v for v in self.vertices if v in keep]
        edges = [(u, v) for u, v in self.edges if u in keep and v in keep]
        return ColoredGraph(
            verts,
            edges,
            {v: self._vcol[v] for v in verts},
            {frozenset(e): self._ecol[frozenset(e)] for e in edges},
        )

    def recolored(self, vmap: Mapping | None = None, emap: Mapping | None = None) -> "ColoredGraph":
        """Copy with colors renamed by the given label maps."""
        vmap = vmap or {}
        emap = emap or {}
        vc = {v: vmap.get(c, c) for v, c in self._vcol.items()}
        ec = {e: emap.get(c, c) for e, c in self._ecol.items()}
        return ColoredGraph(self.vertices, self.edges, vc, ec)


@dataclass(frozen=True)
class Path:
    """A path given by its vertex sequence; equal to its reversal."""

    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise ValueError("a path has at least one vertex")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def ends(self) -> tuple:
        return self.vertices[0], self.vertices[-1]

    @property
    def edges(self) -> tuple[frozenset, ...]:
        vs = self.vertices
        return tuple(frozenset((vs[i], vs[i + 1])) for i in range(len(vs) - 1))

    def reversed(self) -> "Path":
        return Path(self.vertices[::-1])

    def _canon(self):
        a, b = self.vertices, self.vertices[::-1]
        return min(a, b)

    def __eq__(self, other):
        return isinstance(other, Path) and self._canon() == other._canon()

    def __hash__(self):
        return hash(self._canon())

    def __lt__(self, other):
        return self._canon() < other._canon()

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __repr__(self):
        return "Path(" + "-".join(map(str, self.vertices)) + ")"


def is_path_in(g: ColoredGraph, p: Path) -> bool:
    """True if p is an induced, cycle-free, connected subgraph of g."""
    vs = p.vertices
    if len(set(vs)) != len(vs) or any(v not in g.index for v in vs):
        return False
    pos = {v: i for i, v in enumerate(vs)}
    for i, v in enumerate(vs):
        for w in g.neighbors(v):
            j = pos.get(w)
            if j is not None and abs(i - j) != 1:
                return False
    return all(g.has_edge(vs[i], vs[i + 1]) for i in range(len(vs) - 1))


# -- documents ----------------------------------------------------------


def parse_graph(text: str) -> ColoredGraph:
    """Parse a JSON graph document into a validated ColoredGraph."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed document: {exc}") from exc
    return graph_from_dict(doc)


def graph_from_dict(doc) -> ColoredGraph:
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise GraphError("document needs 'vertices' and 'edges'")
    verts, vcol = [], {}
    for item in doc["vertices"]:
        if not isinstance(item, dict) or "id" not in item or "color" not in item:
            raise GraphError(f"bad vertex entry {item!r}")
        vid = str(item["id"])
        if vid in vcol:
            raise GraphError(f"duplicate vertex id {vid!r}")
        verts.append(vid)
        vcol[vid] = vcolor(item["color"])
    edges, ecol = [], {}
    for item in doc["edges"]:
        if not isinstance(item, dict) or not {"u", "v", "color"} <= item.keys():
            raise GraphError(f"bad edge entry {item!r}")
        u, v = str(item["u"]), str(item["v"])
        key = frozenset((u, v))
        if u != v and key in ecol:
            raise GraphError(f"duplicate edge {{{u}, {v}}}")
        edges.append((u, v))
        ecol[key] = ecolor(item["color"])
    return ColoredGraph(verts, edges, vcol, ecol)


def graph_to_dict(g: ColoredGraph) -> dict:
    return {
        "vertices": [{"id": v, "color": g.color(v).label} for v in g.vertices],
        "edges": [{"u": u, "v": v, "color": g.edge_color(u, v).label} for u, v in g.edges],
    }


def serialize_graph(g: ColoredGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=1)


def make_graph(vertex_colors: Mapping, edges: Mapping) -> ColoredGraph:
    """Build a graph from ``{vertex: label}`` and ``{(u, v): label}``."""
    verts = list(vertex_colors)
    return ColoredGraph(
        verts,
        list(edges),
        {str(v): vcolor(c) for v, c in vertex_colors.items()},
        {frozenset((str(u), str(v))): ecolor(c) for (u, v), c in edges.items()},
    )


# -- basic combinatorics ------------------------------------------------


def connected_components(g: ColoredGraph) -> list[ColoredGraph]:
    seen: set[str] = set()
    comps = []
    for v in g.vertices:
        if v in seen:
            continue
        part = g._bfs(v)
        seen.update(part)
        comps.append(g.induced(part))
    return comps


def maximal_cliques(g: ColoredGraph) -> list[frozenset]:
    """All inclusion-maximal cliques, ordered by their sorted vertex lists."""
    out: list[frozenset] = []

    def expand(r: set, p: set, x: set):
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: (len(p & g.neighbors(u)), -g.key(u)))
        for v in g.sort(p - g.neighbors(pivot)):
            nv = g.neighbors(v)
            expand(r | {v}, p & nv, x & nv)
            p = p - {v}
            x = x | {v}

    if g.vertices:
        expand(set(), set(g.vertices), set())
    out.sort(key=lambda c: [g.key(v) for v in g.sort(c)])
    return out
